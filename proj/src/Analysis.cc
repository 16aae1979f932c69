//----------------------------------*-C++-*----------------------------------//
// Copyright 2026 the dcsim authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file Analysis.cc
//---------------------------------------------------------------------------//
#include "dcsim/Analysis.hh"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "dcsim/Error.hh"

namespace dcsim
{
namespace
{
//---------------------------------------------------------------------------//
void check_finite(std::span<double const> v, char const* what)
{
    for (double x : v)
    {
        require(std::isfinite(x),
                ErrorCode::degenerate_input,
                std::string(what) + " contains a non-finite value");
    }
}

double sum_squares(Eigen::VectorXd const& r)
{
    return r.squaredNorm();
}

//---------------------------------------------------------------------------//
// Exponential model helpers
//---------------------------------------------------------------------------//
//! Parameters (A1, k1, A2, k2, C) or (A, k, C) for a single exponential
template<int N>
using Params = Eigen::Matrix<double, N, 1>;

template<int N>
Eigen::VectorXd residual(Params<N> const& p, Eigen::VectorXd const& t, Eigen::VectorXd const& y)
{
    Eigen::VectorXd r(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i)
    {
        double m = p(N - 1);
        for (int e = 0; e + 1 < N; e += 2)
            m += p(e) * std::exp(-p(e + 1) * t(i));
        r(i) = m - y(i);
    }
    return r;
}

template<int N>
Eigen::MatrixXd jacobian(Params<N> const& p, Eigen::VectorXd const& t)
{
    Eigen::MatrixXd J(t.size(), N);
    for (Eigen::Index i = 0; i < t.size(); ++i)
    {
        for (int e = 0; e + 1 < N; e += 2)
        {
            double const x = std::exp(-p(e + 1) * t(i));
            J(i, e) = x;
            J(i, e + 1) = -p(e) * t(i) * x;
        }
        J(i, N - 1) = 1;
    }
    return J;
}

template<int N>
bool admissible(Params<N> const& p)
{
    for (int e = 0; e + 1 < N; e += 2)
    {
        if (!(p(e) >= 0) || !(p(e + 1) >= 0))
            return false;
    }
    return p.allFinite();
}

struct Refined
{
    double ssr{0};
    int iterations{0};
    bool converged{false};
};

/*!
 * Damped Gauss-Newton (Levenberg-Marquardt) with non-negative amplitudes
 * and rates.
 */
template<int N>
Refined refine(Params<N>& p,
               Eigen::VectorXd const& t,
               Eigen::VectorXd const& y,
               BiExpOptions const& opt)
{
    Refined out;
    Eigen::VectorXd r = residual<N>(p, t, y);
    double ssr = sum_squares(r);
    double const floor = 1e-28 * std::max(y.squaredNorm(), 1e-300);
    double lambda = 1e-3;
    for (int it = 1; it <= opt.max_iterations; ++it)
    {
        out.iterations = it;
        if (ssr <= floor)
        {
            out.converged = true;
            break;
        }
        Eigen::MatrixXd const J = jacobian<N>(p, t);
        Eigen::Matrix<double, N, N> const JtJ = J.transpose() * J;
        Eigen::Matrix<double, N, 1> const g = J.transpose() * r;

        bool accepted = false;
        while (lambda < 1e16)
        {
            Eigen::Matrix<double, N, N> A = JtJ;
            for (int d = 0; d < N; ++d)
                A(d, d) += lambda * std::max(JtJ(d, d), 1e-300);
            Params<N> const step = A.ldlt().solve(-g);
            Params<N> const trial = p + step;
            if (admissible<N>(trial))
            {
                Eigen::VectorXd const rt = residual<N>(trial, t, y);
                double const st = sum_squares(rt);
                if (st <= ssr)
                {
                    double const change = (ssr - st) / std::max(ssr, 1e-300);
                    p = trial;
                    r = rt;
                    ssr = st;
                    lambda = std::max(lambda / 3, 1e-12);
                    accepted = true;
                    if (change < opt.relative_tolerance)
                        out.converged = true;
                    break;
                }
            }
            lambda *= 4;
        }
        if (!accepted)
        {
            // No descent direction left: at a (constrained) minimum
            out.converged = true;
        }
        if (out.converged)
            break;
    }
    out.ssr = ssr;
    return out;
}

//! Linear least squares for amplitudes at fixed rates; NaN if inadmissible
double amplitudes(std::span<double const> rates,
                  Eigen::VectorXd const& t,
                  Eigen::VectorXd const& y,
                  Eigen::VectorXd& coef)
{
    auto const m = static_cast<Eigen::Index>(rates.size());
    Eigen::MatrixXd B(t.size(), m + 1);
    for (Eigen::Index i = 0; i < t.size(); ++i)
    {
        for (Eigen::Index e = 0; e < m; ++e)
            B(i, e) = std::exp(-rates[e] * t(i));
        B(i, m) = 1;
    }
    coef = B.colPivHouseholderQr().solve(y);
    for (Eigen::Index e = 0; e < m; ++e)
    {
        if (!(coef(e) >= 0))
            return std::numeric_limits<double>::quiet_NaN();
    }
    return (B * coef - y).squaredNorm();
}

std::vector<double> rate_grid(Eigen::VectorXd const& t, int n)
{
    std::vector<double> ts(t.data(), t.data() + t.size());
    std::sort(ts.begin(), ts.end());
    double span = ts.back() - ts.front();
    double dmin = span;
    for (std::size_t i = 1; i < ts.size(); ++i)
    {
        double const d = ts[i] - ts[i - 1];
        if (d > 0)
            dmin = std::min(dmin, d);
    }
    double const lo = 0.1 / span;
    double const hi = 10.0 / dmin;
    std::vector<double> k(n);
    for (int i = 0; i < n; ++i)
        k[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return k;
}

}  // namespace

//---------------------------------------------------------------------------//
// PROFILES AND EDGES
//---------------------------------------------------------------------------//
RadialProfile
radial_profile(ReadoutImage const& image, double cx, double cy, double bin_width)
{
    require(image.nx > 0 && image.ny > 0 && image.pitch > 0,
            ErrorCode::invalid_value,
            "radial profile needs a non-empty image");
    double const half = 0.5 * image.pitch;
    require(cx >= image.x(0) - half && cx <= image.x(image.nx - 1) + half
                && cy >= image.y(0) - half
                && cy <= image.y(image.ny - 1) + half,
            ErrorCode::invalid_value,
            "profile center lies outside the image");
    require(bin_width >= image.pitch * (1 - 1e-12),
            ErrorCode::empty_annulus,
            "bin width " + std::to_string(bin_width)
                + " um is below the pixel pitch "
                + std::to_string(image.pitch) + " um");

    RadialProfile prof;
    prof.cx = cx;
    prof.cy = cy;
    prof.bin_width = bin_width;
    std::vector<double> sum;
    for (int j = 0; j < image.ny; ++j)
    {
        for (int i = 0; i < image.nx; ++i)
        {
            double const r = std::hypot(image.x(i) - cx, image.y(j) - cy);
            auto const k = static_cast<std::size_t>(r / bin_width);
            if (k >= sum.size())
            {
                sum.resize(k + 1, 0.0);
                prof.pixels.resize(k + 1, 0);
            }
            sum[k] += image(i, j);
            ++prof.pixels[k];
        }
    }
    for (std::size_t k = 0; k < sum.size(); ++k)
    {
        require(prof.pixels[k] > 0,
                ErrorCode::empty_annulus,
                "annulus " + std::to_string(k) + " contains no pixel");
        prof.radii.push_back((k + 0.5) * bin_width);
        prof.mean.push_back(sum[k] / static_cast<double>(prof.pixels[k]));
    }
    return prof;
}

double torus_edge_radius(RadialProfile const& profile, EdgeThreshold threshold)
{
    auto const& p = profile.mean;
    require(!p.empty(),
            ErrorCode::invalid_value,
            "edge detection needs a non-empty profile");
    double thr = threshold.value;
    if (threshold.kind == EdgeThreshold::Kind::fraction)
        thr *= *std::max_element(p.begin(), p.end());

    for (std::size_t k = p.size() - 1; k-- > 0;)
    {
        if (p[k] >= thr && p[k + 1] < thr && p[k] > 0)
        {
            double const r0 = profile.radii[k];
            double const r1 = profile.radii[k + 1];
            double const frac = (p[k] - thr) / (p[k] - p[k + 1]);
            return r0 + frac * (r1 - r0);
        }
    }
    throw Error(ErrorCode::no_crossing,
                "profile never falls through threshold "
                    + std::to_string(thr) + " kcps");
}

//---------------------------------------------------------------------------//
// FITS
//---------------------------------------------------------------------------//
LinearFit fit_linear(std::span<double const> x, std::span<double const> y)
{
    require(x.size() == y.size(),
            ErrorCode::degenerate_input,
            "linear fit needs equally sized inputs");
    require(x.size() >= 3,
            ErrorCode::degenerate_input,
            "linear fit needs at least 3 points");
    check_finite(x, "linear fit abscissa");
    check_finite(y, "linear fit ordinate");

    double const n = static_cast<double>(x.size());
    double const mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double const my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const dx = x[i] - mx;
        double const dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    require(sxx > 0,
            ErrorCode::degenerate_input,
            "linear fit needs spread in the abscissa");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.r2 = syy > 0 ? std::clamp(1 - ssr / syy, 0.0, 1.0) : 1.0;
    double const s2 = ssr / (n - 2);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1 / n + mx * mx / sxx));
    return fit;
}

PowerLawFit fit_power_law(std::span<double const> t,
                          std::span<double const> sigma,
                          std::optional<double> fixed_n)
{
    require(t.size() == sigma.size(),
            ErrorCode::degenerate_input,
            "power-law fit needs equally sized inputs");
    require(t.size() >= 3,
            ErrorCode::degenerate_input,
            "power-law fit needs at least 3 points");
    std::vector<double> lt(t.size());
    std::vector<double> ls(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        require(t[i] > 0 && sigma[i] > 0 && std::isfinite(t[i])
                    && std::isfinite(sigma[i]),
                ErrorCode::degenerate_input,
                "power-law fit needs positive finite values");
        lt[i] = std::log(t[i]);
        ls[i] = std::log(sigma[i]);
    }

    PowerLawFit fit;
    fit.points = t.size();
    double slope = 0;
    double intercept = 0;
    if (fixed_n)
    {
        require(*fixed_n > 0,
                ErrorCode::degenerate_input,
                "fixed exponent must be positive");
        slope = 1 / *fixed_n;
        double s = 0;
        for (std::size_t i = 0; i < lt.size(); ++i)
            s += ls[i] - slope * lt[i];
        intercept = s / static_cast<double>(lt.size());
        fit.fixed_n = true;
        fit.n = *fixed_n;
    }
    else
    {
        LinearFit const lin = fit_linear(lt, ls);
        require(lin.slope > 0,
                ErrorCode::degenerate_input,
                "power-law fit needs sigma increasing with time");
        slope = lin.slope;
        intercept = lin.intercept;
        fit.n = 1 / slope;
        fit.n_stderr = lin.slope_stderr / (slope * slope);
    }
    fit.D = std::exp(2 * intercept);
    double ssr = 0;
    for (std::size_t i = 0; i < lt.size(); ++i)
    {
        double const r = ls[i] - (intercept + slope * lt[i]);
        ssr += r * r;
    }
    fit.residual_norm = std::sqrt(ssr);
    return fit;
}

//---------------------------------------------------------------------------//
BiExpFit fit_biexponential(std::span<double const> ts,
                           std::span<double const> ys,
                           BiExpOptions const& options)
{
    require(ts.size() == ys.size(),
            ErrorCode::degenerate_input,
            "bi-exponential fit needs equally sized inputs");
    require(ts.size() >= 6,
            ErrorCode::degenerate_input,
            "bi-exponential fit needs at least 6 points");
    check_finite(ts, "fit times");
    check_finite(ys, "fit values");
    require(options.grid_points >= 2,
            ErrorCode::invalid_value,
            "multi-start grid needs at least 2 points per rate");

    Eigen::VectorXd const t
        = Eigen::Map<Eigen::VectorXd const>(ts.data(), ts.size());
    Eigen::VectorXd const y
        = Eigen::Map<Eigen::VectorXd const>(ys.data(), ys.size());
    require(t.maxCoeff() > t.minCoeff(),
            ErrorCode::degenerate_input,
            "bi-exponential fit needs spread in time");

    BiExpFit fit;
    double const ymean = y.mean();
    double const sst = (y.array() - ymean).square().sum();
    if (sst == 0)
    {
        fit.offset = ymean;
        fit.single_exponential = true;
        return fit;
    }

    auto const grid = rate_grid(t, options.grid_points);
    Eigen::VectorXd coef;

    // Single-exponential reference
    Params<3> single = Params<3>::Zero();
    {
        double best = std::numeric_limits<double>::infinity();
        for (double k : grid)
        {
            std::array<double, 1> rates{k};
            double const s = amplitudes(rates, t, y, coef);
            if (s < best)
            {
                best = s;
                single << coef(0), k, coef(1);
            }
        }
        require(std::isfinite(best),
                ErrorCode::non_convergence,
                "no admissible single-exponential start");
    }
    Refined const rs = refine<3>(single, t, y, options);

    // Bi-exponential multi-start
    Params<5> bi = Params<5>::Zero();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < grid.size(); ++a)
    {
        for (std::size_t b = 0; b < a; ++b)
        {
            std::array<double, 2> rates{grid[a], grid[b]};
            double const s = amplitudes(rates, t, y, coef);
            if (s < best)
            {
                best = s;
                bi << coef(0), grid[a], coef(1), grid[b], coef(2);
            }
        }
    }
    Refined rb;
    if (std::isfinite(best))
        rb = refine<5>(bi, t, y, options);
    else
        rb.ssr = std::numeric_limits<double>::infinity();
    require(rs.converged || rb.converged,
            ErrorCode::non_convergence,
            "bi-exponential refinement did not converge in "
                + std::to_string(options.max_iterations) + " iterations");

    if (bi(1) < bi(3))
    {
        std::swap(bi(0), bi(2));
        std::swap(bi(1), bi(3));
    }
    bool const exact_single = rs.ssr <= 1e-20 * sst;
    bool const weak_second = !(bi(0) > 0) || bi(2) < 1e-3 * bi(0);
    bool const merged = std::fabs(bi(1) - bi(3)) <= 1e-3 * bi(1);
    if (!std::isfinite(rb.ssr) || exact_single || weak_second || merged)
    {
        fit.A1 = single(0);
        fit.k1 = single(1);
        fit.offset = single(2);
        fit.residual_norm = std::sqrt(rs.ssr);
        fit.single_exponential = true;
        fit.iterations = rs.iterations;
        return fit;
    }
    fit.A1 = bi(0);
    fit.k1 = bi(1);
    fit.A2 = bi(2);
    fit.k2 = bi(3);
    fit.offset = bi(4);
    fit.residual_norm = std::sqrt(rb.ssr);
    fit.iterations = rb.iterations;
    return fit;
}

//---------------------------------------------------------------------------//
// CORRELATION
//---------------------------------------------------------------------------//
double anticorrelation(std::span<double const> a,
                       std::span<double const> b,
                       std::span<char const> mask)
{
    require(a.size() == b.size() && a.size() == mask.size(),
            ErrorCode::degenerate_input,
            "correlation inputs differ in shape");
    double n = 0;
    double ma = 0;
    double mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (!mask[i])
            continue;
        n += 1;
        ma += a[i];
        mb += b[i];
    }
    require(n >= 10,
            ErrorCode::degenerate_input,
            "correlation mask selects fewer than 10 pixels");
    ma /= n;
    mb /= n;
    double saa = 0;
    double sbb = 0;
    double sab = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (!mask[i])
            continue;
        double const da = a[i] - ma;
        double const db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    require(saa > 0 && sbb > 0,
            ErrorCode::zero_variance,
            "an image is constant on the correlation mask");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double anticorrelation(ReadoutImage const& a,
                       ReadoutImage const& b,
                       std::span<char const> mask)
{
    require(a.nx == b.nx && a.ny == b.ny,
            ErrorCode::degenerate_input,
            "correlation images differ in shape");
    return anticorrelation(a.counts, b.counts, mask);
}

std::vector<char> annulus_mask(ReadoutImage const& image,
                               double cx,
                               double cy,
                               double r_inner,
                               double r_outer)
{
    std::vector<char> mask(image.counts.size(), 0);
    for (int j = 0; j < image.ny; ++j)
    {
        for (int i = 0; i < image.nx; ++i)
        {
            double const r = std::hypot(image.x(i) - cx, image.y(j) - cy);
            mask[static_cast<std::size_t>(j) * image.nx + i]
                = r >= r_inner && r <= r_outer;
        }
    }
    return mask;
}

//---------------------------------------------------------------------------//
}  // namespace dcsim
