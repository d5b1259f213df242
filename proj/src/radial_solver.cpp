#include "ppw/radial_solver.hpp"

#include "ppw/errors.hpp"
#include "ppw/numerics.hpp"
#include "ppw/ode.hpp"
#include "ppw/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ppw {

int weight_sigma(WeightSign w)
{
    switch (w) {
    case WeightSign::plus:
        return 1;
    case WeightSign::minus:
        return -1;
    default:
        return 0;
    }
}

const char* to_string(WeightSign w)
{
    switch (w) {
    case WeightSign::plus:
        return "plus";
    case WeightSign::minus:
        return "minus";
    default:
        return "none";
    }
}

double EigenPair::value_at(double x) const
{
    if (x >= R || x < 0.0)
        return 0.0;
    const double h = spacing();
    const auto i = std::min(static_cast<std::size_t>(x / h), r.size() - 2);
    return hermite(r[i], r[i + 1], z[i], z[i + 1], dz[i], dz[i + 1], x);
}

double EigenPair::derivative_at(double x) const
{
    if (x >= R || x < 0.0)
        return 0.0;
    const double h = spacing();
    const auto i = std::min(static_cast<std::size_t>(x / h), r.size() - 2);
    const double t = (x - r[i]) / h;
    const double f0 = z[i], f1 = z[i + 1], d0 = dz[i], d1 = dz[i + 1];
    return ((6 * t * t - 6 * t) * f0 + (3 * t * t - 4 * t + 1) * h * d0 + (-6 * t * t + 6 * t) * f1 +
            (3 * t * t - 2 * t) * h * d1) /
           h;
}

int count_nodes(const std::vector<double>& z)
{
    double peak = 0.0;
    for (double v : z)
        peak = std::max(peak, std::abs(v));
    const double floor = 1e-9 * peak;
    int count = 0, sign = 0;
    for (std::size_t i = 1; i + 1 < z.size(); ++i) {
        if (std::abs(z[i]) <= floor)
            continue;
        const int s = z[i] > 0 ? 1 : -1;
        if (sign != 0 && s != sign)
            ++count;
        sign = s;
    }
    return count;
}

namespace {

constexpr double rho0 = 1e-6;
constexpr double overflow = 1e200;
constexpr double loose_rtol = 1e-8;

// The problem on the unit ball after r = R rho, with y = rho^k z, k = (n-1)/2:
//   y'' = -2 s rho y' + [W + c / rho^2 + 2 s k - Lambda] y,
// W = R^2 V(R rho), s = sigma R^2, c = l(l+n-2) + k(k-1), Lambda = R^2 lambda.
struct Reduced {
    int n = 2;
    int ell = 0;
    double R = 1.0;
    double k = 0.5;
    double c = 0.0;
    double s = 0.0;
    double W0 = 0.0;
    RadialPotential W = RadialPotential::zero();

    double coefficient(double rho, double lam) const
    {
        return W(rho) + c / (rho * rho) + 2.0 * s * k - lam;
    }
    double frobenius_c2(double lam) const { return -(lam - W0 + 2.0 * s * ell) / (2.0 * (2.0 * ell + n)); }
    // Potential of the fully Liouville-reduced equation u'' = (eff - Lambda) u.
    double effective(double rho) const { return W(rho) + c / (rho * rho) + s * n + s * s * rho * rho; }
};

Reduced reduce(const BallProblem& p)
{
    if (p.n < 2)
        throw ContractError("radial solver: dimension must be >= 2");
    if (!(p.R > 0.0) || !std::isfinite(p.R))
        throw ContractError("radial solver: radius must be positive");
    if (p.ell < 0)
        throw ContractError("radial solver: angular sector must be >= 0");
    if (auto rmax = p.potential.max_radius(); rmax && *rmax < p.R * (1.0 - 1e-12))
        throw RangeError("radial solver: table potential does not reach the ball radius");
    Reduced eq;
    eq.n = p.n;
    eq.ell = p.ell;
    eq.R = p.R;
    eq.k = 0.5 * (p.n - 1);
    eq.c = p.ell * (p.ell + p.n - 2.0) + eq.k * (eq.k - 1.0);
    eq.s = weight_sigma(p.weight) * p.R * p.R;
    eq.W = p.potential.rescaled(p.R);
    eq.W0 = eq.W(0.0);
    return eq;
}

struct Shot {
    double y_end = 0.0;
    double peak = 0.0;
    int sign_changes = 0;
    double log_scale = 0.0;  // log of the accumulated rescaling factor
};

struct Recording {
    std::vector<double>* y = nullptr;
    std::vector<double>* dy = nullptr;
};

OdeOptions ode_options(double rtol, double start)
{
    OdeOptions o;
    o.rtol = rtol;
    o.initial_step = start;
    o.max_step = 1.0 / 256.0;
    return o;
}

// Outward from rho0 with the regular Frobenius start, y(rho0) = 1.
Shot shoot_out(const Reduced& eq, double lam, double rtol, std::span<const double> stops, std::size_t first_index,
               Recording rec)
{
    const double c2 = eq.frobenius_c2(lam);
    const double expo = eq.k + eq.ell;
    OdeState<2> y0{1.0, expo / rho0 + 2.0 * c2 * rho0 / (1.0 + c2 * rho0 * rho0)};

    Shot shot;
    int sign = 1;
    auto rhs = [&](double x, const OdeState<2>& v) {
        return OdeState<2>{v[1], -2.0 * eq.s * x * v[1] + eq.coefficient(x, lam) * v[0]};
    };
    auto observe = [&](double, const OdeState<2>& v, long idx) {
        if (v[0] != 0.0) {
            const int s = v[0] > 0 ? 1 : -1;
            if (s != sign)
                ++shot.sign_changes;
            sign = s;
        }
        if (idx >= 0 && rec.y) {
            (*rec.y)[first_index + static_cast<std::size_t>(idx)] = v[0];
            (*rec.dy)[first_index + static_cast<std::size_t>(idx)] = v[1];
        }
        shot.peak = std::max(shot.peak, std::abs(v[0]));
        if (std::abs(v[0]) > overflow || std::abs(v[1]) > overflow) {
            const double f = 1.0 / overflow;
            shot.peak *= f;
            shot.log_scale += std::log(f);
            if (rec.y) {
                for (auto& a : *rec.y)
                    a *= f;
                for (auto& a : *rec.dy)
                    a *= f;
            }
            return f;
        }
        return 1.0;
    };
    const auto end = dopri5<2>(rhs, rho0, 1.0, y0, stops, ode_options(rtol, 0.1 * rho0), observe);
    shot.y_end = end[0];
    shot.peak = std::max(shot.peak, 1e-300);
    return shot;
}

// Inward from rho = 1 with y(1) = 0, y'(1) = -1 down to the last stop.
void shoot_in(const Reduced& eq, double lam, double rtol, std::span<const double> stops_desc, std::vector<double>& y,
              std::vector<double>& dy)
{
    auto rhs = [&](double x, const OdeState<2>& v) {
        return OdeState<2>{v[1], -2.0 * eq.s * x * v[1] + eq.coefficient(x, lam) * v[0]};
    };
    auto observe = [&](double, const OdeState<2>& v, long idx) {
        if (idx >= 0) {
            y[static_cast<std::size_t>(idx)] = v[0];
            dy[static_cast<std::size_t>(idx)] = v[1];
        }
        if (std::abs(v[0]) > overflow || std::abs(v[1]) > overflow) {
            const double f = 1.0 / overflow;
            for (auto& a : y)
                a *= f;
            for (auto& a : dy)
                a *= f;
            return f;
        }
        return 1.0;
    };
    dopri5<2>(rhs, 1.0, stops_desc.back(), OdeState<2>{0.0, -1.0}, stops_desc, ode_options(rtol, 1e-4), observe);
}

double first_bessel_zero(double nu)
{
    if (nu <= 50.0)
        return bessel_zero(nu, 1).value;
    return nu + 1.8557571 * std::cbrt(nu) + 1.033150 / std::cbrt(nu);
}

} // namespace

EigenPair solve_sector(const BallProblem& prob, int k, double tol, std::size_t samples)
{
    if (k < 1 || k > 10)
        throw ContractError("solve_sector: k must lie in [1, 10]");
    if (!(tol >= 1e-12))
        throw ContractError("solve_sector: tol must be >= 1e-12");
    if (samples < 16)
        throw ContractError("solve_sector: need at least 16 samples");
    const Reduced eq = reduce(prob);
    const double tight_rtol = std::clamp(1e-2 * tol, 1e-13, 1e-9);

    auto count = [&](double lam) { return shoot_out(eq, lam, loose_rtol, {}, 0, {}).sign_changes; };

    const double j = first_bessel_zero(0.5 * prob.n);
    double lam_max = std::max(4.0 * j * j, 4.0 * eq.W(1.0));
    double lo = 0.0;
    int count_lo = count(lo);
    for (int i = 0; count_lo > k - 1 && i < 10; ++i) {
        lo = -lam_max * std::ldexp(1.0, i);
        count_lo = count(lo);
    }
    double hi = lam_max;
    int count_hi = count(hi);
    for (int i = 0; count_hi < k; ++i) {
        if (i == 10) {
            std::ostringstream os;
            os << "solve_sector: eigenvalue " << k << " of sector " << prob.ell << " not found in scaled range ["
               << lo << ", " << hi << "] (lambda range [" << lo / (prob.R * prob.R) << ", "
               << hi / (prob.R * prob.R) << "])";
            throw NumericError(os.str());
        }
        lo = hi;
        count_lo = count_hi;
        hi *= 2.0;
        count_hi = count(hi);
    }
    if (count_lo > k - 1)
        throw NumericError("solve_sector: no lower bracket for the requested eigenvalue");

    for (int it = 0; it < 200; ++it) {
        if (count_lo == k - 1 && count_hi == k && hi - lo <= 1e-3 * std::max(1.0, std::abs(hi)))
            break;
        const double mid = 0.5 * (lo + hi);
        const int c = count(mid);
        if (c >= k) {
            hi = mid;
            count_hi = c;
        } else {
            lo = mid;
            count_lo = c;
        }
    }

    auto boundary = [&](double lam) {
        const Shot s = shoot_out(eq, lam, tight_rtol, {}, 0, {});
        return s.y_end / s.peak;
    };
    double f_lo = boundary(lo), f_hi = boundary(hi);
    for (int i = 0; (f_lo > 0) == (f_hi > 0) && i < 8; ++i) {
        const double w = hi - lo;
        lo -= 0.5 * w;
        hi += 0.5 * w;
        f_lo = boundary(lo);
        f_hi = boundary(hi);
    }
    const double lam = brent(boundary, lo, hi, 0.1 * tol * std::max(1.0, std::abs(lo)));

    // Final two-sided pass on the output grid.
    const std::size_t m = samples;
    const auto grid = linspace(0.0, 1.0, m);
    std::vector<double> yl(m, 0.0), dyl(m, 0.0);
    const Shot out = shoot_out(eq, lam, tight_rtol, std::span<const double>(grid).subspan(1), 1, {&yl, &dyl});

    std::size_t turning = m - 1;
    while (turning > 1 && eq.effective(grid[turning]) >= lam)
        --turning;
    std::size_t match = 1;
    for (std::size_t i = 1; i <= turning; ++i)
        if (std::abs(yl[i]) > std::abs(yl[match]))
            match = i;

    std::vector<double> y = yl, dy = dyl;
    if (match < m - 1) {
        std::vector<double> stops_desc;
        for (std::size_t i = m - 1; i-- > match;)
            stops_desc.push_back(grid[i]);
        std::vector<double> yr(stops_desc.size(), 0.0), dyr(stops_desc.size(), 0.0);
        shoot_in(eq, lam, tight_rtol, stops_desc, yr, dyr);
        const double f = yl[match] / yr.back();
        y[m - 1] = 0.0;
        dy[m - 1] = -f;
        for (std::size_t q = 0; q < stops_desc.size(); ++q) {
            const std::size_t i = m - 2 - q;
            if (i == match)
                break;
            y[i] = f * yr[q];
            dy[i] = f * dyr[q];
        }
    }

    EigenPair pair;
    pair.n = prob.n;
    pair.R = prob.R;
    pair.ell = prob.ell;
    pair.k = k;
    pair.weight = prob.weight;
    pair.lambda = lam / (prob.R * prob.R);
    pair.r.resize(m);
    pair.z.resize(m);
    pair.dz.resize(m);
    // z = A rho^l (1 + c2 rho^2) near the origin, with y(rho0) = 1 before rescaling.
    const double amplitude = std::exp(out.log_scale - (eq.k + eq.ell) * std::log(rho0)) /
                             (1.0 + eq.frobenius_c2(lam) * rho0 * rho0);
    std::vector<double> zr(m), dzr(m);
    zr[0] = prob.ell == 0 ? amplitude : 0.0;
    dzr[0] = prob.ell == 1 ? amplitude : 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        const double rho = grid[i];
        const double inv = std::pow(rho, -eq.k);
        zr[i] = y[i] * inv;
        dzr[i] = inv * (dy[i] - eq.k * y[i] / rho);
    }
    zr[m - 1] = 0.0;

    std::vector<double> integrand(m);
    for (std::size_t i = 0; i < m; ++i)
        integrand[i] = zr[i] * zr[i] * std::pow(grid[i], prob.n - 1) * std::exp(eq.s * grid[i] * grid[i]);
    const double h = grid[1] - grid[0];
    const double norm2 = prob.n * unit_ball_volume(prob.n) * std::pow(prob.R, prob.n) * simpson(integrand, h);
    if (!(norm2 > 0.0) || !std::isfinite(norm2))
        throw NumericError("solve_sector: eigenfunction normalization failed");
    double scale = 1.0 / std::sqrt(norm2);

    double peak = 0.0;
    for (double v : zr)
        peak = std::max(peak, std::abs(v));
    for (double v : zr) {
        if (std::abs(v) > 1e-6 * peak) {
            if (v < 0)
                scale = -scale;
            break;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        pair.r[i] = prob.R * grid[i];
        pair.z[i] = scale * zr[i];
        pair.dz[i] = scale * dzr[i] / prob.R;
    }
    pair.r.back() = prob.R;
    pair.node_count = count_nodes(pair.z);
    pair.residual = ode_residual(pair, prob);
    return pair;
}

FirstTwo first_two(int n, double R, const RadialPotential& potential, double tol, WeightSign weight,
                   std::size_t samples)
{
    BallProblem p{n, R, 0, potential, weight};
    FirstTwo out;
    out.z1 = solve_sector(p, 1, tol, samples);
    p.ell = 1;
    out.z2 = solve_sector(p, 1, tol, samples);
    out.rV_convex = validate_conditions(potential, R).rV_convex;
    if (!out.rV_convex) {
        out.sector_warning = true;
        p.ell = 0;
        EigenPair alt = solve_sector(p, 2, tol, samples);
        if (alt.lambda < out.z2.lambda)
            out.z2 = std::move(alt);
    }
    out.lambda1 = out.z1.lambda;
    out.lambda2 = out.z2.lambda;
    return out;
}

double ode_residual(const EigenPair& pair, const BallProblem& prob)
{
    const std::size_t m = pair.z.size();
    if (m < 8)
        return 0.0;
    const double h = pair.spacing();
    const auto d1 = differentiate(pair.z, h);
    const auto d2 = differentiate2(pair.z, h);
    const double sigma = weight_sigma(prob.weight);
    const double L = prob.ell * (prob.ell + prob.n - 2.0);
    double peak = 0.0;
    for (double v : pair.z)
        peak = std::max(peak, std::abs(v));
    const double scale = std::max(peak, 1e-300) * std::max(1.0, std::abs(pair.lambda));
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < m; ++i) {
        const double r = pair.r[i];
        const double defect = d2[i] + ((prob.n - 1.0) / r + 2.0 * sigma * r) * d1[i] -
                              (prob.potential(r) + L / (r * r) - pair.lambda) * pair.z[i];
        worst = std::max(worst, std::abs(defect));
    }
    return worst / scale;
}

} // namespace ppw
