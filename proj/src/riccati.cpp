#include "ppw/riccati.hpp"

#include "ppw/errors.hpp"
#include "ppw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <random>
#include <span>

namespace ppw {

double RiccatiDiagnostics::g_at(double x) const
{
    if (x <= 0.0)
        return g.front();
    if (x >= R)
        return g_limit;
    const double h = r[1] - r[0];
    const auto i = std::min(static_cast<std::size_t>(x / h), r.size() - 2);
    return hermite(r[i], r[i + 1], g[i], g[i + 1], dg[i], dg[i + 1], x);
}

double RiccatiDiagnostics::B_at(double x) const
{
    if (x <= 0.0)
        return B.front();
    if (x >= R)
        return g_limit * g_limit * (n - 1) / (x * x);
    const double h = r[1] - r[0];
    const auto i = std::min(static_cast<std::size_t>(x / h), r.size() - 2);
    const double t = (x - r[i]) / h;
    return (1.0 - t) * B[i] + t * B[i + 1];
}

namespace {

std::vector<double> window_fit(const std::vector<double>& r, const std::vector<double>& f, double lo, double hi,
                               const std::vector<std::function<double(double)>>& basis)
{
    std::vector<double> xs, ys;
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
        if (r[i] >= lo && r[i] <= hi) {
            xs.push_back(r[i]);
            ys.push_back(f[i]);
        }
    return least_squares(xs, ys, basis);
}

} // namespace

RiccatiDiagnostics diagnostics(const EigenPair& z1, const EigenPair& z2, const RadialPotential& v_tilde)
{
    if (z1.z.size() != z2.z.size() || z1.n != z2.n || z1.R != z2.R)
        throw ContractError("diagnostics: eigenpairs must share dimension, radius and grid");
    const std::size_t m = z1.z.size();
    if (m < 64)
        throw ContractError("diagnostics: need at least 64 samples");
    for (std::size_t i = 1; i + 1 < m; ++i)
        if (!(z1.z[i] > 0.0))
            throw ContractError("diagnostics: z1 is not positive at r = " + std::to_string(z1.r[i]));

    RiccatiDiagnostics d;
    d.n = z1.n;
    d.R = z1.R;
    d.lambda1 = z1.lambda;
    d.lambda2 = z2.lambda;
    d.E = z2.lambda - z1.lambda;
    d.nu = z1.n - 2;
    d.potential = v_tilde;
    d.r = z1.r;
    const double h = z1.spacing();
    const double R = d.R;
    const int n = d.n;

    d.g.assign(m, 0.0);
    d.dg.assign(m, 0.0);
    d.B.assign(m, 0.0);
    d.q.assign(m, std::numeric_limits<double>::quiet_NaN());
    d.p.assign(m, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double a = z1.z[i], da = z1.dz[i], b = z2.z[i], db = z2.dz[i], ri = d.r[i];
        d.g[i] = b / a;
        d.dg[i] = (db * a - b * da) / (a * a);
        d.B[i] = d.dg[i] * d.dg[i] + (n - 1) * d.g[i] * d.g[i] / (ri * ri);
        d.q[i] = ri * (db / b - da / a);
        d.p[i] = da / a;
    }
    d.g[0] = 0.0;
    d.dg[0] = z2.dz[0] / z1.z[0];
    d.B[0] = n * d.dg[0] * d.dg[0];
    d.p[0] = 0.0;
    d.g_limit = z2.dz[m - 1] / z1.dz[m - 1];
    d.g[m - 1] = d.g_limit;
    d.dg[m - 1] = 0.0;
    d.B[m - 1] = (n - 1) * d.g_limit * d.g_limit / (R * R);

    // derivatives of q and p on the open interval
    const std::span<const double> q_in(d.q.data() + 1, m - 2), p_in(d.p.data() + 1, m - 2);
    const auto dq_in = differentiate(q_in, h);
    const auto dp_in = differentiate(p_in, h);
    d.dq.assign(m, std::numeric_limits<double>::quiet_NaN());
    d.dp.assign(m, std::numeric_limits<double>::quiet_NaN());
    std::copy(dq_in.begin(), dq_in.end(), d.dq.begin() + 1);
    std::copy(dp_in.begin(), dp_in.end(), d.dp.begin() + 1);

    const auto near0 = window_fit(d.r, d.q, 0.01 * R, 0.05 * R,
                                  {[](double) { return 1.0; }, [R](double x) { return (x / R) * (x / R); },
                                   [R](double x) { return std::pow(x / R, 4); }});
    d.q0 = near0[0];
    d.q2_numeric = 2.0 * near0[1] / (R * R);
    const auto nearR = window_fit(d.r, d.q, 0.90 * R, 0.99 * R,
                                  {[](double) { return 1.0; }, [R](double x) { return (R - x) / R; },
                                   [R](double x) { return std::pow((R - x) / R, 2); },
                                   [R](double x) { return std::pow((R - x) / R, 3); }});
    d.qR = nearR[0];

    d.window_lo = 0.01 * R;
    d.window_hi = 0.95 * R;
    const double q_scale = std::max(1.0, d.E * R);
    const double p_scale = std::max(1.0, std::abs(d.lambda1));
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double ri = d.r[i];
        if (ri < d.window_lo || ri > d.window_hi)
            continue;
        const double q = d.q[i], p = d.p[i];
        const double ric = (d.lambda1 - d.lambda2) * ri + (1.0 - q) * (q + n - 1.0) / ri - 2.0 * q * p;
        d.residual_ric_q = std::max(d.residual_ric_q, std::abs(d.dq[i] - ric) / q_scale);
        const double ricp = d.dp[i] + p * p + (d.nu + 1.0) / ri * p + d.lambda1 - v_tilde(ri);
        d.residual_ric_p = std::max(d.residual_ric_p, std::abs(ricp) / p_scale);
        const double Nq = q * q - n + 1.0;
        const double T = -2.0 * p * q - (d.nu * q + Nq) / ri - d.E * ri;
        d.residual_T_identity = std::max(d.residual_T_identity, std::abs(T - d.dq[i]) / q_scale);
    }

    RiccatiFacts& f = d.facts;
    f.q_min = std::numeric_limits<double>::infinity();
    f.q_max = -f.q_min;
    f.dq_max = -f.q_min;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        f.q_min = std::min(f.q_min, d.q[i]);
        f.q_max = std::max(f.q_max, d.q[i]);
        f.dq_max = std::max(f.dq_max, d.dq[i]);
    }
    f.q_in_01 = f.q_min >= -1e-6 && f.q_max <= 1.0 + 1e-6;
    f.q_decreasing = f.dq_max <= 1e-6;
    double gmax = 0.0, bmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        gmax = std::max(gmax, std::abs(d.g[i]));
        bmax = std::max(bmax, std::abs(d.B[i]));
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        f.worst_g_drop = std::max(f.worst_g_drop, d.g[i] - d.g[i + 1]);
        f.worst_B_rise = std::max(f.worst_B_rise, d.B[i + 1] - d.B[i]);
    }
    f.g_increasing = f.worst_g_drop <= 1e-9 * gmax;
    f.B_decreasing = f.worst_B_rise <= 1e-9 * bmax;
    return d;
}

SectorConstants sector_constants(int n, double y, double lambda1, double lambda2)
{
    if (!(y > 0.0))
        throw ContractError("sector_constants: y must be positive");
    SectorConstants c;
    c.y = y;
    c.n = n;
    c.nu = n - 2;
    const double E = lambda2 - lambda1;
    c.N = y * y - n + 1.0;
    c.M = c.N * c.N / (2.0 * y) - c.nu * c.nu * y / 2.0;
    c.Q = 2.0 * y * lambda1 + E * c.N / y - 2.0 * E;
    const double factored = 0.5 * (y * y - 1.0) * ((y - 1.0) - (n - 2.0)) * ((y + 1.0) + (n - 2.0));
    c.identity_residual = std::abs(y * c.M - factored);
    return c;
}

QSecondDerivative q_second_derivative_check(int n, double lambda1, double lambda2, const RiccatiDiagnostics& diag)
{
    QSecondDerivative out;
    const double bracket = (1.0 + 2.0 / n) * lambda1 - lambda2;
    out.closed_form = 2.0 / (n + 2.0) * bracket;
    out.two_over_n_form = 2.0 / n * bracket;
    out.q1_form = 2.0 / (n * n) * sector_constants(n, 1.0, lambda1, lambda2).Q;
    out.identity_gap = std::abs(out.two_over_n_form - out.q1_form) / std::max(1.0, std::abs(out.two_over_n_form));
    out.numeric = diag.q2_numeric;
    out.agree = std::abs(out.numeric - out.closed_form) <= 5e-2 * std::abs(out.closed_form);
    return out;
}

TZReport T_and_Z(const EigenPair& z1, const RiccatiDiagnostics& diag, double y, double tolerance)
{
    if (!(y > 0.0) || y > 3.0)
        throw ContractError("T_and_Z: y must lie in (0, 3]");
    const SectorConstants c = sector_constants(diag.n, y, diag.lambda1, diag.lambda2);
    const double R = diag.R, E = diag.E;
    auto p = [&](double x) { return z1.derivative_at(x) / z1.value_at(x); };
    auto T = [&](double x) { return -2.0 * p(x) * y - (c.nu * y + c.N) / x - E * x; };
    auto Z = [&](double x) { return c.M / (x * x) + E * E * x * x / (2.0 * y) + c.Q - 2.0 * y * diag.potential(x); };

    TZReport rep;
    rep.y = y;
    rep.tolerance = tolerance;
    const int points = 4096;
    for (int j = 0; j < points; ++j) {
        const double x = R * (j + 0.5) / points;
        rep.r.push_back(x);
        rep.T.push_back(T(x));
        rep.Z.push_back(Z(x));
    }
    const double delta = 1e-4 * R;
    for (int j = 0; j + 1 < points; ++j) {
        if ((rep.T[j] > 0.0) == (rep.T[j + 1] > 0.0))
            continue;
        double lo = rep.r[j], hi = rep.r[j + 1], flo = rep.T[j];
        for (int it = 0; it < 80 && hi - lo > 1e-14 * R; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = T(mid);
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        TZeroCheck zc;
        zc.r = 0.5 * (lo + hi);
        if (zc.r - delta <= 0.0 || zc.r + delta >= R)
            continue;
        zc.dT_fd = (T(zc.r + delta) - T(zc.r - delta)) / (2.0 * delta);
        zc.Z = Z(zc.r);
        zc.relative_gap = std::abs(zc.dT_fd - zc.Z) / std::max(std::abs(zc.Z), 1.0);
        rep.zeros_consistent = rep.zeros_consistent && zc.relative_gap <= tolerance;
        rep.zeros.push_back(zc);
    }
    rep.T_near_origin = T(1e-3 * R);
    rep.T_near_boundary = T(R * (1.0 - 1e-4));
    rep.Z_near_origin = Z(1e-3 * R);
    return rep;
}

Lemma3Result lemma3(double a, double b, double c, double d, double x)
{
    if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0))
        throw ContractError("lemma3: a, b, c, d must be positive");
    if (!(x > 0.0))
        throw ContractError("lemma3: x must be positive");
    if (!(a >= b))
        throw ContractError("lemma3: condition a >= b failed");
    if (!(d >= b))
        throw ContractError("lemma3: condition d >= b failed");
    if (!(a / b < c / d))
        throw ContractError("lemma3: condition a/b < c/d failed");
    Lemma3Result out;
    out.lhs = (a + x) / (b + x);
    out.rhs = (c + x) / (d + x);
    out.x0 = -(b * c - a * d) / (b + c - a - d);
    out.holds = out.lhs < out.rhs;
    out.x0_negative = out.x0 < 0.0;
    return out;
}

Lemma3Sweep lemma3_sweep(long samples, unsigned long long seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Lemma3Sweep s;
    for (long i = 0; i < samples; ++i) {
        const double b = std::pow(10.0, -2.0 + 4.0 * u(rng));
        const double a = b * (1.0 + std::pow(10.0, -3.0 + 4.0 * u(rng)) * (u(rng) < 0.9));
        const double d = b * (1.0 + 10.0 * u(rng));
        const double c = a * d / b * (1.0 + std::pow(10.0, -6.0 + 7.0 * u(rng)));
        const double x = 100.0 * (1.0 - u(rng));
        const Lemma3Result r = lemma3(a, b, c, d, x);
        ++s.samples;
        s.failures += !r.holds;
        s.nonnegative_x0 += !r.x0_negative;
    }
    return s;
}

} // namespace ppw
