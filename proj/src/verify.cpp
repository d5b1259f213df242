#include "ppw/verify.hpp"

#include "ppw/errors.hpp"
#include "ppw/numerics.hpp"
#include "ppw/parallel.hpp"
#include "ppw/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace ppw {

namespace {

double eigen_tol_for(double tol)
{
    return std::clamp(1e-2 * tol, 1e-12, default_eigen_tol);
}

double ground_state(int n, double R, const RadialPotential& v, WeightSign weight, double eig_tol)
{
    return solve_sector(BallProblem{n, R, 0, v, weight}, 1, eig_tol).lambda;
}

std::vector<std::pair<double, double>> cell_centres(const DomainGrid& g)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(g.interior_count());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.inside(i, j))
                out.push_back(g.centre(i, j));
    return out;
}

void check_vector(const DomainGrid& grid, const std::vector<double>& u1)
{
    if (u1.size() != grid.interior_count())
        throw ContractError("u1 does not match the grid's interior cells");
}

} // namespace

double lambda1_limit(int n, const RadialPotential& v, double r_cap, WeightSign weight)
{
    double R = 1.0;
    double prev = ground_state(n, R, v, weight, default_eigen_tol);
    while (2.0 * R <= r_cap) {
        R *= 2.0;
        const double cur = ground_state(n, R, v, weight, default_eigen_tol);
        if (std::abs(cur - prev) <= 1e-9 * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    return prev;
}

double comparison_ball(int n, double lambda1_target, const RadialPotential& v_tilde, double tol, WeightSign weight)
{
    if (!std::isfinite(lambda1_target))
        throw ContractError("comparison_ball: target must be finite");
    if (!(tol > 0.0))
        throw ContractError("comparison_ball: tol must be positive");
    const double eig_tol = eigen_tol_for(tol);
    const double cap = v_tilde.max_radius().value_or(std::numeric_limits<double>::infinity());
    auto lam = [&](double R) { return ground_state(n, R, v_tilde, weight, eig_tol); };

    double R = std::min(1.0, cap);
    double value = lam(R);
    double lo, hi;  // lambda(lo) > target > lambda(hi)
    if (value > lambda1_target) {
        lo = R;
        for (int it = 0;; ++it) {
            if (2.0 * R > cap)
                throw RangeError("comparison_ball: the comparison ball would exceed the tabulated potential");
            const double next = lam(2.0 * R);
            if (next <= lambda1_target) {
                hi = 2.0 * R;
                // A target within solver noise of the large-R limit has no resolvable ball.
                const double scale = std::max(1.0, std::abs(lambda1_target));
                if (lambda1_target - next < 1e-6 * scale) {
                    double limit = next, r = hi;
                    for (int k = 0; k < 8 && r * 2.0 <= cap; ++k) {
                        r *= 2.0;
                        const double further = lam(r);
                        const bool settled = std::abs(further - limit) <= 1e-9 * scale;
                        limit = further;
                        if (settled)
                            break;
                    }
                    if (lambda1_target <= limit + 1e-9 * scale)
                        throw NoSolutionError("comparison_ball: target " + std::to_string(lambda1_target) +
                                                  " is not above the large-ball limit " + std::to_string(limit),
                                              limit);
                }
                break;
            }
            const bool settled = std::abs(next - value) <= 1e-9 * std::max(1.0, std::abs(next));
            if (settled || it > 60)
                throw NoSolutionError("comparison_ball: target " + std::to_string(lambda1_target) +
                                          " is not above the large-ball limit " + std::to_string(next),
                                      next);
            R *= 2.0;
            lo = R;
            value = next;
        }
    } else {
        hi = R;
        for (int it = 0;; ++it) {
            if (it > 60)
                throw NumericError("comparison_ball: could not bracket the target from below");
            R *= 0.5;
            if (lam(R) > lambda1_target) {
                lo = R;
                break;
            }
            hi = R;
        }
    }
    const double R1 = brent([&](double r) { return lam(r) - lambda1_target; }, lo, hi, 1e-15 * hi);
    const double achieved = lam(R1);
    if (std::abs(achieved - lambda1_target) > tol * std::max(std::abs(lambda1_target), 1e-300))
        throw NumericError("comparison_ball: matched eigenvalue misses the target by " +
                           std::to_string(std::abs(achieved - lambda1_target)));
    return R1;
}

Centre center_find(const DomainGrid& grid, const std::vector<double>& u1, const RiccatiDiagnostics& diag,
                   double tol)
{
    check_vector(grid, u1);
    const auto pts = cell_centres(grid);
    const double w = grid.h() * grid.h();

    double mass = 0.0, cx = 0.0, cy = 0.0, extent = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double m = u1[i] * u1[i] * w;
        mass += m;
        cx += m * pts[i].first;
        cy += m * pts[i].second;
        extent = std::max(extent, std::hypot(pts[i].first, pts[i].second));
    }
    cx /= mass;
    cy /= mass;

    struct Eval {
        double wx, wy, norm, scale;
    };
    auto W = [&](double x0, double y0) {
        Eval e{0.0, 0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double dx = pts[i].first - x0, dy = pts[i].second - y0;
            const double d = std::hypot(dx, dy);
            const double m = u1[i] * u1[i] * w;
            const double g = diag.g_at(d);
            e.scale += g * m;
            if (d > 0.0) {
                e.wx += g * dx / d * m;
                e.wy += g * dy / d * m;
            }
        }
        e.norm = std::hypot(e.wx, e.wy);
        return e;
    };

    Centre c{cx, cy, 0.0, 0};
    Eval cur = W(c.x, c.y);
    const double delta = 1e-5 * std::max(extent, grid.h());
    for (int it = 0; it < 200; ++it) {
        c.iterations = it;
        c.residual = cur.norm / cur.scale;
        if (c.residual <= tol)
            return c;
        const Eval ex = W(c.x + delta, c.y), ey = W(c.x, c.y + delta);
        const double j11 = (ex.wx - cur.wx) / delta, j21 = (ex.wy - cur.wy) / delta;
        const double j12 = (ey.wx - cur.wx) / delta, j22 = (ey.wy - cur.wy) / delta;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det))
            break;
        const double sx = -(j22 * cur.wx - j12 * cur.wy) / det;
        const double sy = -(-j21 * cur.wx + j11 * cur.wy) / det;
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < 40; ++k, t *= 0.5) {
            const Eval trial = W(c.x + t * sx, c.y + t * sy);
            if (trial.norm < cur.norm) {
                c.x += t * sx;
                c.y += t * sy;
                cur = trial;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
    }
    c.residual = cur.norm / cur.scale;
    if (c.residual <= tol)
        return c;
    throw NumericError("center_find: no convergence, last |W| / int g u1^2 = " + std::to_string(c.residual));
}

GapBound gap_bound(const DomainGrid& grid, const std::vector<double>& u1, const Centre& centre,
                   const RiccatiDiagnostics& diag)
{
    check_vector(grid, u1);
    const auto pts = cell_centres(grid);
    const double w = grid.h() * grid.h();
    GapBound gb;
    double exterior = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = std::hypot(pts[i].first - centre.x, pts[i].second - centre.y);
        const double m = u1[i] * u1[i] * w;
        const double b = diag.B_at(d) * m;
        const double g = diag.g_at(d);
        gb.numerator += b;
        gb.denominator += g * g * m;
        if (d > diag.R)
            exterior += b;
    }
    gb.rhs = gb.numerator / gb.denominator;
    gb.exterior_fraction = exterior / gb.numerator;
    gb.exterior_flag = gb.exterior_fraction > 0.01;
    return gb;
}

ChainReport rearrangement_chains(const DomainGrid& grid, const std::vector<double>& u1, const Centre& centre,
                                 const RiccatiDiagnostics& diag, const EigenPair& z1, double slack)
{
    check_vector(grid, u1);
    const auto pts = cell_centres(grid);
    const double w = grid.h() * grid.h();
    const std::size_t m = pts.size();

    std::vector<double> b(m), g2(m), u2(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = std::hypot(pts[i].first - centre.x, pts[i].second - centre.y);
        b[i] = diag.B_at(d);
        const double g = diag.g_at(d);
        g2[i] = g * g;
        u2[i] = u1[i] * u1[i];
    }
    ChainReport rep;
    rep.slack = slack;
    for (std::size_t i = 0; i < m; ++i) {
        rep.N[0] += b[i] * u2[i] * w;
        rep.D[0] += g2[i] * u2[i] * w;
    }

    // Hardy-Littlewood pairing: B* with u1*^2 both decreasing, g_* ^2 increasing against u1*^2.
    std::vector<double> u2s = u2, bs = b, gs = g2;
    std::sort(u2s.begin(), u2s.end(), std::greater<>());
    std::sort(bs.begin(), bs.end(), std::greater<>());
    std::sort(gs.begin(), gs.end());
    for (std::size_t i = 0; i < m; ++i) {
        rep.N[1] += bs[i] * u2s[i] * w;
        rep.D[1] += gs[i] * u2s[i] * w;
    }

    std::vector<double> absu(m);
    for (std::size_t i = 0; i < m; ++i)
        absu[i] = std::abs(u1[i]);
    const RadialProfile star = rearrange(absu, w, diag.n, Monotone::decreasing);
    for (std::size_t k = 0; k < star.radii().size(); ++k) {
        const double r = star.radii()[k], v = star.values()[k], mu = star.measures()[k];
        rep.N[2] += diag.B_at(r) * v * v * mu;
        const double g = diag.g_at(r);
        rep.D[2] += g * g * v * v * mu;
    }

    const double cn = unit_ball_measure(diag.n);
    std::vector<double> fb(diag.r.size()), fg(diag.r.size());
    for (std::size_t i = 0; i < diag.r.size(); ++i) {
        const double jac = diag.n * cn * std::pow(diag.r[i], diag.n - 1);
        const double z2 = z1.z[i] * z1.z[i];
        fb[i] = diag.B[i] * z2 * jac;
        fg[i] = diag.g[i] * diag.g[i] * z2 * jac;
    }
    const double hr = diag.r[1] - diag.r[0];
    rep.N[3] = simpson(fb, hr);
    rep.D[3] = simpson(fg, hr);

    rep.numerator_chain = true;
    rep.denominator_chain = true;
    for (int k = 0; k < 3; ++k) {
        rep.numerator_chain = rep.numerator_chain && rep.N[k] <= rep.N[k + 1] * (1.0 + slack);
        rep.denominator_chain = rep.denominator_chain && rep.D[k] >= rep.D[k + 1] * (1.0 - slack);
    }
    return rep;
}

ComparisonReport verify_theorem1(const DomainSpectrum& omega, const DomainPotential& v,
                                 const RadialPotential& v_tilde, const Theorem1Options& opt)
{
    const int n = 2;
    const DomainGrid& grid = omega.grid;
    if (omega.lambda.size() < 2)
        throw ContractError("verify_theorem1: the domain spectrum needs two eigenvalues");
    if (omega.disconnected)
        throw ContractError("verify_theorem1: the domain is not connected");

    ComparisonReport rep;
    rep.lambda1_omega = omega.lambda1();
    rep.lambda2_omega = omega.lambda2();
    if (omega.discretization_errors.size() >= 2) {
        rep.error1 = omega.discretization_errors[0];
        rep.error2 = omega.discretization_errors[1];
    } else if (omega.estimated_discretization_error) {
        rep.error1 = rep.error2 = *omega.estimated_discretization_error;
    }

    rep.R1 = comparison_ball(n, rep.lambda1_omega, v_tilde, opt.matching_tol);

    rep.conditions = validate_conditions(v_tilde, rep.R1);
    if (!rep.conditions.a_holds)
        throw ContractError("verify_theorem1: condition (a) V~(0) = V~'(0) = 0 fails for the comparison potential");
    if (!rep.conditions.b_holds)
        throw ContractError("verify_theorem1: condition (b) fails for the comparison potential near r = " +
                            std::to_string(rep.conditions.worst_location));

    // V* against V~ on [0, R1], with a tolerance of two cells times the largest cell-to-cell slope of V.
    const std::vector<double> samples = v.sample(grid);
    const double w = grid.h() * grid.h();
    double slope = 0.0;
    {
        std::vector<double> full(static_cast<std::size_t>(grid.nx()) * grid.ny(),
                                 std::numeric_limits<double>::quiet_NaN());
        std::size_t idx = 0;
        for (int j = 0; j < grid.ny(); ++j)
            for (int i = 0; i < grid.nx(); ++i)
                if (grid.inside(i, j))
                    full[static_cast<std::size_t>(j) * grid.nx() + i] = samples[idx++];
        for (int j = 0; j < grid.ny(); ++j)
            for (int i = 0; i < grid.nx(); ++i) {
                const double a = full[static_cast<std::size_t>(j) * grid.nx() + i];
                if (std::isnan(a))
                    continue;
                if (i + 1 < grid.nx() && grid.inside(i + 1, j))
                    slope = std::max(slope, std::abs(full[static_cast<std::size_t>(j) * grid.nx() + i + 1] - a));
                if (j + 1 < grid.ny() && grid.inside(i, j + 1))
                    slope = std::max(slope, std::abs(full[static_cast<std::size_t>(j + 1) * grid.nx() + i] - a));
            }
        slope /= grid.h();
    }
    const RadialProfile v_star = rearrange(samples, w, n, Monotone::increasing);
    rep.dominance = dominates(v_tilde, v_star, rep.R1, 2.0 * grid.h() * slope + 1e-12);
    if (!rep.dominance.holds)
        throw ContractError("verify_theorem1: V~ <= V* fails near r = " +
                            std::to_string(rep.dominance.worst_location));

    const FirstTwo s1 = first_two(n, rep.R1, v_tilde, eigen_tol_for(opt.matching_tol));
    rep.lambda1_S1 = s1.lambda1;
    rep.lambda2_S1 = s1.lambda2;
    rep.matching_gap = std::abs(rep.lambda1_omega - rep.lambda1_S1) / std::abs(rep.lambda1_omega);
    rep.margin = rep.lambda2_S1 - rep.lambda2_omega;
    rep.slack = 3.0 * (rep.error2 + rep.lambda2_S1 / rep.lambda1_S1 * rep.error1) + 1e-9 * std::abs(rep.lambda2_S1);
    rep.passed = rep.margin >= -rep.slack && rep.matching_gap <= opt.matching_tol;

    if (opt.gap) {
        const RiccatiDiagnostics diag = diagnostics(s1.z1, s1.z2, v_tilde);
        const std::vector<double> u1 = omega.u1();
        rep.center = center_find(grid, u1, diag);
        rep.gap = gap_bound(grid, u1, *rep.center, diag);
        rep.gap_bound_rhs = rep.gap->rhs;
        rep.gap_bound_holds =
            rep.lambda2_omega - rep.lambda1_omega <= rep.gap->rhs + 3.0 * (rep.error1 + rep.error2);
    }
    return rep;
}

ComparisonReport verify_theorem1(const DomainGrid& grid, const DomainPotential& v, const RadialPotential& v_tilde,
                                 const Theorem1Options& opt)
{
    return verify_theorem1(solve_domain_extrapolated(grid, v, 2, opt.tol), v, v_tilde, opt);
}

ScanResult scan_ratio(int n, const RadialPotential& v, double r_min, double r_max, int steps, int jobs, double tol)
{
    if (!(r_min > 0.0) || !(r_max >= r_min))
        throw ContractError("scan_ratio: need 0 < r_min <= r_max");
    if (steps < 2)
        throw ContractError("scan_ratio: steps must be at least 2");
    const std::vector<double> radii = linspace(r_min, r_max, static_cast<std::size_t>(steps));
    ScanResult out;
    out.rows.resize(radii.size());
    parallel_for(radii.size(), jobs, [&](std::size_t i) {
        const FirstTwo ft = first_two(n, radii[i], v, tol);
        ScanRow& row = out.rows[i];
        row.R = radii[i];
        row.lambda1 = ft.lambda1;
        row.lambda2 = ft.lambda2;
        row.ratio = ft.lambda2 / ft.lambda1;
        row.eqlambda_margin = ft.lambda2 - (1.0 + 2.0 / n) * ft.lambda1;
        row.sector_warning = ft.sector_warning;
    });
    out.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const ScanRow& row = out.rows[i];
        const double rel = row.eqlambda_margin / std::abs(row.lambda1);
        out.min_margin = std::min(out.min_margin, rel);
        out.eqlambda_holds = out.eqlambda_holds && rel >= -monotone_slack;
        if (i > 0) {
            const double rise = row.ratio - out.rows[i - 1].ratio;
            out.worst_rise = std::max(out.worst_rise, rise);
        }
    }
    out.nonincreasing = out.worst_rise <= monotone_slack;
    return out;
}

SharpnessResult sharpness_scan(int n, const std::vector<double>& epsilons, double r_min, double r_max, int steps,
                               int jobs, double tol)
{
    for (double e : epsilons)
        if (!(e >= 0.0 && e < 1.0))
            throw ContractError("sharpness_scan: every eps must lie in [0, 1)");
    if (!(r_min > 0.0) || !(r_max >= r_min) || steps < 2)
        throw ContractError("sharpness_scan: need 0 < r_min <= r_max and steps >= 2");
    const std::vector<double> radii = linspace(r_min, r_max, static_cast<std::size_t>(steps));
    SharpnessResult out;
    out.rows.resize(epsilons.size() * radii.size());
    parallel_for(out.rows.size(), jobs, [&](std::size_t idx) {
        const double eps = epsilons[idx / radii.size()];
        const double R = radii[idx % radii.size()];
        const FirstTwo ft = first_two(n, R, RadialPotential::power(1.0, 2.0 - eps), tol);
        out.rows[idx] = SharpnessRow{eps, R, ft.lambda1, ft.lambda2, ft.lambda2 - (1.0 + 2.0 / n) * ft.lambda1};
    });
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < radii.size(); ++k) {
            const SharpnessRow& row = out.rows[e * radii.size() + k];
            worst = std::min(worst, row.margin);
            if (row.margin < -monotone_slack * std::abs(row.lambda1))
                out.violations.push_back(row);
        }
        out.min_margin.emplace_back(epsilons[e], worst);
    }
    return out;
}

ScalingChain scaling_chain(int n, const RadialPotential& v, double R1, double R2, double tol)
{
    if (!(R1 > 0.0 && R1 < R2))
        throw ContractError("scaling_chain: need 0 < R1 < R2");
    ScalingChain sc;
    sc.R1 = R1;
    sc.R2 = R2;
    const double eig_tol = eigen_tol_for(tol);
    const FirstTwo at1 = first_two(n, R1, v, eig_tol);
    const FirstTwo at2 = first_two(n, R2, v, eig_tol);
    sc.lambda2_R1 = at1.lambda2;
    sc.ratio_R1 = at1.lambda2 / at1.lambda1;
    sc.ratio_R2 = at2.lambda2 / at2.lambda1;
    sc.beta0_closed_form = std::sqrt(at1.lambda1 / at2.lambda1);

    auto rho = [&](double beta) {
        const double target = ground_state(n, R2 / beta, v.rescaled(beta), WeightSign::none, eig_tol);
        return comparison_ball(n, target, v, tol);
    };
    double lo = 1.0, hi = 2.0;
    while (rho(hi) > R1) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6)
            throw NumericError("scaling_chain: could not bracket beta0");
    }
    sc.beta0 = brent([&](double b) { return rho(b) - R1; }, lo, hi, tol * hi);
    sc.rho_beta0 = rho(sc.beta0);

    const FirstTwo scaled = first_two(n, R2 / sc.beta0, v.rescaled(sc.beta0), eig_tol);
    sc.lambda1_scaled = scaled.lambda1;
    sc.lambda2_scaled = scaled.lambda2;
    sc.ratio_scaled = scaled.lambda2 / scaled.lambda1;
    sc.second_eigenvalue_bound = sc.lambda2_scaled <= sc.lambda2_R1 * (1.0 + 1e-7);
    sc.ratio_ordering = sc.ratio_R1 >= sc.ratio_R2 - monotone_slack;
    return sc;
}

} // namespace ppw
