// Acceptance runner: one PASS/FAIL line per criterion, tolerances and time
// budgets pinned below. Exit status is the number of failed criteria.

#include "oracles.hpp"

#include "ppw/cli.hpp"
#include "ppw/domain_solver.hpp"
#include "ppw/gaussian.hpp"
#include "ppw/rearrangement.hpp"
#include "ppw/riccati.hpp"
#include "ppw/special_functions.hpp"
#include "ppw/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ppw;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> body;
};

const std::vector<RadialPotential> potentials_0_2_4{RadialPotential::zero(), RadialPotential::power(1, 2),
                                                    RadialPotential::power(1, 4)};

Outcome classical_constant()
{
    Outcome o;
    std::ostringstream out, err;
    const int code = dispatch({"constant", "--dim", "2"}, out, err);
    o.require(code == exit_ok, "exit code " + std::to_string(code));
    const double c = std::stod(out.str());
    o.require(std::abs(c - 2.5387) <= 1e-3, "constant " + fmt(c));
    o.detail = o.ok ? "constant " + format_number(c) : o.detail;
    return o;
}

Outcome solver_ground_truth()
{
    Outcome o;
    const FirstTwo ft = first_two(2, 1.0, RadialPotential::zero());
    const double j0 = oracle::bessel_zero(0.0, 1), j1 = oracle::bessel_zero(1.0, 1);
    const double e1 = std::abs(ft.lambda1 / (j0 * j0) - 1), e2 = std::abs(ft.lambda2 / (j1 * j1) - 1);
    o.require(e1 <= 1e-8, "lambda1 rel err " + fmt(e1));
    o.require(e2 <= 1e-8, "lambda2 rel err " + fmt(e2));
    if (o.ok)
        o.detail = "rel errors " + fmt(e1) + ", " + fmt(e2);
    return o;
}

Outcome gaussian_relation()
{
    Outcome o;
    double worst = 0.0;
    for (WeightSign s : {WeightSign::plus, WeightSign::minus})
        for (int n : {2, 3})
            for (double R : {0.5, 1.0, 2.0}) {
                const GaussianSpectrum g = solve_gaussian(s, n, R);
                worst = std::max({worst, g.deviation1, g.deviation2});
                o.require(g.deviation1 <= 1e-7 && g.deviation2 <= 1e-7,
                          std::string(to_string(s)) + " n=" + std::to_string(n) + " R=" + fmt(R));
            }
    if (o.ok)
        o.detail = "worst deviation " + fmt(worst);
    return o;
}

Outcome ratio_scan()
{
    Outcome o;
    double worst_limit = 0.0;
    for (int n : {2, 3})
        for (int alpha : {2, 4}) {
            const ScanResult s = scan_ratio(n, RadialPotential::power(1, alpha), 0.5, 6.0, 12);
            const std::string tag = "n=" + std::to_string(n) + " r^" + std::to_string(alpha);
            o.require(s.nonincreasing && s.worst_rise <= 1e-8, tag + " rise " + fmt(s.worst_rise));
            if (alpha == 2) {
                const double lim = (n + 2.0) / n;
                const double d = std::abs(s.rows.back().ratio - lim);
                worst_limit = std::max(worst_limit, d);
                o.require(d <= 1e-3, tag + " limit gap " + fmt(d));
            }
        }
    if (o.ok)
        o.detail = "worst oscillator-limit gap " + fmt(worst_limit);
    return o;
}

Outcome second_over_first()
{
    Outcome o;
    double worst = 1e300;
    for (int n : {2, 3})
        for (const auto& v : potentials_0_2_4) {
            const ScanResult s = scan_ratio(n, v, 0.5, 6.0, 12);
            for (const auto& r : s.rows) {
                worst = std::min(worst, r.eqlambda_margin);
                o.require(r.eqlambda_margin >= -1e-8 * std::abs(r.lambda1),
                          "n=" + std::to_string(n) + " " + v.describe() + " R=" + fmt(r.R));
            }
        }
    for (int n : {2, 3}) {
        const SharpnessResult sh = sharpness_scan(n, {0.0}, 0.5, 6.0, 12);
        o.require(sh.violations.empty(), "eps=0 violations n=" + std::to_string(n));
    }
    if (o.ok)
        o.detail = "min margin " + fmt(worst) + ", eps=0 clean";
    return o;
}

Outcome domain_instances()
{
    Outcome o;
    const double h = 1.0 / 256;
    const RadialPotential osc = RadialPotential::power(1, 2);
    Theorem1Options opt;
    opt.gap = false;

    const DomainSpectrum disk =
        solve_domain_resampled([](double s) { return DomainGrid::disk(1.0, s); }, h, DomainPotential(osc), 2);
    const ComparisonReport a = verify_theorem1(disk, DomainPotential(osc), osc, opt);
    o.require(std::abs(a.margin) <= a.slack, "disk |margin| " + fmt(a.margin) + " > budget " + fmt(a.slack));

    const DomainSpectrum square = solve_domain_extrapolated(DomainGrid::rectangle(1.0, 1.0, h),
                                                            DomainPotential(RadialPotential::zero()), 2);
    const ComparisonReport b =
        verify_theorem1(square, DomainPotential(RadialPotential::zero()), RadialPotential::zero(), opt);
    const double ratio_err = std::abs(square.lambda2() / square.lambda1() - 2.5);
    o.require(b.margin > 0.0, "square margin " + fmt(b.margin));
    o.require(ratio_err <= 1e-6, "square ratio error " + fmt(ratio_err));

    const DomainSpectrum ellipse =
        solve_domain_resampled([](double s) { return DomainGrid::ellipse(1.0, 0.6, s); }, h, DomainPotential(osc), 2);
    const ComparisonReport c = verify_theorem1(ellipse, DomainPotential(osc), osc, opt);
    o.require(c.margin >= -c.slack, "ellipse margin " + fmt(c.margin) + " < -" + fmt(c.slack));

    if (o.ok)
        o.detail = "disk margin " + fmt(a.margin) + " (budget " + fmt(a.slack) + "), square margin " +
                   fmt(b.margin) + " ratio err " + fmt(ratio_err) + ", ellipse margin " + fmt(c.margin);
    return o;
}

Outcome riccati_facts()
{
    Outcome o;
    double worst_q2 = 0.0;
    for (int n : {2, 3})
        for (const auto& v : potentials_0_2_4) {
            const FirstTwo ft = first_two(n, 1.0, v);
            const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, v);
            const QSecondDerivative q2 = q_second_derivative_check(n, ft.lambda1, ft.lambda2, d);
            const std::string tag = "n=" + std::to_string(n) + " " + v.describe();
            o.require(d.facts.q_in_01, tag + " q range");
            o.require(d.facts.q_decreasing, tag + " q' max " + fmt(d.facts.dq_max));
            o.require(d.facts.g_increasing, tag + " g");
            o.require(d.facts.B_decreasing, tag + " B");
            o.require(std::abs(d.q0 - 1) <= 1e-3, tag + " q(0+) " + fmt(d.q0));
            o.require(std::abs(d.qR) <= 1e-3, tag + " q(R-) " + fmt(d.qR));
            o.require(q2.agree, tag + " q''(0) " + fmt(q2.numeric) + " vs " + fmt(q2.closed_form));
            worst_q2 = std::max(worst_q2, std::abs(q2.numeric - q2.closed_form) / std::abs(q2.closed_form));
        }
    if (o.ok)
        o.detail = "worst q''(0) relative gap " + fmt(worst_q2);
    return o;
}

Outcome riccati_identities()
{
    Outcome o;
    double worst_res = 0.0, worst_gap = 0.0, worst_id = 0.0;
    for (int n : {2, 3})
        for (const auto& v : potentials_0_2_4) {
            const FirstTwo ft = first_two(n, 1.0, v);
            const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, v);
            const std::string tag = "n=" + std::to_string(n) + " " + v.describe();
            worst_res = std::max({worst_res, d.residual_ric_q, d.residual_ric_p, d.residual_T_identity});
            o.require(d.residual_ric_q <= 1e-4 && d.residual_ric_p <= 1e-4, tag + " Riccati residual");
            o.require(d.residual_T_identity <= 1e-4, tag + " T identity " + fmt(d.residual_T_identity));
            for (double y : {0.5, 0.9}) {
                const TZReport t = T_and_Z(ft.z1, d, y, 1e-3);
                for (const auto& z : t.zeros)
                    worst_gap = std::max(worst_gap, z.relative_gap);
                o.require(t.zeros_consistent, tag + " T' vs Z at y=" + fmt(y));
                const SectorConstants c = sector_constants(n, y, ft.lambda1, ft.lambda2);
                worst_id = std::max(worst_id, c.identity_residual);
                o.require(c.identity_residual <= 1e-12, tag + " M identity");
            }
            const QSecondDerivative q2 = q_second_derivative_check(n, ft.lambda1, ft.lambda2, d);
            const double rel = q2.identity_gap / std::max(1.0, std::abs(q2.two_over_n_form));
            worst_id = std::max(worst_id, rel);
            o.require(rel <= 1e-12, tag + " Q1 identity");
        }
    if (o.ok)
        o.detail = "residual " + fmt(worst_res) + ", zero gap " + fmt(worst_gap) + ", identities " + fmt(worst_id);
    return o;
}

Outcome chiti()
{
    Outcome o;
    const double h = 1.0 / 64;
    const RadialPotential zero = RadialPotential::zero();
    for (const auto& [name, g] : {std::pair{"square", DomainGrid::rectangle(1.0, 1.0, h)},
                                  std::pair{"ellipse", DomainGrid::ellipse(1.0, 0.6, h)}}) {
        const DomainSpectrum s = solve_domain(g, DomainPotential(zero), 1);
        const double R1 = comparison_ball(2, s.lambda1(), zero);
        const FirstTwo ball = first_two(2, R1, zero);
        const RadialProfile star = rearrange(s.u1(), g.h() * g.h(), 2, Monotone::decreasing);
        const ChitiReport c = chiti_crossings(star, ball.z1);
        o.require(c.count == 1, std::string(name) + " crossings " + std::to_string(c.count));
        if (std::string(name) == "square") {
            const Fact1Report f = check_fact1(star, zero, s.lambda1(), 1e-2);
            o.require(f.holds, "square integrated inequality excess " + fmt(f.worst_excess));
        }
    }
    double worst = 0.0;
    for (int n : {2, 3})
        for (const auto& v : potentials_0_2_4) {
            const FirstTwo ft = first_two(n, 1.0, v);
            worst = std::max(worst, factde_residual(ft.z1, v, ft.lambda1));
        }
    o.require(worst <= 1e-5, "integral identity residual " + fmt(worst));
    if (o.ok)
        o.detail = "one crossing on square and ellipse, identity residual " + fmt(worst);
    return o;
}

Outcome gap_machinery()
{
    Outcome o;
    const RadialPotential osc = RadialPotential::power(1, 2);
    const DomainSpectrum disk = solve_domain_resampled([](double s) { return DomainGrid::disk(1.0, s); },
                                                       1.0 / 128, DomainPotential(osc), 2);
    const ComparisonReport a = verify_theorem1(disk, DomainPotential(osc), osc);
    const double gap = a.lambda2_omega - a.lambda1_omega;
    const double rel = a.gap_bound_rhs ? std::abs(*a.gap_bound_rhs - gap) / gap : 1.0;
    o.require(rel <= 1e-3, "disk rhs relative gap " + fmt(rel));

    const DomainGrid sq = DomainGrid::rectangle(1.0, 1.0, 1.0 / 128);
    const ComparisonReport b =
        verify_theorem1(sq, DomainPotential(RadialPotential::zero()), RadialPotential::zero());
    const double rhs = b.gap_bound_rhs.value_or(0.0);
    o.require(rhs >= 3 * pi * pi, "square rhs " + fmt(rhs) + " < 3 pi^2");
    if (o.ok)
        o.detail = "disk rhs rel gap " + fmt(rel) + ", square rhs " + fmt(rhs) + " >= " + fmt(3 * pi * pi);
    return o;
}

Outcome ratio_lemma_sweep()
{
    Outcome o;
    const Lemma3Sweep s = lemma3_sweep(10000, 20261018);
    o.require(s.failures == 0, std::to_string(s.failures) + " failures");
    o.require(s.nonnegative_x0 == 0, std::to_string(s.nonnegative_x0) + " nonnegative x0");
    if (o.ok)
        o.detail = std::to_string(s.samples) + " samples, no failures";
    return o;
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "classical constant", 1.0, classical_constant},
        {2, "solver ground truth", 1.0, solver_ground_truth},
        {3, "Gaussian / oscillator relation", 10.0, gaussian_relation},
        {4, "ratio monotone in R", 60.0, ratio_scan},
        {5, "lambda2 >= (1 + 2/n) lambda1", 60.0, second_over_first},
        {6, "second-eigenvalue bound on domains", 300.0, domain_instances},
        {7, "Riccati variable facts", 30.0, riccati_facts},
        {8, "Riccati identities", 30.0, riccati_identities},
        {9, "single crossing and integral identity", 120.0, chiti},
        {10, "gap bound", 120.0, gap_machinery},
        {11, "ratio lemma random sweep", 1.0, ratio_lemma_sweep},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (t > c.budget_s) {
            o.ok = false;
            o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time budget");
        }
        failed += !o.ok;
        std::printf("criterion %2d %-40s %s  [%.2f s / %.0f s]  %s\n", c.id, c.name, o.ok ? "PASS" : "FAIL", t,
                    c.budget_s, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
