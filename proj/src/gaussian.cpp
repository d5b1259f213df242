#include "ppw/gaussian.hpp"

#include "ppw/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ppw {

GaussianSpectrum solve_gaussian(WeightSign sign, int n, double R, double tol, std::size_t samples)
{
    if (sign == WeightSign::none)
        throw ContractError("solve_gaussian: sign must be plus or minus");
    const double cap = sign == WeightSign::plus ? gaussian_radius_cap_plus : gaussian_radius_cap_minus;
    if (!(R > 0.0) || R > cap)
        throw RangeError("solve_gaussian: R = " + std::to_string(R) + " outside (0, " + std::to_string(cap) +
                         "] for the " + to_string(sign) + " weight");
    const double sigma = weight_sigma(sign);

    GaussianSpectrum gs;
    gs.sign = sign;
    gs.n = n;
    gs.R = R;
    const FirstTwo weighted = first_two(n, R, RadialPotential::zero(), tol, sign, samples);
    const FirstTwo osc = first_two(n, R, RadialPotential::power(1.0, 2.0), tol, WeightSign::none, samples);
    gs.lambda1_pm = weighted.lambda1;
    gs.lambda2_pm = weighted.lambda2;
    gs.lambda1_osc = osc.lambda1;
    gs.lambda2_osc = osc.lambda2;
    gs.deviation1 = std::abs(gs.lambda1_pm - (osc.lambda1 + sigma * n));
    gs.deviation2 = std::abs(gs.lambda2_pm - (osc.lambda2 + sigma * n));
    gs.consistent = gs.deviation1 <= gaussian_relation_tol && gs.deviation2 <= gaussian_relation_tol;

    const EigenPair& psi = weighted.z1;
    const EigenPair& z = osc.z1;
    const double psi0 = psi.z.front(), z0 = z.z.front();
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.r.size(); ++i) {
        const double r = psi.r[i];
        const double a = psi.z[i] * std::exp(sigma * r * r / 2.0) / psi0;
        const double b = z.value_at(r) / z0;
        worst = std::max(worst, std::abs(a - b));
    }
    gs.shape_deviation = worst;
    gs.psi1 = weighted.z1;
    gs.psi2 = weighted.z2;
    return gs;
}

GaussianDomainReport verify_gaussian_domain(const DomainSpectrum& omega, WeightSign sign, double tol)
{
    if (sign == WeightSign::none)
        throw ContractError("verify_gaussian_domain: sign must be plus or minus");
    if (omega.lambda.size() < 2)
        throw ContractError("verify_gaussian_domain: the domain spectrum needs two eigenvalues");
    const int n = 2;
    const double shift = weight_sigma(sign) * n;
    const double eig_tol = std::clamp(1e-2 * tol, 1e-12, default_eigen_tol);

    GaussianDomainReport rep;
    rep.sign = sign;
    rep.lambda1_omega = omega.lambda1() + shift;
    rep.lambda2_omega = omega.lambda2() + shift;
    if (omega.discretization_errors.size() >= 2) {
        rep.error1 = omega.discretization_errors[0];
        rep.error2 = omega.discretization_errors[1];
    } else if (omega.estimated_discretization_error) {
        rep.error1 = rep.error2 = *omega.estimated_discretization_error;
    }

    rep.R1 = comparison_ball(n, rep.lambda1_omega, RadialPotential::zero(), tol, sign);
    rep.R1_oscillator = comparison_ball(n, omega.lambda1(), RadialPotential::power(1.0, 2.0), tol);
    const FirstTwo s1 = first_two(n, rep.R1, RadialPotential::zero(), eig_tol, sign);
    const FirstTwo osc = first_two(n, rep.R1_oscillator, RadialPotential::power(1.0, 2.0), eig_tol);
    rep.lambda1_S1 = s1.lambda1;
    rep.lambda2_S1 = s1.lambda2;
    rep.lambda2_S1_oscillator = osc.lambda2 + shift;
    rep.margin = rep.lambda2_S1 - rep.lambda2_omega;
    rep.slack = 3.0 * (rep.error2 + std::abs(rep.lambda2_S1 / rep.lambda1_S1) * rep.error1) +
                1e-9 * std::abs(rep.lambda2_S1);
    rep.passed = rep.margin >= -rep.slack;
    return rep;
}

GaussianDomainReport verify_gaussian_domain(const DomainGrid& grid, WeightSign sign, double tol)
{
    const DomainSpectrum omega =
        solve_domain_extrapolated(grid, DomainPotential(RadialPotential::power(1.0, 2.0)), 2);
    return verify_gaussian_domain(omega, sign, tol);
}

RatioLimits ratio_limits(WeightSign sign, int n, const std::vector<double>& radii, double tol)
{
    if (sign == WeightSign::none)
        throw ContractError("ratio_limits: sign must be plus or minus");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw ContractError("ratio_limits: radii must increase");
    RatioLimits out;
    out.sign = sign;
    for (double R : radii) {
        const GaussianSpectrum gs = solve_gaussian(sign, n, R, tol);
        RatioLimitRow row{R, gs.lambda1_pm, gs.lambda2_pm, std::nullopt};
        if (gs.lambda1_pm > 0.0)
            row.ratio = gs.lambda2_pm / gs.lambda1_pm;
        else
            ++out.divergent;
        out.rows.push_back(row);
    }
    out.strictly_decreasing = out.rows.size() >= 2;
    out.increasing = out.rows.size() >= 2;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        const auto& a = out.rows[i - 1].ratio;
        const auto& b = out.rows[i].ratio;
        if (!a || !b) {
            out.strictly_decreasing = false;
            continue;
        }
        out.strictly_decreasing = out.strictly_decreasing && *a - *b > 1e-10;
        out.increasing = out.increasing && *b > *a;
    }
    return out;
}

bool lemma4_check(double a, double b, double c, double d, double x)
{
    return lemma3(a, b, c, d, x).holds;
}

Lemma4Report lemma4_instance(int n, double R, double dx, double tol)
{
    if (!(R > 0.0 && dx > 0.0))
        throw ContractError("lemma4_instance: R and dx must be positive");
    const RadialPotential osc = RadialPotential::power(1.0, 2.0);
    const FirstTwo outer = first_two(n, R + dx, osc, tol);
    const FirstTwo inner = first_two(n, R, osc, tol);
    Lemma4Report rep;
    rep.a = outer.lambda2;
    rep.b = outer.lambda1;
    rep.c = inner.lambda2;
    rep.d = inner.lambda1;
    rep.x = n;
    rep.spectral_order = rep.a > rep.b;
    rep.monotone = rep.d >= rep.b;
    rep.ratio_order = rep.a / rep.b < rep.c / rep.d;
    rep.result = lemma3(rep.a, rep.b, rep.c, rep.d, rep.x);
    rep.holds = rep.result.holds && rep.result.x0_negative;
    return rep;
}

} // namespace ppw
