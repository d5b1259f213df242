#pragma once

// Dirichlet eigenvalues of the weighted operators
//   -e^{-/+ r^2} div(e^{+/- r^2} grad psi) = lambda psi
// on balls and 2-D domains, checked against the harmonic oscillator
// -Laplace + r^2 through lambda^{+/-}_i = lambda_i(r^2) +/- n.

#include "ppw/domain_solver.hpp"
#include "ppw/radial_solver.hpp"
#include "ppw/riccati.hpp"
#include "ppw/verify.hpp"

#include <optional>
#include <vector>

namespace ppw {

inline constexpr double gaussian_radius_cap_plus = 6.0;
inline constexpr double gaussian_radius_cap_minus = 8.0;
inline constexpr double gaussian_relation_tol = 1e-7;

struct GaussianSpectrum {
    WeightSign sign = WeightSign::plus;
    int n = 2;
    double R = 1.0;
    double lambda1_pm = 0.0;
    double lambda2_pm = 0.0;
    double lambda1_osc = 0.0;  // lambda_i(B_R, r^2)
    double lambda2_osc = 0.0;
    double deviation1 = 0.0;   // |lambda_i^pm - (lambda_i(B_R, r^2) +/- n)|
    double deviation2 = 0.0;
    /// max |psi_1 e^{+/- r^2 / 2} - z_1| / max |z_1|, both scaled to 1 at r = 0.
    double shape_deviation = 0.0;
    bool consistent = false;   // both deviations within gaussian_relation_tol
    EigenPair psi1;
    EigenPair psi2;
};

/// Sectors l = 0 and l = 1 of the weighted radial problem, plus the
/// oscillator cross-check. R above the cap for the sign raises RangeError.
GaussianSpectrum solve_gaussian(WeightSign sign, int n, double R, double tol = default_eigen_tol,
                                std::size_t samples = default_radial_samples);

struct GaussianDomainReport {
    WeightSign sign = WeightSign::plus;
    double lambda1_omega = 0.0;   // lambda^{+/-}_i(Omega) = lambda_i(Omega, r^2) +/- 2
    double lambda2_omega = 0.0;
    double error1 = 0.0;
    double error2 = 0.0;
    double R1 = 0.0;              // from the weighted ball problem
    double R1_oscillator = 0.0;   // from the oscillator, same matching condition
    double lambda1_S1 = 0.0;
    double lambda2_S1 = 0.0;
    double lambda2_S1_oscillator = 0.0;  // lambda_2(S1, r^2) +/- 2
    double margin = 0.0;          // lambda2_S1 - lambda2_omega
    double slack = 0.0;
    bool passed = false;
};

/// `omega` is the domain spectrum for V = r^2; the plus sign checks the
/// second-eigenvalue bound for the Gaussian weight, the minus sign the
/// inverted one.
GaussianDomainReport verify_gaussian_domain(const DomainSpectrum& omega, WeightSign sign,
                                            double tol = default_matching_tol);
GaussianDomainReport verify_gaussian_domain(const DomainGrid& grid, WeightSign sign,
                                            double tol = default_matching_tol);

struct RatioLimitRow {
    double R = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::optional<double> ratio;  // empty when lambda1 <= 0 (divergent)
};

struct RatioLimits {
    WeightSign sign = WeightSign::plus;
    std::vector<RatioLimitRow> rows;
    bool strictly_decreasing = false;  // consecutive ratios drop by more than 1e-10
    bool increasing = false;           // consecutive ratios rise (minus sign)
    int divergent = 0;
};

RatioLimits ratio_limits(WeightSign sign, int n, const std::vector<double>& radii, double tol = default_eigen_tol);

/// The ratio lemma applied to (a, b, c, d, x) = (lambda2(B_{R+dx}, r^2),
/// lambda1(B_{R+dx}, r^2), lambda2(B_R, r^2), lambda1(B_R, r^2), n).
struct Lemma4Report {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, x = 0.0;
    bool spectral_order = false;   // a > b
    bool monotone = false;         // d >= b
    bool ratio_order = false;      // a / b < c / d
    Lemma3Result result;
    bool holds = false;
};

bool lemma4_check(double a, double b, double c, double d, double x);
Lemma4Report lemma4_instance(int n, double R, double dx, double tol = 1e-12);

} // namespace ppw
