#pragma once

// The comparison ball S1, the second-eigenvalue bound on general 2-D domains,
// the gap bound built from the test functions g(r) x_i / r, and radial scans
// of lambda2 / lambda1.

#include "ppw/domain_solver.hpp"
#include "ppw/potentials.hpp"
#include "ppw/radial_solver.hpp"
#include "ppw/riccati.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ppw {

inline constexpr double default_matching_tol = 1e-8;

/// Radius R1 with lambda1(B_R1, v_tilde) = target to relative `tol`, found by
/// root bracketing on R (lambda1 decreases strictly in R). Throws
/// NoSolutionError carrying the large-R limit when the target lies at or
/// below it.
double comparison_ball(int n, double lambda1_target, const RadialPotential& v_tilde,
                       double tol = default_matching_tol, WeightSign weight = WeightSign::none);

/// Large-R limit estimate of lambda1(B_R, v), by doubling R until two
/// successive values agree to 1e-9 relative (or R reaches `r_cap`).
double lambda1_limit(int n, const RadialPotential& v, double r_cap = 16.0, WeightSign weight = WeightSign::none);

struct Centre {
    double x = 0.0;
    double y = 0.0;
    double residual = 0.0;  // |W(c)| / int g u1^2
    int iterations = 0;
};

/// Origin c at which int g(|x - c|) (x - c)_i / |x - c| u1^2 dx = 0 for both
/// i, starting from the u1^2 centroid; damped Newton with a finite-difference
/// Jacobian and step halving. `u1` is in the grid's unknown order.
Centre center_find(const DomainGrid& grid, const std::vector<double>& u1, const RiccatiDiagnostics& diag,
                   double tol = 1e-10);

struct GapBound {
    double rhs = 0.0;
    double numerator = 0.0;    // int B u1^2
    double denominator = 0.0;  // int g^2 u1^2
    double exterior_fraction = 0.0;  // share of the numerator from |x - c| > R1
    bool exterior_flag = false;      // exterior_fraction > 1%
};

/// Right-hand side int B u1^2 / int g^2 u1^2 with r = |x - centre|; g is
/// constant beyond R1 and B = g(R1)^2 (n - 1) / r^2 there.
GapBound gap_bound(const DomainGrid& grid, const std::vector<double>& u1, const Centre& centre,
                   const RiccatiDiagnostics& diag);

/// The two rearrangement chains behind the gap bound, with numerator terms
///   N0 = int_Omega B u1^2 <= N1 = int B* u1*^2 <= N2 = int B u1*^2 <= N3 = int_S1 B z1^2
/// and denominator terms
///   D0 = int_Omega g^2 u1^2 >= D1 >= D2 >= D3 = int_S1 g^2 z1^2.
struct ChainReport {
    double N[4] = {0, 0, 0, 0};
    double D[4] = {0, 0, 0, 0};
    double slack = 0.0;  // relative
    bool numerator_chain = false;
    bool denominator_chain = false;
};

ChainReport rearrangement_chains(const DomainGrid& grid, const std::vector<double>& u1, const Centre& centre,
                                 const RiccatiDiagnostics& diag, const EigenPair& z1, double slack = 2e-3);

struct ComparisonReport {
    double lambda1_omega = 0.0;
    double lambda2_omega = 0.0;
    double error1 = 0.0;  // discretization error estimates of the domain eigenvalues
    double error2 = 0.0;
    double R1 = 0.0;
    double lambda1_S1 = 0.0;
    double lambda2_S1 = 0.0;
    double margin = 0.0;          // lambda2_S1 - lambda2_omega
    double slack = 0.0;           // 3 (error2 + (lambda2_S1 / lambda1_S1) error1)
    double matching_gap = 0.0;    // |lambda1_omega - lambda1_S1| / |lambda1_omega|
    std::optional<double> gap_bound_rhs;
    std::optional<GapBound> gap;
    std::optional<Centre> center;
    bool gap_bound_holds = true;  // lambda2 - lambda1 <= rhs + slack on Omega
    ConditionReport conditions;
    DominanceReport dominance;
    bool passed = false;
};

struct Theorem1Options {
    double tol = default_domain_tol;
    double matching_tol = default_matching_tol;
    bool gap = true;
};

/// Checks the hypotheses on v_tilde and V*, builds S1 and compares second
/// eigenvalues. `omega` holds the (extrapolated) domain spectrum for V.
/// Throws ContractError naming the failed hypothesis.
ComparisonReport verify_theorem1(const DomainSpectrum& omega, const DomainPotential& v,
                                 const RadialPotential& v_tilde, const Theorem1Options& opt = {});

/// Solves the domain (Richardson on grid and grid.refined()) and calls the overload above.
ComparisonReport verify_theorem1(const DomainGrid& grid, const DomainPotential& v, const RadialPotential& v_tilde,
                                 const Theorem1Options& opt = {});

struct ScanRow {
    double R = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double ratio = 0.0;
    double eqlambda_margin = 0.0;  // lambda2 - (1 + 2/n) lambda1
    bool sector_warning = false;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    bool nonincreasing = true;
    double worst_rise = 0.0;
    bool eqlambda_holds = true;
    double min_margin = 0.0;  // min eqlambda margin relative to |lambda1|
};

inline constexpr double monotone_slack = 1e-8;

/// `steps` uniformly spaced radii in [r_min, r_max]; cells run on `jobs` threads.
ScanResult scan_ratio(int n, const RadialPotential& v, double r_min, double r_max, int steps, int jobs = 1,
                      double tol = default_eigen_tol);

struct SharpnessRow {
    double eps = 0.0;
    double R = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double margin = 0.0;
};

struct SharpnessResult {
    std::vector<SharpnessRow> rows;
    std::vector<SharpnessRow> violations;  // margin < -1e-8 |lambda1|
    std::vector<std::pair<double, double>> min_margin;  // (eps, min margin) per eps
};

/// V = r^(2 - eps) for each eps in [0, 1).
SharpnessResult sharpness_scan(int n, const std::vector<double>& epsilons, double r_min, double r_max, int steps,
                               int jobs = 1, double tol = default_eigen_tol);

/// The scaling argument for R1 < R2: rho(beta) solves
///   lambda1(B_rho, V) = lambda1(B_{R2/beta}, beta^2 V(beta r)),
/// beta0 solves rho(beta0) = R1 by bisection, then
///   lambda2(B_{R2/beta0}, beta0^2 V(beta0 r)) <= lambda2(B_R1, V)
/// and the ratio ordering lambda2/lambda1 at R1 >= at R2 follow.
struct ScalingChain {
    double R1 = 0.0;
    double R2 = 0.0;
    double beta0 = 0.0;
    double rho_beta0 = 0.0;
    double beta0_closed_form = 0.0;  // sqrt(lambda1(R1) / lambda1(R2))
    double lambda1_scaled = 0.0;     // lambda1(B_{R2/beta0}, beta0^2 V(beta0 r))
    double lambda2_scaled = 0.0;
    double lambda2_R1 = 0.0;
    double ratio_R1 = 0.0;
    double ratio_R2 = 0.0;
    double ratio_scaled = 0.0;       // equals ratio_R2 by scale invariance
    bool second_eigenvalue_bound = false;
    bool ratio_ordering = false;
};

ScalingChain scaling_chain(int n, const RadialPotential& v, double R1, double R2, double tol = 1e-9);

} // namespace ppw
