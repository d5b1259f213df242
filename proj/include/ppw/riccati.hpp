#pragma once

// Internal objects of the monotonicity argument for g = z2 / z1 on a ball:
// the Riccati variable q = r g'/g, p = z1'/z1, T(r, y), Z_y(r) and the
// sector constants N_y, M_y, Q_y, plus the elementary fraction inequality
// used for the Gaussian monotonicity result.

#include "ppw/potentials.hpp"
#include "ppw/radial_solver.hpp"

#include <vector>

namespace ppw {

struct RiccatiFacts {
    bool q_in_01 = false;       // -1e-6 <= q <= 1 + 1e-6
    bool q_decreasing = false;  // q' <= 1e-6
    bool B_decreasing = false;
    bool g_increasing = false;
    double q_min = 0.0, q_max = 0.0, dq_max = 0.0;
    double worst_g_drop = 0.0;  // largest decrease of g between neighbours (0 if none)
    double worst_B_rise = 0.0;  // largest increase of B between neighbours (0 if none)
};

struct RiccatiDiagnostics {
    int n = 2;
    double R = 1.0;
    double lambda1 = 0.0, lambda2 = 0.0, E = 0.0;
    int nu = 0;
    RadialPotential potential = RadialPotential::zero();

    // Samples on the solver grid; g and B carry their limits at r = 0 and
    // r = R, q and p are meaningful on the open interval only (indices 1..m-2).
    std::vector<double> r, g, dg, B, q, dq, p, dp;

    double q0 = 0.0;        // q(0+) from a fit in r^2 near the origin
    double qR = 0.0;        // q(R-) from a fit near the boundary
    double q2_numeric = 0.0;  // q''(0) from the same near-origin fit
    double g_limit = 0.0;   // z2'(R) / z1'(R)
    double residual_ric_q = 0.0;
    double residual_ric_p = 0.0;
    double residual_T_identity = 0.0;  // max |T(r, q(r)) - q'(r)| / scale
    double window_lo = 0.0, window_hi = 0.0;
    RiccatiFacts facts;

    /// g on [0, inf): interpolated inside, constant g(R) beyond.
    double g_at(double x) const;
    /// B on (0, inf): interpolated inside, g(R)^2 (n-1) / x^2 beyond.
    double B_at(double x) const;
};

/// Requires z1 > 0 on (0, R); both pairs on the same ball and grid.
RiccatiDiagnostics diagnostics(const EigenPair& z1, const EigenPair& z2, const RadialPotential& v_tilde);

struct QSecondDerivative {
    double closed_form = 0.0;  // 2/(n+2) ((1+2/n) lambda1 - lambda2)
    double two_over_n_form = 0.0;   // 2/n ((1+2/n) lambda1 - lambda2)
    double q1_form = 0.0;      // (2/n^2) Q_1
    double numeric = 0.0;
    bool agree = false;              // |numeric - closed_form| <= 5e-2 |closed_form|
    double identity_gap = 0.0;       // |two_over_n_form - q1_form|
};

QSecondDerivative q_second_derivative_check(int n, double lambda1, double lambda2, const RiccatiDiagnostics& diag);

struct SectorConstants {
    double y = 0.0;
    int n = 2;
    double N = 0.0, M = 0.0, Q = 0.0;
    int nu = 0;
    double identity_residual = 0.0;  // |y M - (y^2-1)/2 [(y-1)-(n-2)] [(y+1)+(n-2)]|
};

SectorConstants sector_constants(int n, double y, double lambda1, double lambda2);

struct TZeroCheck {
    double r = 0.0;
    double dT_fd = 0.0;
    double Z = 0.0;
    double relative_gap = 0.0;
};

struct TZReport {
    double y = 0.0;
    std::vector<double> r, T, Z;
    std::vector<TZeroCheck> zeros;
    bool zeros_consistent = true;   // every relative_gap <= tolerance
    double tolerance = 1e-3;
    double T_near_origin = 0.0;     // T(1e-3 R, y)
    double T_near_boundary = 0.0;   // T(R (1 - 1e-4), y)
    double Z_near_origin = 0.0;     // Z_y(1e-3 R)
};

/// T(r, y) = -2 p y - (nu y + N_y)/r - E r and
/// Z_y(r) = M_y/r^2 + E^2 r^2/(2y) + Q_y - 2 y V~ on 4096 points, with the
/// identity dT/dr = Z_y checked by central differences at each zero of T.
TZReport T_and_Z(const EigenPair& z1, const RiccatiDiagnostics& diag, double y, double tolerance = 1e-3);

struct Lemma3Result {
    double lhs = 0.0;
    double rhs = 0.0;
    double x0 = 0.0;
    bool holds = false;       // lhs < rhs
    bool x0_negative = false;
};

/// (a+x)/(b+x) < (c+x)/(d+x) for a >= b, d >= b, a/b < c/d; x0 is the zero
/// of (c+x)(b+x) - (a+x)(d+x).
Lemma3Result lemma3(double a, double b, double c, double d, double x);

struct Lemma3Sweep {
    long samples = 0;
    long failures = 0;
    long nonnegative_x0 = 0;
};

/// Random admissible quadruples and x in (0, 100] from a fixed-seed generator.
Lemma3Sweep lemma3_sweep(long samples, unsigned long long seed);

} // namespace ppw
