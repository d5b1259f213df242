#pragma once

// Radial Dirichlet eigenproblems on balls B_R in R^n,
//   -z'' - ((n-1)/r + 2 sigma r) z' + (V + l(l+n-2)/r^2) z = lambda z,
// with sigma = 0 (flat) or +-1 (density e^{+-r^2}), solved by shooting with
// Sturm node counting.

#include "ppw/potentials.hpp"

#include <cstddef>
#include <vector>

namespace ppw {

enum class WeightSign { none, plus, minus };

int weight_sigma(WeightSign w);
const char* to_string(WeightSign w);

struct BallProblem {
    int n = 2;
    double R = 1.0;
    int ell = 0;
    RadialPotential potential = RadialPotential::zero();
    WeightSign weight = WeightSign::none;
};

struct EigenPair {
    int n = 2;
    double R = 1.0;
    int ell = 0;
    int k = 1;
    WeightSign weight = WeightSign::none;
    double lambda = 0.0;
    std::vector<double> r;   // uniform grid on [0, R]
    std::vector<double> z;   // normalized: n C_n int z^2 r^{n-1} w dr = 1
    std::vector<double> dz;  // z'(r)
    int node_count = 0;
    double residual = 0.0;

    double spacing() const { return r[1] - r[0]; }
    /// Cubic Hermite interpolation of z; zero for r >= R.
    double value_at(double r) const;
    double derivative_at(double r) const;
};

inline constexpr double default_eigen_tol = 1e-10;
inline constexpr std::size_t default_radial_samples = 2048;

/// k-th eigenpair (k = 1, 2, ...) of angular sector `ell`.
EigenPair solve_sector(const BallProblem& prob, int k, double tol = default_eigen_tol,
                       std::size_t samples = default_radial_samples);

struct FirstTwo {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    EigenPair z1;
    EigenPair z2;
    bool rV_convex = true;
    /// Set when r V is not convex; lambda2 is then min over (l=1,k=1) and (l=0,k=2).
    bool sector_warning = false;
};

FirstTwo first_two(int n, double R, const RadialPotential& potential, double tol = default_eigen_tol,
                   WeightSign weight = WeightSign::none, std::size_t samples = default_radial_samples);

/// Max over interior samples of the finite-difference ODE defect, scaled by
/// max|z| * max(1, |lambda|).
double ode_residual(const EigenPair& pair, const BallProblem& prob);

/// Number of sign changes of the interior samples, ignoring |z| below 1e-9 max|z|.
int count_nodes(const std::vector<double>& z);

} // namespace ppw
