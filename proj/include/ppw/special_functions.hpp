#pragma once

// Bessel functions of the first kind and their positive zeros.

namespace ppw {

struct BesselZero {
    double nu;
    int k;
    double value;
    double residual;  // |J_nu(value)|
};

/// J_nu(x) for nu >= 0 and 0 <= x <= 200.
double bessel_j(double nu, double x);

/// d/dx J_nu(x).
double bessel_j_derivative(double nu, double x);

/// k-th positive zero of J_nu, 1 <= k <= 20, 0 <= nu <= 50.
BesselZero bessel_zero(double nu, int k);

/// j_{n/2,1}^2 / j_{n/2-1,1}^2, the ball value of lambda_2 / lambda_1 for V = 0.
double ppw_constant(int n);

} // namespace ppw
