#pragma once

// Small numerical kernels shared by the solvers: uniform-grid quadrature and
// differentiation, bracketing root finding, monotone interpolation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ppw {

inline constexpr double pi = 3.14159265358979323846264338327950288;

std::vector<double> linspace(double a, double b, std::size_t m);

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Composite Simpson rule on uniformly spaced samples. An odd number of
/// intervals is closed with the 3/8 rule on the last three.
double simpson(std::span<const double> f, double h);

/// Running integral F_i = int_{x_0}^{x_i} f by the trapezoid rule.
std::vector<double> cumulative_trapezoid(std::span<const double> f, double h);

/// First derivative of uniformly sampled data, fourth order everywhere
/// (centered in the interior, one-sided five-point stencils at the ends).
std::vector<double> differentiate(std::span<const double> f, double h);

/// Second derivative of uniformly sampled data, fourth order in the interior
/// and second order one-sided at the two outermost points on each side.
std::vector<double> differentiate2(std::span<const double> f, double h);

/// Brent's method on [a, b]; f(a) and f(b) must have opposite signs.
double brent(const std::function<double(double)>& f, double a, double b, double xtol,
             int max_iter = 200);

/// Least-squares coefficients c for sum_k c_k * basis_k(x) ~ y.
std::vector<double> least_squares(std::span<const double> x, std::span<const double> y,
                                  const std::vector<std::function<double(double)>>& basis);

/// Cubic Hermite value at x from samples (x0, f0, d0), (x1, f1, d1).
double hermite(double x0, double x1, double f0, double f1, double d0, double d1, double x);

/// Monotone piecewise cubic (Fritsch-Carlson) interpolant.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    struct Sample {
        double value;
        double d1;
        double d2;
    };

    Sample operator()(double x) const;
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, slope_;
};

} // namespace ppw
