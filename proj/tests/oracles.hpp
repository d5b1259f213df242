#pragma once

// Reference values computed independently of the library: Bessel zeros from
// the C++17 special-math functions and plain quadrature helpers.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double a, double b)
{
    double fa = f(a);
    for (int i = 0; i < 200 && b - a > 1e-15 * b; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// k-th positive zero of J_nu by a fine sign-change scan of std::cyl_bessel_j.
inline double bessel_zero(double nu, int k)
{
    auto f = [nu](double x) { return std::cyl_bessel_j(nu, x); };
    int found = 0;
    const double step = 1e-3;
    double x = 1e-3, fx = f(x);
    while (true) {
        const double y = x + step, fy = f(y);
        if ((fx > 0) != (fy > 0) && ++found == k)
            return bisect(f, x, y);
        x = y;
        fx = fy;
    }
}

/// Trapezoid rule on samples.
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& f)
{
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

} // namespace oracle
