#include "ppw/special_functions.hpp"

#include "ppw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace ppw {

namespace {

constexpr double series_limit = 10.0;
constexpr double max_argument = 200.0;

double series(double nu, double x)
{
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
    }
    return sum * std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
}

// Miller backward recurrence on orders mu + m, normalized by
// (x/2)^mu = sum_j (mu + 2j) Gamma(mu + j) / j! J_{mu+2j}(x).
double miller(double nu, double x)
{
    const int order = static_cast<int>(std::floor(nu));
    const double mu = nu - order;
    const double top = std::max(static_cast<double>(order), x);
    int start = static_cast<int>(top + std::sqrt(160.0 * top)) + 20;
    start += start % 2;

    double next = 0.0, cur = 1e-300, wanted = 0.0;
    std::vector<double> even(static_cast<std::size_t>(start / 2 + 1), 0.0);
    for (int m = start; m >= 1; --m) {
        const double prev = 2.0 * (mu + m) / x * cur - next;
        next = cur;
        cur = prev;  // J_{mu + m - 1}
        if (m - 1 == order)
            wanted = cur;
        if ((m - 1) % 2 == 0)
            even[static_cast<std::size_t>((m - 1) / 2)] = cur;
        if (std::abs(cur) > 1e250) {
            next *= 1e-250;
            cur *= 1e-250;
            wanted *= 1e-250;
            for (double& e : even)
                e *= 1e-250;
        }
    }
    double g = std::tgamma(mu + 1.0);  // Gamma(mu + j) / j! at j = 1
    double norm = g * even[0];
    for (std::size_t j = 1; j < even.size(); ++j) {
        norm += (mu + 2.0 * static_cast<double>(j)) * g * even[j];
        g *= (mu + static_cast<double>(j)) / static_cast<double>(j + 1);
    }
    return wanted * std::pow(0.5 * x, mu) / norm;
}

} // namespace

double bessel_j(double nu, double x)
{
    if (!(nu >= 0.0) || !(x >= 0.0))
        throw RangeError("bessel_j: nu and x must be nonnegative");
    if (x > max_argument)
        throw RangeError("bessel_j: x beyond 200");
    if (x == 0.0)
        return nu == 0.0 ? 1.0 : 0.0;
    if (x <= series_limit || nu > x + 20.0)
        return series(nu, x);
    return miller(nu, x);
}

double bessel_j_derivative(double nu, double x)
{
    if (x == 0.0) {
        if (nu == 1.0)
            return 0.5;
        return nu == 0.0 || nu > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return nu / x * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

BesselZero bessel_zero(double nu, int k)
{
    if (!(nu >= 0.0) || nu > 50.0 || k < 1 || k > 20)
        throw RangeError("bessel_zero: need 0 <= nu <= 50 and 1 <= k <= 20");
    const double step = 0.5;
    double a = std::max(nu, 0.25);
    double fa = bessel_j(nu, a);
    int found = 0;
    while (a + step <= max_argument) {
        const double b = a + step;
        const double fb = bessel_j(nu, b);
        if (fa == 0.0 || (fa > 0.0) != (fb > 0.0)) {
            if (++found == k) {
                double lo = a, hi = b, flo = fa;
                for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = bessel_j(nu, mid);
                    if ((fm > 0.0) == (flo > 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                double x = 0.5 * (lo + hi);
                for (int it = 0; it < 20; ++it) {
                    const double dx = bessel_j(nu, x) / bessel_j_derivative(nu, x);
                    x -= dx;
                    if (std::abs(dx) < 1e-15 * x)
                        break;
                }
                return {nu, k, x, std::abs(bessel_j(nu, x))};
            }
        }
        a = b;
        fa = fb;
    }
    throw NumericError("bessel_zero: zero " + std::to_string(k) + " of J_" + std::to_string(nu) +
                       " not bracketed on (0, 200]");
}

double ppw_constant(int n)
{
    if (n < 2 || n > 20)
        throw ContractError("ppw_constant: dimension must lie in [2, 20]");
    const double num = bessel_zero(0.5 * n, 1).value;
    const double den = bessel_zero(0.5 * n - 1.0, 1).value;
    return num * num / (den * den);
}

} // namespace ppw
