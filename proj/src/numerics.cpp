#include "ppw/numerics.hpp"

#include "ppw/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ppw {

std::vector<double> linspace(double a, double b, std::size_t m)
{
    std::vector<double> v(m);
    if (m == 1) {
        v[0] = a;
        return v;
    }
    for (std::size_t i = 0; i < m; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
    v.back() = b;
    return v;
}

double unit_ball_volume(int n)
{
    return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double simpson(std::span<const double> f, double h)
{
    const std::size_t m = f.size();
    if (m < 2)
        return 0.0;
    if (m == 2)
        return 0.5 * h * (f[0] + f[1]);
    if (m == 3)
        return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);

    std::size_t intervals = m - 1;
    std::size_t simpson_end = intervals;  // last index covered by plain Simpson
    double tail = 0.0;
    if (intervals % 2 == 1) {
        simpson_end = intervals - 3;
        const std::size_t j = simpson_end;
        tail = 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
    }
    double s = f[0] + f[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i)
        s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return h / 3.0 * s + tail;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, double h)
{
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

std::vector<double> differentiate(std::span<const double> f, double h)
{
    const std::size_t m = f.size();
    std::vector<double> d(m, 0.0);
    if (m < 5) {
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t a = i == 0 ? 0 : i - 1;
            const std::size_t b = i + 1 < m ? i + 1 : m - 1;
            d[i] = b > a ? (f[b] - f[a]) / (h * static_cast<double>(b - a)) : 0.0;
        }
        return d;
    }
    for (std::size_t i = 2; i + 2 < m; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    auto forward = [&](std::size_t i) {
        return (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4]) /
               (12.0 * h);
    };
    auto backward = [&](std::size_t i) {
        return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4]) /
               (12.0 * h);
    };
    d[0] = forward(0);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[m - 1] = backward(m - 1);
    d[m - 2] = (3.0 * f[m - 1] + 10.0 * f[m - 2] - 18.0 * f[m - 3] + 6.0 * f[m - 4] - f[m - 5]) /
               (12.0 * h);
    return d;
}

std::vector<double> differentiate2(std::span<const double> f, double h)
{
    const std::size_t m = f.size();
    std::vector<double> d(m, 0.0);
    if (m < 4)
        return d;
    const double h2 = h * h;
    for (std::size_t i = 2; i + 2 < m; ++i)
        d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h2);
    for (std::size_t i : {std::size_t{0}, std::size_t{1}})
        d[i] = (2.0 * f[i] - 5.0 * f[i + 1] + 4.0 * f[i + 2] - f[i + 3]) / h2;
    for (std::size_t i : {m - 1, m - 2})
        d[i] = (2.0 * f[i] - 5.0 * f[i - 1] + 4.0 * f[i - 2] - f[i - 3]) / h2;
    return d;
}

double brent(const std::function<double(double)>& f, double a, double b, double xtol, int max_iter)
{
    double fa = f(a), fb = f(b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if ((fa > 0) == (fb > 0))
        throw NumericError("brent: root not bracketed");
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0)
            return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0)
                q = -q;
            else
                p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
        fb = f(b);
    }
    throw NumericError("brent: iteration cap reached");
}

std::vector<double> least_squares(std::span<const double> x, std::span<const double> y,
                                  const std::vector<std::function<double(double)>>& basis)
{
    const auto rows = static_cast<Eigen::Index>(x.size());
    const auto cols = static_cast<Eigen::Index>(basis.size());
    if (rows < cols)
        throw ContractError("least_squares: fewer samples than basis functions");
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k)
            a(i, k) = basis[static_cast<std::size_t>(k)](x[static_cast<std::size_t>(i)]);
        b(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

double hermite(double x0, double x1, double f0, double f1, double d0, double d1, double x)
{
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
           (t3 - t2) * h * d1;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y))
{
    const std::size_t m = x_.size();
    if (m < 2 || y_.size() != m)
        throw ContractError("MonotoneCubic: need at least two matching samples");
    for (std::size_t i = 1; i < m; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw ContractError("MonotoneCubic: abscissae must be strictly increasing");

    std::vector<double> delta(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
        delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

    slope_.assign(m, 0.0);
    if (m == 2) {
        slope_[0] = slope_[1] = delta[0];
        return;
    }
    // Fritsch-Butland harmonic-mean slopes in the interior.
    for (std::size_t i = 1; i + 1 < m; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0)
            continue;
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        const double w0 = 2 * h1 + h0, w1 = h1 + 2 * h0;
        slope_[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0)
            s = 0;
        else if (d0 * d1 <= 0 && std::abs(s) > std::abs(3 * d0))
            s = 3 * d0;
        return s;
    };
    slope_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], delta[0], delta[1]);
    slope_[m - 1] = end_slope(x_[m - 1] - x_[m - 2], x_[m - 2] - x_[m - 3], delta[m - 2], delta[m - 3]);
}

MonotoneCubic::Sample MonotoneCubic::operator()(double x) const
{
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double f0 = y_[i], f1 = y_[i + 1], d0 = slope_[i], d1 = slope_[i + 1];
    const double t2 = t * t, t3 = t2 * t;
    Sample s{};
    s.value = (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
              (t3 - t2) * h * d1;
    s.d1 = ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * f1 +
            (3 * t2 - 2 * t) * h * d1) /
           h;
    s.d2 = ((12 * t - 6) * f0 + (6 * t - 4) * h * d0 + (-12 * t + 6) * f1 + (6 * t - 2) * h * d1) /
           (h * h);
    return s;
}

} // namespace ppw
