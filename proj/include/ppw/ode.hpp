#pragma once

// Dormand-Prince 5(4) integrator for small fixed-size systems, with exact
// landing on caller-supplied output abscissae.

#include "ppw/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace ppw {

template <std::size_t N>
using OdeState = std::array<double, N>;

struct OdeOptions {
    double rtol = 1e-10;
    double initial_step = 1e-3;
    double max_step = 1.0 / 256.0;
    double min_step = 1e-14;
    long max_steps = 2'000'000;
};

/// Integrate y' = f(x, y) from x0 to x1 (either direction). `stops` lists
/// abscissae, ordered along the direction of travel, that must be hit
/// exactly. After every accepted step `observe(x, y, stop_index)` is called
/// with stop_index = -1 unless x is a stop; its return value rescales y
/// (return 1.0 to leave it alone), which is valid for linear systems only.
/// Errors are measured against rtol times the running peak of each component.
template <std::size_t N, class Rhs, class Observer>
OdeState<N> dopri5(Rhs&& f, double x0, double x1, OdeState<N> y, std::span<const double> stops,
                   const OdeOptions& opt, Observer&& observe)
{
    using S = OdeState<N>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double dir = x1 >= x0 ? 1.0 : -1.0;
    double x = x0;
    double h = std::min(std::abs(opt.initial_step), opt.max_step);
    std::size_t next_stop = 0;
    while (next_stop < stops.size() && dir * (stops[next_stop] - x) <= 0.0) {
        if (stops[next_stop] == x) {
            const double scale = observe(x, y, static_cast<long>(next_stop));
            for (auto& v : y)
                v *= scale;
        }
        ++next_stop;
    }

    S peak{};
    for (std::size_t i = 0; i < N; ++i)
        peak[i] = std::abs(y[i]);

    S k1 = f(x, y), k2, k3, k4, k5, k6, k7, tmp, ynew;
    long steps = 0;
    while (dir * (x1 - x) > 0.0) {
        if (++steps > opt.max_steps)
            throw NumericError("dopri5: step budget exhausted");
        double target = x1;
        bool lands = false;
        if (next_stop < stops.size() && dir * (stops[next_stop] - x1) < 0.0)
            target = stops[next_stop];
        double step = std::min(h, opt.max_step);
        if (step >= std::abs(target - x) * (1.0 - 1e-12)) {
            step = std::abs(target - x);
            lands = true;
        }
        const double hs = dir * step;

        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * a21 * k1[i];
        k2 = f(x + c2 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(x + c3 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(x + c4 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(x + c5 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = f(x + hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = f(x + hs, ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e =
                hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt.rtol * std::max({std::abs(y[i]), std::abs(ynew[i]), peak[i], 1e-300});
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err))
            err = 1e10;

        if (err <= 1.0) {
            x = lands ? target : x + hs;
            y = ynew;
            k1 = k7;
            for (std::size_t i = 0; i < N; ++i)
                peak[i] = std::max(peak[i], std::abs(y[i]));
            long stop_index = -1;
            if (lands && next_stop < stops.size() && stops[next_stop] == x)
                stop_index = static_cast<long>(next_stop++);
            const double scale = observe(x, y, stop_index);
            if (scale != 1.0) {
                for (std::size_t i = 0; i < N; ++i) {
                    y[i] *= scale;
                    k1[i] *= scale;
                    peak[i] *= scale;
                }
            }
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = step * (err <= 1.0 ? factor : std::min(factor, 1.0));
        if (h < opt.min_step * std::max(1.0, std::abs(x)))
            throw NumericError("dopri5: step size underflow (stiff or singular right-hand side)");
    }
    return y;
}

} // namespace ppw
