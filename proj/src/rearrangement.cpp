#include "ppw/rearrangement.hpp"

#include "ppw/errors.hpp"
#include "ppw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace ppw {

double unit_ball_measure(int n)
{
    return unit_ball_volume(n);
}

RadialProfile::RadialProfile(int n, std::vector<double> radii, std::vector<double> values,
                             std::vector<double> measures, Monotone direction)
    : n_(n), radii_(std::move(radii)), values_(std::move(values)), measures_(std::move(measures)),
      direction_(direction), cn_(ppw::unit_ball_measure(n)), total_(0.0)
{
    if (n < 1)
        throw ContractError("RadialProfile: dimension must be positive");
    if (radii_.empty() || radii_.size() != values_.size() || radii_.size() != measures_.size())
        throw ContractError("RadialProfile: radii, values and measures must be nonempty and equally long");
    for (std::size_t i = 1; i < radii_.size(); ++i)
        if (radii_[i] < radii_[i - 1])
            throw ContractError("RadialProfile: radii must be nondecreasing");
    for (double m : measures_)
        total_ += m;
}

RadialProfile RadialProfile::from_samples(int n, std::vector<double> radii, std::vector<double> values,
                                          Monotone direction)
{
    const double cn = ppw::unit_ball_measure(n);
    std::vector<double> measures(radii.size());
    double inner = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double outer = i + 1 < radii.size() ? 0.5 * (radii[i] + radii[i + 1]) : radii[i];
        measures[i] = cn * (std::pow(outer, n) - std::pow(inner, n));
        inner = outer;
    }
    return RadialProfile(n, std::move(radii), std::move(values), std::move(measures), direction);
}

double RadialProfile::outer_radius() const
{
    return std::pow(total_ / cn_, 1.0 / n_);
}

double RadialProfile::value_at(double r) const
{
    if (r <= radii_.front())
        return values_.front();
    if (r >= radii_.back()) {
        if (direction_ == Monotone::decreasing && r > outer_radius())
            return 0.0;
        return values_.back();
    }
    const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - radii_.begin());
    const double r0 = radii_[i - 1], r1 = radii_[i];
    if (r1 == r0)
        return values_[i];
    const double t = (r - r0) / (r1 - r0);
    return (1.0 - t) * values_[i - 1] + t * values_[i];
}

double RadialProfile::norm(double p) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += std::pow(std::abs(values_[i]), p) * measures_[i];
    return std::pow(s, 1.0 / p);
}

double RadialProfile::level_measure(double t) const
{
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] > t)
            m += measures_[i];
    return m;
}

RadialProfile rearrange(std::span<const double> values, double cell_measure, int n, Monotone direction)
{
    if (values.empty())
        throw ContractError("rearrange: no samples");
    if (!(cell_measure > 0.0))
        throw ContractError("rearrange: cell measure must be positive");
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted) {
        if (!std::isfinite(v))
            throw ContractError("rearrange: non-finite sample");
        if (direction == Monotone::increasing && v < 0.0)
            throw ContractError("rearrange: increasing rearrangement needs nonnegative samples");
    }
    if (direction == Monotone::increasing)
        std::sort(sorted.begin(), sorted.end());
    else
        std::sort(sorted.begin(), sorted.end(), std::greater<>());

    const double cn = unit_ball_measure(n);
    std::vector<double> radii(sorted.size()), measures(sorted.size(), cell_measure);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double s = (static_cast<double>(i) + 0.5) * cell_measure;
        radii[i] = std::pow(s / cn, 1.0 / n);
    }
    return RadialProfile(n, std::move(radii), std::move(sorted), std::move(measures), direction);
}

SharpSamples sharp_transform(const RadialProfile& profile)
{
    SharpSamples out;
    out.s.reserve(profile.radii().size());
    for (double r : profile.radii())
        out.s.push_back(profile.unit_ball_measure() * std::pow(r, profile.dim()));
    out.values = profile.values();
    return out;
}

std::vector<double> unsharp_radii(const SharpSamples& sharp, int n)
{
    const double cn = unit_ball_measure(n);
    std::vector<double> r;
    r.reserve(sharp.s.size());
    for (double s : sharp.s)
        r.push_back(std::pow(s / cn, 1.0 / n));
    return r;
}

ChitiReport chiti_crossings(const RadialProfile& u1_star, const EigenPair& z1, double band, double window)
{
    ChitiReport rep;
    const auto& vals = u1_star.values();
    const auto& mu = u1_star.measures();
    const auto& radii = u1_star.radii();
    const int n = u1_star.dim();
    const std::size_t m = vals.size();
    double peak = 0.0, total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        peak = std::max(peak, std::abs(vals[i]));
        total += mu[i];
    }
    rep.band = band > 0.0 ? band : 1e-4 * peak;
    rep.window = window > 0.0 ? window : std::pow(total / static_cast<double>(m), 1.0 / n);

    // prefix sums of measure, u1_star mass and z1 mass over the sorted samples
    std::vector<double> cm(m + 1, 0.0), cu(m + 1, 0.0), cz(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        cm[i + 1] = cm[i] + mu[i];
        cu[i + 1] = cu[i] + mu[i] * vals[i];
        cz[i + 1] = cz[i] + mu[i] * z1.value_at(radii[i]);
    }

    int sign = 0;
    double last_r = 0.0;
    bool in_band_since_last = false;
    const double outer = radii.back();
    for (double r = rep.window; r <= outer; r += rep.window) {
        const auto lo = static_cast<std::size_t>(
            std::lower_bound(radii.begin(), radii.end(), r - rep.window) - radii.begin());
        const auto hi = static_cast<std::size_t>(
            std::upper_bound(radii.begin(), radii.end(), r + rep.window) - radii.begin());
        if (hi <= lo)
            continue;
        const double measure = cm[hi] - cm[lo];
        const double d = (cu[hi] - cu[lo] - (cz[hi] - cz[lo])) / measure;

        rep.max_abs_difference = std::max(rep.max_abs_difference, std::abs(d));
        if (std::abs(d) < rep.band) {
            if (sign != 0)
                in_band_since_last = true;
            continue;
        }
        const int sg = d > 0 ? 1 : -1;
        if (sign != 0 && sg != sign) {
            ++rep.count;
            rep.r0 = 0.5 * (last_r + r);
        } else if (sign != 0 && in_band_since_last) {
            ++rep.tangencies;
        }
        sign = sg;
        last_r = r;
        in_band_since_last = false;
    }
    if (rep.count != 1)
        rep.r0.reset();
    return rep;
}

double factde_residual(const EigenPair& z1, const RadialPotential& v_tilde, double lambda1)
{
    const int n = z1.n;
    const double cn = unit_ball_measure(n);
    const double smax = cn * std::pow(z1.R, n);
    const std::size_t m = 4096;
    const double ds = smax / static_cast<double>(m - 1);
    auto radius = [&](double s) { return std::pow(s / cn, 1.0 / n); };
    // integrate in r, where the integrand stays smooth at the origin for every n
    auto integrand = [&](double r) {
        return (lambda1 - v_tilde(r)) * z1.value_at(r) * n * cn * std::pow(r, n - 1);
    };
    const double k = 1.0 / (n * n * std::pow(cn, 2.0 / n));

    double cumulative = 0.0, worst = 0.0, scale = 0.0;
    std::vector<double> lhs(m, 0.0), rhs(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        const double a = ds * static_cast<double>(i - 1), b = ds * static_cast<double>(i);
        const double ra = radius(a), rb = radius(b);
        // 4-point Gauss-Legendre per interval
        static constexpr double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                         0.8611363115940526};
        static constexpr double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                         0.3478548451374538};
        const double mid = 0.5 * (ra + rb), half = 0.5 * (rb - ra);
        for (int q = 0; q < 4; ++q)
            cumulative += half * gw[q] * integrand(mid + half * gx[q]);
        if (i == m - 1)
            break;
        const double r = radius(b);
        // dz^#/ds = z'(r) / (n C_n r^{n-1})
        lhs[i] = -z1.derivative_at(r) / (n * cn * std::pow(r, n - 1));
        rhs[i] = k * std::pow(b, 2.0 / n - 2.0) * cumulative;
        scale = std::max(scale, std::abs(lhs[i]));
    }
    for (std::size_t i = 1; i + 1 < m; ++i)
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst / std::max(scale, 1e-300);
}

Fact1Report check_fact1(const RadialProfile& u1_star, const RadialPotential& v_tilde, double lambda1, double slack,
                        int bins)
{
    const int n = u1_star.dim();
    const double cn = u1_star.unit_ball_measure();
    const double k = 1.0 / (n * n * std::pow(cn, 2.0 / n));
    const auto& vals = u1_star.values();
    const auto& mu = u1_star.measures();
    const std::size_t m = vals.size();

    // s at sample centres, cumulative integral I(s) up to each centre and the
    // pointwise bound b(s) = k s^{2/n-2} I(s).
    std::vector<double> s(m), bound(m);
    double acc_measure = 0.0, acc_int = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        s[i] = acc_measure + 0.5 * mu[i];
        const double f = (lambda1 - v_tilde(u1_star.radii()[i])) * vals[i];
        const double at_centre = acc_int + 0.5 * mu[i] * f;
        bound[i] = k * std::pow(s[i], 2.0 / n - 2.0) * at_centre;
        acc_measure += mu[i];
        acc_int += mu[i] * f;
    }
    // running integral of the bound over s
    std::vector<double> bound_int(m, 0.0);
    bound_int[0] = bound[0] * s[0];
    for (std::size_t i = 1; i < m; ++i)
        bound_int[i] = bound_int[i - 1] + 0.5 * (bound[i] + bound[i - 1]) * (s[i] - s[i - 1]);

    Fact1Report rep;
    rep.slack = slack;
    rep.bins = bins;
    const double top = std::max(std::abs(vals.front()), 1e-300);
    double worst = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < bins; ++b) {
        const auto ia = static_cast<std::size_t>(static_cast<double>(b) * static_cast<double>(m - 1) / bins);
        const auto ib = static_cast<std::size_t>(static_cast<double>(b + 1) * static_cast<double>(m - 1) / bins);
        if (ib <= ia)
            continue;
        const double drop = vals[ia] - vals[ib];
        const double allowed = bound_int[ib] - bound_int[ia];
        worst = std::max(worst, (drop - allowed) / top);
    }
    rep.worst_excess = worst;
    rep.holds = worst <= slack;
    return rep;
}

} // namespace ppw
