#include "ppw/potentials.hpp"

#include "ppw/errors.hpp"
#include "ppw/rearrangement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ppw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_double(std::string_view text, std::string_view what)
{
    std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw ContractError("potential spec: cannot parse " + std::string(what) + " from '" + s + "'");
    return v;
}

std::vector<std::pair<std::string, double>> parse_keyvals(std::string_view body)
{
    std::vector<std::pair<std::string, double>> out;
    while (!body.empty()) {
        const auto comma = body.find(',');
        const std::string_view item = body.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw ContractError("potential spec: expected key=value, got '" + std::string(item) + "'");
        out.emplace_back(std::string(item.substr(0, eq)), parse_double(item.substr(eq + 1), item.substr(0, eq)));
        if (comma == std::string_view::npos)
            break;
        body.remove_prefix(comma + 1);
    }
    return out;
}

PotentialSample eval_power(const RadialPotential::Power& p, double r)
{
    if (r == 0.0) {
        const double d1 = p.alpha == 1.0 ? p.k : 0.0;
        double d2 = 0.0;
        if (p.alpha == 2.0)
            d2 = 2.0 * p.k;
        else if (p.alpha > 1.0 && p.alpha < 2.0)
            d2 = std::numeric_limits<double>::infinity();
        return {0.0, d1, d2};
    }
    const double v = p.k * std::pow(r, p.alpha);
    const double d1 = p.k * p.alpha * std::pow(r, p.alpha - 1.0);
    const double d2 = p.alpha == 1.0 ? 0.0 : p.k * p.alpha * (p.alpha - 1.0) * std::pow(r, p.alpha - 2.0);
    return {v, d1, d2};
}

PotentialSample eval_polynomial(const RadialPotential::Polynomial& p, double r)
{
    double v = 0, d1 = 0, d2 = 0;
    for (std::size_t i = 0; i < p.even_coefficients.size(); ++i) {
        const double c = p.even_coefficients[i];
        const double e = 2.0 * static_cast<double>(i + 1);
        v += c * std::pow(r, e);
        d1 += c * e * std::pow(r, e - 1.0);
        d2 += c * e * (e - 1.0) * std::pow(r, e - 2.0);
    }
    return {v, d1, d2};
}

} // namespace

RadialPotential RadialPotential::zero()
{
    return RadialPotential(Zero{});
}

RadialPotential RadialPotential::power(double k, double alpha)
{
    if (!(k > 0.0) || !std::isfinite(k))
        throw ContractError("power potential: k must be positive");
    if (!(alpha >= 1.0) || !std::isfinite(alpha))
        throw ContractError("power potential: alpha must be >= 1");
    return RadialPotential(Power{k, alpha});
}

RadialPotential RadialPotential::polynomial(std::vector<double> c)
{
    for (double v : c)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ContractError("polynomial potential: coefficients must be finite and nonnegative");
    return RadialPotential(Polynomial{std::move(c)});
}

RadialPotential RadialPotential::table(std::vector<double> radii, std::vector<double> values)
{
    if (radii.size() < 2 || radii.size() != values.size())
        throw ContractError("table potential: need at least two (r, value) rows");
    if (radii.front() != 0.0)
        throw ContractError("table potential: radii must start at 0");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw ContractError("table potential: radii must be strictly increasing");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ContractError("table potential: values must be finite and nonnegative");
    MonotoneCubic interp(radii, values);
    return RadialPotential(Table{std::move(radii), std::move(values), std::move(interp)});
}

RadialPotential RadialPotential::read_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ContractError("table potential: cannot open '" + path + "'");
    std::vector<double> r, v;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a))
            continue;
        if (!(ls >> b))
            throw ContractError("table potential: malformed row '" + line + "'");
        r.push_back(a);
        v.push_back(b);
    }
    return table(std::move(r), std::move(v));
}

RadialPotential RadialPotential::parse(std::string_view spec)
{
    if (spec == "zero")
        return zero();
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ContractError("potential spec: unknown '" + std::string(spec) + "'");
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view body = spec.substr(colon + 1);
    if (kind == "table")
        return read_table(std::string(body));
    const auto kv = parse_keyvals(body);
    if (kind == "power") {
        std::optional<double> k, alpha;
        for (const auto& [key, val] : kv) {
            if (key == "k")
                k = val;
            else if (key == "alpha")
                alpha = val;
            else
                throw ContractError("power potential: unknown key '" + key + "'");
        }
        if (!k || !alpha)
            throw ContractError("power potential: both k and alpha are required");
        return power(*k, *alpha);
    }
    if (kind == "poly") {
        std::vector<double> c;
        for (const auto& [key, val] : kv) {
            int degree = 0;
            if (key.size() < 2 || key[0] != 'c' ||
                std::from_chars(key.data() + 1, key.data() + key.size(), degree).ec != std::errc{} ||
                degree < 2 || degree % 2 != 0)
                throw ContractError("poly potential: keys must be c2, c4, ...; got '" + key + "'");
            const auto idx = static_cast<std::size_t>(degree / 2 - 1);
            if (c.size() <= idx)
                c.resize(idx + 1, 0.0);
            c[idx] = val;
        }
        if (c.empty())
            throw ContractError("poly potential: no coefficients");
        return polynomial(std::move(c));
    }
    throw ContractError("potential spec: unknown family '" + std::string(kind) + "'");
}

PotentialSample RadialPotential::eval(double r) const
{
    if (!(r >= 0.0))
        throw RangeError("potential: radius must be nonnegative");
    const double x = inner_ * r;
    const PotentialSample s = std::visit(
        overloaded{
            [](const Zero&) { return PotentialSample{0.0, 0.0, 0.0}; },
            [x](const Power& p) { return eval_power(p, x); },
            [x](const Polynomial& p) { return eval_polynomial(p, x); },
            [x](const Table& t) {
                if (x > t.radii.back() * (1.0 + 1e-12))
                    throw RangeError("table potential: r beyond last tabulated radius");
                const auto v = t.interpolant(std::min(x, t.radii.back()));
                return PotentialSample{v.value, v.d1, v.d2};
            },
        },
        family_);
    // 0 * inf stays 0 for the zero potential scaled by anything
    return {outer_ * s.value, outer_ * inner_ * s.d1, outer_ * inner_ * inner_ * s.d2};
}

RadialPotential RadialPotential::rescaled(double beta) const
{
    if (!(beta > 0.0))
        throw ContractError("rescaled: beta must be positive");
    RadialPotential out = *this;
    out.outer_ *= beta * beta;
    out.inner_ *= beta;
    return out;
}

std::optional<std::pair<std::vector<double>, std::vector<double>>> RadialPotential::knots() const
{
    const auto* t = std::get_if<Table>(&family_);
    if (!t)
        return std::nullopt;
    std::vector<double> r(t->radii.size()), v(t->values.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = t->radii[i] / inner_;
        v[i] = outer_ * t->values[i];
    }
    return std::pair{std::move(r), std::move(v)};
}

std::optional<double> RadialPotential::max_radius() const
{
    if (const auto* t = std::get_if<Table>(&family_))
        return t->radii.back() / inner_;
    return std::nullopt;
}

bool RadialPotential::is_zero() const
{
    return std::holds_alternative<Zero>(family_);
}

std::string RadialPotential::describe() const
{
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const Zero&) { os << "zero"; },
                   [&](const Power& p) { os << "power:k=" << p.k << ",alpha=" << p.alpha; },
                   [&](const Polynomial& p) {
                       os << "poly:";
                       for (std::size_t i = 0; i < p.even_coefficients.size(); ++i)
                           os << (i ? "," : "") << 'c' << 2 * (i + 1) << '=' << p.even_coefficients[i];
                   },
                   [&](const Table& t) { os << "table(" << t.radii.size() << " rows)"; },
               },
               family_);
    if (outer_ != 1.0 || inner_ != 1.0)
        os << " scaled(outer=" << outer_ << ",inner=" << inner_ << ')';
    return os.str();
}

double default_condition_tolerance(const RadialPotential& p)
{
    return p.max_radius() ? 1e-6 : 1e-9;
}

ConditionReport validate_conditions(const RadialPotential& p, double R)
{
    return validate_conditions(p, R, default_condition_tolerance(p));
}

ConditionReport validate_conditions(const RadialPotential& p, double R, double tol, int probes)
{
    if (!(R > 0.0))
        throw ContractError("validate_conditions: R must be positive");
    probes = std::max(probes, 16);
    const auto r = linspace(0.0, R, static_cast<std::size_t>(probes));
    std::vector<double> v(r.size()), d1(r.size()), d2(r.size()), rv(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto s = p.eval(r[i]);
        v[i] = s.value;
        d1[i] = s.d1;
        d2[i] = s.d2;
        rv[i] = r[i] * s.value;
    }

    ConditionReport rep;
    rep.tolerance = tol;
    auto note = [&](double amount, double where) {
        if (amount > rep.worst_violation) {
            rep.worst_violation = amount;
            rep.worst_location = where;
        }
    };
    auto scale_of = [](const std::vector<double>& f) {
        double m = 1.0;
        for (double x : f)
            if (std::isfinite(x))
                m = std::max(m, std::abs(x));
        return m;
    };

    rep.a_holds = std::abs(v[0]) <= tol && std::abs(d1[0]) <= tol;
    if (!rep.a_holds)
        note(std::max(std::abs(v[0]), std::abs(d1[0])), 0.0);

    // (b): V' and V'' nondecreasing. An infinite V''(0) followed by finite
    // values is a decrease.
    auto nondecreasing = [&](const std::vector<double>& f) {
        const double slack = tol * scale_of(f);
        bool ok = true;
        for (std::size_t i = 1; i < f.size(); ++i) {
            const double drop = f[i - 1] - f[i];
            if (std::isnan(drop) || drop > slack) {
                ok = false;
                note(std::isnan(drop) ? std::numeric_limits<double>::infinity() : drop, r[i]);
            }
        }
        return ok;
    };
    if (const auto rows = p.knots()) {
        const auto& [kr, kv] = *rows;
        std::size_t end = 0;
        while (end < kr.size() && kr[end] <= R * (1.0 + 1e-12))
            ++end;
        end = std::min(kr.size(), end + 1);
        // slopes between rows, then second divided differences (times 2)
        std::vector<double> mid, slope, mid2, curv;
        for (std::size_t i = 0; i + 1 < end; ++i) {
            mid.push_back(0.5 * (kr[i] + kr[i + 1]));
            slope.push_back((kv[i + 1] - kv[i]) / (kr[i + 1] - kr[i]));
        }
        for (std::size_t i = 0; i + 1 < slope.size(); ++i) {
            mid2.push_back(kr[i + 1]);
            curv.push_back(2.0 * (slope[i + 1] - slope[i]) / (kr[i + 2] - kr[i]));
        }
        auto rising = [&](const std::vector<double>& f, const std::vector<double>& at) {
            const double slack = tol * scale_of(f);
            bool ok = true;
            for (std::size_t i = 1; i < f.size(); ++i)
                if (f[i - 1] - f[i] > slack) {
                    ok = false;
                    note(f[i - 1] - f[i], at[i]);
                }
            return ok;
        };
        const bool slope_ok = rising(slope, mid);
        const bool curv_ok = rising(curv, mid2);
        rep.b_holds = slope_ok && curv_ok;

        std::vector<double> rv_slope, rv_mid;
        for (std::size_t i = 0; i + 1 < end; ++i) {
            rv_mid.push_back(mid[i]);
            rv_slope.push_back((kr[i + 1] * kv[i + 1] - kr[i] * kv[i]) / (kr[i + 1] - kr[i]));
        }
        rep.rV_convex = rising(rv_slope, rv_mid);
        return rep;
    }

    const bool d1_ok = nondecreasing(d1);
    const bool d2_ok = nondecreasing(d2);
    rep.b_holds = d1_ok && d2_ok;

    const double slack = tol * scale_of(rv);
    rep.rV_convex = true;
    for (std::size_t i = 1; i + 1 < rv.size(); ++i) {
        const double second = rv[i + 1] - 2.0 * rv[i] + rv[i - 1];
        if (second < -slack) {
            rep.rV_convex = false;
            note(-second, r[i]);
        }
    }
    return rep;
}

namespace {

template <class High>
DominanceReport dominates_impl(const RadialPotential& low, const High& high, double R1, double tol,
                               int probes)
{
    if (!(R1 > 0.0))
        throw ContractError("dominates: R1 must be positive");
    DominanceReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (double r : linspace(0.0, R1, static_cast<std::size_t>(std::max(probes, 2)))) {
        const double margin = high(r) - low(r);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_location = r;
        }
    }
    rep.holds = rep.worst_margin >= -tol;
    return rep;
}

} // namespace

DominanceReport dominates(const RadialPotential& low, const RadialProfile& high, double R1, double tol,
                          int probes)
{
    return dominates_impl(low, [&](double r) { return high.value_at(r); }, R1, tol, probes);
}

DominanceReport dominates(const RadialPotential& low, const RadialPotential& high, double R1, double tol,
                          int probes)
{
    return dominates_impl(low, [&](double r) { return high(r); }, R1, tol, probes);
}

} // namespace ppw
