#pragma once

// Radial potentials V(r) >= 0 and the structural checks a potential must pass
// before it can serve as the comparison potential of the PPW-type bound:
//   (a)  V(0) = V'(0) = 0
//   (b)  V' exists, is nondecreasing and convex (V'' nondecreasing)
// together with convexity of r V(r), the hypothesis under which the second
// Dirichlet eigenfunction on a ball lives in the l = 1 angular sector.

#include "ppw/numerics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <utility>
#include <vector>

namespace ppw {

class RadialProfile;

struct PotentialSample {
    double value;
    double d1;
    double d2;
};

class RadialPotential {
public:
    struct Zero {};
    struct Power {
        double k;
        double alpha;
    };
    /// c[0] multiplies r^2, c[1] multiplies r^4, ...
    struct Polynomial {
        std::vector<double> even_coefficients;
    };
    struct Table {
        std::vector<double> radii;
        std::vector<double> values;
        MonotoneCubic interpolant;
    };

    static RadialPotential zero();
    static RadialPotential power(double k, double alpha);
    static RadialPotential polynomial(std::vector<double> even_coefficients);
    static RadialPotential table(std::vector<double> radii, std::vector<double> values);

    /// `zero` | `power:k=<f>,alpha=<f>` | `poly:c2=<f>[,c4=<f>...]` | `table:<path>`
    static RadialPotential parse(std::string_view spec);

    /// Two-column `r value` text, `#` starts a comment.
    static RadialPotential read_table(const std::string& path);

    /// (V, V', V'') at r. Table potentials throw RangeError beyond the last radius.
    PotentialSample eval(double r) const;
    double operator()(double r) const { return eval(r).value; }

    /// beta^2 V(beta r): the potential seen after shrinking the ball by beta.
    RadialPotential rescaled(double beta) const;

    /// Tabulated (r, V) rows after rescaling; empty for the analytic families.
    std::optional<std::pair<std::vector<double>, std::vector<double>>> knots() const;

    /// Largest radius at which the potential can be evaluated (tables only).
    std::optional<double> max_radius() const;
    bool is_zero() const;
    std::string describe() const;

private:
    using Family = std::variant<Zero, Power, Polynomial, Table>;
    explicit RadialPotential(Family f) : family_(std::move(f)) {}

    Family family_;
    double outer_ = 1.0;  // V_eff(r) = outer_ * V(inner_ * r)
    double inner_ = 1.0;
};

struct ConditionReport {
    bool a_holds = false;
    bool b_holds = false;
    bool rV_convex = false;
    double worst_violation = 0.0;  // largest amount by which any check failed (0 if none)
    double worst_location = 0.0;
    double tolerance = 0.0;
};

double default_condition_tolerance(const RadialPotential& p);

/// Conditions (a), (b) and convexity of r V(r) on [0, R], probed on `probes`
/// uniform points by discrete differences. For tables, (b) and the convexity
/// of r V are read from divided differences of the rows inside [0, R].
ConditionReport validate_conditions(const RadialPotential& p, double R, double tol,
                                    int probes = 1024);
ConditionReport validate_conditions(const RadialPotential& p, double R);

struct DominanceReport {
    bool holds = false;
    double worst_margin = 0.0;  // min over probes of (high - low)
    double worst_location = 0.0;
};

/// low(r) <= high(r) + tol for r in [0, R1].
DominanceReport dominates(const RadialPotential& low, const RadialProfile& high, double R1, double tol,
                          int probes = 1024);
DominanceReport dominates(const RadialPotential& low, const RadialPotential& high, double R1,
                          double tol, int probes = 1024);

} // namespace ppw
