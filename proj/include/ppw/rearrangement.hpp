#pragma once

// Spherical rearrangements of sampled functions, the measure variable
// s = C_n r^n, and the one-crossing comparison between a rearranged ground
// state and the ground state of the comparison ball.

#include "ppw/potentials.hpp"
#include "ppw/radial_solver.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ppw {

enum class Monotone { increasing, decreasing };

class RadialProfile {
public:
    /// Samples at `radii` carrying measures `measures` (sum = total measure).
    RadialProfile(int n, std::vector<double> radii, std::vector<double> values, std::vector<double> measures,
                  Monotone direction);

    /// Samples of a radial function; each sample gets the measure of the shell
    /// between neighbouring midpoints, the outermost shell ending at radii.back().
    static RadialProfile from_samples(int n, std::vector<double> radii, std::vector<double> values,
                                      Monotone direction);

    int dim() const { return n_; }
    Monotone direction() const { return direction_; }
    double unit_ball_measure() const { return cn_; }
    double total_measure() const { return total_; }
    /// Radius of the ball with the total measure.
    double outer_radius() const;

    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& measures() const { return measures_; }

    /// Linear interpolation in r. Below the first radius the first value is
    /// returned; beyond the outer radius decreasing profiles vanish and
    /// increasing ones keep their last value.
    double value_at(double r) const;

    /// (sum_i |v_i|^p mu_i)^(1/p).
    double norm(double p = 2.0) const;
    /// Measure of {profile > t}.
    double level_measure(double t) const;

private:
    int n_;
    std::vector<double> radii_, values_, measures_;
    Monotone direction_;
    double cn_;
    double total_;
};

/// C_n, the measure of the unit ball in R^n.
double unit_ball_measure(int n);

/// Sort cell values (ascending for `increasing`, descending for
/// `decreasing`), accumulate measure and place each value at the radius of the
/// ball whose measure is the midpoint of its cell's measure interval.
RadialProfile rearrange(std::span<const double> values, double cell_measure, int n, Monotone direction);

struct SharpSamples {
    std::vector<double> s;
    std::vector<double> values;
};

/// f^#(s) = f((s / C_n)^{1/n}) at s_i = C_n r_i^n.
SharpSamples sharp_transform(const RadialProfile& profile);
/// Inverse map back to radii: r_i = (s_i / C_n)^{1/n}.
std::vector<double> unsharp_radii(const SharpSamples& sharp, int n);

struct ChitiReport {
    int count = 0;
    std::optional<double> r0;
    int tangencies = 0;    // excursions into the tolerance band that leave with the same sign
    double max_abs_difference = 0.0;
    double band = 0.0;
    double window = 0.0;
};

/// Sign changes of u1_star - z1 (z1 extended by 0 beyond its radius), both
/// averaged over the samples in shells [r - window, r + window] centred on a
/// uniform radius grid of spacing `window`; |difference| < band is ignored.
/// band <= 0 selects 1e-4 max u1_star; window <= 0 selects the mean sample
/// measure to the power 1/n (the grid step for a 2-D rearrangement).
ChitiReport chiti_crossings(const RadialProfile& u1_star, const EigenPair& z1, double band = 0.0,
                           double window = 0.0);

/// Defect of
///   -dz^#/ds = n^-2 C_n^{-2/n} s^{2/n-2} int_0^s (lambda1 - V~_#(w)) z^#(w) dw
/// on a uniform s grid, relative to max |dz^#/ds|.
double factde_residual(const EigenPair& z1, const RadialPotential& v_tilde, double lambda1);

struct Fact1Report {
    bool holds = false;
    double worst_excess = 0.0;  // max of (drop - bound) over bins, relative to u^#(0)
    double slack = 0.0;
    int bins = 0;
};

/// Integrated form of the inequality for a rearranged domain ground state:
/// on consecutive bins [s_a, s_b],
///   u^#(s_a) - u^#(s_b) <= int_{s_a}^{s_b} n^-2 C_n^{-2/n} s^{2/n-2} int_0^s (lambda1 - V~_#) u^# dw ds.
/// Accepts excess up to `slack` relative to u^#(0).
Fact1Report check_fact1(const RadialProfile& u1_star, const RadialPotential& v_tilde, double lambda1, double slack,
                        int bins = 64);

} // namespace ppw
