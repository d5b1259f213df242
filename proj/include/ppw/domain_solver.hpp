#pragma once

// Dirichlet eigenpairs of -Laplace + V on a 2-D domain given as a union of
// square cells of a uniform grid (a staircase polygon).

#include "ppw/potentials.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ppw {

/// Cell (i, j), 0 <= i < nx, 0 <= j < ny, is the square of side h centred at
/// ((i + 0.5 - cx) h, (j + 0.5 - cy) h) relative to the potential's centre,
/// so (cx, cy) is the centre in cell units from the lower-left grid corner.
class DomainGrid {
public:
    DomainGrid(int nx, int ny, double h, double cx, double cy, std::vector<std::uint8_t> mask);

    /// Cells whose centres satisfy `inside(x, y)`, on the smallest grid with a
    /// one-cell margin around [xmin, xmax] x [ymin, ymax] that keeps the origin
    /// on a cell corner.
    static DomainGrid from_predicate(const std::function<bool(double, double)>& inside, double xmin, double xmax,
                                     double ymin, double ymax, double h);
    static DomainGrid disk(double radius, double h);
    /// Ellipse with semi-axes a (along x) and b (along y), centred at the origin.
    static DomainGrid ellipse(double a, double b, double h);
    /// Axis-parallel rectangle centred at the origin; width / h and height / h must be integers.
    static DomainGrid rectangle(double width, double height, double h);
    /// Square of side `side` centred at the origin with the quadrant x > 0, y > 0 removed.
    static DomainGrid l_shape(double side, double h);

    /// Plain text: `nx ny h cx cy`, then ny lines of nx `0`/`1`; line k holds row j = k.
    static DomainGrid read(const std::string& path);
    static DomainGrid parse(const std::string& text);
    void write(const std::string& path) const;
    std::string to_string() const;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double h() const { return h_; }
    double cx() const { return cx_; }
    double cy() const { return cy_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    bool inside(int i, int j) const
    {
        return i >= 0 && j >= 0 && i < nx_ && j < ny_ && mask_[static_cast<std::size_t>(j) * nx_ + i] != 0;
    }
    std::pair<double, double> centre(int i, int j) const { return {(i + 0.5 - cx_) * h_, (j + 0.5 - cy_) * h_}; }

    std::size_t interior_count() const;
    double area() const { return static_cast<double>(interior_count()) * h_ * h_; }
    bool connected() const;

    /// Counter-clockwise quarter turn about the origin.
    DomainGrid rotated90() const;
    /// Same staircase domain with every cell split 2 x 2.
    DomainGrid refined() const;
    /// Cells of size 2h that are fully covered by interior cells.
    DomainGrid coarsened() const;
    /// Same mask with the origin moved to the physical point (x, y) of the current frame.
    DomainGrid recentred(double x, double y) const;

    bool operator==(const DomainGrid& o) const = default;

private:
    int nx_, ny_;
    double h_, cx_, cy_;
    std::vector<std::uint8_t> mask_;
};

/// Potential on the grid: a radial potential evaluated at the distance of
/// each cell centre from the origin, or one value per cell (row-major over the
/// full nx * ny grid).
class DomainPotential {
public:
    DomainPotential(RadialPotential radial) : radial_(std::move(radial)) {}
    DomainPotential(std::vector<double> cells) : cells_(std::move(cells)) {}

    /// Values on the interior cells, in unknown order.
    std::vector<double> sample(const DomainGrid& g) const;
    DomainPotential refined(const DomainGrid& g) const;
    bool is_radial() const { return radial_.has_value(); }
    const std::optional<RadialPotential>& radial() const { return radial_; }

private:
    std::optional<RadialPotential> radial_;
    std::vector<double> cells_;
};

struct DomainSpectrum {
    DomainGrid grid;
    std::vector<double> lambda;       // best estimates (extrapolated when available)
    std::vector<double> raw_lambda;   // eigenvalues of the discrete operator on `grid`
    Eigen::MatrixXd vectors;          // columns: eigenvectors on interior cells, sum u^2 h^2 = 1
    std::vector<double> residuals;    // |A u - lambda u| / lambda
    std::optional<double> estimated_discretization_error;  // max of discretization_errors
    std::vector<double> discretization_errors;
    bool disconnected = false;
    int iterations = 0;

    double lambda1() const { return lambda.at(0); }
    double lambda2() const { return lambda.at(1); }
    std::vector<double> u(int index) const;
    std::vector<double> u1() const { return u(0); }
    std::vector<double> u2() const { return u(1); }
    /// Cell centres of the unknowns, in unknown order.
    std::vector<std::pair<double, double>> centres() const;
};

inline constexpr double default_domain_tol = 1e-10;

/// Lowest k (<= 4) eigenpairs.
DomainSpectrum solve_domain(const DomainGrid& grid, const DomainPotential& v, int k = 2,
                            double tol = default_domain_tol);

struct RichardsonResult {
    std::vector<double> lambda;
    std::vector<double> error;
};

/// (4 lambda_{h/2} - lambda_h) / 3 with error |lambda_{h/2} - lambda_h| / 3.
/// The fine grid is either coarse.refined() or the same domain sampled at
/// half the step (bounding boxes within one coarse cell, areas within 10%).
RichardsonResult richardson(const DomainSpectrum& coarse, const DomainSpectrum& fine);

/// Solve on `grid` and on grid.refined(), returning the fine spectrum with
/// extrapolated eigenvalues and the largest error estimate.
DomainSpectrum solve_domain_extrapolated(const DomainGrid& grid, const DomainPotential& v, int k = 2,
                                         double tol = default_domain_tol);

/// Solve on make(2 h) and make(h), two samplings of one geometric domain,
/// and extrapolate as in `richardson`. The potential must be radial.
DomainSpectrum solve_domain_resampled(const std::function<DomainGrid(double)>& make, double h,
                                      const DomainPotential& v, int k = 2, double tol = default_domain_tol);

/// Closed-form eigenvalues of the discrete operator on an all-true nx x ny
/// mask with V = 0 (sorted, lowest `count`).
std::vector<double> discrete_rectangle_eigenvalues(int nx, int ny, double h, int count);

} // namespace ppw
