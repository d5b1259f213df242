#include "ppw/domain_solver.hpp"

#include "ppw/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace ppw {

DomainGrid::DomainGrid(int nx, int ny, double h, double cx, double cy, std::vector<std::uint8_t> mask)
    : nx_(nx), ny_(ny), h_(h), cx_(cx), cy_(cy), mask_(std::move(mask))
{
    if (nx < 1 || ny < 1)
        throw ContractError("DomainGrid: nx and ny must be positive");
    if (!(h > 0.0) || !std::isfinite(h))
        throw ContractError("DomainGrid: h must be positive");
    if (mask_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
        throw ContractError("DomainGrid: mask size does not match nx * ny");
    for (auto& m : mask_)
        m = m ? 1 : 0;
    if (interior_count() == 0)
        throw ContractError("DomainGrid: mask has no interior cells");
}

DomainGrid DomainGrid::from_predicate(const std::function<bool(double, double)>& inside, double xmin, double xmax,
                                      double ymin, double ymax, double h)
{
    const int left = static_cast<int>(std::ceil(std::max(0.0, -xmin) / h - 1e-9)) + 1;
    const int right = static_cast<int>(std::ceil(std::max(0.0, xmax) / h - 1e-9)) + 1;
    const int below = static_cast<int>(std::ceil(std::max(0.0, -ymin) / h - 1e-9)) + 1;
    const int above = static_cast<int>(std::ceil(std::max(0.0, ymax) / h - 1e-9)) + 1;
    const int nx = left + right, ny = below + above;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny, 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            mask[static_cast<std::size_t>(j) * nx + i] = inside((i + 0.5 - left) * h, (j + 0.5 - below) * h) ? 1 : 0;
    return DomainGrid(nx, ny, h, left, below, std::move(mask));
}

DomainGrid DomainGrid::disk(double radius, double h)
{
    if (!(radius > 0.0))
        throw ContractError("disk: radius must be positive");
    const double r2 = radius * radius;
    return from_predicate([r2](double x, double y) { return x * x + y * y < r2; }, -radius, radius, -radius, radius,
                          h);
}

DomainGrid DomainGrid::ellipse(double a, double b, double h)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw ContractError("ellipse: semi-axes must be positive");
    return from_predicate([a, b](double x, double y) { return (x / a) * (x / a) + (y / b) * (y / b) < 1.0; }, -a, a,
                          -b, b, h);
}

DomainGrid DomainGrid::rectangle(double width, double height, double h)
{
    const double fx = width / h, fy = height / h;
    const int nx = static_cast<int>(std::lround(fx)), ny = static_cast<int>(std::lround(fy));
    if (nx < 1 || ny < 1 || std::abs(fx - nx) > 1e-9 * fx || std::abs(fy - ny) > 1e-9 * fy)
        throw ContractError("rectangle: width / h and height / h must be positive integers");
    return DomainGrid(nx, ny, h, 0.5 * nx, 0.5 * ny,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(nx) * ny, 1));
}

DomainGrid DomainGrid::l_shape(double side, double h)
{
    DomainGrid sq = rectangle(side, side, h);
    auto mask = sq.mask_;
    for (int j = 0; j < sq.ny_; ++j)
        for (int i = 0; i < sq.nx_; ++i) {
            const auto [x, y] = sq.centre(i, j);
            if (x > 0.0 && y > 0.0)
                mask[static_cast<std::size_t>(j) * sq.nx_ + i] = 0;
        }
    return DomainGrid(sq.nx_, sq.ny_, h, sq.cx_, sq.cy_, std::move(mask));
}

DomainGrid DomainGrid::parse(const std::string& text)
{
    std::istringstream in(text);
    int nx = 0, ny = 0;
    double h = 0, cx = 0, cy = 0;
    std::string header;
    if (!std::getline(in, header))
        throw ContractError("mask: empty input");
    {
        std::istringstream hs(header);
        if (!(hs >> nx >> ny >> h >> cx >> cy))
            throw ContractError("mask: header must read `nx ny h cx cy`");
    }
    if (nx < 1 || ny < 1)
        throw ContractError("mask: nx and ny must be positive");
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny, 0);
    std::string line;
    for (int j = 0; j < ny; ++j) {
        if (!std::getline(in, line))
            throw ContractError("mask: expected " + std::to_string(ny) + " rows, got " + std::to_string(j));
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (static_cast<int>(line.size()) != nx)
            throw ContractError("mask: row " + std::to_string(j) + " has " + std::to_string(line.size()) +
                                " characters, expected " + std::to_string(nx));
        for (int i = 0; i < nx; ++i) {
            if (line[static_cast<std::size_t>(i)] != '0' && line[static_cast<std::size_t>(i)] != '1')
                throw ContractError("mask: rows may contain only 0 and 1");
            mask[static_cast<std::size_t>(j) * nx + i] = line[static_cast<std::size_t>(i)] == '1';
        }
    }
    return DomainGrid(nx, ny, h, cx, cy, std::move(mask));
}

DomainGrid DomainGrid::read(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ContractError("mask: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string DomainGrid::to_string() const
{
    std::ostringstream os;
    os << nx_ << ' ' << ny_ << ' ' << std::setprecision(17) << h_ << ' ' << cx_ << ' ' << cy_ << '\n';
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i)
            os << (inside(i, j) ? '1' : '0');
        os << '\n';
    }
    return os.str();
}

void DomainGrid::write(const std::string& path) const
{
    std::ofstream out(path);
    if (!out)
        throw ContractError("mask: cannot write '" + path + "'");
    out << to_string();
}

std::size_t DomainGrid::interior_count() const
{
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

bool DomainGrid::connected() const
{
    std::vector<std::uint8_t> seen(mask_.size(), 0);
    std::deque<std::pair<int, int>> queue;
    const auto first = std::find(mask_.begin(), mask_.end(), 1) - mask_.begin();
    queue.emplace_back(static_cast<int>(first % nx_), static_cast<int>(first / nx_));
    seen[static_cast<std::size_t>(first)] = 1;
    std::size_t visited = 0;
    while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        ++visited;
        const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int a = i + di[d], b = j + dj[d];
            if (!inside(a, b))
                continue;
            auto& s = seen[static_cast<std::size_t>(b) * nx_ + a];
            if (!s) {
                s = 1;
                queue.emplace_back(a, b);
            }
        }
    }
    return visited == interior_count();
}

DomainGrid DomainGrid::rotated90() const
{
    std::vector<std::uint8_t> mask(mask_.size(), 0);
    const int nnx = ny_, nny = nx_;
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            if (inside(i, j))
                mask[static_cast<std::size_t>(i) * nnx + (ny_ - 1 - j)] = 1;
    return DomainGrid(nnx, nny, h_, ny_ - cy_, cx_, std::move(mask));
}

DomainGrid DomainGrid::refined() const
{
    const int nnx = 2 * nx_, nny = 2 * ny_;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(nnx) * nny, 0);
    for (int j = 0; j < nny; ++j)
        for (int i = 0; i < nnx; ++i)
            mask[static_cast<std::size_t>(j) * nnx + i] = inside(i / 2, j / 2) ? 1 : 0;
    return DomainGrid(nnx, nny, 0.5 * h_, 2.0 * cx_, 2.0 * cy_, std::move(mask));
}

DomainGrid DomainGrid::coarsened() const
{
    const int nnx = (nx_ + 1) / 2, nny = (ny_ + 1) / 2;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(nnx) * nny, 0);
    bool any = false;
    for (int j = 0; j < nny; ++j)
        for (int i = 0; i < nnx; ++i) {
            const bool full = inside(2 * i, 2 * j) && inside(2 * i + 1, 2 * j) && inside(2 * i, 2 * j + 1) &&
                              inside(2 * i + 1, 2 * j + 1);
            mask[static_cast<std::size_t>(j) * nnx + i] = full ? 1 : 0;
            any = any || full;
        }
    if (!any)
        throw ContractError("coarsened: no fully covered coarse cell");
    return DomainGrid(nnx, nny, 2.0 * h_, 0.5 * cx_, 0.5 * cy_, std::move(mask));
}

DomainGrid DomainGrid::recentred(double x, double y) const
{
    return DomainGrid(nx_, ny_, h_, cx_ + x / h_, cy_ + y / h_, mask_);
}

std::vector<double> DomainPotential::sample(const DomainGrid& g) const
{
    std::vector<double> out;
    out.reserve(g.interior_count());
    if (!radial_ && cells_.size() != static_cast<std::size_t>(g.nx()) * g.ny())
        throw ContractError("DomainPotential: cell table does not match the grid");
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.inside(i, j))
                continue;
            if (radial_) {
                const auto [x, y] = g.centre(i, j);
                out.push_back((*radial_)(std::hypot(x, y)));
            } else {
                out.push_back(cells_[static_cast<std::size_t>(j) * g.nx() + i]);
            }
        }
    return out;
}

DomainPotential DomainPotential::refined(const DomainGrid& g) const
{
    if (radial_)
        return *this;
    const int nnx = 2 * g.nx(), nny = 2 * g.ny();
    std::vector<double> cells(static_cast<std::size_t>(nnx) * nny);
    for (int j = 0; j < nny; ++j)
        for (int i = 0; i < nnx; ++i)
            cells[static_cast<std::size_t>(j) * nnx + i] = cells_[static_cast<std::size_t>(j / 2) * g.nx() + i / 2];
    return DomainPotential(std::move(cells));
}

std::vector<double> DomainSpectrum::u(int index) const
{
    const Eigen::VectorXd c = vectors.col(index);
    return {c.data(), c.data() + c.size()};
}

std::vector<std::pair<double, double>> DomainSpectrum::centres() const
{
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(vectors.rows()));
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            if (grid.inside(i, j))
                out.push_back(grid.centre(i, j));
    return out;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// -Laplace + V with Dirichlet data on cell faces: a missing neighbour is the
// mirror ghost -u, which adds one more 1/h^2 to the diagonal. Vectors live on
// the grid padded by one exterior cell on each side and vanish off the mask.
struct Operator {
    int stride = 0;
    Eigen::Index padded = 0;
    Eigen::Index size = 0;
    double off = 0.0;  // -1/h^2
    VectorXd diag;     // zero off the mask
    VectorXd inside;   // 1 on the mask, 0 elsewhere
    std::vector<Eigen::Index> unknowns;  // padded position of each unknown

    Operator(const DomainGrid& g, const std::vector<double>& v)
    {
        stride = g.nx() + 2;
        padded = static_cast<Eigen::Index>(stride) * (g.ny() + 2);
        diag = VectorXd::Zero(padded);
        inside = VectorXd::Zero(padded);
        const double ih2 = 1.0 / (g.h() * g.h());
        off = -ih2;
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                if (!g.inside(i, j))
                    continue;
                const int missing = !g.inside(i - 1, j) + !g.inside(i + 1, j) + !g.inside(i, j - 1) +
                                    !g.inside(i, j + 1);
                const Eigen::Index k = static_cast<Eigen::Index>(j + 1) * stride + (i + 1);
                diag[k] = (4.0 + missing) * ih2 + v[unknowns.size()];
                inside[k] = 1.0;
                unknowns.push_back(k);
            }
        size = static_cast<Eigen::Index>(unknowns.size());
    }

    void apply(const double* x, double* y, double shift) const
    {
        const Eigen::Index s = stride;
        y[0] = 0.0;
        for (Eigen::Index k = s; k < padded - s; ++k)
            y[k] = (diag[k] - shift * inside[k]) * x[k] + off * inside[k] * (x[k - 1] + x[k + 1] + x[k - s] + x[k + s]);
        for (Eigen::Index k = 0; k < s; ++k)
            y[k] = y[padded - 1 - k] = 0.0;
    }

    VectorXd scatter(const Eigen::Ref<const VectorXd>& u) const
    {
        VectorXd x = VectorXd::Zero(padded);
        for (Eigen::Index i = 0; i < size; ++i)
            x[unknowns[static_cast<std::size_t>(i)]] = u[i];
        return x;
    }

    VectorXd gather(const Eigen::Ref<const VectorXd>& x) const
    {
        VectorXd u(size);
        for (Eigen::Index i = 0; i < size; ++i)
            u[i] = x[unknowns[static_cast<std::size_t>(i)]];
        return u;
    }
};

// Incomplete Cholesky with zero fill for the five-point matrix in natural
// order: M = (D + L) D^{-1} (D + L^T).
struct IncompleteCholesky {
    const Operator* op = nullptr;
    VectorXd inv_d;  // zero off the mask

    IncompleteCholesky(const Operator& A, double shift) : op(&A), inv_d(VectorXd::Zero(A.padded))
    {
        const double c2 = A.off * A.off;
        const Eigen::Index s = A.stride;
        VectorXd d = VectorXd::Zero(A.padded);
        for (Eigen::Index k = s; k < A.padded - s; ++k) {
            if (A.inside[k] == 0.0)
                continue;
            const double a = A.diag[k] - shift;
            double v = a - c2 * (inv_d[k - 1] + inv_d[k - s]);
            if (!(v > 1e-12 * a))
                v = a;
            d[k] = v;
            inv_d[k] = 1.0 / v;
        }
    }

    void solve(const VectorXd& b, VectorXd& x) const
    {
        const Operator& A = *op;
        const double c = A.off;
        const Eigen::Index s = A.stride, n = A.padded;
        x.setZero(n);
        for (Eigen::Index k = s; k < n - s; ++k)
            x[k] = (b[k] - c * (x[k - 1] + x[k - s])) * inv_d[k];
        for (Eigen::Index k = n - s; k-- > s;)
            x[k] -= c * (x[k + 1] + x[k + s]) * inv_d[k];
    }
};

// Preconditioned CG on (A - shift) x = b starting from x.
int pcg(const Operator& A, double shift, const IncompleteCholesky& M, const VectorXd& b, VectorXd& x, double rtol,
        int max_iter)
{
    const Eigen::Index n = A.padded;
    VectorXd r(n), z(n), p(n), q(n);
    A.apply(x.data(), q.data(), shift);
    r = b - q;
    const double bnorm = std::max(b.norm(), 1e-300);
    if (r.norm() <= rtol * bnorm)
        return 0;
    M.solve(r, z);
    p = z;
    double rz = r.dot(z);
    for (int it = 1; it <= max_iter; ++it) {
        A.apply(p.data(), q.data(), shift);
        const double alpha = rz / p.dot(q);
        x.noalias() += alpha * p;
        r.noalias() -= alpha * q;
        if (r.norm() <= rtol * bnorm)
            return it;
        M.solve(r, z);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    return max_iter;
}

void orthonormalize(MatrixXd& X)
{
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            for (Eigen::Index i = 0; i < j; ++i)
                X.col(j) -= X.col(i).dot(X.col(j)) * X.col(i);
            const double nrm = X.col(j).norm();
            if (nrm == 0.0)
                throw NumericError("domain solver: subspace collapsed");
            X.col(j) /= nrm;
        }
}

struct Eigs {
    MatrixXd X;  // padded layout, orthonormal
    VectorXd theta;
    VectorXd residual;  // relative
    int iterations = 0;
};

void rayleigh_ritz(const Operator& A, MatrixXd& X, VectorXd& theta, VectorXd& residual)
{
    orthonormalize(X);
    MatrixXd AX(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        A.apply(X.col(j).data(), AX.col(j).data(), 0.0);
    MatrixXd H = X.transpose() * AX;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    X = X * es.eigenvectors();
    AX = AX * es.eigenvectors();
    theta = es.eigenvalues();
    residual.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        residual[j] = (AX.col(j) - theta[j] * X.col(j)).norm() / std::max(std::abs(theta[j]), 1e-300);
}

// Inverse subspace iteration with shift below the spectrum and Rayleigh-Ritz
// after every sweep. Guard vectors beyond `wanted` get loose inner solves.
Eigs subspace_iteration(const Operator& A, MatrixXd X, int wanted, double tol, int max_outer)
{
    Eigs out;
    VectorXd theta, residual;
    rayleigh_ritz(A, X, theta, residual);
    const double res_target = std::max(std::sqrt(tol) * 0.1, 1e-10);
    VectorXd prev = theta;
    for (int outer = 1; outer <= max_outer; ++outer) {
        const double shift = theta[0] > 0.0 ? 0.5 * theta[0] : theta[0] - 1.0;
        IncompleteCholesky M(A, shift);
        double worst = 0.0;
        for (int j = 0; j < wanted; ++j)
            worst = std::max(worst, residual[j]);
        const double inner = std::clamp(0.05 * worst, 1e-13, 1e-3);
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            VectorXd x = X.col(j) / (theta[j] - shift);
            const VectorXd b = X.col(j);
            pcg(A, shift, M, b, x, j < wanted ? inner : std::max(inner, 1e-3), 5000);
            X.col(j) = x;
        }
        rayleigh_ritz(A, X, theta, residual);
        out.iterations = outer;
        bool done = true;
        for (int j = 0; j < wanted; ++j) {
            const double change = std::abs(theta[j] - prev[j]) / std::max(std::abs(theta[j]), 1e-300);
            done = done && residual[j] <= res_target && change <= tol;
        }
        prev = theta;
        if (done) {
            out.X = std::move(X);
            out.theta = theta;
            out.residual = residual;
            return out;
        }
    }
    double worst = 0.0;
    for (int j = 0; j < wanted; ++j)
        worst = std::max(worst, residual[j]);
    std::ostringstream os;
    os << "domain solver: no convergence after " << max_outer << " iterations (relative residual " << worst << ")";
    throw NumericError(os.str());
}

MatrixXd scatter_block(const Operator& A, const MatrixXd& U)
{
    MatrixXd X(A.padded, U.cols());
    for (Eigen::Index j = 0; j < U.cols(); ++j)
        X.col(j) = A.scatter(U.col(j));
    return X;
}

MatrixXd gather_block(const Operator& A, const MatrixXd& X)
{
    MatrixXd U(A.size, X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        U.col(j) = A.gather(X.col(j));
    return U;
}

MatrixXd random_block(Eigen::Index rows, Eigen::Index cols)
{
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    MatrixXd X(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            X(i, j) = j == 0 ? 1.0 : dist(rng);
    return X;
}

// Piecewise-constant transfer of coarse vectors to the fine grid.
MatrixXd prolongate(const DomainGrid& coarse, const MatrixXd& Xc, const DomainGrid& fine)
{
    std::vector<int> cindex(static_cast<std::size_t>(coarse.nx()) * coarse.ny(), -1);
    int c = 0;
    for (int j = 0; j < coarse.ny(); ++j)
        for (int i = 0; i < coarse.nx(); ++i)
            if (coarse.inside(i, j))
                cindex[static_cast<std::size_t>(j) * coarse.nx() + i] = c++;
    MatrixXd X = MatrixXd::Zero(static_cast<Eigen::Index>(fine.interior_count()), Xc.cols());
    Eigen::Index k = 0;
    for (int j = 0; j < fine.ny(); ++j)
        for (int i = 0; i < fine.nx(); ++i) {
            if (!fine.inside(i, j))
                continue;
            const int ci = i / 2, cj = j / 2;
            if (coarse.inside(ci, cj))
                X.row(k) = Xc.row(cindex[static_cast<std::size_t>(cj) * coarse.nx() + ci]);
            ++k;
        }
    return X;
}

// Potential on the coarse grid: mean over the four children.
std::vector<double> coarse_potential(const DomainGrid& fine, const std::vector<double>& vfine, const DomainGrid& coarse)
{
    std::vector<double> cells(static_cast<std::size_t>(fine.nx()) * fine.ny(), 0.0);
    std::size_t k = 0;
    for (int j = 0; j < fine.ny(); ++j)
        for (int i = 0; i < fine.nx(); ++i)
            if (fine.inside(i, j))
                cells[static_cast<std::size_t>(j) * fine.nx() + i] = vfine[k++];
    std::vector<double> out;
    for (int j = 0; j < coarse.ny(); ++j)
        for (int i = 0; i < coarse.nx(); ++i) {
            if (!coarse.inside(i, j))
                continue;
            double s = 0.0;
            for (int b = 0; b < 2; ++b)
                for (int a = 0; a < 2; ++a)
                    s += cells[static_cast<std::size_t>(2 * j + b) * fine.nx() + (2 * i + a)];
            out.push_back(0.25 * s);
        }
    return out;
}

constexpr std::size_t direct_start_size = 3000;

MatrixXd initial_block(const DomainGrid& g, const std::vector<double>& v, int block)
{
    const auto n = static_cast<Eigen::Index>(g.interior_count());
    if (g.interior_count() < direct_start_size || n < 4 * block)
        return random_block(n, block);
    DomainGrid coarse = g;
    try {
        coarse = g.coarsened();
    } catch (const ContractError&) {
        return random_block(n, block);
    }
    if (coarse.interior_count() < static_cast<std::size_t>(2 * block))
        return random_block(n, block);
    const auto vc = coarse_potential(g, v, coarse);
    const Operator Ac(coarse, vc);
    const Eigs coarse_eigs = subspace_iteration(Ac, scatter_block(Ac, initial_block(coarse, vc, block)), 1, 1e-6, 400);
    MatrixXd X = prolongate(coarse, gather_block(Ac, coarse_eigs.X), g);
    // keep the block full rank where the coarse domain misses fine cells
    const MatrixXd noise = 1e-3 * random_block(n, block);
    return X + noise;
}

} // namespace

DomainSpectrum solve_domain(const DomainGrid& grid, const DomainPotential& v, int k, double tol)
{
    if (k < 1 || k > 4)
        throw ContractError("solve_domain: k must lie in [1, 4]");
    if (!(tol > 0.0))
        throw ContractError("solve_domain: tol must be positive");
    const auto n = static_cast<Eigen::Index>(grid.interior_count());
    const int block = static_cast<int>(std::min<Eigen::Index>(k + 3, n));
    if (n < k)
        throw ContractError("solve_domain: fewer interior cells than requested eigenpairs");
    const auto vs = v.sample(grid);
    const Operator A(grid, vs);
    Eigs e = subspace_iteration(A, scatter_block(A, initial_block(grid, vs, block)), std::min<int>(k, block), tol,
                                1000);
    e.X = gather_block(A, e.X);

    DomainSpectrum out{grid, {}, {}, {}, {}, std::nullopt, {}, !grid.connected(), e.iterations};
    const double h = grid.h();
    out.vectors = e.X.leftCols(k) / h;  // sum u^2 h^2 = 1
    for (int j = 0; j < k; ++j) {
        out.raw_lambda.push_back(e.theta[j]);
        out.residuals.push_back(e.residual[j]);
        if (out.vectors.col(j).sum() < 0.0)
            out.vectors.col(j) *= -1.0;
    }
    out.lambda = out.raw_lambda;
    return out;
}

namespace {

struct Box {
    double x0, x1, y0, y1;
};

Box bounding_box(const DomainGrid& g)
{
    Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.inside(i, j)) {
                const auto [x, y] = g.centre(i, j);
                b.x0 = std::min(b.x0, x - 0.5 * g.h());
                b.x1 = std::max(b.x1, x + 0.5 * g.h());
                b.y0 = std::min(b.y0, y - 0.5 * g.h());
                b.y1 = std::max(b.y1, y + 0.5 * g.h());
            }
    return b;
}

// Step ratio 2, bounding boxes within one coarse cell, areas within 10%.
bool same_geometry_half_step(const DomainGrid& coarse, const DomainGrid& fine)
{
    if (std::abs(coarse.h() - 2.0 * fine.h()) > 1e-12 * coarse.h())
        return false;
    if (coarse.interior_count() == 0 || fine.interior_count() == 0)
        return false;
    const Box a = bounding_box(coarse), b = bounding_box(fine);
    const double hc = coarse.h() * (1.0 + 1e-9);
    if (std::abs(a.x0 - b.x0) > hc || std::abs(a.x1 - b.x1) > hc || std::abs(a.y0 - b.y0) > hc ||
        std::abs(a.y1 - b.y1) > hc)
        return false;
    return std::abs(coarse.area() - fine.area()) <= 0.1 * fine.area();
}

} // namespace

RichardsonResult richardson(const DomainSpectrum& coarse, const DomainSpectrum& fine)
{
    const bool same = coarse.grid == fine.grid;
    if (!same && !(fine.grid == coarse.grid.refined()) && !same_geometry_half_step(coarse.grid, fine.grid))
        throw ContractError("richardson: fine grid is neither the 2 x 2 refinement of the coarse grid nor a "
                            "resampling of the same domain at half the step");
    const std::size_t m = std::min(coarse.raw_lambda.size(), fine.raw_lambda.size());
    RichardsonResult r;
    for (std::size_t i = 0; i < m; ++i) {
        const double lc = coarse.raw_lambda[i], lf = fine.raw_lambda[i];
        r.lambda.push_back(same ? lf : (4.0 * lf - lc) / 3.0);
        r.error.push_back(same ? 0.0 : std::abs(lf - lc) / 3.0);
    }
    return r;
}

DomainSpectrum solve_domain_extrapolated(const DomainGrid& grid, const DomainPotential& v, int k, double tol)
{
    const DomainSpectrum coarse = solve_domain(grid, v, k, tol);
    const DomainGrid fine_grid = grid.refined();
    DomainSpectrum fine = solve_domain(fine_grid, v.refined(grid), k, tol);
    const RichardsonResult r = richardson(coarse, fine);
    fine.lambda = r.lambda;
    fine.estimated_discretization_error = *std::max_element(r.error.begin(), r.error.end());
    fine.discretization_errors = r.error;
    return fine;
}

DomainSpectrum solve_domain_resampled(const std::function<DomainGrid(double)>& make, double h,
                                      const DomainPotential& v, int k, double tol)
{
    if (!v.is_radial())
        throw ContractError("solve_domain_resampled: needs a radial potential");
    if (!(h > 0.0))
        throw ContractError("solve_domain_resampled: h must be positive");
    const DomainSpectrum coarse = solve_domain(make(2.0 * h), v, k, tol);
    DomainSpectrum fine = solve_domain(make(h), v, k, tol);
    const RichardsonResult r = richardson(coarse, fine);
    fine.lambda = r.lambda;
    fine.estimated_discretization_error = *std::max_element(r.error.begin(), r.error.end());
    fine.discretization_errors = r.error;
    return fine;
}

std::vector<double> discrete_rectangle_eigenvalues(int nx, int ny, double h, int count)
{
    std::vector<double> ex, ey, all;
    for (int p = 1; p <= nx; ++p)
        ex.push_back(4.0 / (h * h) * std::pow(std::sin(p * pi / (2.0 * nx)), 2));
    for (int q = 1; q <= ny; ++q)
        ey.push_back(4.0 / (h * h) * std::pow(std::sin(q * pi / (2.0 * ny)), 2));
    for (double a : ex)
        for (double b : ey)
            all.push_back(a + b);
    std::sort(all.begin(), all.end());
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(count)));
    return all;
}

} // namespace ppw
