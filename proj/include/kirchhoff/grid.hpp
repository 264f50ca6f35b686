#pragma once

// Masked uniform 5-point finite differences on a disk or rectangle with
// zero Dirichlet data: Laplacian action, Dirichlet energy, midpoint
// quadrature and a conjugate-gradient Poisson solver.

#include "kirchhoff/errors.hpp"
#include "kirchhoff/model.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace kirchhoff {

struct Disk {
    Point center{};
    double radius = 1.0;

    bool operator==(const Disk&) const = default;
};

/// Axis-aligned rectangle [0, width] x [0, height].
struct Rectangle {
    double width = 1.0;
    double height = 1.0;

    bool operator==(const Rectangle&) const = default;
};

using DomainSpec = std::variant<Disk, Rectangle>;

class Grid {
public:
    static constexpr int kOutside = -1;

    static std::shared_ptr<const Grid> build(const DomainSpec& spec, double h) {
        if (!(h > 0.0)) throw ResolutionError("grid: spacing h must be > 0");
        auto g = std::shared_ptr<Grid>(new Grid());
        g->spec_ = spec;
        g->h_ = h;
        std::visit([&](const auto& s) { g->layout(s); }, spec);
        if (g->nodes_.empty()) throw ResolutionError("grid: no interior node at h=" + std::to_string(h));
        g->link();
        return g;
    }

    const DomainSpec& spec() const noexcept { return spec_; }
    double h() const noexcept { return h_; }
    double cell_area() const noexcept { return h_ * h_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    Point node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Point>& nodes() const noexcept { return nodes_; }
    /// Lattice position (column, row) of an interior node.
    std::array<int, 2> lattice(std::size_t i) const { return lattice_[i]; }
    /// East, west, north, south neighbour indices; kOutside where the
    /// neighbour lies outside the domain and carries zero Dirichlet data.
    const std::array<int, 4>& neighbors(std::size_t i) const { return nbr_[i]; }
    /// Linear index of lattice node (col, row), or kOutside.
    int index(int col, int row) const {
        if (col < 0 || row < 0 || col >= cols_ || row >= rows_) return kOutside;
        return map_[static_cast<std::size_t>(row) * cols_ + col];
    }
    int cols() const noexcept { return cols_; }
    int rows() const noexcept { return rows_; }

    /// Radius of the largest inscribed ball, from the analytic shape.
    double inradius() const noexcept { return inradius_; }
    /// Centre of that ball.
    Point ball_center() const noexcept { return ball_center_; }

private:
    Grid() = default;

    void layout(const Disk& d) {
        if (!(d.radius > 0.0)) throw ResolutionError("grid: disk radius must be > 0");
        inradius_ = d.radius;
        ball_center_ = d.center;
        // Lattice on the bounding box, anchored at its corner. When 2R/h is an
        // integer the mask has the square's symmetry about the centre.
        cols_ = rows_ = static_cast<int>(std::floor(2.0 * d.radius / h_ + 1e-9)) + 1;
        origin_ = {d.center.x - d.radius, d.center.y - d.radius};
        const double r2 = d.radius * d.radius * (1.0 - 1e-12);
        fill([&](int i, int j) {
            const double dx = i * h_ - d.radius, dy = j * h_ - d.radius;
            return dx * dx + dy * dy < r2;
        });
    }

    void layout(const Rectangle& r) {
        if (!(r.width > 0.0) || !(r.height > 0.0))
            throw ResolutionError("grid: rectangle sides must be > 0");
        inradius_ = 0.5 * std::min(r.width, r.height);
        ball_center_ = {0.5 * r.width, 0.5 * r.height};
        cols_ = static_cast<int>(std::floor(r.width / h_ + 1e-9)) + 1;
        rows_ = static_cast<int>(std::floor(r.height / h_ + 1e-9)) + 1;
        origin_ = {0.0, 0.0};
        const double eps = 1e-9 * h_;
        fill([&](int i, int j) {
            const double x = i * h_, y = j * h_;
            return x > eps && y > eps && x < r.width - eps && y < r.height - eps;
        });
    }

    template <class Inside>
    void fill(Inside&& inside) {
        map_.assign(static_cast<std::size_t>(cols_) * rows_, kOutside);
        for (int j = 0; j < rows_; ++j)
            for (int i = 0; i < cols_; ++i)
                if (inside(i, j)) {
                    map_[static_cast<std::size_t>(j) * cols_ + i] = static_cast<int>(nodes_.size());
                    nodes_.push_back({origin_.x + i * h_, origin_.y + j * h_});
                    lattice_.push_back({i, j});
                }
    }

    void link() {
        nbr_.resize(nodes_.size());
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            const auto [i, j] = lattice_[n];
            nbr_[n] = {index(i + 1, j), index(i - 1, j), index(i, j + 1), index(i, j - 1)};
        }
    }

    DomainSpec spec_;
    double h_ = 0.0;
    int cols_ = 0;
    int rows_ = 0;
    Point origin_{};
    double inradius_ = 0.0;
    Point ball_center_{};
    std::vector<int> map_;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 2>> lattice_;
    std::vector<std::array<int, 4>> nbr_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// One value per interior node of a grid.
class Field {
public:
    Field() = default;
    explicit Field(GridPtr grid) : grid_(std::move(grid)), v_(grid_->size(), 0.0) {}
    Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), v_(std::move(values)) {
        if (v_.size() != grid_->size())
            throw DomainError("field: value count " + std::to_string(v_.size()) +
                              " does not match interior node count " + std::to_string(grid_->size()));
    }

    template <class Fn>
    static Field sample(GridPtr grid, Fn&& fn) {
        Field u(grid);
        for (std::size_t i = 0; i < u.size(); ++i) u.v_[i] = fn(grid->node(i));
        return u;
    }

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::size_t size() const noexcept { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::span<const double> values() const noexcept { return v_; }
    std::span<double> values() noexcept { return v_; }

    Field& operator+=(const Field& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Field& operator*=(double c) {
        for (double& x : v_) x *= c;
        return *this;
    }
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double c, Field a) { return a *= c; }
    friend Field operator*(Field a, double c) { return a *= c; }

    /// this += c * o
    Field& axpy(double c, const Field& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += c * o.v_[i];
        return *this;
    }

    double max() const {
        double m = -INFINITY;
        for (double x : v_) m = std::max(m, x);
        return m;
    }
    double min() const {
        double m = INFINITY;
        for (double x : v_) m = std::min(m, x);
        return m;
    }
    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

private:
    GridPtr grid_;
    std::vector<double> v_;
};

inline Field positive_part(Field u) {
    for (double& x : u.values()) x = std::max(x, 0.0);
    return u;
}

/// -Delta_h u with zero values outside the mask.
inline Field apply_neg_laplacian(const Field& u) {
    const Grid& g = u.grid();
    const double inv_h2 = 1.0 / (g.h() * g.h());
    Field out(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double s = 4.0 * u[i];
        for (int n : g.neighbors(i))
            if (n != Grid::kOutside) s -= u[static_cast<std::size_t>(n)];
        out[i] = s * inv_h2;
    }
    return out;
}

/// Plain Euclidean dot product of the node values.
inline double dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// L2 inner product with cell weight h^2.
inline double l2_inner(const Field& a, const Field& b) { return dot(a, b) * a.grid().cell_area(); }
inline double l2_norm(const Field& a) { return std::sqrt(l2_inner(a, a)); }

/// Discrete Dirichlet inner product: sum over grid edges of
/// (a_i - a_j)(b_i - b_j), edges to the outside counting with zero data.
inline double dirichlet_inner(const Field& a, const Field& b) {
    const Grid& g = a.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& nb = g.neighbors(i);
        // East and north edges once each; outside neighbours on all four sides.
        for (int k = 0; k < 4; ++k) {
            const int n = nb[k];
            if (n == Grid::kOutside) {
                s += a[i] * b[i];
            } else if (k == 0 || k == 2) {
                const auto j = static_cast<std::size_t>(n);
                s += (a[i] - a[j]) * (b[i] - b[j]);
            }
        }
    }
    return s;
}

/// ||u||^2 = integral of |grad u|^2, discretized by the 5-point form.
inline double dirichlet_energy(const Field& u) { return dirichlet_inner(u, u); }

/// Midpoint quadrature: sum of g(x_i, u_i) h^2 over interior nodes.
template <class G>
double integrate(G&& g, const Field& u) {
    const Grid& grid = u.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += g(grid.node(i), u[i]);
    return s * grid.cell_area();
}

struct PoissonStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Solves -Delta_h v = rhs by diagonally preconditioned conjugate gradients,
/// stopping once ||rhs + Delta_h v||_2 <= tol ||rhs||_2.
///
/// `guess` (same grid) warm-starts the iteration. Throws SolverError when
/// the cap of 50 sqrt(N) + 1000 iterations is hit.
inline Field poisson_solve(const Field& rhs, double tol, const Field* guess = nullptr,
                           PoissonStats* stats = nullptr) {
    if (!(tol > 0.0)) throw DomainError("poisson_solve: tol must be > 0");
    const Grid& g = rhs.grid();
    const std::size_t n = rhs.size();
    const double bnorm = std::sqrt(dot(rhs, rhs));
    Field x(rhs.grid_ptr());
    if (bnorm == 0.0) {
        if (stats) *stats = {};
        return x;
    }
    if (guess) x = *guess;
    const double inv_diag = g.h() * g.h() / 4.0;
    const int cap = static_cast<int>(50.0 * std::sqrt(static_cast<double>(n))) + 1000;
    const double target = tol * bnorm;

    int it = 0;
    double rnorm = 0.0;
    // Outer loop re-seeds the residual from scratch to shed recurrence drift.
    for (int restart = 0; restart < 4; ++restart) {
        Field r = rhs - apply_neg_laplacian(x);
        rnorm = std::sqrt(dot(r, r));
        if (rnorm <= target) break;
        Field z = r * inv_diag;
        Field p = z;
        double rz = dot(r, z);
        while (it < cap) {
            const Field ap = apply_neg_laplacian(p);
            const double alpha = rz / dot(p, ap);
            x.axpy(alpha, p);
            r.axpy(-alpha, ap);
            ++it;
            rnorm = std::sqrt(dot(r, r));
            if (rnorm <= target) break;
            z = r * inv_diag;
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        if (it >= cap) break;
    }
    const Field r = rhs - apply_neg_laplacian(x);
    rnorm = std::sqrt(dot(r, r));
    if (stats) *stats = {it, rnorm / bnorm};
    if (rnorm > target * (1.0 + 1e-6))
        throw SolverError("poisson_solve: no convergence after " + std::to_string(it) +
                              " iterations, relative residual " + std::to_string(rnorm / bnorm),
                          rnorm / bnorm);
    return x;
}

/// CSV rows (x, y, value) for every interior node, header `x,y,u`.
inline void write_field_csv(const Field& u, std::ostream& os) {
    os << "x,y,u\n";
    char buf[96];
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point p = u.grid().node(i);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x, p.y, u[i]);
        os << buf;
    }
}

inline const char* shape_name(const DomainSpec& s) {
    return std::holds_alternative<Disk>(s) ? "disk" : "rectangle";
}

}  // namespace kirchhoff
