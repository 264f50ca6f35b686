#include "kirchhoff/grid.hpp"
#include "kirchhoff/model.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace kirchhoff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

Field random_field(const GridPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Field u(g);
    for (double& x : u.values()) x = N(rng);
    return u;
}

}  // namespace

TEST_CASE("grid geometry", "[grid]") {
    const auto r = Grid::build(Rectangle{2, 1}, 0.5);
    CHECK(r->inradius() == 0.5);
    CHECK(r->ball_center() == Point{1.0, 0.5});
    CHECK(r->size() == 3);

    const auto d = Grid::build(Disk{{0.3, -0.2}, 1.0}, 0.1);
    CHECK(d->inradius() == 1.0);
    CHECK(d->ball_center() == Point{0.3, -0.2});

    CHECK_THROWS_AS(Grid::build(Disk{{0, 0}, 0.05}, 0.1), ResolutionError);
    CHECK_THROWS_AS(Grid::build(Rectangle{1, 1}, 0.0), ResolutionError);
}

TEST_CASE("interior nodes lie strictly inside and index bijectively", "[grid]") {
    for (double h : {0.1, 1.0 / 16, 0.07}) {
        const auto g = Grid::build(Disk{{0.1, 0.2}, 0.8}, h);
        std::set<std::pair<int, int>> seen;
        for (std::size_t i = 0; i < g->size(); ++i) {
            const Point p = g->node(i);
            CHECK(std::hypot(p.x - 0.1, p.y - 0.2) < 0.8);
            const auto [c, r] = g->lattice(i);
            CHECK(g->index(c, r) == static_cast<int>(i));
            CHECK(seen.insert({c, r}).second);
        }
        const auto q = Grid::build(Rectangle{1.5, 0.7}, h);
        for (std::size_t i = 0; i < q->size(); ++i) {
            const Point p = q->node(i);
            CHECK((p.x > 0 && p.x < 1.5 && p.y > 0 && p.y < 0.7));
        }
    }
}

TEST_CASE("unit square with h = 1/32 has 31 x 31 interior nodes", "[grid]") {
    const auto g = Grid::build(Rectangle{1, 1}, 1.0 / 32);
    CHECK(g->size() == 31 * 31);
    CHECK(g->cols() == 33);
}

TEST_CASE("dirichlet energy of zero and of nonzero fields", "[grid]") {
    const auto g = Grid::build(Disk{{0, 0}, 1}, 0.1);
    CHECK(dirichlet_energy(Field(g)) == 0.0);
    std::mt19937_64 rng(21);
    for (int k = 0; k < 20; ++k) CHECK(dirichlet_energy(random_field(g, rng)) > 0.0);
}

TEST_CASE("dirichlet form equals u . (-Delta_h u) h^2", "[grid]") {
    std::mt19937_64 rng(22);
    for (const DomainSpec& spec : {DomainSpec{Disk{{0, 0}, 1}}, DomainSpec{Rectangle{1.3, 0.9}}}) {
        const auto g = Grid::build(spec, 1.0 / 20);
        for (int k = 0; k < 10; ++k) {
            const Field u = random_field(g, rng);
            const auto lap = oracle::neg_laplacian(*g, {u.values().begin(), u.values().end()});
            double form = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) form += u[i] * lap[i];
            form *= g->cell_area();
            CHECK_THAT(dirichlet_energy(u), WithinRel(form, 1e-12));
            const Field a = apply_neg_laplacian(u);
            for (std::size_t i = 0; i < u.size(); ++i) CHECK_THAT(a[i], WithinAbs(lap[i], 1e-9 * (1 + std::abs(lap[i]))));
        }
    }
}

TEST_CASE("negative Laplacian is symmetric", "[grid]") {
    std::mt19937_64 rng(23);
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 24);
    for (int k = 0; k < 20; ++k) {
        const Field u = random_field(g, rng), v = random_field(g, rng);
        const double a = dot(apply_neg_laplacian(u), v), b = dot(u, apply_neg_laplacian(v));
        CHECK_THAT(a, WithinAbs(b, 1e-12 * (std::abs(a) + std::abs(b))));
    }
}

TEST_CASE("first eigenvalue of the square matches the stencil closed form", "[grid]") {
    for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        const auto g = Grid::build(Rectangle{1, 1}, h);
        const Field e = Field::sample(g, [](Point p) { return std::sin(pi * p.x) * std::sin(pi * p.y); });
        const double ratio = dirichlet_energy(e) / l2_inner(e, e);
        const double closed = 2.0 * (2.0 - 2.0 * std::cos(pi * h)) / (h * h);
        CHECK_THAT(ratio, WithinRel(closed, 1e-12));
        CHECK(std::abs(ratio - 2 * pi * pi) < 2.0 * pi * pi * pi * pi * h * h / 12.0 * 1.01);
    }
}

TEST_CASE("eigenfunction energy converges at second order", "[grid]") {
    std::vector<double> err;
    for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        const auto g = Grid::build(Rectangle{1, 1}, h);
        const Field e = Field::sample(g, [](Point p) { return std::sin(pi * p.x) * std::sin(pi * p.y); });
        err.push_back(std::abs(dirichlet_energy(e) - pi * pi / 2.0));
    }
    for (std::size_t k = 1; k < err.size(); ++k) CHECK(std::log2(err[k - 1] / err[k]) >= 1.8);
}

TEST_CASE("bump energy on the disk approaches the analytic value", "[grid]") {
    // u = 1 - r^2 on the unit disk: |grad u|^2 = 4 r^2, integral 2 pi.
    std::vector<double> e;
    for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        const auto g = Grid::build(Disk{{0, 0}, 1}, h);
        e.push_back(dirichlet_energy(Field::sample(g, [](Point p) { return 1.0 - p.x * p.x - p.y * p.y; })));
    }
    CHECK_THAT(e.back(), WithinRel(2 * pi, 0.02));
    CHECK_THAT(oracle::richardson(e[1], e[2]), WithinRel(2 * pi, 0.02));
}

TEST_CASE("integrate is the node sum times h^2", "[grid]") {
    const auto sq = Grid::build(Rectangle{1, 1}, 1.0 / 200);
    const Field one = Field::sample(sq, [](Point) { return 1.0; });
    CHECK_THAT(integrate([](Point, double) { return 1.0; }, one), WithinAbs(1.0, 2.0 / 200));
    const auto rect = Grid::build(Rectangle{2, 1}, 1.0 / 200);
    const Field u = Field::sample(rect, [](Point) { return 1.0; });
    CHECK_THAT(integrate([](Point, double s) { return s * s; }, u), WithinAbs(2.0, 3.0 * 2 / 200));
}

TEST_CASE("integrate F of a bounded field converges under refinement", "[grid]") {
    const auto nl = Nonlinearity::paper_example(1.0);
    auto value = [&](double h) {
        const auto g = Grid::build(Rectangle{1, 1}, h);
        const Field u = Field::sample(g, [](Point p) { return std::sin(pi * p.x) * std::sin(pi * p.y); });
        return integrate([&](Point x, double s) { return nl.F(x, s); }, u);
    };
    const double fine = value(1.0 / 256);
    CHECK(std::isfinite(fine));
    CHECK_THAT(value(1.0 / 128), WithinRel(fine, 1e-3));
}

TEST_CASE("overflow from the integrand propagates", "[grid]") {
    const auto g = Grid::build(Rectangle{1, 1}, 0.25);
    const auto nl = Nonlinearity::paper_example(1.0);
    const Field u = Field::sample(g, [](Point) { return 40.0; });
    CHECK_THROWS_AS(integrate([&](Point x, double s) { return nl.F(x, s); }, u), OverflowError);
}

TEST_CASE("poisson solve", "[grid]") {
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 32);
    SECTION("zero right-hand side") {
        const Field v = poisson_solve(Field(g), 1e-10);
        CHECK(v.max() == 0.0);
        CHECK(v.min() == 0.0);
    }
    SECTION("residual within tolerance") {
        std::mt19937_64 rng(24);
        for (int k = 0; k < 5; ++k) {
            const Field b = random_field(g, rng);
            PoissonStats st;
            const Field v = poisson_solve(b, 1e-10, nullptr, &st);
            const Field r = apply_neg_laplacian(v) - b;
            CHECK(std::sqrt(dot(r, r)) <= 1e-10 * std::sqrt(dot(b, b)) * 1.0001);
            CHECK(st.relative_residual <= 1e-10);
        }
    }
    SECTION("discrete eigenpair from power iteration") {
        const auto sq = Grid::build(Rectangle{1, 1}, 1.0 / 16);
        const auto [lambda, e] = oracle::smallest_eigenpair(*sq);
        CHECK_THAT(lambda, WithinRel(2.0 * (2.0 - 2.0 * std::cos(pi / 16)) * 256.0, 1e-10));
        Field rhs(sq, e);
        rhs *= lambda;
        const Field v = poisson_solve(rhs, 1e-12);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK_THAT(v[i], WithinAbs(e[i], 1e-9));
    }
}

TEST_CASE("unit-square Poisson centre value", "[grid]") {
    std::vector<double> c;
    for (double h : {1.0 / 32, 1.0 / 64}) {
        const auto g = Grid::build(Rectangle{1, 1}, h);
        const Field v = poisson_solve(Field::sample(g, [](Point) { return 1.0; }), 1e-11);
        c.push_back(v[static_cast<std::size_t>(g->index(g->cols() / 2, g->rows() / 2))]);
    }
    CHECK_THAT(c[1], WithinAbs(0.07367, 1e-4));
    CHECK_THAT(oracle::richardson(c[0], c[1]), WithinAbs(0.0736713, 2e-6));
}

TEST_CASE("field helpers", "[grid]") {
    const auto g = Grid::build(Rectangle{1, 1}, 0.5);
    Field u(g, {-2.0});
    CHECK(positive_part(u)[0] == 0.0);
    CHECK_THROWS_AS(Field(g, {1.0, 2.0}), DomainError);
    std::ostringstream os;
    write_field_csv(Field(g), os);
    CHECK(os.str() == "x,y,u\n0.5,0.5,0\n");
}

TEST_CASE("zero field on a three-node grid writes three rows", "[grid]") {
    const auto g = Grid::build(Rectangle{2, 1}, 0.5);
    std::ostringstream os;
    write_field_csv(Field(g), os);
    CHECK(os.str() == "x,y,u\n0.5,0.5,0\n1,0.5,0\n1.5,0.5,0\n");
}
