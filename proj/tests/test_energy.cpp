#include "kirchhoff/energy.hpp"
#include "kirchhoff/moser.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace kirchhoff;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

EnergyContext cubic(const GridPtr& g) {
    return EnergyContext(KirchhoffCoefficient::constant(1), Nonlinearity::power(3), g);
}

double sum_u4(const Field& u) {
    double s = 0.0;
    for (double x : u.values())
        if (x > 0) s += x * x * x * x;
    return s * u.grid().cell_area();
}

Field bumps(const GridPtr& g, std::mt19937_64& rng, double scale = 1.0) {
    return Field(g, oracle::random_bumps(*g, rng)) * scale;
}

}  // namespace

TEST_CASE("energy of zero is zero", "[energy]") {
    const auto g = Grid::build(Disk{{0, 0}, 1}, 0.1);
    const EnergyContext ctx(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0), g);
    CHECK(energy(ctx, Field(g)) == 0.0);
    const Field grad = gradient(ctx, Field(g));
    CHECK(grad.max() == 0.0);
    CHECK(grad.min() == 0.0);
}

TEST_CASE("small multiples of the eigenfunction have positive energy", "[energy]") {
    const auto g = Grid::build(Rectangle{1, 1}, 1.0 / 16);
    const auto ctx = cubic(g);
    const auto [lambda, e] = oracle::smallest_eigenpair(*g);
    const Field u(g, e);
    const double mass = l2_inner(u, u);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const double I = energy(ctx, eps * u);
        CHECK(I > 0.0);
        CHECK_THAT(I, WithinRel(0.5 * eps * eps * lambda * mass, 5 * eps * eps));
    }
}

TEST_CASE("single-node energy in closed form", "[energy]") {
    const auto g = Grid::build(Rectangle{1, 1}, 0.25);
    const EnergyContext ctx(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0), g);
    Field u(g);
    const double s = 0.7;
    u[4] = s;  // the centre node
    // Four edges to zero neighbours, each (s/h)^2 h^2.
    const double t = 4.0 * s * s;
    const double F = s * s * s * s / 4.0 + s * s * (std::exp(s * s) - 1.0);
    CHECK_THAT(energy(ctx, u), WithinRel(0.5 * (t + t * t / 2.0) - F * 0.0625, 1e-14));
}

TEST_CASE("gradient agrees with central differences", "[energy]") {
    std::mt19937_64 rng(31);
    const auto g = Grid::build(Rectangle{1, 1}, 1.0 / 32);
    const EnergyContext ctxs[] = {
        EnergyContext(KirchhoffCoefficient::constant(1), Nonlinearity::paper_example(1.0), g),
        EnergyContext(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0), g),
    };
    for (const auto& ctx : ctxs)
        for (int k = 0; k < 5; ++k) {
            const Field u = bumps(g, rng), phi = bumps(g, rng);
            const double eps = 1e-5;
            const double fd = (energy(ctx, u + eps * phi) - energy(ctx, u - eps * phi)) / (2 * eps);
            const double pairing = dirichlet_inner(gradient(ctx, u, 1e-12), phi);
            CHECK_THAT(pairing, WithinRel(fd, 1e-5));
            CHECK_THAT(derivative_pairing(ctx, u, phi), WithinRel(pairing, 1e-8));
        }
}

TEST_CASE("cubic gradient is u minus the Poisson solve of u^3", "[energy]") {
    std::mt19937_64 rng(32);
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 16);
    const Field u = bumps(g, rng);
    Field cube(g);
    for (std::size_t i = 0; i < u.size(); ++i) cube[i] = u[i] * u[i] * u[i];
    const Field expected = u - poisson_solve(cube, 1e-12);
    const Field got = gradient(cubic(g), u, 1e-12);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK_THAT(got[i], WithinAbs(expected[i], 1e-10));
}

TEST_CASE("fibering derivative", "[energy]") {
    std::mt19937_64 rng(33);
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 16);
    const EnergyContext ctx(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0), g);
    const Field u = bumps(g, rng, 0.3);

    CHECK_THAT(fibering_derivative(ctx, u, 1.0), WithinRel(dirichlet_inner(gradient(ctx, u, 1e-12), u), 1e-8));

    const auto c = cubic(g);
    const double E = dirichlet_energy(u), Q = sum_u4(u);
    for (double t : {0.1, 0.5, 2.0, 7.0})
        CHECK_THAT(fibering_derivative(c, u, t), WithinRel(t * E - t * t * t * Q, 1e-12));

    for (double t : {1e-4, 1e-3, 1e-2}) CHECK(fibering_derivative(ctx, u, t) > 0.0);
    CHECK_THROWS_AS(fibering_derivative(ctx, u, 0.0), DomainError);
}

TEST_CASE("fibering derivative changes sign exactly once", "[energy]") {
    std::mt19937_64 rng(34);
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 16);
    const EnergyContext ctx(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0), g);
    for (int k = 0; k < 10; ++k) {
        const Field u = bumps(g, rng);
        const double ts = nehari_project(ctx, u).t_star;
        int changes = 0;
        double prev = fibering_derivative(ctx, u, ts * 1e-3);
        for (int j = 1; j <= 400; ++j) {
            const double t = ts * 1e-3 + (2.5 * ts) * j / 400.0;
            double v;
            try {
                v = fibering_derivative(ctx, u, t);
            } catch (const OverflowError&) {
                break;
            }
            if ((v > 0) != (prev > 0)) ++changes;
            prev = v;
        }
        CHECK(changes == 1);
    }
}

TEST_CASE("Nehari projection for the cubic model", "[energy]") {
    std::mt19937_64 rng(35);
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 16);
    const auto ctx = cubic(g);
    for (int k = 0; k < 10; ++k) {
        const Field u = bumps(g, rng);
        const double E = dirichlet_energy(u), Q = sum_u4(u);
        const auto p = nehari_project(ctx, u);
        CHECK_THAT(p.t_star, WithinRel(std::sqrt(E / Q), 1e-10));
        CHECK(std::abs(p.residual) <= kNehariTol * p.scale);
        CHECK_THAT(nehari_energy(ctx, u), WithinRel(E * E / (4 * Q), 1e-9));
        CHECK_THAT(nehari_project(ctx, p.v).t_star, WithinAbs(1.0, 1e-8));
        CHECK_THAT(nehari_project(ctx, 3.0 * u).t_star, WithinRel(p.t_star / 3.0, 1e-8));
        CHECK_THAT(nehari_energy(ctx, 0.2 * u), WithinRel(nehari_energy(ctx, u), 1e-8));
        CHECK(p.unique_root);
        CHECK_FALSE(p.sign_changing);
    }
}

TEST_CASE("Nehari projection with an affine coefficient", "[energy]") {
    // int u^4 / E^2 is scale-invariant along the ray but grows like R^2 with
    // the support, so a wide bump crosses the manifold and a narrow one does not.
    auto bump = [](double R) {
        const auto g = Grid::build(Disk{{0, 0}, R}, R / 20);
        return Field::sample(g, [R](Point p) { return std::max(0.0, 1.0 - (p.x * p.x + p.y * p.y) / (R * R)); });
    };
    const KirchhoffCoefficient aff = KirchhoffCoefficient::affine(1, 1);

    const Field wide = bump(10.0);
    const EnergyContext ctx(aff, Nonlinearity::power(3), wide.grid_ptr());
    const double E = dirichlet_energy(wide), Q = sum_u4(wide);
    REQUIRE(Q > E * E);
    CHECK_THAT(nehari_project(ctx, wide).t_star, WithinRel(std::sqrt(E / (Q - E * E)), 1e-10));

    const Field narrow = bump(1.0);
    const EnergyContext small(aff, Nonlinearity::power(3), narrow.grid_ptr());
    REQUIRE(sum_u4(narrow) < dirichlet_energy(narrow) * dirichlet_energy(narrow));
    try {
        nehari_project(small, narrow);
        FAIL("expected a projection error");
    } catch (const ProjectionError& e) {
        CHECK(e.derivative_sign() > 0);
        CHECK(e.largest_safe_t() > 1.0);
    }
}

TEST_CASE("Nehari energy of the Moser field is finite and positive", "[energy]") {
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 32);
    const EnergyContext ctx(KirchhoffCoefficient::affine(1, 1), Nonlinearity::paper_example(1.0), g);
    for (double n : {2.0, 8.0, 64.0}) {
        const double v = nehari_energy(ctx, moser_field(g, n));
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
    }
}

TEST_CASE("sign-changing rays are flagged", "[energy]") {
    std::mt19937_64 rng(37);
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 16);
    Field u = bumps(g, rng);
    u[0] = -0.5;
    CHECK(nehari_project(cubic(g), u).sign_changing);
    CHECK_THROWS_AS(nehari_project(cubic(g), Field(g)), DomainError);
}

TEST_CASE("unvalidated context reports a possibly non-unique root", "[energy]") {
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 8);
    const auto ctx = EnergyContext::unvalidated(KirchhoffCoefficient::constant(1), Nonlinearity::power(3), g);
    CHECK_FALSE(ctx.report().has_value());
    CHECK_FALSE(nehari_project(ctx, moser_field(g, 4)).unique_root);
}

TEST_CASE("hard hypothesis failure refuses the context", "[energy]") {
    const auto g = Grid::build(Disk{{0, 0}, 1}, 1.0 / 8);
    try {
        EnergyContext(KirchhoffCoefficient::constant(1), Nonlinearity::power(1), g);
        FAIL("expected HypothesisError");
    } catch (const HypothesisError& e) {
        CHECK(e.report().at(Hypothesis::f2).status == HypothesisStatus::fail);
        CHECK(std::string(e.what()).find("f2") != std::string::npos);
    }
}
