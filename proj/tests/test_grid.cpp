#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "raftmin/grid.hpp"
#include "test_support.hpp"

using namespace raftmin;
using namespace raftmin::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("eigenvalue table matches the basis conventions") {
    // periodic (-1,1): the plane-wave family cos(2 pi n x) sits at harmonic 2n
    auto periodic = Grid::make({2.0}, {64}, BoundaryKind::periodic);
    CHECK(paper_mode_harmonic(*periodic, 1) == 2);
    CHECK(periodic->axis_eigenvalue(0, 2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));

    auto neumann = Grid::make({1.0}, {16}, BoundaryKind::neumann);
    CHECK(neumann->axis_eigenvalue(0, 0) == 0.0);
    CHECK(neumann->axis_eigenvalue(0, 3) == doctest::Approx(3.0 * kPi).epsilon(1e-14));

    // d=2, extents (1,1), k=(1,2): lambda^2 = pi^2 (1 + 4)
    auto grid2 = Grid::make({1.0, 1.0}, {8, 8}, BoundaryKind::neumann);
    const double l1 = grid2->axis_eigenvalue(0, 1);
    const double l2 = grid2->axis_eigenvalue(1, 2);
    CHECK(l1 * l1 + l2 * l2 == doctest::Approx(kPi * kPi * 5.0).epsilon(1e-14));

    // strictly increasing along each axis harmonic
    for (int k = 1; k < 8; ++k) {
        CHECK(grid2->axis_eigenvalue(0, k) > grid2->axis_eigenvalue(0, k - 1));
    }
}

TEST_CASE("grid construction rejects bad input") {
    CHECK_THROWS_AS(Grid::make({2.0}, {3}, BoundaryKind::neumann), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make({-1.0}, {16}, BoundaryKind::neumann), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make({1.0, 1.0, 1.0, 1.0}, {8, 8, 8, 8}, BoundaryKind::neumann),
                    std::invalid_argument);
    CHECK_THROWS_AS(Grid::make({1.0}, {8, 8}, BoundaryKind::neumann), std::invalid_argument);
}

TEST_CASE("constant fields transform to the zero mode") {
    for (BoundaryKind kind : {BoundaryKind::neumann, BoundaryKind::periodic}) {
        auto grid = Grid::make({2.0, 1.5}, {16, 12}, kind);
        SpectralField spec = transform(ScalarField::constant(grid, 3.25));
        CHECK(spec[0] == doctest::Approx(3.25 * std::sqrt(grid->volume())).epsilon(1e-13));
        double off = 0.0;
        for (std::size_t i = 1; i < spec.size(); ++i) off = std::max(off, std::abs(spec[i]));
        CHECK(off < 1e-12);
    }
}

TEST_CASE("plane-wave modes occupy a single coefficient slot") {
    auto periodic = Grid::make({2.0}, {64}, BoundaryKind::periodic);
    SpectralField spec = transform(paper_mode(periodic, 3));
    const int slot = paper_mode_harmonic(*periodic, 3);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (static_cast<int>(i) == slot) {
            CHECK(std::abs(spec[i]) > 0.5);
        } else {
            CHECK(std::abs(spec[i]) < 1e-12);
        }
    }

    auto neumann = Grid::make({2.0}, {64}, BoundaryKind::neumann);
    SpectralField nspec = transform(paper_mode(neumann, 3));
    const int nslot = paper_mode_harmonic(*neumann, 3);
    CHECK(nslot == 12);
    for (std::size_t i = 0; i < nspec.size(); ++i) {
        if (static_cast<int>(i) == nslot) {
            CHECK(std::abs(nspec[i]) > 0.5);
        } else {
            CHECK(std::abs(nspec[i]) < 1e-12);
        }
    }
}

TEST_CASE("round trip and Parseval on random fields") {
    for (BoundaryKind kind : {BoundaryKind::neumann, BoundaryKind::periodic}) {
        for (int d = 1; d <= 3; ++d) {
            std::vector<double> ext(static_cast<std::size_t>(d), 2.0);
            std::vector<int> n(static_cast<std::size_t>(d), d == 3 ? 8 : 32);
            auto grid = Grid::make(ext, n, kind);
            ScalarField f = random_pointwise(grid, 42 + static_cast<std::uint64_t>(d));

            SpectralField spec = transform(f);
            ScalarField back = inverse_transform(spec);
            double err = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                err = std::max(err, std::abs(back[i] - f[i]));
                scale = std::max(scale, std::abs(f[i]));
            }
            CHECK(err / scale < 1e-12);

            double coeff_sq = 0.0;
            for (std::size_t i = 0; i < spec.size(); ++i) coeff_sq += spec[i] * spec[i];
            const double field_sq = inner(f, f);
            CHECK(rel_err(coeff_sq, field_sq) < 1e-10);
        }
    }
}

TEST_CASE("quadrature matches dense independent integration") {
    auto grid = Grid::make({2.0}, {128}, BoundaryKind::periodic);

    // integral of cos^2(2 pi x) over (-1,1) is 1
    ScalarField psi1 = paper_mode(grid, 1);
    CHECK(inner(psi1, psi1) == doctest::Approx(1.0).epsilon(1e-12));

    // orthogonality <psi_1, psi_2> = 0, cross-checked by Simpson
    ScalarField psi2 = paper_mode(grid, 2);
    const double oracle = simpson_oracle(
        [](double x) { return std::cos(2.0 * kPi * x) * std::cos(4.0 * kPi * x); }, -1.0, 1.0);
    CHECK(std::abs(oracle) < 1e-10);
    CHECK(std::abs(inner(psi1, psi2)) < 1e-10);

    auto square = Grid::make({1.0, 1.0}, {16, 16}, BoundaryKind::neumann);
    CHECK(integrate(ScalarField::constant(square, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    // discrete orthonormality of sampled basis functions
    for (int i : {0, 1, 3}) {
        for (int j : {0, 1, 3}) {
            ScalarField bi = cosine_mode(square, {i, 2});
            ScalarField bj = cosine_mode(square, {j, 2});
            const double ip = inner(bi, bj);
            const double norm_i = i == 0 ? 0.5 : 0.25;  // product of per-axis cos^2 integrals
            if (i == j) {
                CHECK(ip == doctest::Approx(norm_i).epsilon(1e-12));
            } else {
                CHECK(std::abs(ip) < 1e-10);
            }
        }
    }
}

TEST_CASE("inner rejects mismatched grids") {
    auto a = Grid::make({2.0}, {16}, BoundaryKind::neumann);
    auto b = Grid::make({2.0}, {32}, BoundaryKind::neumann);
    CHECK_THROWS_AS(inner(ScalarField::zeros(a), ScalarField::zeros(b)), std::invalid_argument);
}

TEST_CASE("fields reject non-finite values") {
    auto grid = Grid::make({2.0}, {16}, BoundaryKind::neumann);
    std::vector<double> values(grid->size(), 0.0);
    values[3] = std::nan("");
    CHECK_THROWS_AS(ScalarField(grid, std::move(values)), std::invalid_argument);
}

TEST_CASE("mixed-boundary grids keep per-axis conventions") {
    std::vector<AxisSpec> axes{{-0.5, 1.0, 32, BoundaryKind::neumann},
                               {-0.5, 1.0, 16, BoundaryKind::periodic}};
    auto grid = Grid::make_axes(axes);
    CHECK(grid->axis_eigenvalue(0, 1) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(grid->axis_eigenvalue(1, 1) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK_THROWS_AS(grid->boundary(), std::logic_error);

    ScalarField f = random_pointwise(grid, 9);
    ScalarField back = inverse_transform(transform(f));
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(std::abs(back[i] - f[i]) < 1e-12);
    }
}
