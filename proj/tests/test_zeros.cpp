#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dicke/zeros.hpp"

using namespace dicke;

namespace {

ZeroSurface surface(double lambda, double j, int l) {
    return make_zero_surface(equilibrium_minimize({1.0, 1.0, lambda, j}), l);
}

} // namespace

TEST_CASE("zero surface at z = 0 gives the pure imaginary offset") {
    const ZeroSurface s = surface(1.0, 10.0, 0);
    const Complex a = zero_surface_alpha(s, {0.0, 0.0});
    CHECK(a.real() == Catch::Approx(0.0).margin(1e-14));
    CHECK(a.imag() == Catch::Approx(-0.36275987284684357).epsilon(1e-10));

    // the point really is a zero: compare against the packet-center value
    const CatState cat = make_cat_state(s.equilibrium);
    const double peak = husimi_variational(cat, {{cat.alpha_e, 0.0}, {cat.z_e, 0.0}});
    CHECK(husimi_variational(cat, {a, {0.0, 0.0}}) < 1e-20 * peak);
}

TEST_CASE("normal phase has no zero surfaces") {
    const Equilibrium eq = equilibrium_minimize({1.0, 1.0, 0.3, 10.0});
    CHECK_THROWS_AS(make_zero_surface(eq, 0), NoZerosError);
    CHECK_THROWS_AS(fringe_lines(eq, 10.0, 0), NoZerosError);
}

TEST_CASE("log branch points are rejected as singular input") {
    const ZeroSurface s = surface(1.0, 10.0, 0);
    const double zb = 1.0 / s.equilibrium.z_e;
    CHECK_THROWS_AS(zero_surface_alpha(s, {zb, 0.0}), SingularInputError);
    CHECK_THROWS_AS(zero_surface_alpha(s, {-zb, 0.0}), SingularInputError);
}

TEST_CASE("sampled surface points annihilate the variational Husimi") {
    const Equilibrium eq = equilibrium_minimize({1.0, 1.0, 1.0, 10.0});
    const CatState cat = make_cat_state(eq);
    const double peak = husimi_variational(cat, {{cat.alpha_e, 0.0}, {cat.z_e, 0.0}});
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    for (int l = -2; l <= 2; ++l) {
        const ZeroSurface s = make_zero_surface(eq, l);
        for (int rep = 0; rep < 100; ++rep) {
            const Complex z{unif(rng), unif(rng)};
            const Complex a = zero_surface_alpha(s, z);
            CHECK(husimi_variational(cat, {a, z}) <= 1e-18 * peak);
        }
    }
}

TEST_CASE("branch parity: l and -(l+1) surfaces are conjugate") {
    const Equilibrium eq = equilibrium_minimize({1.0, 1.0, 0.9, 5.0});
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-0.7, 0.7);
    for (int l : {0, 1, 3}) {
        const ZeroSurface sl = make_zero_surface(eq, l);
        const ZeroSurface sc = make_zero_surface(eq, -(l + 1));
        for (int rep = 0; rep < 20; ++rep) {
            const Complex z{unif(rng), unif(rng)};
            const Complex a = zero_surface_alpha(sl, z);
            const Complex b = zero_surface_alpha(sc, std::conj(z));
            CHECK(std::abs(b - std::conj(a)) < 1e-13);
        }
    }
}

TEST_CASE("conformal image of the real-z line has constant imaginary part") {
    const ZeroSurface s = surface(1.0, 10.0, 0);
    const double expect_im =
        std::numbers::pi / (2.0 * s.equilibrium.alpha_e);
    for (double t : {-0.9, -0.4, 0.0, 0.3, 0.8}) {
        const Complex a = zero_surface_alpha(s, {t, 0.0});
        CHECK(a.imag() == Catch::Approx(expect_im).epsilon(1e-12));
    }
}

TEST_CASE("conformal grid symmetry under z -> -z") {
    const ZeroSurface s = surface(1.0, 10.0, 1);
    const Complex offset{0.0, std::numbers::pi * 3.0 / s.equilibrium.alpha_e};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-0.9, 0.9);
    for (int rep = 0; rep < 30; ++rep) {
        const Complex z{unif(rng), unif(rng)};
        const Complex a = zero_surface_alpha(s, z);
        const Complex am = zero_surface_alpha(s, -z);
        CHECK(std::abs(am - (offset - a)) < 1e-12);
    }
}

TEST_CASE("conformal grid stays smooth inside the default window") {
    const ZeroSurface s = surface(1.0, 10.0, 0);
    const auto curves = conformal_grid(s);
    CHECK(curves.size() == 42);  // 21 lines per family, no cuts inside [-1,1]^2
    const double threshold = std::numbers::pi * s.j / std::abs(s.equilibrium.alpha_e);
    for (const auto& c : curves) {
        CHECK(c.points.size() >= 2);
        for (std::size_t k = 1; k < c.points.size(); ++k)
            CHECK(std::abs(c.points[k].alpha - c.points[k - 1].alpha) <= threshold);
    }
}

TEST_CASE("branch cuts split curves into segments") {
    const ZeroSurface s = surface(1.0, 10.0, 0);
    ConformalGridSpec grid;
    grid.z_min = -1.6;
    grid.z_max = 1.6;
    grid.lines_per_family = 3;  // includes the Im z = 0 line through both cuts
    grid.samples_per_line = 301;
    const auto curves = conformal_grid(s, grid);
    CHECK(curves.size() > 6);  // more polylines than grid lines: cut crossings split
    int horizontal_segments = 0;
    for (const auto& c : curves)
        if (c.family == LineFamily::horizontal) ++horizontal_segments;
    CHECK(horizontal_segments > 3);
    // distinct ids per segment
    for (std::size_t i = 1; i < curves.size(); ++i)
        CHECK(curves[i].line_id > curves[i - 1].line_id);
}

TEST_CASE("csv export of the curve family") {
    const ZeroSurface s = surface(1.0, 10.0, 0);
    ConformalGridSpec grid;
    grid.lines_per_family = 2;
    grid.samples_per_line = 5;
    std::ostringstream out;
    write_curves_csv(conformal_grid(s, grid), out);
    const std::string text = out.str();
    CHECK(text.rfind("family,line_id,re_alpha,im_alpha,re_z,im_z\n", 0) == 0);
    CHECK(text.find("vertical") != std::string::npos);
    CHECK(text.find("horizontal") != std::string::npos);
}

TEST_CASE("fringe lines of the high-j limit") {
    const Equilibrium eq = equilibrium_minimize({1.0, 1.0, 1.0, 10.0});
    const FringeLines f = fringe_lines(eq, 10.0, 0);
    CHECK(f.slope == Catch::Approx(0.8).epsilon(1e-10));
    CHECK(f.intercept_position == 0.0);
    CHECK(f.intercept_momentum == Catch::Approx(-0.36275987284684357).epsilon(1e-10));

    const nlohmann::json doc = to_json(f);
    CHECK(doc.at("l") == 0);
    CHECK(doc.at("slope").get<double>() == Catch::Approx(0.8).epsilon(1e-10));
    CHECK(doc.contains("intercept_position"));
    CHECK(doc.contains("intercept_momentum"));
}

TEST_CASE("small-z surface points approach the fringe lines at high j") {
    const Equilibrium eq = equilibrium_minimize({1.0, 1.0, 1.0, 50.0});
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-0.01, 0.01);
    for (int l : {0, 1}) {
        const ZeroSurface s = make_zero_surface(eq, l);
        const FringeLines f = fringe_lines(eq, 50.0, l);
        for (int rep = 0; rep < 50; ++rep) {
            const Complex z{unif(rng), unif(rng)};
            const Complex beta = std::sqrt(100.0) * z;
            const Complex a = zero_surface_alpha(s, z);
            const Complex line{f.slope * beta.real(),
                               f.slope * beta.imag() + f.intercept_momentum};
            CHECK(std::abs(a - line) < 1e-3);
        }
    }
}

TEST_CASE("fringe count in a momentum window grows with coupling and spin") {
    auto count_in_window = [](double lambda, double j, double window) {
        const Equilibrium eq = equilibrium_minimize({1.0, 1.0, lambda, j});
        int count = 0;
        for (int l = -200; l <= 200; ++l)
            if (std::abs(fringe_lines(eq, j, l).intercept_momentum) <= window) ++count;
        return count;
    };
    CHECK(count_in_window(1.0, 10.0, 3.0) > count_in_window(0.7, 10.0, 3.0));
    CHECK(count_in_window(1.0, 20.0, 3.0) > count_in_window(1.0, 10.0, 3.0));
}
