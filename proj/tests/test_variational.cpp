#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dicke/variational.hpp"

using namespace dicke;

namespace {

// Brute-force minimum of the real-section energy surface: dense scan plus
// local grid refinement. Independent of the coordinate-descent path.
double brute_force_min_energy(const ModelParams& p) {
    double a_lo = -2.0 * std::sqrt(2.0 * p.j), a_hi = 0.0;
    double z_lo = 0.0, z_hi = 0.999;
    double best_a = 0.0, best_z = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 8; ++round) {
        constexpr int n = 201;
        for (int ia = 0; ia < n; ++ia)
            for (int iz = 0; iz < n; ++iz) {
                const double a = a_lo + (a_hi - a_lo) * ia / (n - 1);
                const double z = z_lo + (z_hi - z_lo) * iz / (n - 1);
                const double h = energy_surface(p, {a, 0.0}, {z, 0.0});
                if (h < best) {
                    best = h;
                    best_a = a;
                    best_z = z;
                }
            }
        const double da = (a_hi - a_lo) / (n - 1), dz = (z_hi - z_lo) / (n - 1);
        a_lo = best_a - 2 * da;
        a_hi = best_a + 2 * da;
        z_lo = std::max(0.0, best_z - 2 * dz);
        z_hi = std::min(0.999, best_z + 2 * dz);
    }
    return best;
}

// Single coherent packet |alpha_e> (x) |z_e>: reference field for the
// entropy-excess construction.
struct SinglePacketEvaluator {
    double alpha_e, z_e, j;
    std::vector<Complex> oa;

    void begin(const std::vector<Complex>& alpha_nodes) {
        oa.resize(alpha_nodes.size());
        for (std::size_t i = 0; i < alpha_nodes.size(); ++i)
            oa[i] = glauber_overlap(alpha_nodes[i], {alpha_e, 0.0});
    }

    Eigen::MatrixXcd block(std::span<const Complex> z_nodes) const {
        Eigen::MatrixXcd s(static_cast<Eigen::Index>(oa.size()),
                           static_cast<Eigen::Index>(z_nodes.size()));
        for (std::size_t k = 0; k < z_nodes.size(); ++k) {
            const Complex oz = spin_overlap(z_nodes[k], {z_e, 0.0}, j);
            for (std::size_t a = 0; a < oa.size(); ++a)
                s(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k)) = oa[a] * oz;
        }
        return s;
    }
};

} // namespace

TEST_CASE("energy surface closed-form checks") {
    ModelParams p{1.0, 1.0, 0.7, 4.0};
    CHECK(energy_surface(p, {0.0, 0.0}, {0.0, 0.0}) == -4.0);
    // purely imaginary coordinates kill the coupling term
    const Complex ia{0.0, 1.3}, iz{0.0, 0.4};
    const double expect = p.omega * std::norm(ia) +
                          p.j * p.omega0 * (std::norm(iz) - 1.0) / (std::norm(iz) + 1.0);
    CHECK(energy_surface(p, ia, iz) == Catch::Approx(expect).epsilon(1e-14));
}

TEST_CASE("printed equilibrium formula") {
    ModelParams normal{1.0, 1.0, 0.3, 10.0};
    const Equilibrium eq0 = equilibrium_paper(normal);
    CHECK(eq0.alpha_e == 0.0);
    CHECK(eq0.z_e == 0.0);

    ModelParams p{1.0, 1.0, 1.0, 10.0};
    const Equilibrium eq = equilibrium_paper(p);
    CHECK(eq.z_e == Catch::Approx(std::sqrt(0.6)).epsilon(1e-12));
    CHECK(eq.alpha_e == Catch::Approx(-8.6602540378443864).epsilon(1e-12));
    CHECK(eq.source == EquilibriumSource::paper_formula);
}

TEST_CASE("minimizer equilibrium and its relation to the printed formula") {
    ModelParams p{1.0, 1.0, 1.0, 10.0};
    const Equilibrium eq = equilibrium_minimize(p);
    CHECK(eq.z_e == Catch::Approx(std::sqrt(0.6)).margin(1e-10));
    CHECK(eq.alpha_e == Catch::Approx(-4.3301270189221932).margin(1e-10));
    CHECK(eq.source == EquilibriumSource::minimizer);

    // z_e agrees between the sources; alpha_e differs by the documented factor 2
    const Equilibrium printed = equilibrium_paper(p);
    CHECK(eq.z_e == Catch::Approx(printed.z_e).margin(1e-8));
    CHECK(printed.alpha_e == Catch::Approx(2.0 * eq.alpha_e).margin(1e-9));

    // the minimizer is canonical: its energy is the lower one
    const double h_min = energy_surface(p, {eq.alpha_e, 0.0}, {eq.z_e, 0.0});
    const double h_printed =
        energy_surface(p, {printed.alpha_e, 0.0}, {printed.z_e, 0.0});
    CHECK(h_min < h_printed);
}

TEST_CASE("z_e from both sources agrees across the superradiant range") {
    for (double ratio : {1.2, 2.0, 4.0}) {
        ModelParams p{1.0, 1.0, 0.5 * ratio, 7.5};
        const Equilibrium a = equilibrium_minimize(p);
        const Equilibrium b = equilibrium_paper(p);
        CHECK(a.alpha_e <= 0.0);
        CHECK(a.z_e >= 0.0);
        CHECK(a.z_e < 1.0);
        CHECK(a.z_e == Catch::Approx(b.z_e).margin(1e-8));
    }
}

TEST_CASE("normal phase and threshold give the trivial equilibrium") {
    for (double lambda : {0.0, 0.2, 0.499, 0.5}) {
        ModelParams p{1.0, 1.0, lambda, 3.0};
        const Equilibrium eq = equilibrium_minimize(p);
        CHECK(eq.alpha_e == 0.0);
        CHECK(eq.z_e == 0.0);
    }
}

TEST_CASE("minimizer energy matches a brute-force surface scan") {
    ModelParams p{1.0, 1.0, 1.0, 10.0};
    const Equilibrium eq = equilibrium_minimize(p);
    const double h_min = energy_surface(p, {eq.alpha_e, 0.0}, {eq.z_e, 0.0});
    CHECK(h_min == Catch::Approx(-21.25).margin(1e-9));  // -(j w0/2)(L^2 + L^-2)
    CHECK(h_min == Catch::Approx(brute_force_min_energy(p)).margin(1e-6));
}

TEST_CASE("minimizer energy never exceeds origin or printed-formula energies") {
    for (double lambda : {0.1, 0.4, 0.5, 0.55, 0.8, 1.3}) {
        ModelParams p{1.0, 1.0, lambda, 4.5};
        const Equilibrium eq = equilibrium_minimize(p);
        const Equilibrium printed = equilibrium_paper(p);
        const double h_min = energy_surface(p, {eq.alpha_e, 0.0}, {eq.z_e, 0.0});
        CHECK(h_min <= energy_surface(p, {0.0, 0.0}, {0.0, 0.0}) + 1e-12);
        CHECK(h_min <=
              energy_surface(p, {printed.alpha_e, 0.0}, {printed.z_e, 0.0}) + 1e-12);
    }
}

TEST_CASE("cat norm values and the degenerate odd cat") {
    CHECK(cat_norm(0.0, 0.0, 3.0, +1) == Catch::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(cat_norm(0.0, 0.0, 3.0, -1), DegenerateStateError);
    CHECK(cat_norm(-4.3301270189221932, 0.7745966692414834, 10.0, +1) ==
          Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(cat_norm(0.0, 0.0, 3.0, 2), std::invalid_argument);
}

TEST_CASE("variational Husimi of the normal-phase cat is the bare coherent state") {
    const CatState c = make_cat_state(0.0, 0.0, 2.5);
    CHECK(husimi_variational(c, PhasePoint{}) == Catch::Approx(1.0).epsilon(1e-14));
    for (double x : {0.4, 1.1})
        for (double u : {0.0, 0.7}) {
            const PhasePoint pt{{x, 0.3}, {u, -0.2}};
            const double expect =
                std::exp(-std::norm(pt.alpha)) * std::pow(1.0 + std::norm(pt.z), -5.0);
            CHECK(husimi_variational(c, pt) == Catch::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("variational Husimi at a packet center carries half the weight") {
    ModelParams p{1.0, 1.0, 1.0, 10.0};
    const CatState c = make_cat_state(equilibrium_minimize(p));
    const double psi = husimi_variational(c, {{c.alpha_e, 0.0}, {c.z_e, 0.0}});
    const double k = cat_overlap(c.alpha_e, c.z_e, c.j);
    CHECK(psi == Catch::Approx(0.5 * (1.0 + k)).epsilon(1e-12));
    CHECK(psi == Catch::Approx(0.5).margin(1e-6));  // overlap is ~1e-17 here
}

TEST_CASE("variational Husimi is parity symmetric") {
    ModelParams p{1.0, 1.0, 0.9, 3.5};
    const CatState c = make_cat_state(equilibrium_minimize(p));
    for (double x : {-1.5, 0.3, 2.0})
        for (double u : {-0.6, 0.2}) {
            const PhasePoint pt{{x, 0.4}, {u, 0.1}};
            const PhasePoint mirrored{-pt.alpha, -pt.z};
            CHECK(husimi_variational(c, pt) ==
                  Catch::Approx(husimi_variational(c, mirrored)).margin(1e-12));
        }
}

TEST_CASE("analytic Wehrl entropy branches") {
    const VariationalWehrl normal = wehrl_variational_analytic({1.0, 1.0, 0.2, 5.0});
    CHECK(normal.regime == WehrlRegime::normal);
    REQUIRE(normal.value.has_value());
    CHECK(*normal.value == Catch::Approx(21.0 / 11.0).epsilon(1e-15));

    const VariationalWehrl far = wehrl_variational_analytic({1.0, 1.0, 1.0, 10.0});
    CHECK(far.regime == WehrlRegime::superradiant_far);
    REQUIRE(far.value.has_value());
    CHECK(*far.value ==
          Catch::Approx(1.0 + 20.0 / 21.0 + std::numbers::ln2).epsilon(1e-15));
    CHECK(far.cat_overlap < 1e-6);

    const VariationalWehrl mid = wehrl_variational_analytic({1.0, 1.0, 0.55, 10.0});
    CHECK(mid.regime == WehrlRegime::crossover);
    CHECK_FALSE(mid.value.has_value());
    CHECK(mid.cat_overlap >= 1e-6);
}

TEST_CASE("analytic Wehrl entropy approaches the thermodynamic limits") {
    const VariationalWehrl normal = wehrl_variational_analytic({1.0, 1.0, 0.1, 500.0});
    CHECK(*normal.value == Catch::Approx(2.0).margin(1e-3));
    const VariationalWehrl far = wehrl_variational_analytic({1.0, 1.0, 1.0, 500.0});
    CHECK(*far.value == Catch::Approx(2.0 + std::numbers::ln2).margin(1e-3));
}

TEST_CASE("quadrature Wehrl entropy matches the analytic branches") {
    // normal phase, j=5
    const CatState normal = make_cat_state(equilibrium_minimize({1.0, 1.0, 0.2, 5.0}));
    CHECK(wehrl_variational_quadrature(normal, 2) ==
          Catch::Approx(21.0 / 11.0).margin(1e-3));

    // far superradiant, j=10
    const CatState far = make_cat_state(equilibrium_minimize({1.0, 1.0, 1.0, 10.0}));
    CHECK(wehrl_variational_quadrature(far, 2) ==
          Catch::Approx(1.0 + 20.0 / 21.0 + std::numbers::ln2).margin(3e-3));
}

TEST_CASE("entropy excess of two well-separated packets is ln 2") {
    ModelParams p{1.0, 1.0, 1.0, 10.0};
    const Equilibrium eq = equilibrium_minimize(p);
    const CatState cat = make_cat_state(eq);
    const double w_cat = wehrl_variational_quadrature(cat, 2);

    // s=2 construction: one packet of the pair, same center
    SinglePacketEvaluator single{eq.alpha_e, eq.z_e, p.j, {}};
    const ConvergedIntegrals r =
        integrate_to_tolerance(single, default_quadrature_spec(eq.alpha_e), p.two_j(),
                               GridSymmetry::conjugation, ConvergeOn::entropy, 2);
    CHECK(r.norm == Catch::Approx(1.0).margin(1e-4));
    CHECK(w_cat - r.entropy == Catch::Approx(std::numbers::ln2).margin(2e-3));

    // and against the normal-phase quadrature value (the Fig.-2 plateau)
    const CatState normal = make_cat_state(equilibrium_minimize({1.0, 1.0, 0.2, 10.0}));
    const double w_normal = wehrl_variational_quadrature(normal, 2);
    CHECK(w_cat - w_normal == Catch::Approx(std::numbers::ln2).margin(2e-3));
}

TEST_CASE("sweep csv rows carry the crossover flag as data") {
    std::vector<VariationalSweepRow> rows;
    VariationalSweepRow a;
    a.lambda = 0.2;
    a.w_analytic = 1.9;
    a.w_quadrature = 1.9;
    rows.push_back(a);
    VariationalSweepRow b;
    b.lambda = 0.55;
    b.w_quadrature = 2.1;  // crossover: no analytic value
    rows.push_back(b);
    std::ostringstream out;
    write_variational_sweep_csv(rows, out);
    const std::string text = out.str();
    CHECK(text.rfind("lambda,alpha_e,z_e,W_analytic,W_quadrature,source\n", 0) == 0);
    CHECK(text.find("nan") != std::string::npos);
    CHECK(text.find("minimizer") != std::string::npos);
}
