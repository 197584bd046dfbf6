// variational.hpp — parity-adapted coherent-state (Schroedinger-cat)
// approximation of the Dicke ground state: the product-state energy
// surface, its equilibrium points (printed formula and numerical
// minimizer), cat-state normalization, the variational Husimi
// distribution, and its Wehrl entropy in closed form and by quadrature.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dicke/coherent.hpp"
#include "dicke/errors.hpp"
#include "dicke/io.hpp"
#include "dicke/model.hpp"
#include "dicke/quadrature.hpp"

namespace dicke {

// ------------------------------ energy surface -------------------------------

// <alpha,z|H|alpha,z>: the four-dimensional product-state energy surface.
inline double energy_surface(const ModelParams& p, Complex alpha, Complex z) {
    const double z2 = std::norm(z);
    const double atom = p.j * p.omega0 * (z2 - 1.0) / (z2 + 1.0);
    const double coupling = p.lambda * std::sqrt(2.0 * p.j) * (2.0 * alpha.real()) *
                            (2.0 * z.real()) / (z2 + 1.0);
    return p.omega * std::norm(alpha) + atom + coupling;
}

// -------------------------------- equilibria ---------------------------------

enum class EquilibriumSource { paper_formula, minimizer };

struct Equilibrium {
    double alpha_e = 0.0;
    double z_e = 0.0;
    EquilibriumSource source = EquilibriumSource::minimizer;
    ModelParams params;
};

// Equilibrium points as printed: alpha_e = -sqrt(2j) sqrt(w0/w) (l/lc)
// sqrt(1-(l/lc)^-4), z_e = sqrt((L - 1/L)/(L + 1/L)) with L = lambda/lambda_c.
inline Equilibrium equilibrium_paper(const ModelParams& p) {
    p.validate();
    Equilibrium eq;
    eq.source = EquilibriumSource::paper_formula;
    eq.params = p;
    const double lc = critical_coupling(p);
    if (p.lambda < lc) return eq;
    const double big_l = p.lambda / lc;
    eq.alpha_e = -std::sqrt(2.0 * p.j) * std::sqrt(p.omega0 / p.omega) * big_l *
                 std::sqrt(1.0 - std::pow(big_l, -4.0));
    eq.z_e = std::sqrt((big_l - 1.0 / big_l) / (big_l + 1.0 / big_l));
    return eq;
}

namespace detail {

// Exact single-coordinate minimizers of the real section of the surface.
// In alpha the surface is an upward parabola; in z the stationary equation
// is quadratic with root product -1, and for alpha < 0 the positive root
// (inside [0,1)) is the minimum.
inline double best_alpha_given_z(const ModelParams& p, double z) {
    return -2.0 * p.lambda * std::sqrt(2.0 * p.j) * z / (p.omega * (1.0 + z * z));
}

inline double best_z_given_alpha(const ModelParams& p, double alpha) {
    const double q = p.lambda * std::sqrt(2.0 * p.j) * alpha;
    if (q == 0.0) return 0.0;
    const double jw = p.j * p.omega0;
    return (jw - std::sqrt(jw * jw + 4.0 * q * q)) / (2.0 * q);
}

inline double surface_grad_norm(const ModelParams& p, double alpha, double z) {
    const double s = 1.0 + z * z;
    const double ga = 2.0 * p.omega * alpha + 4.0 * p.lambda * std::sqrt(2.0 * p.j) * z / s;
    const double gz = (4.0 * p.j * p.omega0 * z +
                       4.0 * p.lambda * std::sqrt(2.0 * p.j) * alpha * (1.0 - z * z)) /
                      (s * s);
    return std::max(std::abs(ga), std::abs(gz));
}

} // namespace detail

// Numerical minimization of the energy surface restricted to real (alpha, z);
// the imaginary directions only raise the energy at the optimum. Coarse grid
// seed followed by alternating exact coordinate updates; deterministic.
inline Equilibrium equilibrium_minimize(const ModelParams& p) {
    p.validate();
    Equilibrium eq;
    eq.source = EquilibriumSource::minimizer;
    eq.params = p;
    if (p.lambda < critical_coupling(p)) return eq;

    const double alpha_lo = -2.0 * std::sqrt(2.0 * p.j);
    double best_alpha = 0.0, best_z = 0.0;
    double best_h = energy_surface(p, {0.0, 0.0}, {0.0, 0.0});
    constexpr int kGrid = 64;
    for (int ia = 0; ia < kGrid; ++ia) {
        const double a = alpha_lo * ia / (kGrid - 1);
        for (int iz = 0; iz < kGrid; ++iz) {
            const double z = static_cast<double>(iz) / kGrid;  // [0, 1)
            const double h = energy_surface(p, {a, 0.0}, {z, 0.0});
            if (h < best_h) {
                best_h = h;
                best_alpha = a;
                best_z = z;
            }
        }
    }

    const double scale = std::max({1.0, p.omega, p.j * p.omega0, p.lambda * std::sqrt(2.0 * p.j)});
    double alpha = best_alpha, z = best_z;
    for (int it = 0; it < 500; ++it) {
        alpha = detail::best_alpha_given_z(p, z);
        z = detail::best_z_given_alpha(p, alpha);
        if (detail::surface_grad_norm(p, alpha, z) < 1e-12 * scale) {
            eq.alpha_e = alpha;
            eq.z_e = z;
            return eq;
        }
    }
    throw ConvergenceError("equilibrium_minimize: coordinate descent stalled at (alpha=" +
                               std::to_string(alpha) + ", z=" + std::to_string(z) + ")",
                           detail::surface_grad_norm(p, alpha, z));
}

// --------------------------------- cat states --------------------------------

// Overlap <alpha_e,z_e|-alpha_e,-z_e> = e^{-2 a^2} ((1-z^2)/(1+z^2))^{2j},
// the quantity that controls both the cat norm and the crossover regime.
inline double cat_overlap(double alpha_e, double z_e, double j) {
    const int two_j = static_cast<int>(std::llround(2.0 * j));
    const double log_k = -2.0 * alpha_e * alpha_e +
                         two_j * (std::log1p(-z_e * z_e) - std::log1p(z_e * z_e));
    return std::exp(log_k);
}

inline double cat_norm(double alpha_e, double z_e, double j, int parity_sign) {
    if (parity_sign != +1 && parity_sign != -1)
        throw std::invalid_argument("cat_norm: parity_sign must be +1 or -1");
    const double k = cat_overlap(alpha_e, z_e, j);
    const double inner = 1.0 + parity_sign * k;
    if (!(inner > 0.0))
        throw DegenerateStateError("cat_norm: odd cat state degenerates at the origin (norm 0)");
    return std::sqrt(2.0) * std::sqrt(inner);
}

struct CatState {
    double alpha_e = 0.0;
    double z_e = 0.0;
    double j = 0.5;
    int parity_sign = +1;
    double norm = 2.0;  // N_+- of the defining superposition
};

inline CatState make_cat_state(double alpha_e, double z_e, double j, int parity_sign = +1) {
    return CatState{alpha_e, z_e, j, parity_sign, cat_norm(alpha_e, z_e, j, parity_sign)};
}

inline CatState make_cat_state(const Equilibrium& eq, int parity_sign = +1) {
    return make_cat_state(eq.alpha_e, eq.z_e, eq.params.j, parity_sign);
}

// --------------------------- variational Husimi ------------------------------

inline Complex cat_amplitude(const CatState& c, const PhasePoint& pt) {
    const Complex ae{c.alpha_e, 0.0};
    const Complex ze{c.z_e, 0.0};
    const Complex o1 = glauber_overlap(pt.alpha, ae) * spin_overlap(pt.z, ze, c.j);
    const Complex o2 = glauber_overlap(pt.alpha, -ae) * spin_overlap(pt.z, -ze, c.j);
    return (o1 + static_cast<double>(c.parity_sign) * o2) / c.norm;
}

inline double husimi_variational(const CatState& c, const PhasePoint& pt) {
    return std::norm(cat_amplitude(c, pt));
}

class CatHusimiEvaluator {
public:
    explicit CatHusimiEvaluator(const CatState& c) : cat_(c) {}

    void begin(const std::vector<Complex>& alpha_nodes) {
        const Complex ae{cat_.alpha_e, 0.0};
        oa1_.resize(alpha_nodes.size());
        oa2_.resize(alpha_nodes.size());
        for (std::size_t i = 0; i < alpha_nodes.size(); ++i) {
            oa1_[i] = glauber_overlap(alpha_nodes[i], ae);
            oa2_[i] = glauber_overlap(alpha_nodes[i], -ae);
        }
    }

    Eigen::MatrixXcd block(std::span<const Complex> z_nodes) const {
        const Complex ze{cat_.z_e, 0.0};
        const double sign = cat_.parity_sign;
        const auto na = static_cast<Eigen::Index>(oa1_.size());
        Eigen::MatrixXcd s(na, static_cast<Eigen::Index>(z_nodes.size()));
        for (std::size_t k = 0; k < z_nodes.size(); ++k) {
            const Complex oz1 = spin_overlap(z_nodes[k], ze, cat_.j) / cat_.norm;
            const Complex oz2 = sign * spin_overlap(z_nodes[k], -ze, cat_.j) / cat_.norm;
            for (Eigen::Index a = 0; a < na; ++a)
                s(a, static_cast<Eigen::Index>(k)) =
                    oa1_[static_cast<std::size_t>(a)] * oz1 + oa2_[static_cast<std::size_t>(a)] * oz2;
        }
        return s;
    }

private:
    CatState cat_;
    std::vector<Complex> oa1_, oa2_;
};

// ------------------------------ Wehrl entropy --------------------------------

enum class WehrlRegime { normal, superradiant_far, crossover };

inline const char* regime_name(WehrlRegime r) {
    switch (r) {
        case WehrlRegime::normal: return "normal";
        case WehrlRegime::superradiant_far: return "superradiant_far";
        default: return "crossover";
    }
}

struct VariationalWehrl {
    WehrlRegime regime = WehrlRegime::normal;
    std::optional<double> value;  // empty in the crossover window
    double cat_overlap = 1.0;     // overlap at the canonical equilibrium
};

// Threshold on the cat overlap below which the two packets are effectively
// independent and the closed form W = 1 + 2j/(2j+1) + ln 2 applies.
inline constexpr double kCatOverlapFarThreshold = 1e-6;

// Closed-form Wehrl entropy of the variational state: the coherent-state
// value 1 + 2j/(2j+1) in the normal phase, plus ln 2 once the packets are
// well separated. The window in between is flagged; use the quadrature path
// there.
inline VariationalWehrl wehrl_variational_analytic(const ModelParams& p) {
    p.validate();
    const double base = 1.0 + 2.0 * p.j / (2.0 * p.j + 1.0);
    VariationalWehrl out;
    if (p.lambda < critical_coupling(p)) {
        out.regime = WehrlRegime::normal;
        out.value = base;
        out.cat_overlap = 1.0;
        return out;
    }
    const Equilibrium eq = equilibrium_minimize(p);
    out.cat_overlap = cat_overlap(eq.alpha_e, eq.z_e, p.j);
    if (out.cat_overlap < kCatOverlapFarThreshold) {
        out.regime = WehrlRegime::superradiant_far;
        out.value = base + std::numbers::ln2;
    } else {
        out.regime = WehrlRegime::crossover;
    }
    return out;
}

inline double wehrl_variational_quadrature(const CatState& c, const QuadratureSpec& spec,
                                           int threads = 1) {
    CatHusimiEvaluator eval(c);
    const int two_j = static_cast<int>(std::llround(2.0 * c.j));
    // conjugation and parity are exact symmetries of |S|^2 for real cats
    const ConvergedIntegrals r = integrate_to_tolerance(
        eval, spec, two_j, GridSymmetry::conjugation_and_parity, ConvergeOn::entropy, threads);
    return r.entropy;
}

inline double wehrl_variational_quadrature(const CatState& c, int threads = 1) {
    return wehrl_variational_quadrature(c, default_quadrature_spec(c.alpha_e), threads);
}

// --------------------------------- sweeps ------------------------------------

struct VariationalSweepRow {
    double lambda = 0.0;
    double alpha_e = 0.0;
    double z_e = 0.0;
    std::optional<double> w_analytic;
    double w_quadrature = 0.0;
    EquilibriumSource source = EquilibriumSource::minimizer;
};

inline void write_variational_sweep_csv(const std::vector<VariationalSweepRow>& rows,
                                        std::ostream& out) {
    CsvWriter csv(out);
    csv.header({"lambda", "alpha_e", "z_e", "W_analytic", "W_quadrature", "source"});
    for (const auto& r : rows) {
        csv.row({format_full(r.lambda), format_full(r.alpha_e), format_full(r.z_e),
                 r.w_analytic ? format_full(*r.w_analytic) : "nan", format_full(r.w_quadrature),
                 r.source == EquilibriumSource::minimizer ? "minimizer" : "paper_formula"});
    }
}

} // namespace dicke
