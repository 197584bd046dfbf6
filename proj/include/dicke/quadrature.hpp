// quadrature.hpp — converging quadrature over the four-dimensional phase
// space (alpha, z) with the SU(2)-invariant measure
//
//   dmu = (2j+1)/pi^2 * d2alpha * d2z / (1+|z|^2)^2 .
//
// The z-plane is mapped to the sphere via z = tan(theta/2) e^{i phi}, where
// the measure becomes (2j+1)/(4 pi) sin(theta) dtheta dphi: Gauss-Legendre
// in cos(theta), periodic trapezoid in phi. alpha is integrated with a
// tensor Gauss-Legendre rule on the box [-R, R]^2; the integrands decay
// like unit-width Gaussians around the packet centers, so R = |alpha_e| + 6
// keeps the tail error negligible.
//
// Evaluators present a block interface so the heavy lifting is a complex
// matrix product; the reduction is per-z-node partials combined by a fixed
// pairwise sum, making results independent of the thread count.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/parallel.hpp"

namespace dicke {

// ------------------------------ Gauss-Legendre -------------------------------

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// Newton iteration on P_n; nodes are computed for one half and mirrored so
// the rule is exactly symmetric.
inline GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendreRule r;
    r.nodes.assign(static_cast<std::size_t>(n), 0.0);
    r.weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return r;
}

// ----------------------------- quadrature spec -------------------------------

struct QuadratureSpec {
    double alpha_extent = 8.0;  // half-width R of the alpha box
    int alpha_points = 48;      // per axis
    int theta_points = 64;
    int phi_points = 64;
    double rel_tol = 1e-3;

    void validate() const {
        if (!(alpha_extent > 0.0))
            throw std::invalid_argument("QuadratureSpec: alpha_extent must be > 0");
        if (alpha_points < 8 || theta_points < 8 || phi_points < 8)
            throw std::invalid_argument("QuadratureSpec: all point counts must be >= 8");
        if (!(rel_tol > 0.0) || rel_tol > 1e-1)
            throw std::invalid_argument("QuadratureSpec: rel_tol must be in (0, 1e-1]");
    }

    QuadratureSpec doubled() const {
        QuadratureSpec d = *this;
        d.alpha_points *= 2;
        d.theta_points *= 2;
        d.phi_points *= 2;
        return d;
    }
};

// Box sized to the packet location: R = |alpha_e| + 6, at least 8.
inline QuadratureSpec default_quadrature_spec(double alpha_center_magnitude) {
    QuadratureSpec q;
    q.alpha_extent = std::max(8.0, std::abs(alpha_center_magnitude) + 6.0);
    return q;
}

// ------------------------------ discrete rule --------------------------------

// Symmetries used to shrink the z-node set. Both are exact grid involutions:
// conjugation (alpha, z) -> (conj alpha, conj z) holds for any state with
// real coefficients; parity (alpha, z) -> (-alpha, -z) additionally needs an
// even-parity state.
enum class GridSymmetry { none, conjugation, conjugation_and_parity };

struct PhaseSpaceRule {
    std::vector<std::complex<double>> alpha_nodes;
    std::vector<double> alpha_weights;             // includes 1/pi and both axis weights
    std::vector<std::complex<double>> z_nodes;
    std::vector<double> z_weights;                 // includes measure and orbit multiplicity
};

namespace detail {

struct ZIndex {
    int i;  // theta index
    int k;  // phi index
};

} // namespace detail

inline PhaseSpaceRule make_phase_space_rule(const QuadratureSpec& spec, int two_j,
                                            GridSymmetry symmetry = GridSymmetry::none) {
    spec.validate();
    if ((spec.phi_points % 2) != 0 && symmetry != GridSymmetry::none)
        throw std::invalid_argument("make_phase_space_rule: symmetry reduction needs even phi_points");

    PhaseSpaceRule rule;

    const GaussLegendreRule ga = gauss_legendre(spec.alpha_points);
    const double R = spec.alpha_extent;
    rule.alpha_nodes.reserve(static_cast<std::size_t>(spec.alpha_points) * spec.alpha_points);
    rule.alpha_weights.reserve(rule.alpha_nodes.capacity());
    for (int ix = 0; ix < spec.alpha_points; ++ix) {
        for (int iy = 0; iy < spec.alpha_points; ++iy) {
            rule.alpha_nodes.emplace_back(R * ga.nodes[static_cast<std::size_t>(ix)],
                                          R * ga.nodes[static_cast<std::size_t>(iy)]);
            rule.alpha_weights.push_back(R * ga.weights[static_cast<std::size_t>(ix)] * R *
                                         ga.weights[static_cast<std::size_t>(iy)] / std::numbers::pi);
        }
    }

    const GaussLegendreRule gt = gauss_legendre(spec.theta_points);  // nodes are cos(theta)
    const int np = spec.phi_points;
    const double phi_w = 2.0 * std::numbers::pi / np;
    const double measure = (two_j + 1) / (4.0 * std::numbers::pi);

    // Orbit decomposition of the index set under the chosen involutions.
    // conjugation z -> conj(z): (i, k) -> (i, -k mod np); parity z -> -z
    // keeps theta and shifts phi by pi: (i, k) -> (i, k + np/2).
    const int nt = spec.theta_points;
    std::vector<char> visited(static_cast<std::size_t>(nt) * np, 0);
    auto flat = [np](detail::ZIndex a) { return static_cast<std::size_t>(a.i) * np + a.k; };
    auto conj_map = [np](detail::ZIndex a) { return detail::ZIndex{a.i, (np - a.k) % np}; };
    auto parity_map = [np](detail::ZIndex a) { return detail::ZIndex{a.i, (a.k + np / 2) % np}; };

    for (int i = 0; i < nt; ++i) {
        for (int k = 0; k < np; ++k) {
            const detail::ZIndex rep{i, k};
            if (visited[flat(rep)]) continue;
            // collect the orbit of rep
            std::vector<detail::ZIndex> orbit{rep};
            if (symmetry != GridSymmetry::none) {
                auto push_unique = [&](detail::ZIndex a) {
                    for (const auto& b : orbit)
                        if (b.i == a.i && b.k == a.k) return;
                    orbit.push_back(a);
                };
                push_unique(conj_map(rep));
                if (symmetry == GridSymmetry::conjugation_and_parity) {
                    push_unique(parity_map(rep));
                    push_unique(parity_map(conj_map(rep)));
                }
            }
            double multiplicity = 0.0;
            for (const auto& a : orbit) {
                visited[flat(a)] = 1;
                multiplicity += 1.0;
            }
            const double ct = gt.nodes[static_cast<std::size_t>(i)];
            const double theta = std::acos(ct);
            const double r = std::tan(0.5 * theta);
            const double phi = phi_w * k;
            rule.z_nodes.emplace_back(r * std::cos(phi), r * std::sin(phi));
            rule.z_weights.push_back(multiplicity * measure *
                                     gt.weights[static_cast<std::size_t>(i)] * phi_w);
        }
    }
    return rule;
}

// ------------------------------- integration ---------------------------------

struct FieldIntegrals {
    double norm = 0.0;     // integral of Psi
    double entropy = 0.0;  // -integral of Psi ln Psi
};

// Evaluator concept:
//   void begin(const std::vector<std::complex<double>>& alpha_nodes);
//   Eigen::MatrixXcd block(std::span<const std::complex<double>> z_nodes) const;
// block returns amplitudes S with Psi = |S|^2, one column per z node. It is
// invoked concurrently from worker threads and must not mutate state.
template <class Evaluator>
FieldIntegrals integrate_phase_space(Evaluator& eval, const PhaseSpaceRule& rule,
                                     int threads = 1) {
    constexpr std::int64_t kBlock = 128;
    const auto nz = static_cast<std::int64_t>(rule.z_nodes.size());
    const std::int64_t n_blocks = (nz + kBlock - 1) / kBlock;

    eval.begin(rule.alpha_nodes);

    std::vector<double> norm_partial(static_cast<std::size_t>(nz), 0.0);
    std::vector<double> ent_partial(static_cast<std::size_t>(nz), 0.0);

    parallel_blocks(n_blocks, resolve_threads(threads), [&](std::int64_t b) {
        const std::int64_t z0 = b * kBlock;
        const std::int64_t z1 = std::min(nz, z0 + kBlock);
        const Eigen::MatrixXcd s = eval.block(
            std::span<const std::complex<double>>(rule.z_nodes.data() + z0,
                                                  static_cast<std::size_t>(z1 - z0)));
        for (std::int64_t zi = z0; zi < z1; ++zi) {
            const auto col = s.col(zi - z0);
            double ns = 0.0, es = 0.0;
            const auto na = static_cast<Eigen::Index>(rule.alpha_nodes.size());
            for (Eigen::Index a = 0; a < na; ++a) {
                const double psi = std::norm(col[a]);
                const double w = rule.alpha_weights[static_cast<std::size_t>(a)];
                ns += w * psi;
                // 0 ln 0 := 0; skip anything below e^-700 to avoid underflow noise
                if (psi > 1e-300) es += w * psi * std::log(psi);
            }
            norm_partial[static_cast<std::size_t>(zi)] = rule.z_weights[static_cast<std::size_t>(zi)] * ns;
            ent_partial[static_cast<std::size_t>(zi)] = rule.z_weights[static_cast<std::size_t>(zi)] * es;
        }
    });

    FieldIntegrals out;
    out.norm = pairwise_sum(norm_partial);
    out.entropy = -pairwise_sum(ent_partial);
    return out;
}

// --------------------------- convergence driver ------------------------------

enum class ConvergeOn { norm, entropy, both };

struct ConvergedIntegrals {
    double norm = 0.0;
    double entropy = 0.0;
    QuadratureSpec final_spec;
    int refinements = 0;
};

inline constexpr int kMaxQuadratureRefinements = 4;

// Successively doubles all point counts until the watched quantities are
// stable to rel_tol between levels; returns the finer-level values.
template <class Evaluator>
ConvergedIntegrals integrate_to_tolerance(Evaluator& eval, QuadratureSpec spec, int two_j,
                                          GridSymmetry symmetry, ConvergeOn mode,
                                          int threads = 1) {
    spec.validate();
    PhaseSpaceRule rule = make_phase_space_rule(spec, two_j, symmetry);
    FieldIntegrals prev = integrate_phase_space(eval, rule, threads);
    double delta = std::numeric_limits<double>::quiet_NaN();
    for (int level = 1; level <= kMaxQuadratureRefinements; ++level) {
        const QuadratureSpec finer = spec.doubled();
        rule = make_phase_space_rule(finer, two_j, symmetry);
        const FieldIntegrals cur = integrate_phase_space(eval, rule, threads);
        const double dn = std::abs(cur.norm - prev.norm);
        const double de = std::abs(cur.entropy - prev.entropy);
        const bool norm_ok = dn <= spec.rel_tol * std::max(1.0, std::abs(cur.norm));
        const bool ent_ok = de <= spec.rel_tol * std::max(1e-30, std::abs(cur.entropy));
        const bool done = (mode == ConvergeOn::norm && norm_ok) ||
                          (mode == ConvergeOn::entropy && ent_ok) ||
                          (mode == ConvergeOn::both && norm_ok && ent_ok);
        if (done) return {cur.norm, cur.entropy, finer, level};
        prev = cur;
        spec = finer;
        delta = (mode == ConvergeOn::norm) ? dn : de;
    }
    throw ConvergenceError("integrate_to_tolerance: quadrature did not stabilize (last delta=" +
                               std::to_string(delta) + ")",
                           delta);
}

} // namespace dicke
