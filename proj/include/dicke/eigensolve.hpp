// eigensolve.hpp — ground eigenpair of the truncated Dicke Hamiltonian,
// automatic photon-cutoff convergence, ground-state observables and JSON
// serialization.

#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <utility>

#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "dicke/symmetric_eigen.hpp"

namespace dicke {

// Full dense QL below this dimension; Lanczos above (it only needs the
// lowest pair, which is all the ground-state work ever asks for).
inline constexpr std::int64_t kDenseSolveMax = 384;

struct GroundState {
    ModelParams params;
    int n_c = 0;
    double energy = 0.0;
    int parity = +1;
    Eigen::VectorXd coeffs;  // flat c_{nm} in Basis layout

    Basis basis() const { return Basis(params.j, n_c); }
    double coeff(int n, int m_offset) const {
        return coeffs[basis().flat_index({n, m_offset})];
    }
};

// ----------------------------- ground eigenpair -----------------------------

namespace detail {

// Deterministic overall sign: largest-magnitude component positive.
inline void canonicalize_sign(Eigen::VectorXd& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
}

} // namespace detail

template <class Matrix>
LowestEigenpair dense_ground(const Matrix& h) {
    const SymmetricEigenResult es = symmetric_eigensystem(h.dense());
    LowestEigenpair r;
    r.value = es.values[0];
    r.vector = es.vectors.col(0);
    r.vector /= r.vector.norm();
    Eigen::VectorXd hv(h.dim());
    h.matvec(r.vector, hv);
    r.residual = (hv - r.value * r.vector).norm();
    return r;
}

template <class Matrix>
LowestEigenpair lanczos_ground(const Matrix& h) {
    const double tol = std::min(1e-10, 1e-11 * std::max(1.0, h.max_abs())) *
                       static_cast<double>(h.dim());
    return lanczos_lowest(
        h.dim(), [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { h.matvec(x, y); }, tol,
        std::max<int>(400, static_cast<int>(std::min<std::int64_t>(h.dim(), 600))));
}

// Algebraically smallest eigenpair; unit-norm vector with canonical sign.
// Postcondition ||Hv - Ev|| <= 1e-10 * max|H| * dim is verified. Works for
// the full matrix and for the even-parity block alike.
template <class Matrix>
LowestEigenpair lowest_eigenpair(const Matrix& h) {
    LowestEigenpair r = (h.is_dense() && h.dim() <= kDenseSolveMax) ? dense_ground(h)
                                                                    : lanczos_ground(h);
    if (!(r.residual <= 1e-10 * h.max_abs() * static_cast<double>(h.dim())))
        throw ConvergenceError("lowest_eigenpair: residual bound not met", r.residual);
    detail::canonicalize_sign(r.vector);
    return r;
}

inline LowestEigenpair ground_eigenpair(const HamiltonianMatrix& h) {
    return lowest_eigenpair(h);
}

// ------------------------------- observables --------------------------------

struct GroundObservables {
    double mean_photons = 0.0;
    double mean_jz = 0.0;
    double parity_expectation = 0.0;
};

inline GroundObservables observables(const GroundState& g) {
    const Basis basis = g.basis();
    GroundObservables o;
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const BasisIndex b = basis.unflatten(k);
        const double w = g.coeffs[k] * g.coeffs[k];
        o.mean_photons += b.n * w;
        o.mean_jz += basis.m_value(b.m_offset) * w;
        o.parity_expectation += basis.parity(b) * w;
    }
    return o;
}

// Weight beyond half the cutoff: the convergence proxy for basis truncation.
inline double tail_weight(const GroundState& g) {
    const Basis basis = g.basis();
    double t = 0.0;
    for (std::int64_t k = 0; k < basis.dim(); ++k)
        if (basis.unflatten(k).n > g.n_c / 2) t += g.coeffs[k] * g.coeffs[k];
    return t;
}

// ---------------------------- cutoff convergence -----------------------------

struct CutoffPolicy {
    double e_tol = 1e-8;
    double w_tol = 1e-8;
    int n_c0 = 16;
    int n_c_max = 1024;          // ceiling; CLI overrides from DICKE_MAX_NC
    std::int64_t max_dim = kDefaultMaxDim;
};

namespace detail {

// Ground-state work runs in the even-parity sector: the Dicke ground state
// is even, and in the superradiant phase the full-matrix even/odd pair is
// degenerate to machine precision, where a full-matrix solve returns an
// arbitrary parity mixture. The block solve is exact, deterministic, and
// half the dimension; the full-matrix path stays available for
// cross-validation.
inline GroundState even_sector_ground(const ModelParams& p, int n_c, std::int64_t max_dim) {
    const EvenBlock block(p, n_c, max_dim);
    const LowestEigenpair ep = lowest_eigenpair(block);
    GroundState g;
    g.params = p;
    g.n_c = n_c;
    g.energy = ep.value;
    g.parity = +1;
    g.coeffs = block.expand(ep.vector);
    return g;
}

} // namespace detail

// Doubles the photon cutoff from n_c0 until the ground energy is stable to
// e_tol between successive cutoffs and the occupation tail is below w_tol.
// Returns the first cutoff that satisfies both checks.
inline GroundState converge_cutoff(const ModelParams& p, CutoffPolicy policy = {}) {
    p.validate();
    if (!(policy.e_tol > 0.0) || !(policy.w_tol > 0.0))
        throw std::invalid_argument("converge_cutoff: tolerances must be > 0");
    if (policy.n_c0 < 1) throw std::invalid_argument("converge_cutoff: n_c0 must be >= 1");

    GroundState prev;
    bool have_prev = false;
    double last_delta = std::numeric_limits<double>::quiet_NaN();
    double last_tail = std::numeric_limits<double>::quiet_NaN();
    for (int n_c = policy.n_c0; n_c <= policy.n_c_max; n_c *= 2) {
        GroundState cur = detail::even_sector_ground(p, n_c, policy.max_dim);
        if (have_prev) {
            last_delta = std::abs(cur.energy - prev.energy);
            last_tail = tail_weight(prev);
            if (last_delta < policy.e_tol && last_tail < policy.w_tol) return prev;
        }
        prev = std::move(cur);
        have_prev = true;
    }
    throw ConvergenceError("converge_cutoff: cutoff ceiling " + std::to_string(policy.n_c_max) +
                               " reached (last dE=" + std::to_string(last_delta) +
                               ", tail=" + std::to_string(last_tail) + ")",
                           last_delta);
}

// ------------------------------ serialization --------------------------------

inline nlohmann::json to_json(const GroundState& g) {
    const Basis basis = g.basis();
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const BasisIndex b = basis.unflatten(k);
        coeffs.push_back({{"n", b.n}, {"m", basis.m_value(b.m_offset)}, {"c", g.coeffs[k]}});
    }
    return nlohmann::json{{"params",
                           {{"omega", g.params.omega},
                            {"omega0", g.params.omega0},
                            {"lambda", g.params.lambda},
                            {"j", g.params.j}}},
                          {"n_c", g.n_c},
                          {"energy", g.energy},
                          {"parity", g.parity},
                          {"coeffs", coeffs}};
}

inline GroundState ground_state_from_json(const nlohmann::json& doc) {
    GroundState g;
    g.params.omega = doc.at("params").at("omega").get<double>();
    g.params.omega0 = doc.at("params").at("omega0").get<double>();
    g.params.lambda = doc.at("params").at("lambda").get<double>();
    g.params.j = doc.at("params").at("j").get<double>();
    g.params.validate();
    g.n_c = doc.at("n_c").get<int>();
    g.energy = doc.at("energy").get<double>();
    g.parity = doc.value("parity", +1);
    const Basis basis = g.basis();
    g.coeffs = Eigen::VectorXd::Zero(basis.dim());
    for (const auto& item : doc.at("coeffs")) {
        const int n = item.at("n").get<int>();
        const double m = item.at("m").get<double>();
        const int mo = static_cast<int>(std::llround(m + g.params.j));
        g.coeffs[basis.flat_index({n, mo})] = item.at("c").get<double>();
    }
    return g;
}

inline void save_ground_state(const GroundState& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_ground_state: cannot open " + path);
    out << to_json(g).dump(2) << '\n';
}

inline GroundState load_ground_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_ground_state: cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    return ground_state_from_json(doc);
}

} // namespace dicke
