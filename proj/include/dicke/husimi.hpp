// husimi.hpp — exact Husimi distribution Psi(alpha, z) = |<alpha,z|psi>|^2
// of a diagonalized ground state, grid slices for plotting, and the
// normalization / Wehrl-entropy integrals over phase space.
//
// The overlap <alpha,z|psi> = sum_{n,m} c_nm conj(phi_nm(alpha,z)) is a
// single O(dim) sum per point. On tensor grids it factorizes through the
// coefficient matrix C: S = A C B^T with A the field amplitudes per alpha
// node and B the spin amplitudes per z node, so grid evaluation is a pair
// of complex matrix products.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dicke/coherent.hpp"
#include "dicke/eigensolve.hpp"
#include "dicke/io.hpp"
#include "dicke/model.hpp"
#include "dicke/quadrature.hpp"

namespace dicke {

// ----------------------------- point evaluation ------------------------------

inline double husimi_exact(const GroundState& g, const PhasePoint& pt) {
    const Basis basis = g.basis();
    const double j = basis.j();
    // photon amplitudes once per n, spin amplitudes once per m
    std::vector<Complex> field(static_cast<std::size_t>(basis.n_c() + 1));
    for (int n = 0; n <= basis.n_c(); ++n)
        field[static_cast<std::size_t>(n)] = std::conj(glauber_amplitude(n, pt.alpha));
    std::vector<Complex> spin(static_cast<std::size_t>(basis.spin_dim()));
    for (int mo = 0; mo < basis.spin_dim(); ++mo)
        spin[static_cast<std::size_t>(mo)] = std::conj(spin_amplitude(j, basis.m_value(mo), pt.z));
    Complex s{0.0, 0.0};
    for (std::int64_t k = 0; k < basis.dim(); ++k) {
        const BasisIndex b = basis.unflatten(k);
        s += g.coeffs[k] * field[static_cast<std::size_t>(b.n)] *
             spin[static_cast<std::size_t>(b.m_offset)];
    }
    return std::norm(s);
}

// ------------------------------ grid evaluator -------------------------------

class ExactHusimiEvaluator {
public:
    explicit ExactHusimiEvaluator(const GroundState& g)
        : basis_(g.basis()), j_(basis_.j()) {
        c_.resize(basis_.n_c() + 1, basis_.spin_dim());
        for (std::int64_t k = 0; k < basis_.dim(); ++k) {
            const BasisIndex b = basis_.unflatten(k);
            c_(b.n, b.m_offset) = Complex{g.coeffs[k], 0.0};
        }
    }

    void begin(const std::vector<Complex>& alpha_nodes) {
        const auto na = static_cast<Eigen::Index>(alpha_nodes.size());
        a_.resize(na, basis_.n_c() + 1);
        for (Eigen::Index i = 0; i < na; ++i)
            for (int n = 0; n <= basis_.n_c(); ++n)
                a_(i, n) = std::conj(glauber_amplitude(n, alpha_nodes[static_cast<std::size_t>(i)]));
    }

    Eigen::MatrixXcd block(std::span<const Complex> z_nodes) const {
        const auto nz = static_cast<Eigen::Index>(z_nodes.size());
        Eigen::MatrixXcd b(nz, basis_.spin_dim());
        for (Eigen::Index i = 0; i < nz; ++i)
            for (int mo = 0; mo < basis_.spin_dim(); ++mo)
                b(i, mo) = std::conj(spin_amplitude(j_, basis_.m_value(mo),
                                                    z_nodes[static_cast<std::size_t>(i)]));
        Eigen::MatrixXcd d(c_.rows(), nz);
        d.noalias() = c_ * b.transpose();
        Eigen::MatrixXcd s(a_.rows(), nz);
        s.noalias() = a_ * d;
        return s;
    }

private:
    Basis basis_;
    double j_;
    Eigen::MatrixXcd c_;  // coefficients, (n_c+1) x (2j+1)
    Eigen::MatrixXcd a_;  // field amplitudes per alpha node
};

// --------------------------------- grids -------------------------------------

enum class Slice { position, momentum, custom };

inline const char* slice_name(Slice s) {
    switch (s) {
        case Slice::position: return "position";
        case Slice::momentum: return "momentum";
        default: return "custom";
    }
}

struct HusimiField {
    Slice slice = Slice::position;
    std::vector<double> axis1;  // alpha coordinate
    std::vector<double> axis2;  // z coordinate
    Eigen::MatrixXd values;     // axis1 x axis2
};

inline PhasePoint slice_point(Slice s, double x, double u) {
    if (s == Slice::custom)
        throw std::invalid_argument("slice_point: custom slices need an explicit point map");
    return s == Slice::position ? PhasePoint{{x, 0.0}, {u, 0.0}}
                                : PhasePoint{{0.0, x}, {0.0, u}};
}

namespace detail {

inline void check_monotone(const std::vector<double>& ax, const char* what) {
    if (ax.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 points");
    for (std::size_t i = 1; i < ax.size(); ++i)
        if (!(ax[i] > ax[i - 1]))
            throw std::invalid_argument(std::string(what) + ": axis must be strictly increasing");
}

} // namespace detail

inline HusimiField husimi_grid(const GroundState& g, Slice slice, std::vector<double> axis1,
                               std::vector<double> axis2) {
    detail::check_monotone(axis1, "husimi_grid axis1");
    detail::check_monotone(axis2, "husimi_grid axis2");
    // factorized evaluation: one row/column of amplitudes per axis value
    ExactHusimiEvaluator eval(g);
    std::vector<Complex> alphas;
    alphas.reserve(axis1.size());
    std::vector<Complex> zs;
    zs.reserve(axis2.size());
    for (double x : axis1) alphas.push_back(slice_point(slice, x, 0.0).alpha);
    for (double u : axis2) zs.push_back(slice_point(slice, 0.0, u).z);
    eval.begin(alphas);
    const Eigen::MatrixXcd s = eval.block(std::span<const Complex>(zs.data(), zs.size()));
    HusimiField f;
    f.slice = slice;
    f.axis1 = std::move(axis1);
    f.axis2 = std::move(axis2);
    f.values = s.cwiseAbs2();
    return f;
}

// Arbitrary two-parameter section of the phase space: point_map(x, u) gives
// the PhasePoint for axis values (x, u). Pointwise evaluation, no grid
// factorization.
template <class PointMap>
HusimiField husimi_grid_custom(const GroundState& g, std::vector<double> axis1,
                               std::vector<double> axis2, PointMap&& point_map) {
    detail::check_monotone(axis1, "husimi_grid_custom axis1");
    detail::check_monotone(axis2, "husimi_grid_custom axis2");
    HusimiField f;
    f.slice = Slice::custom;
    f.axis1 = std::move(axis1);
    f.axis2 = std::move(axis2);
    f.values.resize(static_cast<Eigen::Index>(f.axis1.size()),
                    static_cast<Eigen::Index>(f.axis2.size()));
    for (std::size_t i = 0; i < f.axis1.size(); ++i)
        for (std::size_t k = 0; k < f.axis2.size(); ++k)
            f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                husimi_exact(g, point_map(f.axis1[i], f.axis2[k]));
    return f;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("linspace: need n >= 2 and hi > lo");
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return x;
}

inline void write_csv(const HusimiField& f, std::ostream& out) {
    CsvWriter csv(out);
    csv.header({"axis1", "axis2", "psi"});
    for (std::size_t i = 0; i < f.axis1.size(); ++i)
        for (std::size_t k = 0; k < f.axis2.size(); ++k)
            csv.row({format_full(f.axis1[i]), format_full(f.axis2[k]),
                     format_full(f.values(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(k)))});
}

// ------------------------- norm and Wehrl entropy ----------------------------

namespace detail {

inline GridSymmetry state_symmetry(const GroundState& g) {
    // conjugation is always valid (real coefficients); parity needs an even state
    const Basis basis = g.basis();
    double odd = 0.0;
    for (std::int64_t k = 0; k < basis.dim(); ++k)
        if (basis.parity(basis.unflatten(k)) == -1) odd += g.coeffs[k] * g.coeffs[k];
    return odd < 1e-12 ? GridSymmetry::conjugation_and_parity : GridSymmetry::conjugation;
}

inline QuadratureSpec spec_for_state(const GroundState& g, const QuadratureSpec* user) {
    if (user) return *user;
    // packet center magnitude ~ sqrt(<a^dag a>)
    return default_quadrature_spec(std::sqrt(std::max(0.0, observables(g).mean_photons)));
}

} // namespace detail

struct HusimiIntegrals {
    double norm = 0.0;
    double entropy = 0.0;
    QuadratureSpec final_spec;
    int refinements = 0;
};

inline HusimiIntegrals husimi_integrals(const GroundState& g, const QuadratureSpec& spec,
                                        ConvergeOn mode, int threads = 1) {
    ExactHusimiEvaluator eval(g);
    const ConvergedIntegrals r = integrate_to_tolerance(
        eval, spec, g.basis().two_j(), detail::state_symmetry(g), mode, threads);
    return {r.norm, r.entropy, r.final_spec, r.refinements};
}

inline double husimi_norm(const GroundState& g, const QuadratureSpec& spec, int threads = 1) {
    return husimi_integrals(g, spec, ConvergeOn::norm, threads).norm;
}

inline double wehrl_entropy(const GroundState& g, const QuadratureSpec& spec, int threads = 1) {
    return husimi_integrals(g, spec, ConvergeOn::entropy, threads).entropy;
}

// Convenience overloads with the packet-sized default box.
inline HusimiIntegrals husimi_integrals(const GroundState& g, ConvergeOn mode, int threads = 1) {
    return husimi_integrals(g, detail::spec_for_state(g, nullptr), mode, threads);
}
inline double husimi_norm(const GroundState& g, int threads = 1) {
    return husimi_integrals(g, ConvergeOn::norm, threads).norm;
}
inline double wehrl_entropy(const GroundState& g, int threads = 1) {
    return husimi_integrals(g, ConvergeOn::entropy, threads).entropy;
}

// Wehrl sweep export: one row per coupling.
struct WehrlPoint {
    double lambda = 0.0;
    double entropy = 0.0;
};

inline void write_wehrl_csv(const std::vector<WehrlPoint>& points, std::ostream& out) {
    CsvWriter csv(out);
    csv.header({"lambda", "W"});
    for (const auto& p : points) csv.row({format_full(p.lambda), format_full(p.entropy)});
}

} // namespace dicke
