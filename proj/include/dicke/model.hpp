// model.hpp — Dicke-model parameters, truncated product basis, Hamiltonian
// assembly and parity bookkeeping.
//
// Basis layout is row-major with the photon number n outer and the spin
// projection m inner; m is stored as the integer offset m + j so that
// half-integer pseudospins never touch floating-point indexing.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke {

inline constexpr std::int64_t kDefaultMaxDim = 2'000'000;

// Dense symmetric storage is used up to this dimension, coordinate-list
// sparse storage beyond it.
inline constexpr std::int64_t kDenseStorageMax = 4096;

// ------------------------------- parameters --------------------------------

struct ModelParams {
    double omega   = 1.0;  // field frequency
    double omega0  = 1.0;  // atomic level splitting
    double lambda  = 0.0;  // coupling
    double j       = 0.5;  // pseudospin length, N = 2j atoms

    int two_j() const { return static_cast<int>(std::llround(2.0 * j)); }

    void validate() const {
        if (!(omega > 0.0)) throw std::invalid_argument("ModelParams: omega must be > 0");
        if (!(omega0 > 0.0)) throw std::invalid_argument("ModelParams: omega0 must be > 0");
        if (!(lambda >= 0.0)) throw std::invalid_argument("ModelParams: lambda must be >= 0");
        const double tj = 2.0 * j;
        if (!(tj >= 1.0) || std::abs(tj - std::llround(tj)) > 1e-9)
            throw std::invalid_argument("ModelParams: j must be a positive half-integer (2j a positive integer)");
    }
};

inline double critical_coupling(const ModelParams& p) {
    return std::sqrt(p.omega * p.omega0) / 2.0;
}

// --------------------------------- basis -----------------------------------

struct BasisIndex {
    int n = 0;         // photon number
    int m_offset = 0;  // m + j, integer in [0, 2j]
};

class Basis {
public:
    Basis(double j, int n_c, std::int64_t max_dim = kDefaultMaxDim)
        : j_(j), two_j_(static_cast<int>(std::llround(2.0 * j))), n_c_(n_c) {
        if (two_j_ < 1 || std::abs(2.0 * j - two_j_) > 1e-9)
            throw std::invalid_argument("Basis: 2j must be a positive integer");
        if (n_c < 1) throw std::invalid_argument("Basis: n_c must be >= 1");
        if (dim() > max_dim)
            throw std::invalid_argument("Basis: dimension " + std::to_string(dim()) +
                                        " exceeds configured maximum " + std::to_string(max_dim));
    }

    double j() const { return j_; }
    int two_j() const { return two_j_; }
    int n_c() const { return n_c_; }
    int spin_dim() const { return two_j_ + 1; }
    std::int64_t dim() const {
        return static_cast<std::int64_t>(n_c_ + 1) * (two_j_ + 1);
    }

    double m_value(int m_offset) const { return m_offset - j_; }

    bool contains(BasisIndex b) const {
        return b.n >= 0 && b.n <= n_c_ && b.m_offset >= 0 && b.m_offset <= two_j_;
    }

    std::int64_t flat_index(BasisIndex b) const {
        if (!contains(b))
            throw std::invalid_argument("Basis::flat_index: index out of range");
        return static_cast<std::int64_t>(b.n) * spin_dim() + b.m_offset;
    }

    BasisIndex unflatten(std::int64_t k) const {
        if (k < 0 || k >= dim())
            throw std::invalid_argument("Basis::unflatten: index out of range");
        return BasisIndex{static_cast<int>(k / spin_dim()), static_cast<int>(k % spin_dim())};
    }

    // (-1)^(n + m + j); n + m_offset is the integer exponent.
    int parity(BasisIndex b) const { return ((b.n + b.m_offset) % 2 == 0) ? +1 : -1; }

private:
    double j_;
    int two_j_;
    int n_c_;
};

inline int parity_of(BasisIndex b, const Basis& basis) { return basis.parity(b); }

// ------------------------------ matrix storage ------------------------------

// Symmetric coordinate-list storage: diagonal plus strictly-upper entries.
struct SparseSym {
    struct Entry {
        std::int32_t row;
        std::int32_t col;  // col > row
        double value;
    };
    std::int64_t dim = 0;
    std::vector<double> diag;
    std::vector<Entry> upper;

    void matvec(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
        y.resize(dim);
        for (std::int64_t i = 0; i < dim; ++i) y[i] = diag[static_cast<std::size_t>(i)] * x[i];
        for (const Entry& e : upper) {
            y[e.row] += e.value * x[e.col];
            y[e.col] += e.value * x[e.row];
        }
    }

    double max_abs() const {
        double m = 0.0;
        for (double d : diag) m = std::max(m, std::abs(d));
        for (const Entry& e : upper) m = std::max(m, std::abs(e.value));
        return m;
    }
};

enum class Storage { automatic, dense, sparse };

class HamiltonianMatrix {
public:
    HamiltonianMatrix(Basis basis, Eigen::MatrixXd dense)
        : basis_(basis), dense_(std::move(dense)), is_dense_(true) {}
    HamiltonianMatrix(Basis basis, SparseSym sparse)
        : basis_(basis), sparse_(std::move(sparse)), is_dense_(false) {}

    const Basis& basis() const { return basis_; }
    std::int64_t dim() const { return basis_.dim(); }
    bool is_dense() const { return is_dense_; }

    const Eigen::MatrixXd& dense() const {
        if (!is_dense_) throw std::logic_error("HamiltonianMatrix: not stored dense");
        return dense_;
    }
    const SparseSym& sparse() const {
        if (is_dense_) throw std::logic_error("HamiltonianMatrix: not stored sparse");
        return sparse_;
    }

    void matvec(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
        if (is_dense_) {
            y.noalias() = dense_ * x;
        } else {
            sparse_.matvec(x, y);
        }
    }

    double max_abs() const {
        return is_dense_ ? dense_.cwiseAbs().maxCoeff() : sparse_.max_abs();
    }

private:
    Basis basis_;
    Eigen::MatrixXd dense_;
    SparseSym sparse_;
    bool is_dense_;
};

// ------------------------------- assembly ----------------------------------

namespace detail {

// Visits the diagonal entry and the strictly-upper couplings of every basis
// state. The only off-diagonal couplings are (n, m) <-> (n+1, m±1); filling
// the upper triangle and mirroring keeps the matrix exactly symmetric.
template <class DiagFn, class UpperFn>
void for_each_hamiltonian_entry(const ModelParams& p, const Basis& basis,
                                DiagFn&& on_diag, UpperFn&& on_upper) {
    const double j = basis.j();
    const double coupling = p.lambda / std::sqrt(2.0 * j);
    for (int n = 0; n <= basis.n_c(); ++n) {
        for (int mo = 0; mo <= basis.two_j(); ++mo) {
            const double m = basis.m_value(mo);
            const std::int64_t row = basis.flat_index({n, mo});
            on_diag(row, n * p.omega + m * p.omega0);
            if (n == basis.n_c()) continue;
            const double photon = std::sqrt(static_cast<double>(n + 1));
            if (mo + 1 <= basis.two_j()) {
                const double raise = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
                on_upper(row, basis.flat_index({n + 1, mo + 1}), coupling * photon * raise);
            }
            if (mo - 1 >= 0) {
                const double lower = std::sqrt(j * (j + 1.0) - m * (m - 1.0));
                on_upper(row, basis.flat_index({n + 1, mo - 1}), coupling * photon * lower);
            }
        }
    }
}

} // namespace detail

inline HamiltonianMatrix build_hamiltonian(const ModelParams& p, int n_c,
                                           Storage storage = Storage::automatic,
                                           std::int64_t max_dim = kDefaultMaxDim) {
    p.validate();
    Basis basis(p.j, n_c, max_dim);
    const bool dense = storage == Storage::dense ||
                       (storage == Storage::automatic && basis.dim() <= kDenseStorageMax);
    if (dense) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
        detail::for_each_hamiltonian_entry(
            p, basis,
            [&](std::int64_t r, double v) { h(r, r) = v; },
            [&](std::int64_t r, std::int64_t c, double v) {
                h(r, c) = v;
                h(c, r) = v;
            });
        return HamiltonianMatrix(basis, std::move(h));
    }
    SparseSym s;
    s.dim = basis.dim();
    s.diag.assign(static_cast<std::size_t>(s.dim), 0.0);
    s.upper.reserve(static_cast<std::size_t>(s.dim) * 2);
    detail::for_each_hamiltonian_entry(
        p, basis,
        [&](std::int64_t r, double v) { s.diag[static_cast<std::size_t>(r)] = v; },
        [&](std::int64_t r, std::int64_t c, double v) {
            s.upper.push_back({static_cast<std::int32_t>(r), static_cast<std::int32_t>(c), v});
        });
    return HamiltonianMatrix(basis, std::move(s));
}

// --------------------------- parity-sector helpers --------------------------

// Flat indices of the even-parity block, in canonical order. The ground
// state lives here; restricting to this block is an optional optimization
// and a cross-check against the full matrix.
inline std::vector<std::int64_t> even_parity_indices(const Basis& basis) {
    std::vector<std::int64_t> idx;
    idx.reserve(static_cast<std::size_t>((basis.dim() + 1) / 2));
    for (std::int64_t k = 0; k < basis.dim(); ++k)
        if (basis.parity(basis.unflatten(k)) == +1) idx.push_back(k);
    return idx;
}

inline Eigen::MatrixXd restrict_dense(const Eigen::MatrixXd& h,
                                      const std::vector<std::int64_t>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) out(a, b) = h(idx[a], idx[b]);
    return out;
}

// H restricted to the even-parity sector. The coupling only connects states
// of equal parity, so this block is exact, and the Dicke ground state lives
// in it; solving here halves the dimension and never mixes the
// quasi-degenerate even/odd pair of the superradiant phase.
class EvenBlock {
public:
    EvenBlock(const ModelParams& p, int n_c, std::int64_t max_dim = kDefaultMaxDim)
        : basis_((p.validate(), p.j), n_c, max_dim), indices_(even_parity_indices(basis_)) {
        std::vector<std::int32_t> pos(static_cast<std::size_t>(basis_.dim()), -1);
        for (std::size_t k = 0; k < indices_.size(); ++k)
            pos[static_cast<std::size_t>(indices_[k])] = static_cast<std::int32_t>(k);
        const auto n = static_cast<std::int64_t>(indices_.size());
        is_dense_ = n <= kDenseStorageMax;
        if (is_dense_) dense_ = Eigen::MatrixXd::Zero(n, n);
        sparse_.dim = n;
        if (!is_dense_) sparse_.diag.assign(static_cast<std::size_t>(n), 0.0);
        detail::for_each_hamiltonian_entry(
            p, basis_,
            [&](std::int64_t r, double v) {
                const auto rr = pos[static_cast<std::size_t>(r)];
                if (rr < 0) return;
                if (is_dense_)
                    dense_(rr, rr) = v;
                else
                    sparse_.diag[static_cast<std::size_t>(rr)] = v;
            },
            [&](std::int64_t r, std::int64_t c, double v) {
                const auto rr = pos[static_cast<std::size_t>(r)];
                const auto cc = pos[static_cast<std::size_t>(c)];
                if (rr < 0 || cc < 0) return;
                if (is_dense_) {
                    dense_(rr, cc) = v;
                    dense_(cc, rr) = v;
                } else {
                    sparse_.upper.push_back({rr, cc, v});
                }
            });
    }

    const Basis& full_basis() const { return basis_; }
    std::int64_t dim() const { return static_cast<std::int64_t>(indices_.size()); }
    bool is_dense() const { return is_dense_; }
    const Eigen::MatrixXd& dense() const { return dense_; }

    void matvec(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
        if (is_dense_)
            y.noalias() = dense_ * x;
        else
            sparse_.matvec(x, y);
    }

    double max_abs() const {
        return is_dense_ ? dense_.cwiseAbs().maxCoeff() : sparse_.max_abs();
    }

    // Scatter block coefficients back onto the full flat basis.
    Eigen::VectorXd expand(const Eigen::VectorXd& block) const {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(basis_.dim());
        for (std::size_t k = 0; k < indices_.size(); ++k) full[indices_[k]] = block[static_cast<Eigen::Index>(k)];
        return full;
    }

private:
    Basis basis_;
    std::vector<std::int64_t> indices_;
    bool is_dense_ = true;
    Eigen::MatrixXd dense_;
    SparseSym sparse_;
};

} // namespace dicke
