// symmetric_eigen.hpp — self-contained real-symmetric eigensolvers:
// Householder tridiagonalization + implicit-shift QL for dense matrices,
// and Lanczos with full reorthogonalization for the lowest eigenpair of
// large (sparse or dense) operators. Both are deterministic: no random
// starts, fixed iteration structure.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke {

// -------------------- Householder reduction to tridiagonal ------------------

// Reduces symmetric `a` in place to tridiagonal form with diagonal `d` and
// subdiagonal `e` (e[0] unused); on return `a` holds the accumulated
// orthogonal transform Q with A = Q T Q^T.
inline void tridiagonalize(Eigen::MatrixXd& a, Eigen::VectorXd& d, Eigen::VectorXd& e) {
    const Eigen::Index n = a.rows();
    d.resize(n);
    e.resize(n);
    for (Eigen::Index i = n - 1; i >= 1; --i) {
        const Eigen::Index l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (Eigen::Index k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (Eigen::Index k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (Eigen::Index jj = 0; jj <= l; ++jj) {
                    a(jj, i) = a(i, jj) / h;
                    g = 0.0;
                    for (Eigen::Index k = 0; k <= jj; ++k) g += a(jj, k) * a(i, k);
                    for (Eigen::Index k = jj + 1; k <= l; ++k) g += a(k, jj) * a(i, k);
                    e[jj] = g / h;
                    f += e[jj] * a(i, jj);
                }
                const double hh = f / (h + h);
                for (Eigen::Index jj = 0; jj <= l; ++jj) {
                    f = a(i, jj);
                    g = e[jj] - hh * f;
                    e[jj] = g;
                    for (Eigen::Index k = 0; k <= jj; ++k)
                        a(jj, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index l = i;
        if (d[i] != 0.0) {
            for (Eigen::Index jj = 0; jj < l; ++jj) {
                double g = 0.0;
                for (Eigen::Index k = 0; k < l; ++k) g += a(i, k) * a(k, jj);
                for (Eigen::Index k = 0; k < l; ++k) a(k, jj) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (Eigen::Index jj = 0; jj < l; ++jj) {
            a(jj, i) = 0.0;
            a(i, jj) = 0.0;
        }
    }
}

// --------------------------- implicit-shift QL ------------------------------

// Diagonalizes the tridiagonal matrix (d, e) in place; e[0] is unused and
// destroyed. If `z` is non-null its columns are rotated along, so passing
// the Q from tridiagonalize (or the identity) yields eigenvectors.
inline void tridiag_ql(Eigen::VectorXd& d, Eigen::VectorXd& e, Eigen::MatrixXd* z) {
    const Eigen::Index n = d.size();
    if (n == 0) return;
    for (Eigen::Index i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (Eigen::Index l = 0; l < n; ++l) {
        int iter = 0;
        Eigen::Index m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw ConvergenceError("tridiag_ql: too many QL iterations", std::abs(e[l]));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                Eigen::Index i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {  // deflate: eigenvalue found
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (Eigen::Index k = 0; k < z->rows(); ++k) {
                            f = (*z)(k, i + 1);
                            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
                            (*z)(k, i) = c * (*z)(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// ------------------------- full dense eigensystem ---------------------------

struct SymmetricEigenResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns match values
};

inline SymmetricEigenResult symmetric_eigensystem(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("symmetric_eigensystem: matrix must be square");
    Eigen::VectorXd d, e;
    if (n == 1) {
        SymmetricEigenResult r;
        r.values = a.col(0);
        r.vectors = Eigen::MatrixXd::Ones(1, 1);
        return r;
    }
    tridiagonalize(a, d, e);
    tridiag_ql(d, e, &a);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return d[x] < d[y]; });
    SymmetricEigenResult r;
    r.values.resize(n);
    r.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        r.values[k] = d[order[static_cast<std::size_t>(k)]];
        r.vectors.col(k) = a.col(order[static_cast<std::size_t>(k)]);
    }
    return r;
}

// ------------------------------- Lanczos ------------------------------------

struct LowestEigenpair {
    double value = 0.0;
    Eigen::VectorXd vector;
    int iterations = 0;
    double residual = 0.0;  // ||Av - value*v||
};

namespace detail {

// Lowest eigenpair of the k x k tridiagonal (alpha, beta): beta[i] couples
// i and i+1. Small k only; used for Lanczos Ritz values.
inline void tridiag_lowest(const std::vector<double>& alpha, const std::vector<double>& beta,
                           double& theta, Eigen::VectorXd& s) {
    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd d(k), e(k);
    for (Eigen::Index i = 0; i < k; ++i) d[i] = alpha[static_cast<std::size_t>(i)];
    e[0] = 0.0;
    for (Eigen::Index i = 1; i < k; ++i) e[i] = beta[static_cast<std::size_t>(i - 1)];
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(k, k);
    tridiag_ql(d, e, &z);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < k; ++i)
        if (d[i] < d[best]) best = i;
    theta = d[best];
    s = z.col(best);
}

} // namespace detail

// Lanczos iteration with full reorthogonalization, fixed all-ones start
// vector. `apply` computes y = A x. Converges on the algebraically smallest
// eigenvalue; the returned residual is recomputed explicitly.
template <class MatVec>
LowestEigenpair lanczos_lowest(std::int64_t dim, MatVec&& apply, double tol_abs,
                               int max_iter = 400) {
    const auto n = static_cast<Eigen::Index>(dim);
    if (n < 1) throw std::invalid_argument("lanczos_lowest: dimension must be >= 1");
    max_iter = static_cast<int>(std::min<std::int64_t>(max_iter, dim));

    Eigen::MatrixXd v(n, max_iter);
    std::vector<double> alpha, beta;
    alpha.reserve(static_cast<std::size_t>(max_iter));
    beta.reserve(static_cast<std::size_t>(max_iter));

    v.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::VectorXd w(n);

    auto ritz_pair = [&](int k) {
        double theta;
        Eigen::VectorXd s;
        detail::tridiag_lowest(alpha, beta, theta, s);
        Eigen::VectorXd x = v.leftCols(k) * s;
        x /= x.norm();
        Eigen::VectorXd ax(n);
        apply(x, ax);
        const double val = x.dot(ax);
        const double res = (ax - val * x).norm();
        return LowestEigenpair{val, std::move(x), k, res};
    };

    double best_res = std::numeric_limits<double>::infinity();
    for (int k = 0; k < max_iter; ++k) {
        apply(v.col(k), w);
        if (k > 0) w -= beta[static_cast<std::size_t>(k - 1)] * v.col(k - 1);
        alpha.push_back(v.col(k).dot(w));
        w -= alpha.back() * v.col(k);
        // full reorthogonalization, twice for float-safety
        for (int pass = 0; pass < 2; ++pass)
            w -= v.leftCols(k + 1) * (v.leftCols(k + 1).transpose() * w);
        const double b = w.norm();

        const bool invariant = b < 1e-14;
        const bool last = k + 1 == max_iter;
        if (invariant || last || (k >= 10 && (k % 5 == 0))) {
            double theta;
            Eigen::VectorXd s;
            detail::tridiag_lowest(alpha, beta, theta, s);
            const double res_est = invariant ? 0.0 : b * std::abs(s[s.size() - 1]);
            if (invariant || res_est <= tol_abs) {
                LowestEigenpair r = ritz_pair(k + 1);
                if (r.residual <= tol_abs || invariant) return r;
                best_res = std::min(best_res, r.residual);
            } else if (last) {
                LowestEigenpair r = ritz_pair(k + 1);
                if (r.residual <= tol_abs) return r;
                best_res = std::min(best_res, r.residual);
            }
        }
        if (invariant) break;
        if (k + 1 < max_iter) {
            beta.push_back(b);
            v.col(k + 1) = w / b;
        }
    }
    throw ConvergenceError("lanczos_lowest: no convergence within iteration budget", best_res);
}

} // namespace dicke
