// coherent.hpp — Glauber and spin-j coherent-state amplitudes and overlaps.
//
// Everything is evaluated in the log domain (log-magnitude + phase) first:
// n! and (1+|z|^2)^(2j) overflow quickly, and grids go up to n_c ~ 500 and
// j ~ 50. Magnitudes that underflow double range flush to zero, which is
// the correct limit for every quantity here.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dicke {

using Complex = std::complex<double>;

// A point (alpha, z) of the four-dimensional phase space: alpha the field
// coordinate, z the stereographic atomic coordinate.
struct PhasePoint {
    Complex alpha{0.0, 0.0};
    Complex z{0.0, 0.0};
};

namespace detail {

inline Complex from_log_polar(double log_mag, double phase) {
    const double mag = std::exp(log_mag);  // underflow -> 0 is fine
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

// log C(2j, k) for integer 2j and k in [0, 2j]
inline double log_binomial_2j(int two_j, int k) {
    return std::lgamma(two_j + 1.0) - std::lgamma(k + 1.0) - std::lgamma(two_j - k + 1.0);
}

inline int spin_level(double j, double m) {
    const double k = j + m;
    const auto ki = static_cast<int>(std::llround(k));
    if (std::abs(k - ki) > 1e-9 || ki < 0 || ki > std::llround(2.0 * j))
        throw std::invalid_argument("spin amplitude: m must be a half-integer in [-j, j]");
    return ki;
}

} // namespace detail

// <n|alpha> = e^{-|alpha|^2/2} alpha^n / sqrt(n!)
inline Complex glauber_amplitude(int n, Complex alpha) {
    if (n < 0) throw std::invalid_argument("glauber_amplitude: n must be >= 0");
    const double a2 = std::norm(alpha);
    if (n == 0) return detail::from_log_polar(-0.5 * a2, 0.0);
    const double r = std::abs(alpha);
    if (r == 0.0) return {0.0, 0.0};
    const double log_mag = -0.5 * a2 + n * std::log(r) - 0.5 * detail::log_factorial(n);
    return detail::from_log_polar(log_mag, n * std::arg(alpha));
}

// <j,m|z> = (1+|z|^2)^{-j} sqrt(C(2j, j+m)) z^{j+m}
inline Complex spin_amplitude(double j, double m, Complex z) {
    const int two_j = static_cast<int>(std::llround(2.0 * j));
    const int k = detail::spin_level(j, m);
    const double log_norm = -j * std::log1p(std::norm(z));
    if (k == 0) return detail::from_log_polar(log_norm, 0.0);
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    const double log_mag = log_norm + 0.5 * detail::log_binomial_2j(two_j, k) + k * std::log(r);
    return detail::from_log_polar(log_mag, k * std::arg(z));
}

// phi_{n,m}^{(j)}(alpha, z) = <n|alpha><j,m|z>: the probability amplitude of
// n photons and j+m excited atoms in |alpha> (x) |z>.
inline Complex joint_amplitude(int n, double m, const PhasePoint& pt, double j) {
    return glauber_amplitude(n, pt.alpha) * spin_amplitude(j, m, pt.z);
}

// <alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta)
inline Complex glauber_overlap(Complex alpha, Complex beta) {
    const Complex expo = -0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(alpha) * beta;
    return detail::from_log_polar(expo.real(), expo.imag());
}

// <z|w> = (1 + conj(z) w)^{2j} / ((1+|z|^2)^j (1+|w|^2)^j); 2j integral, so
// the power is single-valued through the principal log.
inline Complex spin_overlap(Complex z, Complex w, double j) {
    const int two_j = static_cast<int>(std::llround(2.0 * j));
    const Complex u = 1.0 + std::conj(z) * w;
    if (u == Complex{0.0, 0.0}) return (two_j == 0) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    const double log_mag =
        two_j * 0.5 * std::log(std::norm(u)) - j * std::log1p(std::norm(z)) - j * std::log1p(std::norm(w));
    return detail::from_log_polar(log_mag, two_j * std::arg(u));
}

} // namespace dicke
