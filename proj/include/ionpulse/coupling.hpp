#pragma once

#include "ionpulse/types.hpp"

namespace ionpulse {

// Highest phonon number m = m_lower + k the coupling formulas accept.
// Gate constructions never exceed phonon 2.
inline constexpr int max_coupling_phonon = 32;

namespace detail {

inline void check_coupling_range(int m_lower, int k) {
    if (m_lower < 0) {
        throw std::invalid_argument("rabi_frequency: m_lower must be non-negative, got " +
                                    std::to_string(m_lower));
    }
    if (m_lower + k > max_coupling_phonon) {
        throw std::invalid_argument("rabi_frequency: m_lower + k = " +
                                    std::to_string(m_lower + k) + " exceeds supported range " +
                                    std::to_string(max_coupling_phonon));
    }
}

} // namespace detail

/// Sideband Rabi frequency Omega_{m,m+k} coupling |m+k>|g> <-> |m>|e>,
/// exact to all orders in eta:
///
///   Omega_{m,m+k} = (Omega eta^k e^{-eta^2/2} / 2) sqrt((m+k)!/m!)
///                   * sum_{n=0}^{m} (-eta^2)^n C(m,n) / (k+n)!
///
/// The sum is accumulated by the term recurrence
/// term_{n+1} = term_n * (-eta^2)(m-n) / ((n+1)(k+n+1)), so no explicit
/// factorials appear. The result is signed; carrier rates Omega_{m,m} go
/// negative once eta^2 passes the first Laguerre zero.
inline double rabi_frequency(int m_lower, SidebandIndex k, LambDicke eta, RabiBase omega) {
    const int kk = k.value();
    detail::check_coupling_range(m_lower, kk);
    const double x = eta.squared();

    // prefactor: omega/2 * e^{-x/2} * prod_{j=1..k} eta*sqrt(m_lower+j)
    double pref = 0.5 * omega.value() * std::exp(-0.5 * x);
    for (int j = 1; j <= kk; ++j) {
        pref *= eta.value() * std::sqrt(static_cast<double>(m_lower + j));
    }

    double term = 1.0;
    for (int j = 1; j <= kk; ++j) {
        term /= static_cast<double>(j); // term_0 = 1/k!
    }
    double sum = term;
    for (int n = 0; n < m_lower; ++n) {
        term *= -x * static_cast<double>(m_lower - n) /
                static_cast<double>((n + 1) * (kk + n + 1));
        sum += term;
    }
    return pref * sum;
}

/// Independent cross-check: the same coupling via the associated Laguerre
/// closed form, Omega_{m,m+k} = (Omega eta^k e^{-eta^2/2}/2)
/// * sqrt(m!/(m+k)!) * L^k_m(eta^2), with L^k_m from the standard
/// three-term recurrence (std::assoc_laguerre).
inline double rabi_frequency_laguerre(int m_lower, SidebandIndex k, LambDicke eta,
                                      RabiBase omega) {
    const int kk = k.value();
    detail::check_coupling_range(m_lower, kk);
    const double x = eta.squared();

    // same prefactor evaluation as the sum route; sqrt(m!/(m+k)!) enters as
    // sqrt((m+k)!/m!) * (m!/(m+k)!)
    double pref = 0.5 * omega.value() * std::exp(-0.5 * x);
    for (int j = 1; j <= kk; ++j) {
        pref *= eta.value() * std::sqrt(static_cast<double>(m_lower + j));
    }
    double ratio = 1.0;
    for (int j = 1; j <= kk; ++j) {
        ratio /= static_cast<double>(m_lower + j);
    }
    const double lag = std::assoc_laguerre(static_cast<unsigned>(m_lower),
                                           static_cast<unsigned>(kk), x);
    return pref * ratio * lag;
}

/// Coupling rate relative to the base Rabi frequency (Omega = 1).
inline double rabi_ratio(int m_lower, int k, LambDicke eta) {
    return rabi_frequency(m_lower, SidebandIndex{k}, eta, RabiBase{1.0});
}

} // namespace ionpulse
