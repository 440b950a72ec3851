#pragma once

#include <Eigen/Dense>

#include "ionpulse/coupling.hpp"

namespace ionpulse {

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

enum class OperatorRole { unitary, hermitian };

/// Dense operator on the phonon (x) spins basis, tagged with its intended role.
struct OperatorMatrix {
    cmat entries;
    OperatorRole role = OperatorRole::unitary;
    bool truncation_touched = false; // a sideband block above n_max was frozen to identity

    Eigen::Index dim() const { return entries.rows(); }

    double unitarity_defect() const {
        const cmat d = entries.adjoint() * entries - cmat::Identity(dim(), dim());
        return d.cwiseAbs().maxCoeff();
    }
    double hermiticity_defect() const {
        const cmat d = entries - entries.adjoint();
        return d.cwiseAbs().maxCoeff();
    }
};

/// Normalized amplitude vector over the phonon (x) internal-spins basis.
/// Evolution never renormalizes; norm drift is a test signal.
struct RegisterState {
    cvec amplitudes;
    int n_ions = 1;
    int fock_cutoff = 2;

    static RegisterState basis(const RegisterConfig& config, int m, unsigned spins) {
        if (m < 0 || m > config.fock_cutoff || spins >= static_cast<unsigned>(config.spin_states())) {
            throw std::invalid_argument("RegisterState::basis: label outside the register");
        }
        RegisterState s;
        s.amplitudes = cvec::Zero(config.dim());
        s.amplitudes(config.basis_index(m, spins)) = 1.0;
        s.n_ions = config.n_ions;
        s.fock_cutoff = config.fock_cutoff;
        return s;
    }

    /// |0>|g...g>
    static RegisterState ground(const RegisterConfig& config) { return basis(config, 0, 0); }

    double norm() const { return amplitudes.norm(); }

    bool matches(const RegisterConfig& config) const {
        return n_ions == config.n_ions && fock_cutoff == config.fock_cutoff &&
               amplitudes.size() == config.dim();
    }
};

enum class EvolveMethod { closed_form, oracle };

namespace detail {

/// i^n for any integer n (also negative).
inline cxd unit_power(int n) {
    static const cxd table[4] = {cxd{1, 0}, cxd{0, 1}, cxd{-1, 0}, cxd{0, -1}};
    return table[((n % 4) + 4) % 4];
}

inline void check_pulse(const RegisterConfig& config, const PulseSpec& pulse) {
    if (pulse.target >= config.n_ions) {
        throw std::invalid_argument("pulse target " + std::to_string(pulse.target) +
                                    " outside register of " + std::to_string(config.n_ions) +
                                    " ions");
    }
    if (pulse.k.value() > config.fock_cutoff) {
        throw std::invalid_argument("sideband index k = " + std::to_string(pulse.k.value()) +
                                    " exceeds fock cutoff " + std::to_string(config.fock_cutoff));
    }
}

} // namespace detail

/// Exact closed-form propagator of an addressed pulse: 2x2 rotations on each
/// pair {|m, e_t>, |m+k, g_t>}, identity on |m, g_t> with m < k and on every
/// spectator ion. Pairs whose upper phonon state would exceed the cutoff are
/// left as identity and flagged via truncation_touched; callers that need
/// exact results keep the initial phonon support low enough that those rows
/// are never populated.
inline OperatorMatrix pulse_propagator_closed_form(const RegisterConfig& config,
                                                   const PulseSpec& pulse) {
    detail::check_pulse(config, pulse);
    const int k = pulse.k.value();
    const int n_max = config.fock_cutoff;
    const int spin_states = config.spin_states();

    OperatorMatrix op;
    op.role = OperatorRole::unitary;
    op.entries = cmat::Identity(config.dim(), config.dim());
    op.truncation_touched = (k >= 1 && pulse.duration != 0.0);

    const cxd i_pow = detail::unit_power(k - 1);        // i^{k-1}
    const cxd mi_pow = std::conj(i_pow);                // (-i)^{k-1}
    const cxd e_phase = std::exp(cxd{0.0, pulse.phase});

    for (int m = 0; m + k <= n_max; ++m) {
        const double angle = rabi_ratio(m, k, config.eta) * pulse.duration;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        for (unsigned spins = 0; spins < static_cast<unsigned>(spin_states); ++spins) {
            if (config.spin_bit(spins, pulse.target) != 1) {
                continue;
            }
            const unsigned spins_g = config.set_spin(spins, pulse.target, 0);
            const int u = config.basis_index(m, spins);          // |m, e_t>
            const int v = config.basis_index(m + k, spins_g);    // |m+k, g_t>
            op.entries(u, u) = c;
            op.entries(v, v) = c;
            op.entries(v, u) = -mi_pow * e_phase * s;
            op.entries(u, v) = i_pow * std::conj(e_phase) * s;
        }
    }
    return op;
}

/// Interaction-picture Hamiltonian of the pulse in units of the base Rabi
/// frequency: <m-k, e_t| H |m, g_t> = i^k e^{-i phase} Omega_{m-k,m} / Omega
/// for m >= k, Hermitian conjugates below the diagonal, zero elsewhere.
inline OperatorMatrix hamiltonian_matrix(const RegisterConfig& config, const PulseSpec& pulse) {
    detail::check_pulse(config, pulse);
    const int k = pulse.k.value();
    const int spin_states = config.spin_states();

    OperatorMatrix op;
    op.role = OperatorRole::hermitian;
    op.entries = cmat::Zero(config.dim(), config.dim());

    const cxd coeff = detail::unit_power(k) * std::exp(cxd{0.0, -pulse.phase});
    for (int m = k; m <= config.fock_cutoff; ++m) {
        const cxd val = coeff * rabi_ratio(m - k, k, config.eta);
        for (unsigned spins = 0; spins < static_cast<unsigned>(spin_states); ++spins) {
            if (config.spin_bit(spins, pulse.target) != 0) {
                continue;
            }
            const unsigned spins_e = config.set_spin(spins, pulse.target, 1);
            const int row = config.basis_index(m - k, spins_e);
            const int col = config.basis_index(m, spins);
            op.entries(row, col) = val;
            op.entries(col, row) = std::conj(val);
        }
    }
    return op;
}

/// Independent oracle propagator exp(-i H t) by spectral decomposition of the
/// full Hermitian matrix; does not use the 2x2 block structure.
inline OperatorMatrix pulse_propagator_oracle(const RegisterConfig& config,
                                              const PulseSpec& pulse) {
    const OperatorMatrix h = hamiltonian_matrix(config, pulse);
    Eigen::SelfAdjointEigenSolver<cmat> solver(h.entries);
    if (solver.info() != Eigen::Success) {
        throw DecompositionError("pulse_propagator_oracle: eigendecomposition failed");
    }
    const auto phases =
        (cxd{0.0, -1.0} * solver.eigenvalues().array() * pulse.duration).exp().matrix();
    OperatorMatrix op;
    op.role = OperatorRole::unitary;
    op.entries = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    op.truncation_touched = (pulse.k.value() >= 1 && pulse.duration != 0.0);
    return op;
}

/// Applies the selected propagator. No renormalization.
inline RegisterState evolve(const RegisterState& state, const RegisterConfig& config,
                            const PulseSpec& pulse, EvolveMethod method = EvolveMethod::closed_form) {
    if (!state.matches(config)) {
        throw std::invalid_argument("evolve: state dimension does not match register config");
    }
    const OperatorMatrix u = (method == EvolveMethod::closed_form)
                                 ? pulse_propagator_closed_form(config, pulse)
                                 : pulse_propagator_oracle(config, pulse);
    RegisterState out = state;
    out.amplitudes = u.entries * state.amplitudes;
    return out;
}

/// Total probability weight on basis states with phonon number above the limit.
inline double leakage(const RegisterState& state, int phonon_limit) {
    const int spin_states = 1 << state.n_ions;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        if (static_cast<int>(i) / spin_states > phonon_limit) {
            sum += std::norm(state.amplitudes(i));
        }
    }
    return sum;
}

} // namespace ionpulse
