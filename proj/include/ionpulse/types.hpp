#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace ionpulse {

using cxd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Thrown when matching conditions admit no solution for the requested branch.
struct MatchError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when the spectral decomposition backing the oracle propagator fails.
struct DecompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lamb-Dicke parameter, strictly inside (0, 1).
class LambDicke {
  public:
    explicit LambDicke(double eta) : eta_(eta) {
        if (!std::isfinite(eta) || eta <= 0.0 || eta >= 1.0) {
            throw std::invalid_argument("LambDicke: eta must be finite and in (0, 1), got " +
                                        std::to_string(eta));
        }
    }
    double value() const { return eta_; }
    double squared() const { return eta_ * eta_; }

  private:
    double eta_;
};

/// Base Rabi frequency in rad per unit time. Dimensionless mode uses omega = 1
/// and reports durations as Omega*t.
class RabiBase {
  public:
    explicit RabiBase(double omega = 1.0) : omega_(omega) {
        if (!std::isfinite(omega) || omega <= 0.0) {
            throw std::invalid_argument("RabiBase: omega must be finite and positive, got " +
                                        std::to_string(omega));
        }
    }
    double value() const { return omega_; }

  private:
    double omega_;
};

/// Vibrational sideband index: 0 = carrier, 1 = first red sideband.
/// Larger k is accepted by the coupling formula and the evolver.
class SidebandIndex {
  public:
    explicit SidebandIndex(int k) : k_(k) {
        if (k < 0) {
            throw std::invalid_argument("SidebandIndex: k must be non-negative, got " +
                                        std::to_string(k));
        }
    }
    int value() const { return k_; }

  private:
    int k_;
};

/// The physical register: N ions sharing one phonon mode, one eta, one Omega.
struct RegisterConfig {
    int n_ions;
    LambDicke eta;
    RabiBase omega;
    int fock_cutoff; // highest retained phonon number n_max

    RegisterConfig(int n, LambDicke eta_in, int cutoff, RabiBase omega_in = RabiBase{1.0})
        : n_ions(n), eta(eta_in), omega(omega_in), fock_cutoff(cutoff) {
        if (n < 1 || n > 8) {
            throw std::invalid_argument("RegisterConfig: n_ions must be in [1, 8], got " +
                                        std::to_string(n));
        }
        if (cutoff < 2) {
            throw std::invalid_argument("RegisterConfig: fock_cutoff must be >= 2, got " +
                                        std::to_string(cutoff));
        }
    }

    int spin_states() const { return 1 << n_ions; }
    int dim() const { return (fock_cutoff + 1) * spin_states(); }

    // Basis ordering: phonon-major, ions left to right, g=0 < e=1.
    int basis_index(int m, unsigned spins) const {
        return m * spin_states() + static_cast<int>(spins);
    }
    int phonon_of(int index) const { return index / spin_states(); }
    unsigned spins_of(int index) const {
        return static_cast<unsigned>(index % spin_states());
    }
    int spin_bit(unsigned spins, int ion) const {
        return static_cast<int>((spins >> (n_ions - 1 - ion)) & 1u);
    }
    unsigned set_spin(unsigned spins, int ion, int value) const {
        const unsigned mask = 1u << (n_ions - 1 - ion);
        return value ? (spins | mask) : (spins & ~mask);
    }
};

/// One addressed square laser pulse. Duration is stored as Omega*t.
struct PulseSpec {
    int target;
    SidebandIndex k;
    double phase;
    double duration;

    PulseSpec(int target_in, SidebandIndex k_in, double phase_in, double duration_in)
        : target(target_in), k(k_in), phase(phase_in), duration(duration_in) {
        if (target < 0) {
            throw std::invalid_argument("PulseSpec: target must be non-negative");
        }
        if (!std::isfinite(phase)) {
            throw std::invalid_argument("PulseSpec: phase must be finite");
        }
        if (!std::isfinite(duration) || duration < 0.0) {
            throw std::invalid_argument("PulseSpec: duration must be finite and non-negative");
        }
    }
};

} // namespace ionpulse
