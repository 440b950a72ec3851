#pragma once

#include <algorithm>

#include "ionpulse/dynamics.hpp"
#include "ionpulse/matching.hpp"

namespace ionpulse {

/// An ordered pulse sequence on one register.
struct PulseProgram {
    RegisterConfig config;
    std::vector<PulseSpec> pulses;

    PulseProgram(RegisterConfig config_in, std::vector<PulseSpec> pulses_in)
        : config(std::move(config_in)), pulses(std::move(pulses_in)) {
        if (pulses.empty()) {
            throw std::invalid_argument("PulseProgram: pulse list must be non-empty");
        }
        for (const PulseSpec& p : pulses) {
            detail::check_pulse(config, p);
        }
    }
};

/// Composed unitary of the whole program, U = U_n ... U_2 U_1.
inline OperatorMatrix program_unitary(const PulseProgram& program,
                                      EvolveMethod method = EvolveMethod::closed_form) {
    OperatorMatrix total;
    total.role = OperatorRole::unitary;
    total.entries = cmat::Identity(program.config.dim(), program.config.dim());
    for (const PulseSpec& pulse : program.pulses) {
        const OperatorMatrix u = (method == EvolveMethod::closed_form)
                                     ? pulse_propagator_closed_form(program.config, pulse)
                                     : pulse_propagator_oracle(program.config, pulse);
        total.entries = u.entries * total.entries;
        total.truncation_touched = total.truncation_touched || u.truncation_touched;
    }
    return total;
}

inline RegisterState run_program(const PulseProgram& program, RegisterState state,
                                 EvolveMethod method = EvolveMethod::closed_form) {
    for (const PulseSpec& pulse : program.pulses) {
        state = evolve(state, program.config, pulse, method);
    }
    return state;
}

// ---------------------------------------------------------------------------
// Computational subspaces

/// Gamma space of one CQ plus the BQ: {|0 g>, |0 e>, |1 g>, |1 e>} on the
/// target ion, spectators in |g>.
inline std::vector<int> gamma_subspace(const RegisterConfig& config, int target) {
    std::vector<int> idx;
    for (int m = 0; m <= 1; ++m) {
        for (int s = 0; s <= 1; ++s) {
            idx.push_back(config.basis_index(m, config.set_spin(0u, target, s)));
        }
    }
    return idx;
}

/// Two-ion computational space at BQ = |0>: {|gg>, |ge>, |eg>, |ee>} on
/// (control, target), spectators in |g>.
inline std::vector<int> ion_pair_subspace(const RegisterConfig& config, int control, int target) {
    std::vector<int> idx;
    for (int si = 0; si <= 1; ++si) {
        for (int sj = 0; sj <= 1; ++sj) {
            unsigned spins = config.set_spin(0u, control, si);
            spins = config.set_spin(spins, target, sj);
            idx.push_back(config.basis_index(0, spins));
        }
    }
    return idx;
}

/// Single CQ at BQ = |0>: {|g>, |e>} on the target ion.
inline std::vector<int> single_cq_subspace(const RegisterConfig& config, int target) {
    return {config.basis_index(0, config.set_spin(0u, target, 0)),
            config.basis_index(0, config.set_spin(0u, target, 1))};
}

// ---------------------------------------------------------------------------
// Ideal gates, written out as explicit constants

struct GateSpec {
    std::string name;
    cmat ideal;
    std::vector<int> subspace;
    bool bus_gate = false; // ion-ion gate: BQ must return to |0>
};

inline cmat ideal_cz4() {
    cmat m = cmat::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 2) = 1.0;
    m(3, 3) = -1.0;
    return m;
}

inline cmat ideal_cn4() {
    cmat m = cmat::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
}

inline cmat ideal_walsh_hadamard(PhaseFamily family) {
    const double r = 1.0 / std::sqrt(2.0);
    cmat m(2, 2);
    if (family == PhaseFamily::half_pi) {
        m << r, r, -r, r;
    } else {
        m << r, -r, r, r;
    }
    return m;
}

inline GateSpec gate_cz_cb(const RegisterConfig& config, int target) {
    return GateSpec{"cz_cb", ideal_cz4(), gamma_subspace(config, target), false};
}

inline GateSpec gate_cn_cb(const RegisterConfig& config, int target) {
    return GateSpec{"cn_cb", ideal_cn4(), gamma_subspace(config, target), false};
}

inline GateSpec gate_cz_ion_ion(const RegisterConfig& config, int control, int target) {
    return GateSpec{"cz_ii", ideal_cz4(), ion_pair_subspace(config, control, target), true};
}

inline GateSpec gate_cn_ion_ion(const RegisterConfig& config, int control, int target) {
    return GateSpec{"cn_ii", ideal_cn4(), ion_pair_subspace(config, control, target), true};
}

inline GateSpec gate_hadamard(const RegisterConfig& config, int target, PhaseFamily family) {
    return GateSpec{"hadamard", ideal_walsh_hadamard(family), single_cq_subspace(config, target),
                    false};
}

// ---------------------------------------------------------------------------
// Sequence builders. All durations taken from the solvers are Omega*t/pi and
// converted to the stored Omega*t here.

namespace detail {

inline PulseSpec carrier(int target, double phase, double tau) {
    return PulseSpec{target, SidebandIndex{0}, phase, tau * pi};
}

inline PulseSpec sideband(int target, double phase, double tau) {
    return PulseSpec{target, SidebandIndex{1}, phase, tau * pi};
}

inline void require_same_eta(LambDicke a, LambDicke b, const char* what) {
    if (std::abs(a.value() - b.value()) > 1e-12) {
        throw MatchError(std::string(what) + ": solutions were solved for different eta values (" +
                         std::to_string(a.value()) + " vs " + std::to_string(b.value()) + ")");
    }
}

} // namespace detail

/// Single resonant pulse; tau is Omega*t/pi.
inline PulseProgram seq_rotation(const RegisterConfig& config, int target, double phase,
                                 double tau) {
    return PulseProgram{config, {detail::carrier(target, phase, tau)}};
}

/// Carrier duration rotating the m-th phonon block by pi/4 (Walsh-Hadamard).
inline double hadamard_tau(LambDicke eta, int m = 0) {
    return 0.25 / rabi_ratio(m, 0, eta);
}

/// Walsh-Hadamard rotation on one CQ (valid on the BQ = |0> subspace).
inline PulseProgram seq_hadamard(const RegisterConfig& config, int target, PhaseFamily family) {
    return seq_rotation(config, target, phase_of(family), hadamard_tau(config.eta));
}

/// One off-resonant pulse realizing CZ between the CQ and BQ. The initial
/// phase is free.
inline PulseProgram seq_cz_cb(const RegisterConfig& config, const SidebandMatch& match, int target,
                              double phase = 0.5 * pi) {
    detail::require_same_eta(config.eta, match.eta, "seq_cz_cb");
    return PulseProgram{config, {detail::sideband(target, phase, match.tau2)}};
}

/// Two equal red-sideband pulses realizing the same CZ through the
/// |1 e> -> -|2 g> -> -|1 e> round trip. Throws if eta admits no branch.
inline PulseProgram seq_cz_cb_two_pulse(const RegisterConfig& config, int target,
                                        double phase = 0.5 * pi, int max_p_prime = 64) {
    const std::optional<TwoPulseCz> solution = solve_two_pulse_cz(config.eta, max_p_prime);
    if (!solution) {
        throw MatchError("seq_cz_cb_two_pulse: no admissible t' for eta = " +
                         std::to_string(config.eta.value()) +
                         " (needs (2-eta^2)/sqrt(2) = (4a+1)/(4p'))");
    }
    return PulseProgram{config,
                        {detail::sideband(target, phase, solution->tau),
                         detail::sideband(target, phase, solution->tau)}};
}

/// Three-pulse reduced CN between the CQ and BQ: resonant t1, off-resonant t2,
/// resonant t3, with phi1 = phi3 from the carrier family.
inline PulseProgram seq_cn_cb(const RegisterConfig& config, const SidebandMatch& match,
                              const CarrierMatch& carrier, int target,
                              double sideband_phase = 0.5 * pi) {
    detail::require_same_eta(match.eta, carrier.eta, "seq_cn_cb");
    detail::require_same_eta(config.eta, match.eta, "seq_cn_cb");
    const double phi = phase_of(carrier.family);
    return PulseProgram{config,
                        {detail::carrier(target, phi, carrier.tau1),
                         detail::sideband(target, sideband_phase, match.tau2),
                         detail::carrier(target, phi, carrier.tau3)}};
}

/// Three red-sideband pulses realizing CZ between two ions with the BQ
/// starting and ending in |0>: control t'_1, target t2, control t'_3 with the
/// first and third phases equal.
inline PulseProgram seq_cz_ion_ion(const RegisterConfig& config, const SidebandMatch& match,
                                   const IonIonMatch& ii, int control, int target,
                                   double control_phase = 0.5 * pi,
                                   double target_phase = 0.5 * pi) {
    if (control == target) {
        throw std::invalid_argument("seq_cz_ion_ion: control and target must differ");
    }
    detail::require_same_eta(config.eta, match.eta, "seq_cz_ion_ion");
    return PulseProgram{config,
                        {detail::sideband(control, control_phase, ii.tau1(config.eta)),
                         detail::sideband(target, target_phase, match.tau2),
                         detail::sideband(control, control_phase, ii.tau3(config.eta))}};
}

/// Five-pulse CN between two ions: the ion-ion CZ surrounded by two resonant
/// pulses on the target, phases and durations from the sandwich family.
inline PulseProgram seq_cn_ion_ion(const RegisterConfig& config, const SidebandMatch& match,
                                   const IonIonMatch& ii, const TargetSandwich& sandwich,
                                   int control, int target, double control_phase = 0.5 * pi,
                                   double target_phase = 0.5 * pi) {
    if (control == target) {
        throw std::invalid_argument("seq_cn_ion_ion: control and target must differ");
    }
    detail::require_same_eta(config.eta, match.eta, "seq_cn_ion_ion");
    const double phi = phase_of(sandwich.family);
    const PulseProgram cz =
        seq_cz_ion_ion(config, match, ii, control, target, control_phase, target_phase);
    std::vector<PulseSpec> pulses;
    pulses.push_back(detail::carrier(target, phi, sandwich.tau1(config.eta)));
    pulses.insert(pulses.end(), cz.pulses.begin(), cz.pulses.end());
    pulses.push_back(detail::carrier(target, phi, sandwich.tau3(config.eta)));
    return PulseProgram{config, std::move(pulses)};
}

/// Uniform superposition over all N CQs from |0>|g...g>: one pi/4 resonant
/// pulse per ion with equal initial phases.
inline RegisterState prepare_uniform(const RegisterConfig& config,
                                     PhaseFamily family = PhaseFamily::half_pi) {
    RegisterState state = RegisterState::ground(config);
    const double tau = hadamard_tau(config.eta);
    for (int ion = 0; ion < config.n_ions; ++ion) {
        state = evolve(state, config, detail::carrier(ion, phase_of(family), tau));
    }
    return state;
}

// ---------------------------------------------------------------------------
// Verification

struct GateReport {
    cmat achieved;                 // projected block in the gate's subspace
    double deviation = 0.0;        // max-norm vs ideal, no global-phase allowance
    double phase_estimate = 0.0;   // arg tr(ideal^dag achieved)
    double deviation_best_phase = 0.0;
    double trace_fidelity = 0.0;   // |tr(ideal^dag achieved)| / dim
    double subspace_leakage = 0.0; // worst column weight leaving the subspace
    double bus_leakage = 0.0;      // worst column weight off phonon |0> (bus gates)
    bool bus_restored = true;
    bool truncation_touched = false;
};

/// Composes the program, projects onto the gate's computational subspace and
/// compares against the ideal matrix entrywise.
inline GateReport project_and_compare(const PulseProgram& program, const GateSpec& gate,
                                      EvolveMethod method = EvolveMethod::closed_form) {
    const Eigen::Index n = static_cast<Eigen::Index>(gate.subspace.size());
    if (gate.ideal.rows() != n || gate.ideal.cols() != n) {
        throw std::invalid_argument("project_and_compare: ideal matrix does not match subspace");
    }
    int max_subspace_phonon = 0;
    for (int index : gate.subspace) {
        if (index < 0 || index >= program.config.dim()) {
            throw std::invalid_argument("project_and_compare: subspace index outside register");
        }
        max_subspace_phonon = std::max(max_subspace_phonon, program.config.phonon_of(index));
    }
    // truncation is exact only while the populated support cannot reach the
    // frozen blocks: initial support + total sideband quanta <= n_max
    int sideband_quanta = 0;
    for (const PulseSpec& pulse : program.pulses) {
        sideband_quanta += pulse.k.value();
    }
    if (max_subspace_phonon + sideband_quanta > program.config.fock_cutoff) {
        throw std::invalid_argument(
            "project_and_compare: fock_cutoff " + std::to_string(program.config.fock_cutoff) +
            " too small for exact verification; need at least " +
            std::to_string(max_subspace_phonon + sideband_quanta));
    }
    const OperatorMatrix u = program_unitary(program, method);

    GateReport report;
    report.truncation_touched = u.truncation_touched;
    report.achieved = cmat(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            report.achieved(r, c) = u.entries(gate.subspace[r], gate.subspace[c]);
        }
    }

    report.deviation = (report.achieved - gate.ideal).cwiseAbs().maxCoeff();
    const cxd overlap = (gate.ideal.adjoint() * report.achieved).trace();
    report.phase_estimate = std::arg(overlap);
    report.trace_fidelity = std::abs(overlap) / static_cast<double>(n);
    const cxd back_phase = std::exp(cxd{0.0, -report.phase_estimate});
    report.deviation_best_phase =
        (back_phase * report.achieved - gate.ideal).cwiseAbs().maxCoeff();

    const int spin_states = program.config.spin_states();
    for (int col : gate.subspace) {
        double out_weight = 0.0;
        double off_bus = 0.0;
        for (Eigen::Index r = 0; r < u.entries.rows(); ++r) {
            const double w = std::norm(u.entries(r, col));
            if (std::find(gate.subspace.begin(), gate.subspace.end(), static_cast<int>(r)) ==
                gate.subspace.end()) {
                out_weight += w;
            }
            if (static_cast<int>(r) / spin_states != 0) {
                off_bus += w;
            }
        }
        report.subspace_leakage = std::max(report.subspace_leakage, out_weight);
        report.bus_leakage = std::max(report.bus_leakage, off_bus);
    }
    if (gate.bus_gate) {
        report.bus_restored = report.bus_leakage < 1e-9;
    }
    return report;
}

} // namespace ionpulse
