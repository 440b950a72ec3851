#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ionpulse/gates.hpp"

using namespace ionpulse;

namespace {

RegisterConfig config_for(const SidebandMatch& match, int n_ions = 1, int cutoff = 4) {
    return RegisterConfig{n_ions, match.eta, cutoff};
}

} // namespace

TEST_CASE("seq_rotation: Walsh-Hadamard matrices for both phase families") {
    const SidebandMatch match = solve_sideband_match(2, 3);
    const RegisterConfig config = config_for(match);

    const GateReport plus = project_and_compare(
        seq_hadamard(config, 0, PhaseFamily::half_pi), gate_hadamard(config, 0, PhaseFamily::half_pi));
    CHECK(plus.deviation < 1e-12);

    const GateReport minus =
        project_and_compare(seq_hadamard(config, 0, PhaseFamily::three_half_pi),
                            gate_hadamard(config, 0, PhaseFamily::three_half_pi));
    CHECK(minus.deviation < 1e-12);
}

TEST_CASE("seq_rotation: zero duration is the identity program") {
    const RegisterConfig config{1, LambDicke{0.5}, 4};
    const PulseProgram program = seq_rotation(config, 0, 1.1, 0.0);
    const OperatorMatrix u = program_unitary(program);
    CHECK((u.entries - cmat::Identity(config.dim(), config.dim())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one-pulse CZ_cb: exact solve hits diag(1,1,1,-1) to 1e-9") {
    for (auto [p, q] : {std::pair{2, 2}, {2, 3}, {6, 8}, {3, 3}, {4, 6}, {3, 4}}) {
        const SidebandMatch match = solve_sideband_match(p, q);
        const RegisterConfig config = config_for(match);
        const GateReport report =
            project_and_compare(seq_cz_cb(config, match, 0), gate_cz_cb(config, 0));
        CHECK(report.deviation < 1e-9);
        CHECK(report.subspace_leakage < 1e-9);
    }
}

TEST_CASE("one-pulse CZ_cb: table digits land within 1e-3") {
    const SidebandMatch exact = solve_sideband_match(6, 8);
    SidebandMatch printed = exact;
    printed.tau2 = 55.9343;
    const RegisterConfig config = config_for(exact);
    const GateReport report =
        project_and_compare(seq_cz_cb(config, printed, 0), gate_cz_cb(config, 0));
    CHECK(report.deviation < 1e-3);
    CHECK(report.deviation > 1e-12); // rounding is visible, not hidden
}

TEST_CASE("one-pulse CZ_cb: projected matrix is independent of the pulse phase") {
    const SidebandMatch match = solve_sideband_match(2, 2);
    const RegisterConfig config = config_for(match);
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * pi);
    const GateReport reference = project_and_compare(
        seq_cz_cb(config, match, 0, phi(rng)), gate_cz_cb(config, 0));
    for (int trial = 0; trial < 12; ++trial) {
        const GateReport other = project_and_compare(
            seq_cz_cb(config, match, 0, phi(rng)), gate_cz_cb(config, 0));
        CHECK((other.achieved - reference.achieved).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("one-pulse CZ_cb: |0>|g> is untouched") {
    const SidebandMatch match = solve_sideband_match(2, 3);
    const RegisterConfig config = config_for(match);
    const RegisterState out =
        run_program(seq_cz_cb(config, match, 0), RegisterState::ground(config));
    CHECK(std::abs(out.amplitudes(0) - 1.0) < 1e-15);
}

TEST_CASE("one-pulse CZ_cb: a full Gamma superposition stays below phonon 2") {
    const SidebandMatch match = solve_sideband_match(3, 3);
    const RegisterConfig config = config_for(match);
    RegisterState state = RegisterState::ground(config);
    state.amplitudes.setZero();
    for (int i = 0; i < 4; ++i) {
        state.amplitudes(i) = 0.5;
    }
    const RegisterState out = run_program(seq_cz_cb(config, match, 0), state);
    CHECK(leakage(out, 1) < 1e-10);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("two-pulse CZ_cb: phonon-2 round trip and exact gate") {
    const SidebandMatch match = solve_sideband_match(2, 2);
    const RegisterConfig config = config_for(match);
    const PulseProgram program = seq_cz_cb_two_pulse(config, 0);
    REQUIRE(program.pulses.size() == 2);

    // after the first pulse, |1>|e> sits entirely on phonon |2>
    RegisterState mid = evolve(RegisterState::basis(config, 1, 1u), config, program.pulses[0]);
    CHECK(std::abs(std::abs(mid.amplitudes(config.basis_index(2, 0u))) - 1.0) < 1e-10);

    const GateReport report = project_and_compare(program, gate_cz_cb(config, 0));
    CHECK(report.deviation < 1e-9);
    CHECK(report.subspace_leakage < 1e-9);

    // |0>|e> comes back to itself through both pulses
    const RegisterState out = run_program(program, RegisterState::basis(config, 0, 1u));
    CHECK(std::abs(out.amplitudes(config.basis_index(0, 1u)) - 1.0) < 1e-10);
}

TEST_CASE("two-pulse CZ_cb: infeasible eta is reported") {
    const SidebandMatch match = solve_sideband_match(3, 3); // eta = 0.9064
    const RegisterConfig config = config_for(match);
    CHECK_THROWS_AS(seq_cz_cb_two_pulse(config, 0), MatchError);
}

TEST_CASE("three-pulse CN_cb: exact table row and fixed points") {
    const SidebandMatch match = solve_sideband_match(2, 2);
    const CarrierMatch carrier = solve_carrier_durations(match.eta, 5, 1, PhaseFamily::half_pi);
    const RegisterConfig config = config_for(match);
    const PulseProgram program = seq_cn_cb(config, match, carrier, 0);
    const GateReport report = project_and_compare(program, gate_cn_cb(config, 0));
    CHECK(report.deviation < 1e-9);
    CHECK(report.subspace_leakage < 1e-9);

    // BQ = |0> inputs are fixed points
    for (unsigned spin : {0u, 1u}) {
        const RegisterState out = run_program(program, RegisterState::basis(config, 0, spin));
        CHECK(std::abs(out.amplitudes(config.basis_index(0, spin)) - 1.0) < 1e-9);
    }
}

TEST_CASE("three-pulse CN_cb: oracle evolution agrees") {
    const SidebandMatch match = solve_sideband_match(2, 3);
    const CarrierMatch carrier = solve_carrier_durations(match.eta, 1, 1, PhaseFamily::half_pi);
    const RegisterConfig config = config_for(match);
    const PulseProgram program = seq_cn_cb(config, match, carrier, 0);
    const GateReport closed = project_and_compare(program, gate_cn_cb(config, 0));
    const GateReport oracle = project_and_compare(program, gate_cn_cb(config, 0),
                                                  EvolveMethod::oracle);
    CHECK(closed.deviation < 1e-9);
    CHECK(oracle.deviation < 1e-8);
}

TEST_CASE("three-pulse CN_cb: breaking the phase relation breaks the gate") {
    const SidebandMatch match = solve_sideband_match(2, 2);
    const CarrierMatch carrier = solve_carrier_durations(match.eta, 5, 1, PhaseFamily::half_pi);
    const RegisterConfig config = config_for(match);
    const double phi1 = phase_of(carrier.family);
    const PulseProgram broken{config,
                              {PulseSpec{0, SidebandIndex{0}, phi1, carrier.tau1 * pi},
                               PulseSpec{0, SidebandIndex{1}, 0.5 * pi, match.tau2 * pi},
                               PulseSpec{0, SidebandIndex{0}, phi1 + pi, carrier.tau3 * pi}}};
    const GateReport report = project_and_compare(broken, gate_cn_cb(config, 0));
    CHECK(report.deviation > 0.1);
}

TEST_CASE("CN_cb composes as carrier * CZ * carrier on the Gamma space") {
    const SidebandMatch match = solve_sideband_match(4, 6);
    const CarrierMatch carrier = solve_carrier_durations(match.eta, 2, 2, PhaseFamily::half_pi);
    const RegisterConfig config = config_for(match);
    const std::vector<int> gamma = gamma_subspace(config, 0);

    auto block = [&](const PulseProgram& program) {
        const cmat u = program_unitary(program).entries;
        cmat b(4, 4);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                b(r, c) = u(gamma[r], gamma[c]);
            }
        }
        return b;
    };

    const cmat r1 = block(seq_rotation(config, 0, phase_of(carrier.family), carrier.tau1));
    const cmat r3 = block(seq_rotation(config, 0, phase_of(carrier.family), carrier.tau3));
    const cmat composed = r3 * ideal_cz4() * r1;
    CHECK((composed - ideal_cn4()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ion-ion CZ: exact gate, bus restored, coefficients vanish") {
    const SidebandMatch match = solve_sideband_match(2, 3); // eta = 0.4819
    const IonIonMatch ii = solve_ion_ion_durations(1, 1);
    const RegisterConfig config = config_for(match, 2);
    const PulseProgram program = seq_cz_ion_ion(config, match, ii, 0, 1);
    REQUIRE(program.pulses.size() == 3);

    const GateReport report = project_and_compare(program, gate_cz_ion_ion(config, 0, 1));
    CHECK(report.deviation < 1e-9);
    CHECK(report.subspace_leakage < 1e-9);
    CHECK(report.bus_restored);
    CHECK(report.bus_leakage < 1e-9);

    // |0>|g_i>|g_j> invariant
    const RegisterState out = run_program(program, RegisterState::ground(config));
    CHECK(std::abs(out.amplitudes(0) - 1.0) < 1e-12);

    // the B, C, D coefficients of the three-pulse evolution all die out
    const cmat u = program_unitary(program).entries;
    const auto idx = [&](int m, int si, int sj) {
        unsigned spins = config.set_spin(0u, 0, si);
        spins = config.set_spin(spins, 1, sj);
        return config.basis_index(m, spins);
    };
    const double b2 = std::abs(u(idx(0, 1, 0), idx(0, 0, 1)));
    const double b3 = std::abs(u(idx(1, 0, 0), idx(0, 0, 1)));
    const double c1 = std::abs(u(idx(0, 0, 1), idx(0, 1, 0)));
    const double c3 = std::abs(u(idx(1, 0, 0), idx(0, 1, 0)));
    const double d1 = std::abs(u(idx(1, 0, 1), idx(0, 1, 1)));
    const double d2 = std::abs(u(idx(1, 1, 0), idx(0, 1, 1)));
    const double d3 = std::abs(u(idx(2, 0, 0), idx(0, 1, 1)));
    for (double coeff : {b2, b3, c1, c3, d1, d2, d3}) {
        CHECK(coeff < 1e-9);
    }
}

TEST_CASE("ion-ion CZ: phase of the middle pulse is free, control pair phase is shared") {
    const SidebandMatch match = solve_sideband_match(6, 8);
    const IonIonMatch ii = solve_ion_ion_durations(2, 1);
    const RegisterConfig config = config_for(match, 2);
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * pi);
    for (int trial = 0; trial < 5; ++trial) {
        const PulseProgram program =
            seq_cz_ion_ion(config, match, ii, 0, 1, phi(rng), phi(rng));
        const GateReport report = project_and_compare(program, gate_cz_ion_ion(config, 0, 1));
        CHECK(report.deviation < 1e-9);
    }
}

TEST_CASE("ion-ion CZ: control must differ from target") {
    const SidebandMatch match = solve_sideband_match(2, 3);
    const RegisterConfig config = config_for(match, 2);
    CHECK_THROWS_AS(seq_cz_ion_ion(config, match, solve_ion_ion_durations(1, 1), 1, 1),
                    std::invalid_argument);
}

TEST_CASE("ion-ion CN: five pulses, both phase families, control-g identity") {
    const SidebandMatch match = solve_sideband_match(2, 3);
    const IonIonMatch ii = solve_ion_ion_durations(1, 1);
    const RegisterConfig config = config_for(match, 2);

    for (PhaseFamily family : {PhaseFamily::half_pi, PhaseFamily::three_half_pi}) {
        const TargetSandwich sandwich = solve_target_sandwich(1, 1, family);
        const PulseProgram program = seq_cn_ion_ion(config, match, ii, sandwich, 0, 1);
        REQUIRE(program.pulses.size() == 5);
        const GateReport report = project_and_compare(program, gate_cn_ion_ion(config, 0, 1));
        CHECK(report.deviation < 1e-9);
        CHECK(report.subspace_leakage < 1e-9);
        CHECK(report.bus_restored);

        // control |g_i>: target untouched
        for (int sj : {0, 1}) {
            unsigned spins = config.set_spin(0u, 1, sj);
            const RegisterState out =
                run_program(program, RegisterState::basis(config, 0, spins));
            CHECK(std::abs(out.amplitudes(config.basis_index(0, spins)) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("ion-ion gates leave a spectator ion alone") {
    const SidebandMatch match = solve_sideband_match(4, 6);
    const IonIonMatch ii = solve_ion_ion_durations(1, 1);
    const RegisterConfig config = config_for(match, 3);
    const PulseProgram program = seq_cz_ion_ion(config, match, ii, 0, 2);

    // product input: (|g>+|e>)/sqrt2 on ions 0 and 2, (|g>-i|e>)/sqrt2 on ion 1
    cvec amps = cvec::Zero(config.dim());
    const cxd w0[2] = {cxd{1.0, 0.0} / std::sqrt(2.0), cxd{1.0, 0.0} / std::sqrt(2.0)};
    const cxd w1[2] = {cxd{1.0, 0.0} / std::sqrt(2.0), cxd{0.0, -1.0} / std::sqrt(2.0)};
    const cxd w2[2] = {cxd{1.0, 0.0} / std::sqrt(2.0), cxd{1.0, 0.0} / std::sqrt(2.0)};
    for (int s0 = 0; s0 < 2; ++s0) {
        for (int s1 = 0; s1 < 2; ++s1) {
            for (int s2 = 0; s2 < 2; ++s2) {
                unsigned spins = config.set_spin(0u, 0, s0);
                spins = config.set_spin(spins, 1, s1);
                spins = config.set_spin(spins, 2, s2);
                amps(config.basis_index(0, spins)) = w0[s0] * w1[s1] * w2[s2];
            }
        }
    }
    RegisterState state;
    state.amplitudes = amps;
    state.n_ions = 3;
    state.fock_cutoff = config.fock_cutoff;

    const RegisterState out = run_program(program, state);

    // expected: CZ applied to ions (0, 2), ion 1 factor untouched
    cvec expected = amps;
    for (int s1 = 0; s1 < 2; ++s1) {
        unsigned spins = config.set_spin(0u, 0, 1);
        spins = config.set_spin(spins, 1, s1);
        spins = config.set_spin(spins, 2, 1);
        expected(config.basis_index(0, spins)) *= -1.0;
    }
    CHECK((out.amplitudes - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("prepare_uniform: signs, magnitudes and phonon conservation") {
    const RegisterConfig one{1, LambDicke{0.3}, 4};
    const RegisterState single = prepare_uniform(one);
    // (|g> - |e>)/sqrt(2) (x) |0>
    CHECK(std::abs(single.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(single.amplitudes(1) + 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(leakage(single, 0) < 1e-12);

    const RegisterConfig three{3, LambDicke{0.62}, 4};
    const RegisterState uniform = prepare_uniform(three);
    const double mag = std::pow(2.0, -1.5);
    for (unsigned spins = 0; spins < 8; ++spins) {
        const cxd amp = uniform.amplitudes(three.basis_index(0, spins));
        CHECK(std::abs(std::abs(amp) - mag) < 1e-12);
        const double sign = (__builtin_popcount(spins) % 2) ? -1.0 : 1.0;
        CHECK(std::abs(amp - cxd{sign * mag, 0.0}) < 1e-12);
    }
    CHECK(leakage(uniform, 0) < 1e-12);
    CHECK(std::abs(uniform.norm() - 1.0) < 1e-12);
}

TEST_CASE("project_and_compare: identity program against CZ has deviation 2") {
    const RegisterConfig config{1, LambDicke{0.5}, 4};
    const PulseProgram identity = seq_rotation(config, 0, 0.0, 0.0);
    const GateReport report = project_and_compare(identity, gate_cz_cb(config, 0));
    CHECK(report.deviation == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report.subspace_leakage < 1e-15);
}

TEST_CASE("project_and_compare: reports a clean global phase for exact gates") {
    const SidebandMatch match = solve_sideband_match(2, 2);
    const RegisterConfig config = config_for(match);
    const GateReport report =
        project_and_compare(seq_cz_cb(config, match, 0), gate_cz_cb(config, 0));
    CHECK(std::abs(report.phase_estimate) < 1e-10);
    CHECK(report.deviation_best_phase <= report.deviation + 1e-15);
    CHECK(report.trace_fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eta mismatch between solutions is rejected") {
    const SidebandMatch match = solve_sideband_match(2, 2);
    const CarrierMatch other_carrier =
        solve_carrier_durations(solve_eta(2, 3), 1, 1, PhaseFamily::half_pi);
    const RegisterConfig config = config_for(match);
    CHECK_THROWS_AS(seq_cn_cb(config, match, other_carrier, 0), MatchError);
}

TEST_CASE("verification refuses cutoffs too small to be exact") {
    const SidebandMatch match = solve_sideband_match(2, 3);
    const IonIonMatch ii = solve_ion_ion_durations(1, 1);
    const RegisterConfig tight{2, match.eta, 2}; // three sideband quanta need cutoff >= 3
    CHECK_THROWS_AS(project_and_compare(seq_cz_ion_ion(tight, match, ii, 0, 1),
                                        gate_cz_ion_ion(tight, 0, 1)),
                    std::invalid_argument);
    const RegisterConfig enough{2, match.eta, 3};
    CHECK(project_and_compare(seq_cz_ion_ion(enough, match, ii, 0, 1),
                              gate_cz_ion_ion(enough, 0, 1))
              .deviation < 1e-9);
}

TEST_CASE("every PulseProgram rejects empty or ill-targeted pulse lists") {
    const RegisterConfig config{1, LambDicke{0.5}, 4};
    CHECK_THROWS_AS((PulseProgram{config, {}}), std::invalid_argument);
    CHECK_THROWS_AS((PulseProgram{config, {PulseSpec{1, SidebandIndex{0}, 0.0, 1.0}}}),
                    std::invalid_argument);
}
