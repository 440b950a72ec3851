#pragma once

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "ionpulse/report.hpp"

namespace ionpulse::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_usage_error = 2;

namespace detail {

inline PhaseFamily parse_family(const std::string& text) {
    if (text == "pi/2") {
        return PhaseFamily::half_pi;
    }
    if (text == "3pi/2") {
        return PhaseFamily::three_half_pi;
    }
    throw std::invalid_argument("--family must be 'pi/2' or '3pi/2', got '" + text + "'");
}

inline std::string basis_label(const RegisterConfig& config, int index) {
    std::string label = "|" + std::to_string(config.phonon_of(index)) + ",";
    const unsigned spins = config.spins_of(index);
    for (int ion = 0; ion < config.n_ions; ++ion) {
        label += config.spin_bit(spins, ion) ? 'e' : 'g';
    }
    label += ">";
    return label;
}

/// Printed Table digits for one (p, q) + (p', q') selection.
struct PrintedDurations {
    double tau2;
    double tau1;
    double tau3;
};

inline const PublishedGroup& published_group_of(int p, int q) {
    for (const PublishedGroup& group : published_table()) {
        for (const PublishedSidebandRow& sb : group.sideband_rows) {
            if (sb.p == p && sb.q == q) {
                return group;
            }
        }
    }
    throw std::invalid_argument("no published table row with p=" + std::to_string(p) +
                                ", q=" + std::to_string(q));
}

inline double printed_tau2(int p, int q) {
    for (const PublishedSidebandRow& sb : published_group_of(p, q).sideband_rows) {
        if (sb.p == p && sb.q == q) {
            return sb.tau2_printed;
        }
    }
    throw std::invalid_argument("no published table row"); // unreachable
}

inline PrintedDurations printed_durations(int p, int q, int p_prime, int q_prime) {
    const PublishedGroup& group = published_group_of(p, q);
    for (const PublishedCarrierRow& cr : group.carrier_rows) {
        if (cr.p_prime == p_prime && cr.q_prime == q_prime) {
            return {printed_tau2(p, q), cr.tau1_printed, cr.tau3_printed};
        }
    }
    throw std::invalid_argument("no published table branch p'=" + std::to_string(p_prime) +
                                ", q'=" + std::to_string(q_prime) + " for p=" +
                                std::to_string(p) + ", q=" + std::to_string(q));
}

inline void add_pulse_fields(ReportRecord& record, const std::vector<PulseSpec>& pulses,
                             LambDicke eta, const std::optional<PhysicalRates>& rates) {
    double total_tau = 0.0;
    for (size_t i = 0; i < pulses.size(); ++i) {
        record.add("tau" + std::to_string(i + 1), pulses[i].duration / pi);
        total_tau += pulses[i].duration / pi;
    }
    record.add("tau_total", total_tau);
    if (rates) {
        double total_s = 0.0;
        for (size_t i = 0; i < pulses.size(); ++i) {
            const double s = pulse_seconds(pulses[i], eta, *rates);
            record.add("t" + std::to_string(i + 1) + "_s", s);
            total_s += s;
        }
        record.add("t_total_s", total_s);
    }
}

} // namespace detail

// ---------------------------------------------------------------------------

struct SolveOptions {
    int p = 0;
    int q = 0;
    int p_prime = 0;
    int q_prime = 0;
    std::string family = "pi/2";
    bool table = false;
    ReportFormat format = ReportFormat::text;
};

inline int run_table(std::ostream& out, ReportFormat format) {
    for (const PublishedGroup& group : published_table()) {
        if (format == ReportFormat::text) {
            out << "eta group " << ioformat::brief(group.eta_printed) << ":\n";
        }
        double eta_exact = group.eta_printed;
        for (const PublishedSidebandRow& row : group.sideband_rows) {
            const SidebandRowAudit audit = audit_sideband_row(row);
            eta_exact = audit.eta;
            ReportRecord record;
            record.name = "table_sideband";
            record.add("p", row.p);
            record.add("q", row.q);
            record.add("eta", audit.eta);
            record.add("tau2", audit.tau2);
            record.add("tau2_printed", row.tau2_printed);
            record.add("consistent", audit.consistent);
            if (format == ReportFormat::record) {
                record.add("cos01_printed", audit.cos01_printed);
                record.add("cos12_printed", audit.cos12_printed);
                record.print_record(out);
            } else {
                char line[160];
                std::snprintf(line, sizeof line, "  p=%-3d q=%-3d eta=%-9.4f Wt2/pi=%-10.4f",
                              row.p, row.q, audit.eta, audit.tau2);
                out << line;
                if (!audit.consistent) {
                    out << " [printed " << ioformat::brief(row.tau2_printed)
                        << " condition-inconsistent: cos(W12 t2) = "
                        << ioformat::brief(audit.cos12_printed) << ", want -1]";
                }
                out << '\n';
            }
        }
        const LambDicke eta{eta_exact};
        for (const PublishedCarrierRow& row : group.carrier_rows) {
            const CarrierMatch carrier =
                solve_carrier_durations(eta, row.p_prime, row.q_prime, PhaseFamily::half_pi);
            if (format == ReportFormat::record) {
                ReportRecord record;
                record.name = "table_carrier";
                record.add("eta", eta.value());
                record.add("pp", row.p_prime);
                record.add("qq", row.q_prime);
                record.add("tau1", carrier.tau1);
                record.add("tau3", carrier.tau3);
                record.print_record(out);
            } else {
                char line[160];
                std::snprintf(line, sizeof line,
                              "    p'=%-3d q'=%-3d Wt1/pi=%-10.4f Wt3/pi=%-10.4f\n",
                              row.p_prime, row.q_prime, carrier.tau1, carrier.tau3);
                out << line;
            }
        }
    }
    return exit_ok;
}

inline int run_solve(const SolveOptions& opt, std::ostream& out) {
    if (opt.table) {
        return run_table(out, opt.format);
    }
    if (opt.p < 1 || opt.q < 1) {
        throw std::invalid_argument("solve needs --p and --q (or --table)");
    }
    const SidebandMatch match = solve_sideband_match(opt.p, opt.q);
    ReportRecord record;
    record.name = "solve";
    record.add("p", opt.p);
    record.add("q", opt.q);
    record.add("eta", match.eta.value());
    record.add("tau2", match.tau2);
    if (opt.p_prime > 0 || opt.q_prime > 0) {
        const CarrierMatch carrier = solve_carrier_durations(
            match.eta, opt.p_prime, opt.q_prime, detail::parse_family(opt.family));
        record.add("pp", opt.p_prime);
        record.add("qq", opt.q_prime);
        record.add("family", opt.family);
        record.add("tau1", carrier.tau1);
        record.add("tau3", carrier.tau3);
    }
    record.print(out, opt.format);
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::string gate;
    int p = 0;
    int q = 0;
    int p_prime = 0;
    int q_prime = 0;
    int kk = 1;
    int kk_prime = 1;
    int sp = 1;
    int sp_prime = 1;
    std::string family = "pi/2";
    bool two_pulse = false;
    bool use_table_digits = false;
    double eta = 0.5;
    int ions = 0; // 0 = per-gate default
    int cutoff = 4;
    int control = 0;
    int target = 1;
    double threshold = 1e-6;
    double f_resonant_hz = 0.0;
    double f_sideband_hz = 0.0;
    ReportFormat format = ReportFormat::text;
};

namespace detail {

struct BuiltGate {
    PulseProgram program;
    GateSpec gate;
    std::vector<std::pair<std::string, std::string>> params;
};

inline SidebandMatch sideband_from(const VerifyOptions& opt) {
    if (opt.p < 1 || opt.q < 1) {
        throw std::invalid_argument("gate '" + opt.gate +
                                    "' needs --p and --q (or --eta-from P Q)");
    }
    SidebandMatch match = solve_sideband_match(opt.p, opt.q);
    if (opt.use_table_digits) {
        match.tau2 = printed_tau2(opt.p, opt.q);
    }
    return match;
}

inline BuiltGate build_gate(const VerifyOptions& opt) {
    const PhaseFamily family = parse_family(opt.family);
    std::vector<std::pair<std::string, std::string>> params;
    auto param = [&params](const std::string& key, auto value) {
        if constexpr (std::is_same_v<decltype(value), int>) {
            params.emplace_back(key, std::to_string(value));
        } else {
            params.emplace_back(key, value);
        }
    };

    if (opt.gate == "cz_cb" || opt.gate == "cn_cb") {
        const SidebandMatch match = sideband_from(opt);
        const RegisterConfig config{opt.ions > 0 ? opt.ions : 1, match.eta, opt.cutoff};
        const int target = opt.ions > 0 ? opt.target : 0;
        param("p", opt.p);
        param("q", opt.q);
        if (opt.gate == "cz_cb") {
            if (opt.two_pulse) {
                param("variant", std::string("two_pulse"));
                return {seq_cz_cb_two_pulse(config, target), gate_cz_cb(config, target),
                        params};
            }
            return {seq_cz_cb(config, match, target), gate_cz_cb(config, target), params};
        }
        if (opt.p_prime < 1 || opt.q_prime < 1) {
            throw std::invalid_argument("cn_cb needs --pp and --qq");
        }
        CarrierMatch carrier =
            solve_carrier_durations(match.eta, opt.p_prime, opt.q_prime, family);
        if (opt.use_table_digits) {
            const PrintedDurations printed =
                printed_durations(opt.p, opt.q, opt.p_prime, opt.q_prime);
            carrier.tau1 = printed.tau1;
            carrier.tau3 = printed.tau3;
        }
        param("pp", opt.p_prime);
        param("qq", opt.q_prime);
        param("family", opt.family);
        return {seq_cn_cb(config, match, carrier, target), gate_cn_cb(config, target), params};
    }

    if (opt.gate == "cz_ii" || opt.gate == "cn_ii") {
        const SidebandMatch match = sideband_from(opt);
        const int n_ions = opt.ions > 0 ? opt.ions : 2;
        const RegisterConfig config{n_ions, match.eta, opt.cutoff};
        const IonIonMatch ii = solve_ion_ion_durations(opt.kk, opt.kk_prime);
        param("p", opt.p);
        param("q", opt.q);
        param("kk", opt.kk);
        param("kkp", opt.kk_prime);
        param("control", opt.control);
        param("target", opt.target);
        if (opt.gate == "cz_ii") {
            return {seq_cz_ion_ion(config, match, ii, opt.control, opt.target),
                    gate_cz_ion_ion(config, opt.control, opt.target), params};
        }
        const TargetSandwich sandwich = solve_target_sandwich(opt.sp, opt.sp_prime, family);
        param("sp", opt.sp);
        param("spp", opt.sp_prime);
        param("family", opt.family);
        return {seq_cn_ion_ion(config, match, ii, sandwich, opt.control, opt.target),
                gate_cn_ion_ion(config, opt.control, opt.target), params};
    }

    if (opt.gate == "hadamard") {
        const RegisterConfig config{opt.ions > 0 ? opt.ions : 1, LambDicke{opt.eta},
                                    opt.cutoff};
        const int target = opt.ions > 0 ? opt.target : 0;
        param("eta", ioformat::brief(opt.eta));
        param("family", opt.family);
        return {seq_hadamard(config, target, family), gate_hadamard(config, target, family),
                params};
    }

    throw std::invalid_argument("unknown gate '" + opt.gate +
                                "'; expected cz_cb, cn_cb, cz_ii, cn_ii, hadamard or uniform");
}

} // namespace detail

inline int run_verify(const VerifyOptions& opt, std::ostream& out) {
    std::optional<PhysicalRates> rates;
    if (opt.f_resonant_hz > 0.0 && opt.f_sideband_hz > 0.0) {
        rates.emplace(opt.f_resonant_hz, opt.f_sideband_hz);
    }

    ReportRecord record;
    record.name = "verify";
    record.add("gate", opt.gate);
    double deviation = 0.0;

    if (opt.gate == "uniform") {
        const int n_ions = opt.ions > 0 ? opt.ions : 3;
        const RegisterConfig config{n_ions, LambDicke{opt.eta}, opt.cutoff};
        const PhaseFamily family = detail::parse_family(opt.family);
        const RegisterState state = prepare_uniform(config, family);
        const double mag = std::pow(2.0, -0.5 * n_ions);
        cvec ideal = cvec::Zero(config.dim());
        for (unsigned spins = 0; spins < static_cast<unsigned>(config.spin_states()); ++spins) {
            const int sign_bits = __builtin_popcount(spins);
            const double sign =
                family == PhaseFamily::half_pi ? ((sign_bits % 2) ? -1.0 : 1.0) : 1.0;
            ideal(config.basis_index(0, spins)) = sign * mag;
        }
        deviation = (state.amplitudes - ideal).cwiseAbs().maxCoeff();
        record.add("ions", n_ions);
        record.add("eta", opt.eta);
        record.add("family", opt.family);
        record.add("deviation", deviation);
        record.add("leakage", leakage(state, 0));
        record.add("norm", state.norm());
    } else {
        const detail::BuiltGate built = detail::build_gate(opt);
        const GateReport closed = project_and_compare(built.program, built.gate);
        const GateReport oracle =
            project_and_compare(built.program, built.gate, EvolveMethod::oracle);
        deviation = std::max(closed.deviation, oracle.deviation);
        for (const auto& [key, value] : built.params) {
            record.add(key, value);
        }
        record.add("eta", built.program.config.eta.value());
        detail::add_pulse_fields(record, built.program.pulses, built.program.config.eta, rates);
        record.add("deviation", closed.deviation);
        record.add("deviation_oracle", oracle.deviation);
        record.add("global_phase", closed.phase_estimate);
        record.add("deviation_best_phase", closed.deviation_best_phase);
        record.add("trace_fidelity", closed.trace_fidelity);
        record.add("leakage", closed.subspace_leakage);
        if (built.gate.bus_gate) {
            record.add("bus_leakage", closed.bus_leakage);
            record.add("bus_restored", closed.bus_restored);
        } else {
            record.add("bus_restored", "na");
        }
    }

    const bool pass = deviation <= opt.threshold;
    record.add("threshold", opt.threshold);
    record.add("status", pass ? "pass" : "fail");
    record.print(out, opt.format);
    return pass ? exit_ok : exit_verification_failed;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string program_path;
    std::string method = "closed";
    std::string initial; // "m:spins", e.g. "1:ge"
    int phonon_limit = 1;
    ReportFormat format = ReportFormat::text;
};

inline int run_simulate(const SimulateOptions& opt, std::ostream& out) {
    std::ifstream in(opt.program_path);
    if (!in) {
        throw std::invalid_argument("cannot open program file '" + opt.program_path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const PulseProgramFile file = parse_program(buffer.str());
    const RegisterConfig config = file.config();

    RegisterState state = RegisterState::ground(config);
    if (!opt.initial.empty()) {
        const size_t colon = opt.initial.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("--initial expects m:spins, e.g. 1:ge");
        }
        const int m = std::stoi(opt.initial.substr(0, colon));
        const std::string spins_text = opt.initial.substr(colon + 1);
        if (static_cast<int>(spins_text.size()) != config.n_ions) {
            throw std::invalid_argument("--initial spins must name all " +
                                        std::to_string(config.n_ions) + " ions");
        }
        unsigned spins = 0;
        for (int ion = 0; ion < config.n_ions; ++ion) {
            if (spins_text[ion] != 'g' && spins_text[ion] != 'e') {
                throw std::invalid_argument("--initial spins must be 'g' or 'e'");
            }
            spins = config.set_spin(spins, ion, spins_text[ion] == 'e');
        }
        state = RegisterState::basis(config, m, spins);
    }

    EvolveMethod method;
    if (opt.method == "closed") {
        method = EvolveMethod::closed_form;
    } else if (opt.method == "oracle") {
        method = EvolveMethod::oracle;
    } else {
        throw std::invalid_argument("--method must be 'closed' or 'oracle'");
    }
    for (const PulseSpec& pulse : file.pulses) {
        state = evolve(state, config, pulse, method);
    }

    ReportRecord record;
    record.name = "simulate";
    record.add("program", opt.program_path);
    record.add("pulses", static_cast<int>(file.pulses.size()));
    record.add("method", opt.method);
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        const cxd a = state.amplitudes(i);
        if (std::abs(a) > 1e-12) {
            record.add("amp" + detail::basis_label(config, static_cast<int>(i)),
                       ioformat::brief(a.real()) + (a.imag() < 0 ? "-" : "+") +
                           ioformat::brief(std::abs(a.imag())) + "i");
        }
    }
    record.add("norm", state.norm());
    record.add("leakage_above_" + std::to_string(opt.phonon_limit),
               leakage(state, opt.phonon_limit));
    record.print(out, opt.format);
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct PhysicalOptions {
    double f_resonant_hz = 0.0;
    double f_sideband_hz = 0.0;
    std::string program_path;
    VerifyOptions gate; // reused for sequence building when a gate is named
    bool have_gate = false;
    ReportFormat format = ReportFormat::text;
};

inline int run_physical(const PhysicalOptions& opt, std::ostream& out) {
    const PhysicalRates rates{opt.f_resonant_hz, opt.f_sideband_hz};
    ReportRecord record;
    record.name = "physical";
    record.add("f_resonant_hz", opt.f_resonant_hz);
    record.add("f_sideband_hz", opt.f_sideband_hz);

    if (!opt.program_path.empty()) {
        std::ifstream in(opt.program_path);
        if (!in) {
            throw std::invalid_argument("cannot open program file '" + opt.program_path + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        const PulseProgramFile file = parse_program(buffer.str());
        record.add("program", opt.program_path);
        detail::add_pulse_fields(record, file.pulses, LambDicke{file.eta}, rates);
        record.print(out, opt.format);
        return exit_ok;
    }

    if (opt.have_gate) {
        if (opt.gate.p < 1 && opt.gate.gate != "cn_cb") {
            throw std::invalid_argument("physical --gate " + opt.gate.gate +
                                        " needs --p and --q");
        }
        if (opt.gate.p >= 1) {
            const detail::BuiltGate built = detail::build_gate(opt.gate);
            record.add("gate", opt.gate.gate);
            for (const auto& [key, value] : built.params) {
                record.add(key, value);
            }
            detail::add_pulse_fields(record, built.program.pulses, built.program.config.eta,
                                     rates);
            record.print(out, opt.format);
            return exit_ok;
        }
    }

    // No explicit row: shortest exact three-pulse CN over the consistent
    // published rows.
    double best_total = -1.0;
    VerifyOptions best;
    for (const PublishedGroup& group : published_table()) {
        for (const PublishedSidebandRow& sb : group.sideband_rows) {
            if (!audit_sideband_row(sb).consistent) {
                continue;
            }
            for (const PublishedCarrierRow& cr : group.carrier_rows) {
                VerifyOptions candidate = opt.gate;
                candidate.gate = "cn_cb";
                candidate.p = sb.p;
                candidate.q = sb.q;
                candidate.p_prime = cr.p_prime;
                candidate.q_prime = cr.q_prime;
                const detail::BuiltGate built = detail::build_gate(candidate);
                const double total =
                    program_seconds(built.program.pulses, built.program.config.eta, rates);
                if (best_total < 0.0 || total < best_total) {
                    best_total = total;
                    best = candidate;
                }
            }
        }
    }
    const detail::BuiltGate built = detail::build_gate(best);
    record.add("gate", "cn_cb");
    record.add("selection", "shortest_consistent_row");
    for (const auto& [key, value] : built.params) {
        record.add(key, value);
    }
    detail::add_pulse_fields(record, built.program.pulses, built.program.config.eta, rates);
    record.print(out, opt.format);
    return exit_ok;
}

// ---------------------------------------------------------------------------

/// Full argv-style dispatch; returns the process exit code. Streams are
/// injected so tests can capture output.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pulse-level trapped-ion gate synthesis and verification"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --format appear after the subcommand name too

    std::string format_text = "text";
    app.add_option("--format", format_text, "Output format: text or record")
        ->check(CLI::IsMember({"text", "record"}));

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand(
        "solve", "Solve the matching conditions for eta and pulse durations");
    solve->add_option("--p", solve_opt.p, "Sideband matching integer p");
    solve->add_option("--q", solve_opt.q, "Sideband matching integer q");
    solve->add_option("--pp", solve_opt.p_prime, "Carrier matching integer p'");
    solve->add_option("--qq", solve_opt.q_prime, "Carrier matching integer q'");
    solve->add_option("--family", solve_opt.family, "Carrier phase family: pi/2 or 3pi/2");
    solve->add_flag("--table", solve_opt.table, "Regenerate the full parameter table");

    CLI::App* table = app.add_subcommand("table", "Regenerate the published parameter table");

    VerifyOptions verify_opt;
    std::vector<int> eta_from;
    CLI::App* verify = app.add_subcommand(
        "verify", "Build a gate sequence, simulate it exactly and compare to the ideal gate");
    verify->add_option("gate", verify_opt.gate,
                       "Gate: cz_cb, cn_cb, cz_ii, cn_ii, hadamard or uniform")
        ->required();
    verify->add_option("--p", verify_opt.p, "Sideband matching integer p");
    verify->add_option("--q", verify_opt.q, "Sideband matching integer q");
    verify->add_option("--eta-from", eta_from, "Take eta (and t2) from this (p, q) pair")
        ->expected(2);
    verify->add_option("--pp", verify_opt.p_prime, "Carrier matching integer p'");
    verify->add_option("--qq", verify_opt.q_prime, "Carrier matching integer q'");
    verify->add_option("--kk", verify_opt.kk, "Ion-ion matching integer k");
    verify->add_option("--kkp", verify_opt.kk_prime, "Ion-ion matching integer k'");
    verify->add_option("--sp", verify_opt.sp, "Target-sandwich integer p");
    verify->add_option("--spp", verify_opt.sp_prime, "Target-sandwich integer p'");
    verify->add_option("--family", verify_opt.family, "Carrier phase family: pi/2 or 3pi/2");
    verify->add_flag("--two-pulse", verify_opt.two_pulse,
                     "Use the two-pulse CZ variant (cz_cb only)");
    verify->add_flag("--use-table-digits", verify_opt.use_table_digits,
                     "Use the published 4-decimal durations instead of exact solutions");
    verify->add_option("--eta", verify_opt.eta, "Lamb-Dicke parameter (hadamard/uniform)");
    verify->add_option("--ions", verify_opt.ions, "Number of ions in the register");
    verify->add_option("--cutoff", verify_opt.cutoff, "Fock cutoff n_max");
    verify->add_option("--control", verify_opt.control, "Control ion (ion-ion gates)");
    verify->add_option("--target", verify_opt.target, "Target ion (ion-ion gates)");
    verify->add_option("--threshold", verify_opt.threshold,
                       "Max-norm deviation for a passing verification");
    verify->add_option("--f-res", verify_opt.f_resonant_hz,
                       "Resonant Rabi frequency in Hz (adds wall-clock durations)");
    verify->add_option("--f-sb", verify_opt.f_sideband_hz,
                       "Sideband Rabi frequency in Hz (adds wall-clock durations)");

    SimulateOptions simulate_opt;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a pulse-program file and print the final state");
    simulate->add_option("program", simulate_opt.program_path, "Pulse-program file")
        ->required();
    simulate->add_option("--method", simulate_opt.method, "closed or oracle")
        ->check(CLI::IsMember({"closed", "oracle"}));
    simulate->add_option("--initial", simulate_opt.initial,
                         "Initial basis state as m:spins, e.g. 1:ge");
    simulate->add_option("--phonon-limit", simulate_opt.phonon_limit,
                         "Report leakage above this phonon number");

    PhysicalOptions physical_opt;
    CLI::App* physical = app.add_subcommand(
        "physical", "Convert pulse durations to seconds for given experimental rates");
    physical->add_option("--f-res", physical_opt.f_resonant_hz,
                         "Resonant Rabi frequency in Hz (Omega = 2 pi f)")
        ->required();
    physical->add_option("--f-sb", physical_opt.f_sideband_hz,
                         "Sideband Rabi frequency in Hz (eta Omega = 2 pi f)")
        ->required();
    physical->add_option("--program", physical_opt.program_path,
                         "Convert the durations of this pulse-program file");
    physical->add_option("--gate", physical_opt.gate.gate,
                         "Gate to time (default: shortest consistent cn_cb)");
    physical->add_option("--p", physical_opt.gate.p, "Sideband matching integer p");
    physical->add_option("--q", physical_opt.gate.q, "Sideband matching integer q");
    physical->add_option("--pp", physical_opt.gate.p_prime, "Carrier matching integer p'");
    physical->add_option("--qq", physical_opt.gate.q_prime, "Carrier matching integer q'");
    physical->add_option("--family", physical_opt.gate.family, "Carrier phase family");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ionpulse");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage_error;
    }

    const ReportFormat format =
        format_text == "record" ? ReportFormat::record : ReportFormat::text;
    solve_opt.format = format;
    verify_opt.format = format;
    simulate_opt.format = format;
    physical_opt.format = format;
    if (eta_from.size() == 2) {
        verify_opt.p = eta_from[0];
        verify_opt.q = eta_from[1];
    }
    physical_opt.have_gate = !physical_opt.gate.gate.empty();
    physical_opt.gate.format = format;
    if (physical_opt.gate.gate.empty()) {
        physical_opt.gate.gate = "cn_cb";
    }

    try {
        if (solve->parsed()) {
            return run_solve(solve_opt, out);
        }
        if (table->parsed()) {
            return run_table(out, format);
        }
        if (verify->parsed()) {
            return run_verify(verify_opt, out);
        }
        if (simulate->parsed()) {
            return run_simulate(simulate_opt, out);
        }
        if (physical->parsed()) {
            return run_physical(physical_opt, out);
        }
    } catch (const ParseError& e) {
        err << "program error: " << e.what() << '\n';
        return exit_usage_error;
    } catch (const MatchError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage_error;
    }
    err << "usage error: no subcommand\n";
    return exit_usage_error;
}

} // namespace ionpulse::cli
