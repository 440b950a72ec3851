#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "ionpulse/gates.hpp"

namespace ionpulse {

/// Parse failure with source position. Lines and columns are 1-based.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_in, int column_in, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_in) + ", column " +
                             std::to_string(column_in) + ": " + message),
          line(line_in), column(column_in) {}
};

/// A parsed pulse-program file. Durations are normalized to Omega*t; programs
/// written with physical seconds keep omega_rad_s so they can be serialized
/// and reported in both unit systems.
struct PulseProgramFile {
    int n_ions = 1;
    double eta = 0.1;
    int fock_cutoff = 2;
    std::optional<double> omega_rad_s;
    std::vector<PulseSpec> pulses;

    RegisterConfig config() const {
        return RegisterConfig{n_ions, LambDicke{eta}, fock_cutoff,
                              RabiBase{omega_rad_s.value_or(1.0)}};
    }
};

namespace ioformat {

inline std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string brief(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace ioformat

namespace detail {

struct Field {
    std::string_view key;
    std::string_view value;
    int column; // of value start
};

inline bool parse_double_strict(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

/// Numeric literal or pi-expression: `1.5`, `pi`, `2pi`, `pi/2`, `3pi/2`,
/// `-0.25pi`, `1e-3`.
inline bool parse_pi_expr(std::string_view text, double& out) {
    const size_t at = text.find("pi");
    if (at == std::string_view::npos) {
        return parse_double_strict(text, out);
    }
    double coef = 1.0;
    std::string_view head = text.substr(0, at);
    if (head == "-") {
        coef = -1.0;
    } else if (!head.empty() && !parse_double_strict(head, coef)) {
        return false;
    }
    double divisor = 1.0;
    std::string_view tail = text.substr(at + 2);
    if (!tail.empty()) {
        if (tail.front() != '/' || !parse_double_strict(tail.substr(1), divisor) ||
            divisor == 0.0) {
            return false;
        }
    }
    out = coef * pi / divisor;
    return true;
}

inline std::vector<Field> split_fields(std::string_view line, int line_no, size_t from,
                                       const char* statement) {
    std::vector<Field> fields;
    size_t pos = from;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
            ++pos;
        }
        if (pos >= line.size()) {
            break;
        }
        size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t') {
            ++end;
        }
        const std::string_view token = line.substr(pos, end - pos);
        const size_t eq = token.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw ParseError(line_no, static_cast<int>(pos) + 1,
                             std::string("expected key=value field in '") + statement +
                                 "' statement, got '" + std::string(token) + "'");
        }
        fields.push_back(Field{token.substr(0, eq), token.substr(eq + 1),
                               static_cast<int>(pos + eq + 1) + 1});
        pos = end;
    }
    return fields;
}

} // namespace detail

/// Line-oriented pulse-program grammar:
///
///   # comment
///   register N=<int> eta=<float> cutoff=<int> [omega_rad_s=<float>]
///   pulse ion=<int> k=<0|1> phase=<float|pi-expr> dur=<float|pi-expr><unit>
///
/// with <unit> one of `per_omega` (value is Omega*t) or `seconds` (needs
/// omega_rad_s). Exactly one register line, before any pulse.
inline PulseProgramFile parse_program(std::string_view text) {
    PulseProgramFile file;
    bool seen_register = false;
    int line_no = 0;
    size_t cursor = 0;

    while (cursor <= text.size()) {
        const size_t eol = text.find('\n', cursor);
        std::string_view line = text.substr(
            cursor, eol == std::string_view::npos ? text.size() - cursor : eol - cursor);
        cursor = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        const size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) {
            ++start;
        }
        size_t stop = line.size();
        while (stop > start && (line[stop - 1] == ' ' || line[stop - 1] == '\t' ||
                                line[stop - 1] == '\r')) {
            --stop;
        }
        if (start == stop) {
            continue;
        }

        size_t word_end = start;
        while (word_end < stop && line[word_end] != ' ' && line[word_end] != '\t') {
            ++word_end;
        }
        const std::string_view keyword = line.substr(start, word_end - start);

        if (keyword == "register") {
            if (seen_register) {
                throw ParseError(line_no, static_cast<int>(start) + 1,
                                 "duplicate register line");
            }
            seen_register = true;
            bool have_n = false, have_eta = false, have_cutoff = false;
            for (const detail::Field& f :
                 detail::split_fields(line.substr(0, stop), line_no, word_end, "register")) {
                double value = 0.0;
                if (!detail::parse_double_strict(f.value, value)) {
                    throw ParseError(line_no, f.column,
                                     "expected number for '" + std::string(f.key) + "'");
                }
                if (f.key == "N") {
                    file.n_ions = static_cast<int>(value);
                    if (file.n_ions != value || file.n_ions < 1 || file.n_ions > 8) {
                        throw ParseError(line_no, f.column, "N must be an integer in [1, 8]");
                    }
                    have_n = true;
                } else if (f.key == "eta") {
                    if (!(value > 0.0 && value < 1.0)) {
                        throw ParseError(line_no, f.column, "eta must lie in (0, 1)");
                    }
                    file.eta = value;
                    have_eta = true;
                } else if (f.key == "cutoff") {
                    file.fock_cutoff = static_cast<int>(value);
                    if (file.fock_cutoff != value || file.fock_cutoff < 2) {
                        throw ParseError(line_no, f.column, "cutoff must be an integer >= 2");
                    }
                    have_cutoff = true;
                } else if (f.key == "omega_rad_s") {
                    if (!(value > 0.0)) {
                        throw ParseError(line_no, f.column, "omega_rad_s must be positive");
                    }
                    file.omega_rad_s = value;
                } else {
                    throw ParseError(line_no, f.column - static_cast<int>(f.key.size()) - 1,
                                     "unknown register field '" + std::string(f.key) +
                                         "', expected N, eta, cutoff or omega_rad_s");
                }
            }
            if (!have_n || !have_eta || !have_cutoff) {
                throw ParseError(line_no, static_cast<int>(start) + 1,
                                 "register line must set N, eta and cutoff");
            }
        } else if (keyword == "pulse") {
            if (!seen_register) {
                throw ParseError(line_no, static_cast<int>(start) + 1,
                                 "pulse before register line");
            }
            int ion = -1, k = -1;
            double phase = 0.0, duration = -1.0;
            bool have_phase = false;
            for (const detail::Field& f :
                 detail::split_fields(line.substr(0, stop), line_no, word_end, "pulse")) {
                if (f.key == "ion" || f.key == "k") {
                    double value = 0.0;
                    if (!detail::parse_double_strict(f.value, value) ||
                        value != static_cast<int>(value)) {
                        throw ParseError(line_no, f.column,
                                         "expected integer for '" + std::string(f.key) + "'");
                    }
                    if (f.key == "ion") {
                        ion = static_cast<int>(value);
                    } else {
                        k = static_cast<int>(value);
                        if (k != 0 && k != 1) {
                            throw ParseError(line_no, f.column, "k must be 0 or 1");
                        }
                    }
                } else if (f.key == "phase") {
                    if (!detail::parse_pi_expr(f.value, phase)) {
                        throw ParseError(line_no, f.column,
                                         "expected number or pi-expression for 'phase'");
                    }
                    have_phase = true;
                } else if (f.key == "dur") {
                    std::string_view v = f.value;
                    double scale = -1.0; // multiplier taking the value to Omega*t
                    if (v.size() > 9 && v.substr(v.size() - 9) == "per_omega") {
                        v = v.substr(0, v.size() - 9);
                        scale = 1.0;
                    } else if (v.size() > 7 && v.substr(v.size() - 7) == "seconds") {
                        v = v.substr(0, v.size() - 7);
                        if (!file.omega_rad_s) {
                            throw ParseError(line_no, f.column,
                                             "'seconds' durations need omega_rad_s in the "
                                             "register line");
                        }
                        scale = *file.omega_rad_s;
                    } else {
                        throw ParseError(line_no, f.column,
                                         "duration needs a unit suffix, 'per_omega' or "
                                         "'seconds'");
                    }
                    double value = 0.0;
                    if (!detail::parse_double_strict(v, value)) {
                        throw ParseError(line_no, f.column,
                                         "expected a number before the duration unit");
                    }
                    if (value < 0.0) {
                        throw ParseError(line_no, f.column, "duration must be non-negative");
                    }
                    duration = value * scale;
                } else {
                    throw ParseError(line_no, f.column - static_cast<int>(f.key.size()) - 1,
                                     "unknown pulse field '" + std::string(f.key) +
                                         "', expected ion, k, phase or dur");
                }
            }
            if (ion < 0 || k < 0 || !have_phase || duration < 0.0) {
                throw ParseError(line_no, static_cast<int>(start) + 1,
                                 "pulse line must set ion, k, phase and dur");
            }
            if (ion >= file.n_ions) {
                throw ParseError(line_no, static_cast<int>(start) + 1,
                                 "ion " + std::to_string(ion) + " outside register of " +
                                     std::to_string(file.n_ions) + " ions");
            }
            file.pulses.emplace_back(ion, SidebandIndex{k}, phase, duration);
        } else {
            throw ParseError(line_no, static_cast<int>(start) + 1,
                             "expected 'register' or 'pulse', got '" + std::string(keyword) +
                                 "'");
        }
    }
    if (!seen_register) {
        throw ParseError(line_no, 1, "missing register line");
    }
    return file;
}

/// Canonical form: one register line, one `per_omega` pulse line per pulse,
/// all numbers with full round-trip precision. serialize(parse(x)) is a fixed
/// point of parse-then-serialize.
inline std::string serialize_program(const PulseProgramFile& file) {
    std::string out = "register N=" + std::to_string(file.n_ions) +
                      " eta=" + ioformat::full(file.eta) +
                      " cutoff=" + std::to_string(file.fock_cutoff);
    if (file.omega_rad_s) {
        out += " omega_rad_s=" + ioformat::full(*file.omega_rad_s);
    }
    out += "\n";
    for (const PulseSpec& p : file.pulses) {
        out += "pulse ion=" + std::to_string(p.target) + " k=" + std::to_string(p.k.value()) +
               " phase=" + ioformat::full(p.phase) + " dur=" + ioformat::full(p.duration) +
               "per_omega\n";
    }
    return out;
}

} // namespace ionpulse
