#pragma once

#include <optional>
#include <vector>

#include "ionpulse/coupling.hpp"

namespace ionpulse {

/// Initial-phase family for the resonant pulses of a controlled-gate sandwich.
enum class PhaseFamily { half_pi, three_half_pi };

inline double phase_of(PhaseFamily family) {
    return family == PhaseFamily::half_pi ? 0.5 * pi : 1.5 * pi;
}

inline const char* family_name(PhaseFamily family) {
    return family == PhaseFamily::half_pi ? "pi/2" : "3pi/2";
}

// All solver durations below are quoted as Omega*t/pi unless a different rate
// is named; that matches the table columns the solvers reproduce.

/// Off-resonant CZ pulse parameters: cos(Omega_{0,1} t2) = 1 and
/// cos(Omega_{1,2} t2) = -1, fixed by the integer pair (p, q).
struct SidebandMatch {
    int p;
    int q;
    LambDicke eta;
    double tau2; // Omega t2 / pi
};

/// Resonant-pulse pair surrounding the CZ pulse of the reduced CN gate.
struct CarrierMatch {
    int p_prime;
    int q_prime;
    PhaseFamily family;
    LambDicke eta;
    double tau1; // Omega t1 / pi
    double tau3; // Omega t3 / pi
};

/// Control-ion red-sideband pair of the ion-ion CZ. Durations are stored
/// relative to the sideband rate (Omega_{0,1} t / pi) because they are fixed
/// by the integers alone; tau1/tau3 convert to base-rate units for a given eta.
struct IonIonMatch {
    int kk;
    int kk_prime;
    double sb_tau1; // Omega_{0,1} t'_1 / pi
    double sb_tau3; // Omega_{0,1} t'_3 / pi

    double tau1(LambDicke eta) const { return sb_tau1 / rabi_ratio(0, 1, eta); }
    double tau3(LambDicke eta) const { return sb_tau3 / rabi_ratio(0, 1, eta); }
};

/// Target-ion carrier pair of the ion-ion CN, stored relative to the carrier
/// rate (Omega_{0,0} t / pi) for the same reason.
struct TargetSandwich {
    int pp;
    int pp_prime;
    PhaseFamily family;
    double carrier_tau1; // Omega_{0,0} t''_1 / pi
    double carrier_tau3; // Omega_{0,0} t''_3 / pi

    double tau1(LambDicke eta) const { return carrier_tau1 / rabi_ratio(0, 0, eta); }
    double tau3(LambDicke eta) const { return carrier_tau3 / rabi_ratio(0, 0, eta); }
};

/// Lamb-Dicke parameter solving Omega_{1,2}/Omega_{0,1} = (2-eta^2)/sqrt(2)
/// = (q-0.5)/p, i.e. eta = sqrt(2 - sqrt(2)(q-0.5)/p).
inline LambDicke solve_eta(int p, int q) {
    if (p < 1 || q < 1) {
        throw MatchError("solve_eta: p and q must be positive integers");
    }
    const double ratio = (q - 0.5) / p;
    const double lo = 1.0 / std::sqrt(2.0);
    const double hi = std::sqrt(2.0);
    if (ratio <= lo || ratio >= hi) {
        throw MatchError("solve_eta: no physical eta for p=" + std::to_string(p) +
                         ", q=" + std::to_string(q) + "; (q-0.5)/p = " + std::to_string(ratio) +
                         " must lie strictly inside (1/sqrt(2), sqrt(2)) = (" +
                         std::to_string(lo) + ", " + std::to_string(hi) + ")");
    }
    return LambDicke{std::sqrt(2.0 - std::sqrt(2.0) * ratio)};
}

/// t2 = 2 p pi / Omega_{0,1} = 4 p pi e^{eta^2/2} / (Omega eta), returned as
/// Omega t2 / pi.
inline double solve_tau2(int p, LambDicke eta) {
    if (p < 1) {
        throw MatchError("solve_tau2: p must be a positive integer");
    }
    return 4.0 * p * std::exp(0.5 * eta.squared()) / eta.value();
}

inline SidebandMatch solve_sideband_match(int p, int q) {
    const LambDicke eta = solve_eta(p, q);
    return SidebandMatch{p, q, eta, solve_tau2(p, eta)};
}

/// Resonant durations for the reduced CN: cos(Omega_{0,0}(t1+t3)) = 1 and
/// sin(Omega_{1,1}(t3-t1)) = -1 (pi/2 family), solved directly as
/// Omega_{0,0}(t1+t3) = 2 p' pi and Omega_{1,1}(t1-t3) = (2q' - 3/2) pi.
/// The 3pi/2 family swaps t1 and t3.
inline CarrierMatch solve_carrier_durations(LambDicke eta, int p_prime, int q_prime,
                                            PhaseFamily family) {
    if (p_prime < 1 || q_prime < 1) {
        throw MatchError("solve_carrier_durations: p' and q' must be positive integers");
    }
    const double w00 = rabi_ratio(0, 0, eta);
    const double w11 = rabi_ratio(1, 0, eta);
    const double sum = 2.0 * p_prime / w00;             // Omega (t1+t3) / pi
    const double diff = (2.0 * q_prime - 1.5) / w11;    // Omega (t1-t3) / pi
    double t1 = 0.5 * (sum + diff);
    double t3 = 0.5 * (sum - diff);
    if (family == PhaseFamily::three_half_pi) {
        std::swap(t1, t3);
    }
    if (t3 <= 0.0 || t1 <= 0.0) {
        throw MatchError("solve_carrier_durations: branch infeasible for p'=" +
                         std::to_string(p_prime) + ", q'=" + std::to_string(q_prime) +
                         "; increase p'");
    }
    return CarrierMatch{p_prime, q_prime, family, eta, t1, t3};
}

/// Control-ion sideband durations of the ion-ion CZ:
/// Omega_{0,1} t'_1 = (k+k')pi - pi/2, Omega_{0,1} t'_3 = (k-k')pi + pi/2.
inline IonIonMatch solve_ion_ion_durations(int kk, int kk_prime) {
    if (kk_prime < 1 || kk < kk_prime) {
        throw MatchError("solve_ion_ion_durations: need k >= k' >= 1, got k=" +
                         std::to_string(kk) + ", k'=" + std::to_string(kk_prime));
    }
    return IonIonMatch{kk, kk_prime, (kk + kk_prime) - 0.5, (kk - kk_prime) + 0.5};
}

/// Target-ion carrier durations of the ion-ion CN:
/// Omega_{0,0} t''_1 = (p+p'-3/4)pi, t''_3 = (p-p'+3/4)pi for the pi/2 family,
/// with 1/4 replacing 3/4 for 3pi/2.
inline TargetSandwich solve_target_sandwich(int pp, int pp_prime, PhaseFamily family) {
    if (pp < 1 || pp_prime < 1) {
        throw MatchError("solve_target_sandwich: p and p' must be positive integers");
    }
    const double frac = (family == PhaseFamily::half_pi) ? 0.75 : 0.25;
    const double tau1 = pp + pp_prime - frac;
    const double tau3 = pp - pp_prime + frac;
    if (tau3 <= 0.0) {
        throw MatchError("solve_target_sandwich: branch infeasible, need p >= p'");
    }
    return TargetSandwich{pp, pp_prime, family, tau1, tau3};
}

/// Single-pulse controlled operation: smallest t with cos(Omega_{0,0} t) = 1
/// and sin(Omega_{1,1} t) = 1 over integer indices a, b <= max_index. Generic
/// eta admits none; an exact solution needs Omega_{0,0}/Omega_{1,1} = 4a/(4b+1).
struct SinglePulseSolution {
    int a;
    int b;
    double tau; // Omega t / pi
};

inline std::optional<SinglePulseSolution> solve_single_pulse_controlled(LambDicke eta,
                                                                        int max_index,
                                                                        double tol = 1e-6) {
    const double w00 = rabi_ratio(0, 0, eta);
    const double w11 = rabi_ratio(1, 0, eta);
    for (int a = 1; a <= max_index; ++a) {
        const double tau = 2.0 * a / w00;
        const double theta11 = w11 * tau; // in units of pi
        const int b = static_cast<int>(std::lround((theta11 - 0.5) / 2.0));
        if (b < 0 || b > max_index) {
            continue;
        }
        if (std::abs(std::cos(w00 * tau * pi) - 1.0) <= tol &&
            std::abs(std::sin(theta11 * pi) - 1.0) <= tol) {
            return SinglePulseSolution{a, b, tau};
        }
    }
    return std::nullopt;
}

/// Equal-duration pair for the two-pulse CZ variant: t' = 2 p' pi / Omega_{0,1}
/// with sin(Omega_{1,2} t') = 1. Only eta values whose sideband ratio hits
/// (4a+1)/(4p') exactly admit a branch.
struct TwoPulseCz {
    int p_prime;
    double tau; // Omega t' / pi, for each of the two pulses
};

inline std::optional<TwoPulseCz> solve_two_pulse_cz(LambDicke eta, int max_p_prime = 64,
                                                    double tol = 1e-9) {
    const double w01 = rabi_ratio(0, 1, eta);
    const double w12 = rabi_ratio(1, 1, eta);
    for (int p_prime = 1; p_prime <= max_p_prime; ++p_prime) {
        const double tau = 2.0 * p_prime / w01;
        if (std::abs(std::sin(w12 * tau * pi) - 1.0) <= tol) {
            return TwoPulseCz{p_prime, tau};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Table regeneration

struct TableRequest {
    int p;
    int q;
    int p_prime;
    int q_prime;
};

struct TableEntry {
    TableRequest request{};
    double eta = 0.0;
    double tau2 = 0.0;
    double tau1 = 0.0;
    double tau3 = 0.0;
    std::string error; // empty on success
};

/// Composes solve_eta, solve_tau2 and solve_carrier_durations row by row;
/// a failing row carries its error and does not abort the remaining rows.
inline std::vector<TableEntry> regenerate_table(const std::vector<TableRequest>& rows,
                                                PhaseFamily family = PhaseFamily::half_pi) {
    std::vector<TableEntry> out;
    out.reserve(rows.size());
    for (const TableRequest& row : rows) {
        TableEntry entry;
        entry.request = row;
        try {
            const LambDicke eta = solve_eta(row.p, row.q);
            const CarrierMatch carrier =
                solve_carrier_durations(eta, row.p_prime, row.q_prime, family);
            entry.eta = eta.value();
            entry.tau2 = solve_tau2(row.p, eta);
            entry.tau1 = carrier.tau1;
            entry.tau3 = carrier.tau3;
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        out.push_back(entry);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The published parameter table (three-step CN between CQ and BQ,
// phi1 = phi3 = pi/2), kept verbatim so regenerated values can be audited
// against the printed digits.

struct PublishedSidebandRow {
    int p;
    int q;
    double eta_printed;
    double tau2_printed;
};

struct PublishedCarrierRow {
    int p_prime;
    int q_prime;
    double tau1_printed;
    double tau3_printed;
};

struct PublishedGroup {
    double eta_printed;
    std::vector<PublishedSidebandRow> sideband_rows;
    std::vector<PublishedCarrierRow> carrier_rows;
};

inline const std::vector<PublishedGroup>& published_table() {
    static const std::vector<PublishedGroup> table = {
        {0.9692,
         {{2, 2, 0.9692, 13.2024}, {10, 8, 0.9692, 33.0061}},
         {{5, 1, 29.1785, 2.8108}, {8, 1, 38.7753, 12.4076}, {10, 1, 45.1732, 18.8055}}},
        {0.4819,
         {{2, 3, 0.4819, 18.6448}, {6, 8, 0.4819, 55.9343}},
         {{1, 1, 2.9777, 1.5148}, {2, 2, 8.1496, 0.8354}, {3, 1, 7.4702, 6.0073}}},
        {0.9064,
         {{3, 3, 0.9064, 19.9648}, {9, 8, 0.9064, 59.8943}},
         {{2, 1, 10.2554, 1.8081}, {3, 1, 13.2713, 4.8239}, {8, 2, 45.2453, 3.0088}}},
        {0.2355,
         {{4, 6, 0.2355, 69.8532}},
         {{1, 1, 2.6005, 1.5119}, {2, 1, 4.6567, 3.5682}, {2, 2, 6.8337, 1.3913}}},
        {0.1738,
         {{14, 20, 0.1738, 16.3571}},
         {{1, 1, 2.5538, 1.5071}, {2, 1, 4.5843, 3.5374}, {2, 2, 6.6779, 1.4438}}},
        {0.5919,
         {{3, 4, 0.5919, 24.1611}},
         {{1, 1, 3.2991, 1.4661}, {2, 1, 5.6817, 3.8487}, {2, 2, 9.3477, 0.1827}}},
    };
    return table;
}

/// Re-evaluates the CZ matching conditions at a printed pulse duration.
struct SidebandRowAudit {
    PublishedSidebandRow row{};
    double eta = 0.0;        // recomputed from (p, q)
    double tau2 = 0.0;       // recomputed from the sideband match
    double cos01_printed = 0.0; // cos(Omega_{0,1} t2_printed), want +1
    double cos12_printed = 0.0; // cos(Omega_{1,2} t2_printed), want -1
    bool consistent = false;
};

inline SidebandRowAudit audit_sideband_row(const PublishedSidebandRow& row,
                                           double tolerance = 1e-2) {
    SidebandRowAudit audit;
    audit.row = row;
    const LambDicke eta = solve_eta(row.p, row.q);
    audit.eta = eta.value();
    audit.tau2 = solve_tau2(row.p, eta);
    const double w01 = rabi_ratio(0, 1, eta);
    const double w12 = rabi_ratio(1, 1, eta);
    audit.cos01_printed = std::cos(w01 * row.tau2_printed * pi);
    audit.cos12_printed = std::cos(w12 * row.tau2_printed * pi);
    audit.consistent = std::abs(audit.cos01_printed - 1.0) <= tolerance &&
                       std::abs(audit.cos12_printed + 1.0) <= tolerance;
    return audit;
}

/// Rows of the published table that fail their own matching conditions when
/// the printed duration is re-substituted.
inline std::vector<SidebandRowAudit> audit_published_table(double tolerance = 1e-2) {
    std::vector<SidebandRowAudit> audits;
    for (const PublishedGroup& group : published_table()) {
        for (const PublishedSidebandRow& row : group.sideband_rows) {
            audits.push_back(audit_sideband_row(row, tolerance));
        }
    }
    return audits;
}

} // namespace ionpulse
