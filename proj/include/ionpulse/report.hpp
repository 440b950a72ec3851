#pragma once

#include <ostream>
#include <utility>

#include "ionpulse/program_io.hpp"

namespace ionpulse {

/// Experimental Rabi rates quoted at the physical boundary: the resonant rate
/// Omega = 2 pi f_res drives carrier pulses, the sideband rate
/// eta*Omega = 2 pi f_sb drives red-sideband pulses. The two are independent
/// inputs, mirroring how the estimate is quoted.
struct PhysicalRates {
    double f_resonant_hz;
    double f_sideband_hz;

    PhysicalRates(double f_res, double f_sb) : f_resonant_hz(f_res), f_sideband_hz(f_sb) {
        if (!(f_res > 0.0) || !(f_sb > 0.0)) {
            throw std::invalid_argument("PhysicalRates: frequencies must be positive");
        }
    }
};

/// Wall-clock duration of one pulse. Carrier pulses convert with the resonant
/// rate, sideband pulses with the sideband rate (Omega*t = (eta Omega) t / eta).
inline double pulse_seconds(const PulseSpec& pulse, LambDicke eta, const PhysicalRates& rates) {
    if (pulse.k.value() == 0) {
        return pulse.duration / (2.0 * pi * rates.f_resonant_hz);
    }
    return pulse.duration * eta.value() / (2.0 * pi * rates.f_sideband_hz);
}

inline double program_seconds(const std::vector<PulseSpec>& pulses, LambDicke eta,
                              const PhysicalRates& rates) {
    double total = 0.0;
    for (const PulseSpec& p : pulses) {
        total += pulse_seconds(p, eta, rates);
    }
    return total;
}

enum class ReportFormat { text, record };

/// Flat result record. The same formatted numbers feed both the text and the
/// machine-readable output.
struct ReportRecord {
    std::string name;
    std::vector<std::pair<std::string, std::string>> fields;

    void add(const std::string& key, const std::string& value) {
        fields.emplace_back(key, value);
    }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, double value) { add(key, ioformat::brief(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "1" : "0")); }

    /// One `key=value ...` line.
    void print_record(std::ostream& os) const {
        os << "result=" << name;
        for (const auto& [key, value] : fields) {
            os << ' ' << key << '=' << value;
        }
        os << '\n';
    }

    void print_text(std::ostream& os) const {
        os << name << ":\n";
        for (const auto& [key, value] : fields) {
            os << "  " << key;
            for (size_t pad = key.size(); pad < 18; ++pad) {
                os << ' ';
            }
            os << ' ' << value << '\n';
        }
    }

    void print(std::ostream& os, ReportFormat format) const {
        if (format == ReportFormat::record) {
            print_record(os);
        } else {
            print_text(os);
        }
    }
};

} // namespace ionpulse
