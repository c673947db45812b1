#include "eddyspec/io.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace eddyspec {

namespace {

constexpr const char* kSweepHeader = "frequency_hz,re_z_ohm,im_z_ohm";
constexpr const char* kSpectrumHeader = "frequency_hz,re_dl_h,im_dl_h";

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double_field(const std::string& field, int line_no) {
    const std::string t = trim(field);
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (begin != end && *begin == '+') ++begin;  // from_chars lacks leading '+'
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        std::ostringstream msg;
        msg << "line " << line_no << ": cannot parse '" << t << "' as a number";
        throw FormatError(msg.str());
    }
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "line " << line_no << ": non-finite value '" << t << "' rejected";
        throw FormatError(msg.str());
    }
    return value;
}

struct Row {
    double a, b, c;
    int line_no;
};

// Shared CSV skeleton: '#' comments before the header, exact header match,
// then three-column numeric rows.
std::vector<Row> parse_three_column_csv(std::istream& in, const char* expected_header) {
    std::vector<Row> rows;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t[0] == '#') continue;
            if (t != expected_header) {
                std::ostringstream msg;
                msg << "line " << line_no << ": expected header '" << expected_header
                    << "', got '" << t << "'";
                throw FormatError(msg.str());
            }
            header_seen = true;
            continue;
        }
        const auto c1 = t.find(',');
        const auto c2 = (c1 == std::string::npos) ? std::string::npos : t.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            t.find(',', c2 + 1) != std::string::npos) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected 3 comma-separated fields";
            throw FormatError(msg.str());
        }
        Row row{};
        row.a = parse_double_field(t.substr(0, c1), line_no);
        row.b = parse_double_field(t.substr(c1 + 1, c2 - c1 - 1), line_no);
        row.c = parse_double_field(t.substr(c2 + 1), line_no);
        row.line_no = line_no;
        rows.push_back(row);
    }
    if (!header_seen) {
        std::ostringstream msg;
        msg << "missing header '" << expected_header << "'";
        throw FormatError(msg.str());
    }
    return rows;
}

void check_monotone_frequency(const std::vector<Row>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].a > 0.0)) {
            std::ostringstream msg;
            msg << "line " << rows[i].line_no << ": frequency must be > 0";
            throw FormatError(msg.str());
        }
        if (i > 0 && !(rows[i].a > rows[i - 1].a)) {
            std::ostringstream msg;
            msg << "line " << rows[i].line_no
                << ": frequency not strictly increasing (" << rows[i].a << " after "
                << rows[i - 1].a << ")";
            throw FormatError(msg.str());
        }
    }
}

nlohmann::json parse_json(std::istream& in, const char* what) {
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const char* what) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known)
            throw ConfigError(std::string(what) + ": unknown key '" + item.key() + "'");
    }
}

double require_number(const nlohmann::json& obj, const char* key, const char* what) {
    if (!obj.contains(key))
        throw ConfigError(std::string(what) + ": missing key '" + key + "'");
    if (!obj[key].is_number())
        throw ConfigError(std::string(what) + ": key '" + key + "' must be a number");
    return obj[key].get<double>();
}

nlohmann::json coil_to_json(const CoilPair& coil) {
    return nlohmann::json{{"r1_m", coil.r1},         {"r2_m", coil.r2},
                          {"h_m", coil.h},           {"g_m", coil.g},
                          {"l_base_m", coil.l_base}, {"n_turns", coil.n_turns}};
}

CoilPair coil_from_json(const nlohmann::json& obj) {
    if (!obj.is_object()) throw ConfigError("coil: expected a JSON object");
    reject_unknown_keys(obj, {"r1_m", "r2_m", "h_m", "g_m", "l_base_m", "n_turns"}, "coil");
    CoilPair coil;
    coil.r1 = require_number(obj, "r1_m", "coil");
    coil.r2 = require_number(obj, "r2_m", "coil");
    coil.h = require_number(obj, "h_m", "coil");
    coil.g = require_number(obj, "g_m", "coil");
    coil.l_base = require_number(obj, "l_base_m", "coil");
    if (!obj.contains("n_turns")) throw ConfigError("coil: missing key 'n_turns'");
    if (!obj["n_turns"].is_number_integer())
        throw ConfigError("coil: key 'n_turns' must be an integer");
    coil.n_turns = obj["n_turns"].get<int>();
    coil.validate();
    return coil;
}

}  // namespace

SweepPair::SweepPair(ImpedanceSweep sample, ImpedanceSweep air)
    : sample_sweep(std::move(sample)), air_sweep(std::move(air)) {
    const std::size_t n = std::min(sample_sweep.samples.size(), air_sweep.samples.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double fs = sample_sweep.samples[i].frequency;
        const double fa = air_sweep.samples[i].frequency;
        if (std::fabs(fs - fa) > 1e-9 * std::max(std::fabs(fs), std::fabs(fa))) {
            std::ostringstream msg;
            msg << "sweep pair: frequency grids differ at index " << i << " (" << fs
                << " vs " << fa << ")";
            throw ConfigError(msg.str());
        }
    }
    if (sample_sweep.samples.size() != air_sweep.samples.size()) {
        std::ostringstream msg;
        msg << "sweep pair: frequency grids differ at index " << n
            << " (lengths " << sample_sweep.samples.size() << " vs "
            << air_sweep.samples.size() << ")";
        throw ConfigError(msg.str());
    }
    if (sample_sweep.samples.size() < 8)
        throw ConfigError("sweep pair: need at least 8 samples");
}

ImpedanceSweep parse_sweep_csv(std::istream& in) {
    const auto rows = parse_three_column_csv(in, kSweepHeader);
    check_monotone_frequency(rows);
    ImpedanceSweep sweep;
    sweep.samples.reserve(rows.size());
    for (const Row& r : rows)
        sweep.samples.push_back({r.a, std::complex<double>(r.b, r.c)});
    return sweep;
}

void write_sweep_csv(std::ostream& out, const ImpedanceSweep& sweep) {
    out << kSweepHeader << "\n";
    for (const auto& s : sweep.samples)
        out << format_si(s.frequency) << ',' << format_si(s.z.real()) << ','
            << format_si(s.z.imag()) << "\n";
}

Spectrum parse_spectrum_csv(std::istream& in) {
    const auto rows = parse_three_column_csv(in, kSpectrumHeader);
    check_monotone_frequency(rows);
    Spectrum spectrum;
    spectrum.samples.reserve(rows.size());
    for (const Row& r : rows)
        spectrum.samples.push_back(
            {2.0 * std::numbers::pi * r.a, std::complex<double>(r.b, r.c)});
    return spectrum;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << kSpectrumHeader << "\n";
    for (const auto& s : spectrum.samples)
        out << format_si(s.omega / (2.0 * std::numbers::pi)) << ','
            << format_si(s.delta_l.real()) << ',' << format_si(s.delta_l.imag()) << "\n";
}

Spectrum impedance_to_delta_l(const SweepPair& pair) {
    Spectrum spectrum;
    spectrum.samples.reserve(pair.sample_sweep.samples.size());
    for (std::size_t i = 0; i < pair.sample_sweep.samples.size(); ++i) {
        const auto& plate_z = pair.sample_sweep.samples[i];
        const auto& air_z = pair.air_sweep.samples[i];
        const double omega = 2.0 * std::numbers::pi * plate_z.frequency;
        const std::complex<double> dz = plate_z.z - air_z.z;
        // dL = dZ / (j w), components assembled so the dual form of the
        // impedance-to-inductance identity holds bit-for-bit.
        const SpectralSample sample{omega,
                                    std::complex<double>(dz.imag() / omega, -dz.real() / omega)};
        assert(sample.delta_l.imag() == (-dz).real() / omega);
        spectrum.samples.push_back(sample);
    }
    spectrum.validate();
    return spectrum;
}

CoilPair load_coil_json(std::istream& in) {
    return coil_from_json(parse_json(in, "coil config"));
}

Plate load_plate_json(std::istream& in) {
    const nlohmann::json obj = parse_json(in, "plate config");
    if (!obj.is_object()) throw ConfigError("plate: expected a JSON object");
    reject_unknown_keys(obj, {"sigma_s_per_m", "c_m", "mu_r"}, "plate");
    Plate plate;
    plate.sigma = require_number(obj, "sigma_s_per_m", "plate");
    plate.c = require_number(obj, "c_m", "plate");
    plate.mu_r = obj.contains("mu_r") ? require_number(obj, "mu_r", "plate") : 1.0;
    plate.validate();
    return plate;
}

CalibrationReference load_calibration_json(std::istream& in) {
    const nlohmann::json obj = parse_json(in, "calibration");
    if (!obj.is_object()) throw ConfigError("calibration: expected a JSON object");
    reject_unknown_keys(obj, {"alpha0_ref_per_m", "s_ref_h", "omega_ref_rad_s", "coil", "source"},
                        "calibration");
    CalibrationReference ref;
    ref.alpha0_ref = require_number(obj, "alpha0_ref_per_m", "calibration");
    ref.s_ref = require_number(obj, "s_ref_h", "calibration");
    ref.omega_ref = require_number(obj, "omega_ref_rad_s", "calibration");
    if (!obj.contains("coil")) throw ConfigError("calibration: missing key 'coil'");
    ref.coil = coil_from_json(obj["coil"]);
    if (!obj.contains("source")) throw ConfigError("calibration: missing key 'source'");
    const std::string source = obj["source"].get<std::string>();
    if (source == "simulated") {
        ref.source = CalibrationSource::simulated;
    } else if (source == "measured") {
        ref.source = CalibrationSource::measured;
    } else {
        throw ConfigError("calibration: source must be 'simulated' or 'measured'");
    }
    ref.validate();
    return ref;
}

void write_calibration_json(std::ostream& out, const CalibrationReference& ref) {
    nlohmann::json obj{
        {"alpha0_ref_per_m", ref.alpha0_ref},
        {"s_ref_h", ref.s_ref},
        {"omega_ref_rad_s", ref.omega_ref},
        {"coil", coil_to_json(ref.coil)},
        {"source", ref.source == CalibrationSource::simulated ? "simulated" : "measured"}};
    out << obj.dump(2) << "\n";
}

std::string format_si(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace eddyspec
