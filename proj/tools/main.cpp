// eddyspec CLI — simulate coil-above-plate inductance spectra, manage
// calibration references, run lift-off-compensated thickness inversion, and
// emit the standard benchmark table and figure datasets.
//
// Exit codes: 0 success, 2 input/config error, 3 numerical failure,
// 4 file-format error. Every file-producing command drops a
// <output>.manifest.json (or manifest.json for directories) recording the
// resolved parameters and input digests; identical inputs give identical
// manifests up to the timestamp.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eddyspec/compensation.hpp"
#include "eddyspec/forward.hpp"
#include "eddyspec/io.hpp"
#include "eddyspec/spectrum.hpp"
#include "eddyspec/types.hpp"
#include "eddyspec/version.hpp"

namespace es = eddyspec;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// Table I sensor and the simulated aluminum targets.
const es::CoilPair kTableOneCoil{0.0118, 0.012, 0.003, 0.001, 0.0005, 20};
constexpr double kAluminumSigma = 38.2e6;

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw es::ConfigError("cannot open input file '" + path + "'");
    std::uint64_t hash = 14695981039346656037ull;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 1099511628211ull;
        }
        if (!in) break;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

json make_manifest(const std::string& command, const json& parameters,
                   const std::vector<std::string>& input_paths) {
    json inputs = json::object();
    for (const auto& path : input_paths) inputs[path] = fnv1a64_file(path);
    return json{{"command", command},
                {"tool_version", es::kVersion},
                {"timestamp_utc", iso8601_utc_now()},
                {"parameters", parameters},
                {"inputs", inputs}};
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw es::ConfigError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw es::ConfigError("failed writing output file '" + path + "'");
}

void write_manifest(const std::string& out_path, const json& manifest) {
    write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

es::CoilPair load_coil_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw es::ConfigError("cannot open coil config '" + path + "'");
    return es::load_coil_json(in);
}

es::Plate load_plate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw es::ConfigError("cannot open plate config '" + path + "'");
    return es::load_plate_json(in);
}

es::ImpedanceSweep load_sweep_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw es::ConfigError("cannot open sweep file '" + path + "'");
    return es::parse_sweep_csv(in);
}

json coil_parameters(const es::CoilPair& coil) {
    return json{{"r1_m", coil.r1},         {"r2_m", coil.r2},
                {"h_m", coil.h},           {"g_m", coil.g},
                {"l_base_m", coil.l_base}, {"n_turns", coil.n_turns}};
}

json plate_parameters(const es::Plate& plate) {
    return json{{"sigma_s_per_m", plate.sigma}, {"c_m", plate.c}, {"mu_r", plate.mu_r}};
}

json quadrature_parameters(const es::QuadratureSettings& q) {
    return json{{"rel_tol", q.rel_tol},
                {"alpha_max_factor", q.alpha_max_factor},
                {"max_panels", q.max_panels}};
}

std::string spectrum_to_csv(const es::Spectrum& spectrum) {
    std::ostringstream out;
    es::write_spectrum_csv(out, spectrum);
    return out.str();
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
    std::string coil_path, plate_path, out_path;
    double liftoff_extra = 0.0;
    double fmin = 100.0, fmax = 1.0e7;
    int ppd = 30;
    es::GeometryForm form = es::GeometryForm::product;
};

int run_simulate(const SimulateArgs& args) {
    const es::CoilPair coil = load_coil_file(args.coil_path);
    const es::Plate plate = load_plate_file(args.plate_path);
    const es::FrequencyGrid grid{args.fmin, args.fmax, args.ppd};
    const es::QuadratureSettings settings;

    const es::Spectrum spectrum =
        es::simulate_spectrum(grid, coil, plate, args.liftoff_extra, settings, args.form);
    write_text_file(args.out_path, spectrum_to_csv(spectrum));

    json params{{"coil", coil_parameters(coil)},
                {"plate", plate_parameters(plate)},
                {"liftoff_extra_m", args.liftoff_extra},
                {"f_min_hz", args.fmin},
                {"f_max_hz", args.fmax},
                {"points_per_decade", args.ppd},
                {"form", args.form == es::GeometryForm::paper ? "paper" : "product"},
                {"quadrature", quadrature_parameters(settings)}};
    write_manifest(args.out_path,
                   make_manifest("simulate", params, {args.coil_path, args.plate_path}));
    return 0;
}

// ---- calibrate ------------------------------------------------------------

struct CalibrateArgs {
    std::string coil_path, plate_path, sweep_path, air_path, out_path;
};

int run_calibrate(const CalibrateArgs& args) {
    const es::CoilPair coil = load_coil_file(args.coil_path);
    const es::Plate plate = load_plate_file(args.plate_path);
    const es::FrequencyGrid grid;
    const es::QuadratureSettings settings;

    es::CalibrationReference ref;
    std::vector<std::string> inputs{args.coil_path, args.plate_path};
    json params{{"coil", coil_parameters(coil)}, {"plate", plate_parameters(plate)}};

    if (!args.sweep_path.empty()) {
        const es::SweepPair pair(load_sweep_file(args.sweep_path),
                                 load_sweep_file(args.air_path));
        ref = es::calibrate_measured(coil, plate, es::impedance_to_delta_l(pair));
        inputs.push_back(args.sweep_path);
        inputs.push_back(args.air_path);
        params["baseline"] = "measured";
    } else {
        ref = es::calibrate_simulated(coil, plate, grid, settings);
        params["baseline"] = "simulated";
        params["f_min_hz"] = grid.f_min;
        params["f_max_hz"] = grid.f_max;
        params["points_per_decade"] = grid.points_per_decade;
        params["quadrature"] = quadrature_parameters(settings);
    }

    std::ostringstream out;
    es::write_calibration_json(out, ref);
    write_text_file(args.out_path, out.str());
    write_manifest(args.out_path, make_manifest("calibrate", params, inputs));
    return 0;
}

// ---- invert ---------------------------------------------------------------

struct InvertArgs {
    std::string spectrum_path, sweep_path, air_path, calib_path;
    double sigma = 0.0;
    es::CompensationMode mode = es::CompensationMode::thin;
};

int run_invert(const InvertArgs& args) {
    std::ifstream calib_in(args.calib_path);
    if (!calib_in) throw es::ConfigError("cannot open calibration '" + args.calib_path + "'");
    const es::CalibrationReference ref = es::load_calibration_json(calib_in);

    es::Spectrum spectrum;
    std::vector<std::string> inputs{args.calib_path};
    if (!args.spectrum_path.empty()) {
        std::ifstream in(args.spectrum_path);
        if (!in) throw es::ConfigError("cannot open spectrum '" + args.spectrum_path + "'");
        spectrum = es::parse_spectrum_csv(in);
        inputs.push_back(args.spectrum_path);
    } else {
        const es::SweepPair pair(load_sweep_file(args.sweep_path),
                                 load_sweep_file(args.air_path));
        spectrum = es::impedance_to_delta_l(pair);
        inputs.push_back(args.sweep_path);
        inputs.push_back(args.air_path);
    }

    const es::PeakEstimate peak = es::find_peak(spectrum);
    const es::InversionReport report = es::run_inversion(peak, ref, args.sigma, args.mode);

    json params{{"sigma_s_per_m", args.sigma},
                {"mode", args.mode == es::CompensationMode::thin ? "thin" : "full"}};
    json out{{"omega_meas_rad_s", report.omega_meas},
             {"ln_ratio", report.ln_ratio},
             {"liftoff_extra_est_m", report.liftoff_extra_est},
             {"omega_comp_rad_s", report.omega_comp},
             {"thickness_comp_m", report.thickness_comp},
             {"thickness_uncomp_m", report.thickness_uncomp},
             {"mode", args.mode == es::CompensationMode::thin ? "thin" : "full"},
             {"warnings", report.warnings},
             {"manifest", make_manifest("invert", params, inputs)}};
    std::cout << out.dump(2) << "\n";
    for (const auto& warning : report.warnings) std::cerr << "warning: " << warning << "\n";
    return 0;
}

// ---- table2 ---------------------------------------------------------------

int run_table2(const std::string& out_path) {
    const es::CoilPair coil = kTableOneCoil;
    const es::FrequencyGrid grid;
    const es::QuadratureSettings settings;
    const double liftoffs[] = {1.5e-3, 2.0e-3, 3.5e-3};  // absolute, incl. 0.5 mm baseline
    const double thicknesses[] = {22e-6, 44e-6};

    std::map<double, es::CalibrationReference> refs;
    for (double c : thicknesses) {
        const es::Plate plate{kAluminumSigma, c, 1.0};
        refs.emplace(c, es::calibrate_simulated(coil, plate, grid, settings));
    }

    std::ostringstream csv;
    csv << "liftoff_mm,actual_um,uncompensated_um,compensated_um\n";
    for (double liftoff : liftoffs) {
        for (double c : thicknesses) {
            const es::Plate plate{kAluminumSigma, c, 1.0};
            const double extra = liftoff - coil.l_base;
            const es::Spectrum spectrum =
                es::simulate_spectrum(grid, coil, plate, extra, settings);
            const es::PeakEstimate peak = es::find_peak(spectrum);
            const es::InversionReport report =
                es::run_inversion(peak, refs.at(c), kAluminumSigma, es::CompensationMode::thin);
            csv << es::format_si(liftoff * 1e3) << ',' << es::format_si(c * 1e6) << ','
                << es::format_si(report.thickness_uncomp * 1e6) << ','
                << es::format_si(report.thickness_comp * 1e6) << "\n";
        }
    }
    write_text_file(out_path, csv.str());

    json params{{"coil", coil_parameters(coil)},
                {"sigma_s_per_m", kAluminumSigma},
                {"thicknesses_m", thicknesses},
                {"liftoffs_absolute_m", liftoffs},
                {"baseline_liftoff_m", coil.l_base},
                {"f_min_hz", grid.f_min},
                {"f_max_hz", grid.f_max},
                {"points_per_decade", grid.points_per_decade},
                {"form", "product"},
                {"quadrature", quadrature_parameters(settings)}};
    write_manifest(out_path, make_manifest("table2", params, {}));
    return 0;
}

// ---- figures --------------------------------------------------------------

int run_figures(int which, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const es::CoilPair coil = kTableOneCoil;
    const es::Plate plate{kAluminumSigma, 22e-6, 1.0};
    const es::FrequencyGrid grid;
    const es::QuadratureSettings settings;

    std::ostringstream csv;
    std::string filename;
    json params{{"figure", which}, {"coil", coil_parameters(coil)}};

    switch (which) {
        case 3: {
            // Spatial envelope against its sinusoidal surrogate.
            const double alpha0 = es::characteristic_alpha0(coil, 0.0);
            const double env_peak = es::envelope(alpha0, coil, 0.0);
            filename = "fig3.csv";
            csv << "alpha_per_m,envelope_norm,sin2_model\n";
            const int n = 400;
            for (int i = 1; i <= n; ++i) {
                const double a = 2.0 * alpha0 * i / n;
                csv << es::format_si(a) << ','
                    << es::format_si(es::envelope(a, coil, 0.0) / env_peak) << ','
                    << es::format_si(std::pow(std::sin(a * kPi / (2.0 * alpha0)), 2)) << "\n";
            }
            params["alpha0_per_m"] = alpha0;
            break;
        }
        case 4: {
            // Salience spectra at the four simulated absolute lift-offs.
            const double liftoffs[] = {0.5e-3, 2.0e-3, 3.5e-3, 5.0e-3};
            std::vector<es::Spectrum> spectra;
            for (double liftoff : liftoffs)
                spectra.push_back(es::simulate_spectrum(grid, coil, plate,
                                                        liftoff - coil.l_base, settings));
            filename = "fig4.csv";
            csv << "frequency_hz,salience_h_l0p5mm,salience_h_l2mm,salience_h_l3p5mm,"
                   "salience_h_l5mm\n";
            for (std::size_t i = 0; i < spectra[0].samples.size(); ++i) {
                csv << es::format_si(spectra[0].samples[i].omega / (2.0 * kPi));
                for (const auto& s : spectra) csv << ',' << es::format_si(s.samples[i].salience());
                csv << "\n";
            }
            params["plate"] = plate_parameters(plate);
            params["liftoffs_absolute_m"] = liftoffs;
            break;
        }
        case 5: {
            // Amplitude-ratio decay against the quadratic lift-off model.
            const es::CalibrationReference ref =
                es::calibrate_simulated(coil, plate, grid, settings);
            filename = "fig5.csv";
            csv << "liftoff_extra_m,ln_ratio,ln_ratio_model\n";
            for (int i = 1; i <= 6; ++i) {
                const double extra = 0.5e-3 * i;
                const es::Spectrum s =
                    es::simulate_spectrum(grid, coil, plate, extra, settings);
                const es::PeakEstimate peak = es::find_peak(s);
                const double lnr = es::log_amplitude_ratio(peak.salience, ref.s_ref);
                const double a0 = ref.alpha0_ref;
                const double model =
                    -2.0 * a0 * extra + 4.0 * a0 * a0 * extra * extra / (kPi * kPi);
                csv << es::format_si(extra) << ',' << es::format_si(lnr) << ','
                    << es::format_si(model) << "\n";
            }
            params["plate"] = plate_parameters(plate);
            params["alpha0_ref_per_m"] = ref.alpha0_ref;
            break;
        }
        case 6: {
            // As-measured vs compensated peak frequency across lift-offs.
            const es::CalibrationReference ref =
                es::calibrate_simulated(coil, plate, grid, settings);
            const double extras[] = {0.5e-3, 1.0e-3, 1.5e-3, 2.5e-3, 3.0e-3, 4.0e-3};
            filename = "fig6.csv";
            csv << "liftoff_extra_m,omega_peak_rad_s,omega_comp_rad_s\n";
            for (double extra : extras) {
                const es::Spectrum s =
                    es::simulate_spectrum(grid, coil, plate, extra, settings);
                const es::PeakEstimate peak = es::find_peak(s);
                const double lnr = es::log_amplitude_ratio(peak.salience, ref.s_ref);
                csv << es::format_si(extra) << ',' << es::format_si(peak.omega_peak) << ','
                    << es::format_si(es::compensate_thin(peak.omega_peak, lnr)) << "\n";
            }
            params["plate"] = plate_parameters(plate);
            params["liftoffs_extra_m"] = extras;
            break;
        }
        default:
            throw es::ConfigError("figures: --which must be one of 3, 4, 5, 6");
    }

    const std::string path = (fs::path(out_dir) / filename).string();
    write_text_file(path, csv.str());
    write_text_file((fs::path(out_dir) / "manifest.json").string(),
                    make_manifest("figures", params, {}).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eddyspec — coil-above-plate inductance spectra and "
                 "lift-off-compensated thickness inversion"};
    app.set_version_flag("--version", es::kVersion);
    app.require_subcommand(1);

    const std::map<std::string, es::GeometryForm> form_names{
        {"paper", es::GeometryForm::paper}, {"product", es::GeometryForm::product}};
    const std::map<std::string, es::CompensationMode> mode_names{
        {"thin", es::CompensationMode::thin}, {"full", es::CompensationMode::full}};

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "simulate a spectrum sweep");
    simulate->add_option("--coil", sim.coil_path, "coil config JSON")->required();
    simulate->add_option("--plate", sim.plate_path, "plate config JSON")->required();
    simulate->add_option("--liftoff-extra", sim.liftoff_extra, "extra lift-off, m")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--fmin", sim.fmin, "sweep start, Hz");
    simulate->add_option("--fmax", sim.fmax, "sweep end, Hz");
    simulate->add_option("--ppd", sim.ppd, "points per decade");
    simulate->add_option("--form", sim.form, "geometry factor form")
        ->transform(CLI::CheckedTransformer(form_names));
    simulate->add_option("--out", sim.out_path, "output spectrum CSV")->required();

    CalibrateArgs cal;
    auto* calibrate = app.add_subcommand("calibrate", "build a calibration reference");
    calibrate->add_option("--coil", cal.coil_path, "coil config JSON")->required();
    calibrate->add_option("--plate", cal.plate_path, "calibration plate config JSON")
        ->required();
    auto* cal_sweep = calibrate->add_option("--sweep", cal.sweep_path,
                                            "measured baseline sweep CSV");
    calibrate->add_option("--air", cal.air_path, "measured air sweep CSV")->needs(cal_sweep);
    cal_sweep->needs(calibrate->get_option("--air"));
    calibrate->add_option("--out", cal.out_path, "output calibration JSON")->required();

    InvertArgs inv;
    auto* invert = app.add_subcommand("invert", "compensate a peak and invert thickness");
    auto* inv_spec = invert->add_option("--spectrum", inv.spectrum_path, "spectrum CSV");
    auto* inv_sweep = invert->add_option("--sweep", inv.sweep_path, "plate sweep CSV");
    invert->add_option("--air", inv.air_path, "air sweep CSV")->needs(inv_sweep);
    inv_sweep->needs(invert->get_option("--air"));
    inv_spec->excludes(inv_sweep);
    invert->add_option("--calib", inv.calib_path, "calibration JSON")->required();
    invert->add_option("--sigma", inv.sigma, "plate conductivity, S/m")
        ->required()
        ->check(CLI::PositiveNumber);
    invert->add_option("--mode", inv.mode, "compensation mode")
        ->transform(CLI::CheckedTransformer(mode_names));

    std::string table2_out;
    auto* table2 = app.add_subcommand("table2", "reproduce the thickness benchmark table");
    table2->add_option("--out", table2_out, "output CSV")->required();

    int fig_which = 0;
    std::string fig_out;
    auto* figures = app.add_subcommand("figures", "emit figure plot data");
    figures->add_option("--which", fig_which, "figure id")
        ->required()
        ->check(CLI::IsMember({3, 4, 5, 6}));
    figures->add_option("--out", fig_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (calibrate->parsed()) {
            if (cal.sweep_path.empty() != cal.air_path.empty())
                throw es::ConfigError("calibrate: --sweep and --air must be given together");
            return run_calibrate(cal);
        }
        if (invert->parsed()) {
            if (inv.spectrum_path.empty() && inv.sweep_path.empty())
                throw es::ConfigError("invert: need --spectrum or --sweep/--air");
            if (!inv.sweep_path.empty() && inv.air_path.empty())
                throw es::ConfigError("invert: --sweep requires --air");
            return run_invert(inv);
        }
        if (table2->parsed()) return run_table2(table2_out);
        if (figures->parsed()) return run_figures(fig_which, fig_out);
    } catch (const es::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const es::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const es::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const es::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
