#include "eddyspec/compensation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "eddyspec/errors.hpp"

namespace eddyspec {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
// Measurement jitter can push s_meas a hair above s_ref; anything beyond
// this means the wrong reference.
constexpr double kLnRatioClampTol = 0.01;
}  // namespace

double log_amplitude_ratio(double s_meas, double s_ref, bool* clamped) {
    if (clamped) *clamped = false;
    if (!(s_meas > 0.0)) throw ConfigError("log_amplitude_ratio: s_meas must be > 0");
    if (!(s_ref > 0.0)) throw ConfigError("log_amplitude_ratio: s_ref must be > 0");
    double r = std::log(s_meas / s_ref);
    if (r > kLnRatioClampTol) {
        std::ostringstream msg;
        msg << "log_amplitude_ratio: ln(s_meas/s_ref) = " << r << " > +" << kLnRatioClampTol
            << "; measured salience exceeds the calibration reference (wrong reference?)";
        throw DomainError(msg.str());
    }
    if (r > 0.0) {
        if (clamped) *clamped = true;
        r = 0.0;
    }
    if (r < -kPi2 / 4.0) {
        std::ostringstream msg;
        msg << "log_amplitude_ratio: ln_ratio = " << r << " < -pi^2/4 = " << -kPi2 / 4.0
            << "; quadratic discriminant pi^4 + 4 pi^2 ln_ratio = "
            << kPi2 * kPi2 + 4.0 * kPi2 * r << " is negative";
        throw DomainError(msg.str());
    }
    return r;
}

double solve_alpha0_l0(double ln_ratio) {
    if (!(ln_ratio <= 0.0))
        throw DomainError("solve_alpha0_l0: ln_ratio must be <= 0");
    const double discriminant = kPi2 * kPi2 + 4.0 * kPi2 * ln_ratio;
    if (discriminant < 0.0) {
        std::ostringstream msg;
        msg << "solve_alpha0_l0: discriminant " << discriminant << " < 0 (ln_ratio " << ln_ratio
            << " below -pi^2/4)";
        throw DomainError(msg.str());
    }
    // Minus branch; the plus branch violates alpha0*l0 << 1 and is rejected.
    return (kPi2 - std::sqrt(discriminant)) / 4.0;
}

double estimate_liftoff(double ln_ratio, double alpha0) {
    if (!(alpha0 > 0.0)) throw ConfigError("estimate_liftoff: alpha0 must be > 0");
    return solve_alpha0_l0(ln_ratio) / alpha0;
}

double compensate_thin(double omega_meas, double ln_ratio) {
    if (!(omega_meas > 0.0)) throw ConfigError("compensate_thin: omega_meas must be > 0");
    if (ln_ratio == 0.0) return omega_meas;  // exact identity at zero lift-off change
    const double radicand = kPi2 + 4.0 * ln_ratio;
    if (radicand <= 0.0) {
        std::ostringstream msg;
        msg << "compensate_thin: pi^2 + 4 ln_ratio = " << radicand << " <= 0";
        throw DomainError(msg.str());
    }
    return kPi * omega_meas / std::sqrt(radicand);
}

namespace detail {

FullCompensation compensate_full_detail(double omega_meas, double ln_ratio, double sigma,
                                        double c_seed) {
    if (!(omega_meas > 0.0)) throw ConfigError("compensate_full: omega_meas must be > 0");
    if (!(sigma > 0.0)) throw ConfigError("compensate_full: sigma must be > 0");
    if (!(c_seed > 0.0)) throw ConfigError("compensate_full: c_seed must be > 0");
    const double radicand = kPi2 + 4.0 * ln_ratio;
    if (radicand <= 0.0) {
        std::ostringstream msg;
        msg << "compensate_full: pi^2 + 4 ln_ratio = " << radicand << " <= 0";
        throw DomainError(msg.str());
    }
    const double u = std::sqrt(radicand);
    const double sm = sigma * constants::mu0;

    // Alternate: baseline alpha0 from the quadratic peak relation at the
    // current thickness, thickness from the exact inversion of the same
    // relation (whose a0*c << 1 limit is the printed thin form). The pair is
    // algebraically consistent, so the iteration settles immediately; the
    // loop guards against pathological inputs.
    double c = c_seed;
    double alpha0 = 0.0;
    int iterations = 0;
    for (; iterations < 50; ++iterations) {
        alpha0 = kPi * (std::sqrt(1.0 + 2.0 * omega_meas * sm * c * c) - 1.0) / (2.0 * c * u);
        const double denom = kPi2 * sm * omega_meas - 2.0 * alpha0 * alpha0 * u * u;
        if (!(denom > 0.0))
            throw NumericalError("compensate_full: thickness update denominator <= 0");
        const double c_next = 2.0 * kPi * alpha0 * u / denom;
        const double step = std::fabs(c_next - c) / c;
        c = c_next;
        if (step < 1e-6) break;
    }
    if (iterations >= 50) {
        std::ostringstream msg;
        msg << "compensate_full: no fixed-point convergence in 50 iterations (last c = " << c
            << ")";
        throw NumericalError(msg.str());
    }
    FullCompensation out;
    out.alpha0 = alpha0;
    out.thickness = c;
    out.iterations = iterations + 1;
    out.omega_comp = forward_peak_model(alpha0, sigma, c);
    return out;
}

}  // namespace detail

double compensate_full(double omega_meas, double ln_ratio, double sigma, double c_seed) {
    return detail::compensate_full_detail(omega_meas, ln_ratio, sigma, c_seed).omega_comp;
}

double invert_thickness(double omega_meas, double ln_ratio, double sigma, double alpha0_ref) {
    if (!(omega_meas > 0.0)) throw ConfigError("invert_thickness: omega_meas must be > 0");
    if (!(sigma > 0.0)) throw ConfigError("invert_thickness: sigma must be > 0");
    if (!(alpha0_ref > 0.0)) throw ConfigError("invert_thickness: alpha0_ref must be > 0");
    if (ln_ratio == 0.0) return uncompensated_thickness(omega_meas, sigma, alpha0_ref);
    const double radicand = kPi2 + 4.0 * ln_ratio;
    if (radicand < 0.0) {
        std::ostringstream msg;
        msg << "invert_thickness: discriminant pi^2 + 4 ln_ratio = " << radicand << " < 0";
        throw DomainError(msg.str());
    }
    return 2.0 * alpha0_ref * std::sqrt(radicand) /
           (kPi * sigma * constants::mu0 * omega_meas);
}

double uncompensated_thickness(double omega_meas, double sigma, double alpha0_ref) {
    if (!(omega_meas > 0.0))
        throw ConfigError("uncompensated_thickness: omega_meas must be > 0");
    if (!(sigma > 0.0)) throw ConfigError("uncompensated_thickness: sigma must be > 0");
    if (!(alpha0_ref > 0.0))
        throw ConfigError("uncompensated_thickness: alpha0_ref must be > 0");
    return 2.0 * alpha0_ref / (sigma * constants::mu0 * omega_meas);
}

double forward_peak_model(double alpha0, double sigma, double c) {
    if (!(alpha0 > 0.0 && sigma > 0.0 && c > 0.0))
        throw ConfigError("forward_peak_model: inputs must be > 0");
    return (2.0 * alpha0 * alpha0 * c + 2.0 * alpha0) / (sigma * constants::mu0 * c);
}

double alpha0_from_peak(double omega, double sigma, double c) {
    if (!(omega > 0.0 && sigma > 0.0 && c > 0.0))
        throw ConfigError("alpha0_from_peak: inputs must be > 0");
    const double y = omega * sigma * constants::mu0 * c * c;
    return (std::sqrt(1.0 + 2.0 * y) - 1.0) / (2.0 * c);
}

CalibrationReference calibrate_simulated(const CoilPair& coil, const Plate& plate,
                                         const FrequencyGrid& grid,
                                         const QuadratureSettings& settings,
                                         GeometryForm form) {
    const Spectrum baseline = simulate_spectrum(grid, coil, plate, 0.0, settings, form);
    CalibrationReference ref = calibrate_measured(coil, plate, baseline);
    ref.source = CalibrationSource::simulated;
    return ref;
}

CalibrationReference calibrate_measured(const CoilPair& coil, const Plate& plate,
                                        const Spectrum& baseline) {
    coil.validate();
    plate.validate();
    const PeakEstimate peak = find_peak(baseline);
    if (peak.boundary_flag)
        throw NumericalError(
            "calibrate: baseline peak sits on the sweep boundary; the reference "
            "peak must be interior");
    CalibrationReference ref;
    ref.coil = coil;
    ref.omega_ref = peak.omega_peak;
    ref.s_ref = peak.salience;
    // Self-consistent alpha0: the characteristic frequency the first-order
    // model needs for its peak to land on the observed baseline peak of the
    // known calibration plate. Exact at the baseline by construction.
    ref.alpha0_ref = alpha0_from_peak(peak.omega_peak, plate.sigma, plate.c);
    ref.source = CalibrationSource::measured;
    ref.validate();
    return ref;
}

CompensationResult compensate(const CompensationInput& input, const CalibrationReference& ref,
                              double sigma, CompensationMode mode) {
    input.validate();
    ref.validate();
    if (!(sigma > 0.0)) throw ConfigError("compensate: sigma must be > 0");

    CompensationResult result;
    result.mode = mode;
    result.ln_ratio = log_amplitude_ratio(input.s_meas, ref.s_ref);
    result.alpha0_l0 = solve_alpha0_l0(result.ln_ratio);
    result.liftoff_extra = result.alpha0_l0 / ref.alpha0_ref;

    const double thin_thickness =
        invert_thickness(input.omega_meas, result.ln_ratio, sigma, ref.alpha0_ref);
    if (mode == CompensationMode::thin) {
        result.omega_comp = compensate_thin(input.omega_meas, result.ln_ratio);
        result.thickness = thin_thickness;
    } else {
        const auto full = detail::compensate_full_detail(input.omega_meas, result.ln_ratio,
                                                         sigma, thin_thickness);
        result.omega_comp = full.omega_comp;
        // Thickness through the same first-order relation at the reference
        // alpha0; reduces to the thin inversion when alpha0*c -> 0.
        const double denom =
            sigma * constants::mu0 * result.omega_comp - 2.0 * ref.alpha0_ref * ref.alpha0_ref;
        if (!(denom > 0.0))
            throw DomainError("compensate: full-mode thickness denominator <= 0");
        result.thickness = 2.0 * ref.alpha0_ref / denom;
    }
    return result;
}

InversionReport run_inversion(const PeakEstimate& peak, const CalibrationReference& ref,
                              double sigma, CompensationMode mode) {
    CompensationInput input{peak.omega_peak, peak.salience};
    input.validate();
    ref.validate();

    InversionReport report;
    report.mode = mode;
    report.omega_meas = peak.omega_peak;

    bool clamped = false;
    report.ln_ratio = log_amplitude_ratio(input.s_meas, ref.s_ref, &clamped);
    if (clamped)
        report.warnings.push_back(
            "measured peak salience slightly exceeds the reference; ln_ratio clamped to 0");

    CompensationResult comp = compensate(input, ref, sigma, mode);
    report.liftoff_extra_est = comp.liftoff_extra;
    report.omega_comp = comp.omega_comp;
    report.thickness_comp = comp.thickness;
    report.thickness_uncomp = uncompensated_thickness(peak.omega_peak, sigma, ref.alpha0_ref);

    const double alpha0_c = ref.alpha0_ref * comp.thickness;
    if (alpha0_c > 0.1) {
        std::ostringstream msg;
        msg << "thin-plate regime guard: alpha0*c = " << alpha0_c
            << " > 0.1; the thin-mode formulas degrade outside c << 1/alpha0";
        report.warnings.push_back(msg.str());
    }
    return report;
}

}  // namespace eddyspec
