// compensation.hpp — lift-off compensation and thickness inversion.
//
// Given a calibration reference taken at the sensor baseline and a measured
// peak (frequency + salience) at unknown extra lift-off, the amplitude drop
//
//     ln r = ln( s_meas / s_ref ) = -2 (a0 - 2 a0^2 l / pi^2) l
//
// is inverted for the product a0*l (quadratic, minus branch), which yields
// the extra lift-off, the compensated peak frequency
//
//     w0' = pi * w_meas / sqrt(pi^2 + 4 ln r)
//
// and the plate thickness
//
//     c = 2 a0 sqrt(pi^2 + 4 ln r) / (pi sigma mu0 w_meas).
//
// `thin` mode uses the closed forms above (valid for a0*c << 1); `full` mode
// recovers a0 from the un-approximated first-order relation and maps the peak
// back through it.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eddyspec/spectrum.hpp"
#include "eddyspec/types.hpp"

namespace eddyspec {

enum class CalibrationSource { simulated, measured };

// Baseline state the compensation is relative to: characteristic spatial
// frequency, peak salience and peak frequency at extra lift-off zero.
struct CalibrationReference {
    double alpha0_ref = 0.0;  // 1/m
    double s_ref = 0.0;       // henries
    double omega_ref = 0.0;   // rad/s
    CoilPair coil;
    CalibrationSource source = CalibrationSource::simulated;

    void validate() const {
        coil.validate();
        if (!(alpha0_ref > 0.0)) throw ConfigError("calibration: alpha0_ref must be > 0");
        if (!(s_ref > 0.0)) throw ConfigError("calibration: s_ref must be > 0");
        if (!(omega_ref > 0.0)) throw ConfigError("calibration: omega_ref must be > 0");
    }
};

struct CompensationInput {
    double omega_meas = 0.0;  // rad/s, measured peak frequency
    double s_meas = 0.0;      // henries, measured peak salience

    void validate() const {
        if (!(omega_meas > 0.0)) throw ConfigError("compensation: omega_meas must be > 0");
        if (!(s_meas > 0.0)) throw ConfigError("compensation: s_meas must be > 0");
    }
};

enum class CompensationMode { thin, full };

struct CompensationResult {
    double ln_ratio = 0.0;       // <= 0 after clamping
    double alpha0_l0 = 0.0;      // dimensionless product, in [0, pi^2/4)
    double liftoff_extra = 0.0;  // m
    double omega_comp = 0.0;     // rad/s, >= omega_meas
    double thickness = 0.0;      // m, compensated estimate
    CompensationMode mode = CompensationMode::thin;
};

// ln(s_meas/s_ref). Small positive overshoots (measurement jitter up to
// +0.01) are clamped to zero, reported through `clamped`; anything larger
// means the reference does not belong to this measurement and raises
// DomainError, as does ln below -pi^2/4 (the real-root domain boundary).
double log_amplitude_ratio(double s_meas, double s_ref, bool* clamped = nullptr);

// Minus-branch root of 4x^2 - 2 pi^2 x - pi^2 ln_ratio = 0; the plus branch
// violates the small-lift-off premise and is never returned.
double solve_alpha0_l0(double ln_ratio);

// Extra lift-off estimate solve_alpha0_l0(ln_ratio) / alpha0.
double estimate_liftoff(double ln_ratio, double alpha0);

// Thin-plate compensated peak frequency pi*w / sqrt(pi^2 + 4 ln_ratio).
// Never below omega_meas; equality iff ln_ratio == 0.
double compensate_thin(double omega_meas, double ln_ratio);

// Full-model compensation: recovers the baseline alpha0 from the quadratic
// first-order relation (needs a thickness estimate, seeded by the thin
// inversion) and evaluates the original peak frequency from it. The seed is
// refined against the un-approximated relation until |dc|/c < 1e-6
// (<= 50 iterations; non-convergence raises NumericalError).
double compensate_full(double omega_meas, double ln_ratio, double sigma, double c_seed);

namespace detail {
struct FullCompensation {
    double omega_comp = 0.0;
    double alpha0 = 0.0;
    double thickness = 0.0;
    int iterations = 0;
};
FullCompensation compensate_full_detail(double omega_meas, double ln_ratio,
                                        double sigma, double c_seed);
}  // namespace detail

// Compensated thickness, the thin-regime closed form.
double invert_thickness(double omega_meas, double ln_ratio, double sigma,
                        double alpha0_ref);

// Thickness from the as-measured peak frequency, no lift-off correction.
double uncompensated_thickness(double omega_meas, double sigma, double alpha0_ref);

// First-order peak frequency w1 = (2 a0^2 c + 2 a0) / (sigma mu0 c).
double forward_peak_model(double alpha0, double sigma, double c);

// Inverse of forward_peak_model in alpha0: the characteristic frequency a
// first-order system must have had for its peak to sit at omega given a
// known thickness. Used to self-calibrate alpha0_ref at the baseline.
double alpha0_from_peak(double omega, double sigma, double c);

// ---- composed operations ------------------------------------------------

// Build a reference by simulating the baseline sweep of a known plate.
// alpha0_ref is derived from the simulated baseline peak through
// alpha0_from_peak, which makes the inversion exact at the baseline.
// Throws NumericalError if the baseline peak touches the grid boundary.
CalibrationReference calibrate_simulated(const CoilPair& coil, const Plate& plate,
                                         const FrequencyGrid& grid,
                                         const QuadratureSettings& settings,
                                         GeometryForm form = GeometryForm::product);

// Same, but the baseline peak comes from a measured spectrum (already
// converted from impedance sweeps); the known calibration plate still
// provides sigma and c for the alpha0 derivation.
CalibrationReference calibrate_measured(const CoilPair& coil, const Plate& plate,
                                        const Spectrum& baseline);

// Full compensation chain for one measured peak.
CompensationResult compensate(const CompensationInput& input,
                              const CalibrationReference& ref, double sigma,
                              CompensationMode mode);

// Everything cmd_invert reports.
struct InversionReport {
    double omega_meas = 0.0;
    double ln_ratio = 0.0;
    double liftoff_extra_est = 0.0;
    double omega_comp = 0.0;
    double thickness_comp = 0.0;
    double thickness_uncomp = 0.0;
    CompensationMode mode = CompensationMode::thin;
    std::vector<std::string> warnings;
};

InversionReport run_inversion(const PeakEstimate& peak, const CalibrationReference& ref,
                              double sigma, CompensationMode mode);

}  // namespace eddyspec
