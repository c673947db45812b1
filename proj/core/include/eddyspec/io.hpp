// io.hpp — file formats: impedance sweeps, spectra, coil/plate/calibration
// configs, and the mutual-impedance-to-inductance conversion.
//
// All files are SI with unit suffixes baked into the key/column names.
// CSVs accept '#' comments before the header and LF or CRLF line ends;
// doubles are serialized with 17 significant digits so round-trips are
// lossless. Mismatched grids are an error, never silently resampled.

#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "eddyspec/compensation.hpp"
#include "eddyspec/spectrum.hpp"
#include "eddyspec/types.hpp"

namespace eddyspec {

// One impedance sweep: (frequency, complex Z).
struct ImpedanceSample {
    double frequency = 0.0;        // Hz
    std::complex<double> z{0.0, 0.0};  // ohms
};

struct ImpedanceSweep {
    std::vector<ImpedanceSample> samples;
};

// Plate sweep paired with its air reference. Construction checks that the
// two grids agree pointwise to 1e-9 relative and that the pair is usable
// for analysis (>= 8 samples); the check is symmetric in its arguments.
struct SweepPair {
    ImpedanceSweep sample_sweep;
    ImpedanceSweep air_sweep;

    SweepPair(ImpedanceSweep sample, ImpedanceSweep air);
};

// Sweep CSV: header `frequency_hz,re_z_ohm,im_z_ohm`. Rejects NaN/inf,
// non-monotone and duplicate frequencies; parse errors carry line numbers.
ImpedanceSweep parse_sweep_csv(std::istream& in);
void write_sweep_csv(std::ostream& out, const ImpedanceSweep& sweep);

// Spectrum CSV: header `frequency_hz,re_dl_h,im_dl_h`.
Spectrum parse_spectrum_csv(std::istream& in);
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

// dL = (Z - Z_air) / (j 2 pi f) per sample. Components are assembled so the
// identity Im(dL) = Re(-(Z - Z_air))/(2 pi f) holds exactly.
Spectrum impedance_to_delta_l(const SweepPair& pair);

// JSON configs with explicit SI-suffixed keys; unknown keys are rejected.
//   coil : r1_m, r2_m, h_m, g_m, l_base_m, n_turns
//   plate: sigma_s_per_m, c_m, mu_r (optional, default 1)
CoilPair load_coil_json(std::istream& in);
Plate load_plate_json(std::istream& in);

// CalibrationReference JSON: alpha0_ref_per_m, s_ref_h, omega_ref_rad_s,
// coil (object as above), source ("simulated" | "measured").
CalibrationReference load_calibration_json(std::istream& in);
void write_calibration_json(std::ostream& out, const CalibrationReference& ref);

// 17-significant-digit decimal; shared by every writer so all formats are
// bit-stable across runs.
std::string format_si(double value);

}  // namespace eddyspec
