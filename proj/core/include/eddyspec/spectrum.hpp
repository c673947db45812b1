// spectrum.hpp — log-spaced frequency sweeps of the forward model and peak
// extraction on the imaginary inductance change.
//
// The thickness-sensitive feature is the salience S(w) = -Im dL(w), which is
// nonnegative for a conductive nonmagnetic plate and attains an interior
// maximum near the first-order peak frequency w1.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "eddyspec/forward.hpp"
#include "eddyspec/types.hpp"

namespace eddyspec {

// One sweep sample: angular frequency and complex inductance change.
struct SpectralSample {
    double omega = 0.0;                      // rad/s, > 0
    std::complex<double> delta_l{0.0, 0.0};  // henries

    // Salience channel: -Im dL, the quantity whose peak is tracked.
    double salience() const { return -delta_l.imag(); }
};

struct FrequencyGrid {
    double f_min = 100.0;        // Hz
    double f_max = 1.0e7;        // Hz
    int points_per_decade = 30;

    void validate() const {
        if (!(f_min > 0.0 && f_max > f_min))
            throw ConfigError("grid: need 0 < f_min < f_max");
        if (points_per_decade < 10)
            throw ConfigError("grid: points_per_decade must be >= 10");
    }
};

// Ordered sweep. Parsing may produce arbitrarily short spectra; analysis
// entry points call validate(), which enforces the >= 8 sample rule and
// strict monotonicity in omega.
struct Spectrum {
    std::vector<SpectralSample> samples;

    void validate() const;
};

struct PeakEstimate {
    double omega_peak = 0.0;   // rad/s, refined
    double salience = 0.0;     // henries, peak of -Im dL
    std::size_t index = 0;     // discrete argmax position
    bool boundary_flag = false;  // argmax was the first or last sample
};

// Geometrically spaced frequencies from f_min to f_max inclusive,
// count = ceil(log10(f_max/f_min) * points_per_decade) + 1.
std::vector<double> make_log_grid(const FrequencyGrid& grid);

// One delta_l evaluation per grid frequency. Frequencies are evaluated
// concurrently; assembly order is fixed so results are deterministic.
// Numerical failures are rethrown with the offending frequency attached.
Spectrum simulate_spectrum(const FrequencyGrid& grid, const CoilPair& coil,
                           const Plate& plate, double extra_liftoff,
                           const QuadratureSettings& settings,
                           GeometryForm form = GeometryForm::product);

// Discrete argmax of the salience (ties toward lower frequency), refined by
// a three-point parabolic fit in (ln w, S). A maximum on the grid boundary
// sets boundary_flag and skips refinement. Throws NumericalError when no
// sample has positive salience.
PeakEstimate find_peak(const Spectrum& spectrum);

}  // namespace eddyspec
