#include "eddyspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "eddyspec/errors.hpp"

namespace eddyspec {

void Spectrum::validate() const {
    if (samples.size() < 8)
        throw ConfigError("spectrum: need at least 8 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].omega > 0.0))
            throw ConfigError("spectrum: omega must be > 0");
        if (i > 0 && !(samples[i].omega > samples[i - 1].omega))
            throw ConfigError("spectrum: omega must be strictly increasing");
    }
}

std::vector<double> make_log_grid(const FrequencyGrid& grid) {
    grid.validate();
    const double decades = std::log10(grid.f_max / grid.f_min);
    // The 1e-9 slack keeps exact decade counts from picking up a spurious
    // extra point through floating-point round-up.
    const int n = static_cast<int>(std::ceil(decades * grid.points_per_decade - 1e-9)) + 1;
    std::vector<double> freqs(n);
    freqs.front() = grid.f_min;
    freqs.back() = grid.f_max;
    const double ratio = grid.f_max / grid.f_min;
    for (int i = 1; i < n - 1; ++i)
        freqs[i] = grid.f_min * std::pow(ratio, static_cast<double>(i) / (n - 1));
    return freqs;
}

Spectrum simulate_spectrum(const FrequencyGrid& grid, const CoilPair& coil,
                           const Plate& plate, double extra_liftoff,
                           const QuadratureSettings& settings, GeometryForm form) {
    plate.validate();
    const std::vector<double> freqs = make_log_grid(grid);
    const detail::ForwardKernel kernel(coil, extra_liftoff, settings, form);

    Spectrum spectrum;
    spectrum.samples.resize(freqs.size());

    std::mutex error_mutex;
    std::string first_error;

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double omega = 2.0 * std::numbers::pi * freqs[i];
            try {
                spectrum.samples[i] = SpectralSample{omega, kernel.delta_l(omega, plate)};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty()) {
                    std::ostringstream msg;
                    msg << e.what() << " (at frequency " << freqs[i] << " Hz)";
                    first_error = msg.str();
                }
                return;
            }
        }
    };

    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min<std::size_t>(hw, freqs.size());
    if (n_threads <= 1) {
        worker(0, freqs.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (freqs.size() + n_threads - 1) / n_threads;
        for (std::size_t t = 0; t < n_threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(freqs.size(), begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw NumericalError(first_error);
    return spectrum;
}

PeakEstimate find_peak(const Spectrum& spectrum) {
    spectrum.validate();
    const auto& s = spectrum.samples;

    std::size_t best = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].salience() > s[best].salience()) best = i;  // ties keep lower index

    PeakEstimate peak;
    peak.index = best;
    peak.salience = s[best].salience();
    peak.omega_peak = s[best].omega;
    if (!(peak.salience > 0.0))
        throw NumericalError("find_peak: no sample with positive salience");

    if (best == 0 || best + 1 == s.size()) {
        peak.boundary_flag = true;
        return peak;
    }

    // Parabola through the three bracketing points in (ln w, S); general
    // abscissae so measured (possibly non-uniform) grids refine too.
    const double x0 = std::log(s[best - 1].omega);
    const double x1 = std::log(s[best].omega);
    const double x2 = std::log(s[best + 1].omega);
    const double y0 = s[best - 1].salience();
    const double y1 = s[best].salience();
    const double y2 = s[best + 1].salience();
    if (y0 == y2) return peak;  // symmetric triple: apex is the middle sample

    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curvature = (d12 - d01) / (x2 - x0);
    if (curvature < 0.0) {
        const double apex = 0.5 * (x0 + x1 - d01 / curvature);
        if (apex > x0 && apex < x2) {
            peak.omega_peak = std::exp(apex);
            // Newton-form quadratic evaluated at its apex.
            peak.salience = y0 + d01 * (apex - x0) + curvature * (apex - x0) * (apex - x1);
        }
    }
    return peak;
}

}  // namespace eddyspec
