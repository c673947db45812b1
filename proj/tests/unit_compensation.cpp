#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "eddyspec/compensation.hpp"
#include "eddyspec/errors.hpp"

using namespace eddyspec;

namespace {
constexpr double kPi = std::numbers::pi;
const CoilPair kCoil{0.0118, 0.012, 0.003, 0.001, 0.0005, 20};
constexpr double kSigma = 38.2e6;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Shared simulated pipeline state, computed once per binary run.
struct Pipeline {
    CalibrationReference ref22, ref44;
    PeakEstimate peak22_at_1p5mm, peak44_at_3p5mm;

    Pipeline() {
        const FrequencyGrid grid;
        const QuadratureSettings settings;
        const Plate p22{kSigma, 22e-6, 1.0};
        const Plate p44{kSigma, 44e-6, 1.0};
        ref22 = calibrate_simulated(kCoil, p22, grid, settings);
        ref44 = calibrate_simulated(kCoil, p44, grid, settings);
        peak22_at_1p5mm =
            find_peak(simulate_spectrum(grid, kCoil, p22, 1.5e-3, settings));
        peak44_at_3p5mm =
            find_peak(simulate_spectrum(grid, kCoil, p44, 3.5e-3, settings));
    }
};

const Pipeline& pipeline() {
    static const Pipeline p;
    return p;
}
}  // namespace

TEST_CASE("log amplitude ratio: identity, clamp, rejection") {
    CHECK(log_amplitude_ratio(3.2e-6, 3.2e-6) == 0.0);
    CHECK(log_amplitude_ratio(std::exp(-0.195947), 1.0) ==
          doctest::Approx(-0.195947).epsilon(1e-12));

    bool clamped = false;
    CHECK(log_amplitude_ratio(1.005, 1.0, &clamped) == 0.0);
    CHECK(clamped);

    CHECK_THROWS_AS(log_amplitude_ratio(1.02, 1.0), DomainError);
    CHECK_THROWS_AS(log_amplitude_ratio(std::exp(-2.5), 1.0), DomainError);  // < -pi^2/4
    CHECK_THROWS_AS(log_amplitude_ratio(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(log_amplitude_ratio(1.0, -1.0), ConfigError);
}

TEST_CASE("alpha0*l0 quadratic: exact round trip on the minus branch") {
    for (int i = 0; i <= 1000; ++i) {
        const double x = static_cast<double>(i) / 1000.0;
        const double ln_ratio = -2.0 * x + 4.0 * x * x / (kPi * kPi);
        CHECK(std::fabs(solve_alpha0_l0(ln_ratio) - x) < 1e-12);
    }
}

TEST_CASE("alpha0*l0 quadratic: worked pair and branch rejection") {
    const double x = solve_alpha0_l0(-0.195947);
    CHECK(std::fabs(x - 0.100) < 1e-6);
    // the plus branch would be ~4.835, far outside [0, pi^2/4)
    CHECK(x < kPi * kPi / 4.0);
    CHECK_THROWS_AS(solve_alpha0_l0(-2.5), DomainError);
    CHECK_THROWS_AS(solve_alpha0_l0(0.5), DomainError);
}

TEST_CASE("lift-off estimate from the ratio") {
    CHECK(estimate_liftoff(0.0, 123.0) == 0.0);
    CHECK(std::fabs(estimate_liftoff(-0.195947, 100.0) - 1.0e-3) < 1e-8);
    CHECK_THROWS_AS(estimate_liftoff(-0.1, 0.0), ConfigError);
}

TEST_CASE("thin compensation: identity, worked value, monotonicity, domain") {
    CHECK(compensate_thin(1.234e5, 0.0) == 1.234e5);
    CHECK(std::fabs(compensate_thin(1.0e5, -0.195947) - 1.04224e5) <= 1.0);

    double prev = 0.0;
    for (double lnr : {-0.05, -0.2, -0.5, -1.0, -2.0}) {
        const double w = compensate_thin(1e5, lnr);
        CHECK(w > prev);
        CHECK(w >= 1e5);
        prev = w;
    }
    CHECK_THROWS_AS(compensate_thin(1e5, -kPi * kPi / 4.0), DomainError);
}

TEST_CASE("full compensation: thin limit and fixed-point behavior") {
    // ln_ratio = 0, a0*c << 1: reduces to the thin result
    const double w = 2.2e5;
    CHECK(rel(compensate_full(w, 0.0, kSigma, 22e-6), compensate_thin(w, 0.0)) < 0.01);

    // representative lift-off case: 2% agreement with thin mode
    const double lnr = -0.271;
    const double seed = invert_thickness(w, lnr, kSigma, 127.35);
    CHECK(rel(compensate_full(w, lnr, kSigma, seed), compensate_thin(w, lnr)) < 0.02);

    const auto detail = detail::compensate_full_detail(w, lnr, kSigma, seed);
    CHECK(detail.iterations <= 10);
    CHECK(detail.alpha0 > 0.0);
    CHECK(detail.thickness > 0.0);

    CHECK_THROWS_AS(compensate_full(w, -0.1, kSigma, -1.0), ConfigError);
}

TEST_CASE("thickness inversion: zero ratio collapses to the uncompensated form") {
    const double w = 2.3e5;
    CHECK(invert_thickness(w, 0.0, kSigma, 127.0) ==
          uncompensated_thickness(w, kSigma, 127.0));
    CHECK_THROWS_AS(invert_thickness(w, -3.0, kSigma, 127.0), DomainError);
}

TEST_CASE("first-order peak model") {
    CHECK(rel(forward_peak_model(100.0, 38.2e6, 22e-6), 1.898e5) < 1e-3);

    // c -> infinity: w1 -> 2 a0^2 / (sigma mu0)
    const double limit = 2.0 * 100.0 * 100.0 / (38.2e6 * constants::mu0);
    CHECK(rel(forward_peak_model(100.0, 38.2e6, 1e6), limit) < 1e-4);

    // doubling c roughly halves w1 in the thin regime
    const double ratio = forward_peak_model(100.0, 38.2e6, 1e-6) /
                         forward_peak_model(100.0, 38.2e6, 2e-6);
    CHECK(std::fabs(ratio - 2.0) < 0.01);

    CHECK_THROWS_AS(forward_peak_model(0.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("alpha0_from_peak inverts the peak model") {
    const double a0 = 127.351;
    const double w1 = forward_peak_model(a0, kSigma, 22e-6);
    CHECK(rel(alpha0_from_peak(w1, kSigma, 22e-6), a0) < 1e-12);
}

TEST_CASE("simulated pipeline: lift-off estimate within 20% at 1.5 mm extra") {
    const auto& p = pipeline();
    const double lnr = log_amplitude_ratio(p.peak22_at_1p5mm.salience, p.ref22.s_ref);
    const double estimate = estimate_liftoff(lnr, p.ref22.alpha0_ref);
    CHECK(rel(estimate, 1.5e-3) < 0.20);
}

TEST_CASE("simulated pipeline: compensated thickness, 22 um at 1.5 mm extra") {
    const auto& p = pipeline();
    const double lnr = log_amplitude_ratio(p.peak22_at_1p5mm.salience, p.ref22.s_ref);
    const double c = invert_thickness(p.peak22_at_1p5mm.omega_peak, lnr, kSigma,
                                      p.ref22.alpha0_ref);
    CHECK(std::fabs(c - 22e-6) <= 0.44e-6);  // 2 percent of actual

    const double uncomp =
        uncompensated_thickness(p.peak22_at_1p5mm.omega_peak, kSigma, p.ref22.alpha0_ref);
    CHECK(uncomp > 22e-6);
    CHECK(uncomp > c);
}

TEST_CASE("simulated pipeline: compensated thickness, 44 um at 3.5 mm extra") {
    const auto& p = pipeline();
    const double lnr = log_amplitude_ratio(p.peak44_at_3p5mm.salience, p.ref44.s_ref);
    const double c = invert_thickness(p.peak44_at_3p5mm.omega_peak, lnr, kSigma,
                                      p.ref44.alpha0_ref);
    CHECK(std::fabs(c - 44e-6) <= 1.3e-6);

    const double uncomp =
        uncompensated_thickness(p.peak44_at_3p5mm.omega_peak, kSigma, p.ref44.alpha0_ref);
    CHECK(uncomp > 44e-6);
    CHECK(uncomp > c);
}

TEST_CASE("calibration: composition and boundary rejection") {
    const auto& p = pipeline();
    CHECK(p.ref22.s_ref > 0.0);
    CHECK(p.ref22.alpha0_ref > 0.0);
    CHECK(p.ref22.source == CalibrationSource::simulated);

    // omega_ref matches an independently simulated baseline peak
    const FrequencyGrid grid;
    const QuadratureSettings settings;
    const auto baseline =
        simulate_spectrum(grid, kCoil, Plate{kSigma, 22e-6, 1.0}, 0.0, settings);
    CHECK(find_peak(baseline).omega_peak == p.ref22.omega_ref);

    // a window that misses the peak leaves it on the boundary -> rejected
    CHECK_THROWS_AS(calibrate_simulated(kCoil, Plate{kSigma, 22e-6, 1.0},
                                        FrequencyGrid{1e5, 1e7, 10}, settings),
                    NumericalError);
}

TEST_CASE("compensate(): composed result invariants") {
    const auto& p = pipeline();
    const CompensationInput input{p.peak22_at_1p5mm.omega_peak, p.peak22_at_1p5mm.salience};
    for (CompensationMode mode : {CompensationMode::thin, CompensationMode::full}) {
        const CompensationResult r = compensate(input, p.ref22, kSigma, mode);
        CHECK(r.ln_ratio <= 0.0);
        CHECK(r.alpha0_l0 >= 0.0);
        CHECK(r.alpha0_l0 < kPi * kPi / 4.0);
        CHECK(r.omega_comp >= input.omega_meas);
        CHECK(r.thickness > 0.0);
        CHECK(r.mode == mode);
    }
    const double thin = compensate(input, p.ref22, kSigma, CompensationMode::thin).omega_comp;
    const double full = compensate(input, p.ref22, kSigma, CompensationMode::full).omega_comp;
    CHECK(rel(full, thin) < 0.02);
}

TEST_CASE("lift-off immunity of the compensated peak frequency") {
    const auto& p = pipeline();
    const FrequencyGrid grid;
    const QuadratureSettings settings;
    const Plate p22{kSigma, 22e-6, 1.0};

    std::vector<double> w_meas, w_comp;
    for (double extra : {1.0e-3, 1.5e-3, 2.0e-3, 3.0e-3, 3.5e-3, 4.5e-3}) {
        const auto peak = find_peak(simulate_spectrum(grid, kCoil, p22, extra, settings));
        const double lnr = log_amplitude_ratio(peak.salience, p.ref22.s_ref);
        w_meas.push_back(peak.omega_peak);
        w_comp.push_back(compensate_thin(peak.omega_peak, lnr));
    }
    auto spread = [](const std::vector<double>& v) {
        double lo = v[0], hi = v[0], mean = 0.0;
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            mean += x;
        }
        return (hi - lo) / (mean / v.size());
    };
    const double cov_uncomp = spread(w_meas);
    const double cov_comp = spread(w_comp);
    CHECK(cov_comp <= cov_uncomp / 3.0);
    // regression thresholds from the first verified run
    CHECK(std::fabs(cov_uncomp - 0.190765) <= 0.05 * 0.190765);
    CHECK(std::fabs(cov_comp - 0.0458679) <= 0.05 * 0.0458679);
}

TEST_CASE("run_inversion: warnings surface") {
    const auto& p = pipeline();

    // jittered salience slightly above the reference -> clamped, warned
    PeakEstimate jittered = p.peak22_at_1p5mm;
    jittered.salience = p.ref22.s_ref * 1.005;
    const auto report = run_inversion(jittered, p.ref22, kSigma, CompensationMode::thin);
    CHECK(report.ln_ratio == 0.0);
    REQUIRE(report.warnings.size() >= 1);

    // thick-plate guard: alpha0*c > 0.1 must warn
    PeakEstimate slow = p.peak22_at_1p5mm;
    slow.omega_peak = p.peak22_at_1p5mm.omega_peak / 60.0;  // implies c ~ 60x larger
    const auto thick = run_inversion(slow, p.ref22, kSigma, CompensationMode::thin);
    bool has_guard = false;
    for (const auto& w : thick.warnings)
        if (w.find("alpha0*c") != std::string::npos) has_guard = true;
    CHECK(has_guard);
}
