#include "eddyspec/forward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "eddyspec/bessel.hpp"
#include "eddyspec/errors.hpp"

namespace eddyspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussOrder = 16;

struct GaussRule {
    std::array<double, kGaussOrder> node;    // on [-1, 1]
    std::array<double, kGaussOrder> weight;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n. Computed once.
GaussRule make_gauss_rule() {
    GaussRule rule{};
    const int n = kGaussOrder;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        rule.node[i] = x;
        rule.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_rule() {
    static const GaussRule rule = make_gauss_rule();
    return rule;
}

template <typename F>
auto gauss_panel(F&& f, double a, double b) -> decltype(f(a)) {
    const GaussRule& g = gauss_rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    decltype(f(a)) sum{};
    for (int i = 0; i < kGaussOrder; ++i) sum += g.weight[i] * f(mid + half * g.node[i]);
    return sum * half;
}

// x J1(x) is smooth with period-2pi oscillation; one 16-point panel per
// <= 3 units of x keeps the window integral below 1e-13 relative.
constexpr double kWindowPanelLength = 3.0;

double alpha0_search_lo(const CoilPair& coil) { return 0.01 / coil.r2; }
double alpha0_search_hi(const CoilPair& coil) { return 50.0 / (coil.r2 - coil.r1); }

}  // namespace

double coil_window_p(double alpha, double r1, double r2) {
    if (!(alpha > 0.0)) throw ConfigError("coil_window_p: alpha must be > 0");
    if (!(r1 > 0.0 && r2 > r1)) throw ConfigError("coil_window_p: need 0 < r1 < r2");
    const double lo = alpha * r1;
    const double hi = alpha * r2;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kWindowPanelLength)));
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = lo + (hi - lo) * i / panels;
        const double b = lo + (hi - lo) * (i + 1) / panels;
        sum += gauss_panel([](double x) { return x * bessel_j1(x); }, a, b);
    }
    return sum;
}

double geometry_factor_a(double alpha, const CoilPair& coil, double extra_liftoff,
                         GeometryForm form) {
    if (!(alpha > 0.0)) throw ConfigError("geometry_factor_a: alpha must be > 0");
    if (!(extra_liftoff >= 0.0))
        throw ConfigError("geometry_factor_a: extra_liftoff must be >= 0");
    const double l = coil.l_base + extra_liftoff;
    const double common = std::exp(-alpha * (2.0 * l + coil.h + coil.g));
    switch (form) {
        case GeometryForm::paper:
            return common * (std::exp(-2.0 * alpha * coil.h) + 1.0);
        case GeometryForm::product: {
            const double t = 1.0 - std::exp(-alpha * coil.h);
            return common * t * t;
        }
    }
    throw ConfigError("geometry_factor_a: unknown form");
}

double coil_constant_k(const CoilPair& coil) {
    const double d = coil.h * (coil.r2 - coil.r1);
    const double n = static_cast<double>(coil.n_turns);
    return kPi * constants::mu0 * n * n / (d * d);
}

std::complex<double> plate_phi(double alpha, double omega, const Plate& plate) {
    if (!(alpha > 0.0)) throw ConfigError("plate_phi: alpha must be > 0");
    if (!(omega >= 0.0)) throw ConfigError("plate_phi: omega must be >= 0");
    const double m = plate.mu_r;
    const std::complex<double> a1 =
        std::sqrt(std::complex<double>(alpha * alpha, omega * plate.sigma * constants::mu0 * m));
    const double ma = m * alpha;
    const std::complex<double> arg = 2.0 * a1 * plate.c;
    if (arg.real() > 700.0) {
        // e^{2 a1 c} dominates both numerator and denominator.
        return (ma - a1) / (ma + a1);
    }
    const std::complex<double> e = std::exp(arg);
    // a1^2 - (m a)^2 written in closed form: squaring the rounded sqrt would
    // leave an absolute error ~eps*a^2 that buries the j w sigma mu0 part for
    // weakly conductive plates.
    const std::complex<double> a1sq_diff(alpha * alpha * (1.0 - m * m),
                                         omega * plate.sigma * constants::mu0 * m);
    const std::complex<double> num = a1sq_diff * (1.0 - e);
    const std::complex<double> den = (a1 + ma) * (a1 + ma) * e - (a1 - ma) * (a1 - ma);
    return num / den;
}

double envelope(double alpha, const CoilPair& coil, double extra_liftoff) {
    const double p = coil_window_p(alpha, coil.r1, coil.r2);
    const double win = p / (alpha * alpha * alpha);
    return coil_constant_k(coil) * win * win *
           geometry_factor_a(alpha, coil, extra_liftoff, GeometryForm::product);
}

double characteristic_alpha0(const CoilPair& coil, double extra_liftoff, double rel_tol) {
    coil.validate();
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3))
        throw ConfigError("characteristic_alpha0: rel_tol must be in (0, 1e-3]");
    const double lo = alpha0_search_lo(coil);
    const double hi = alpha0_search_hi(coil);
    constexpr int kScanPoints = 1200;

    std::vector<double> grid(kScanPoints);
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < kScanPoints; ++i) {
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kScanPoints - 1));
        const double v = envelope(grid[i], coil, extra_liftoff);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best == 0 || best == kScanPoints - 1) {
        throw NumericalError(
            "characteristic_alpha0: envelope maximum at search boundary; "
            "window [0.01/r2, 50/(r2-r1)] does not bracket the peak");
    }

    // Golden-section on ln(alpha) inside the bracketing grid cells.
    double a = std::log(grid[best - 1]);
    double b = std::log(grid[best + 1]);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = envelope(std::exp(x1), coil, extra_liftoff);
    double f2 = envelope(std::exp(x2), coil, extra_liftoff);
    while (b - a > rel_tol) {  // ln-interval width bounds the relative error
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = envelope(std::exp(x2), coil, extra_liftoff);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = envelope(std::exp(x1), coil, extra_liftoff);
        }
    }
    return std::exp(0.5 * (a + b));
}

namespace detail {

ForwardKernel::ForwardKernel(const CoilPair& coil, double extra_liftoff,
                             const QuadratureSettings& settings, GeometryForm form)
    : coil_(coil), extra_(extra_liftoff), settings_(settings), form_(form) {
    coil_.validate();
    settings_.validate();
    if (!(extra_liftoff >= 0.0)) throw ConfigError("delta_l: extra_liftoff must be >= 0");
    k_ = coil_constant_k(coil_);

    // Truncation: log-scan the integrand envelope (in the active geometry
    // form) and cut at the last scan point still above
    // rel_tol/alpha_max_factor of the peak. The window integral P makes the
    // envelope oscillate through nulls, so the first dip below threshold is
    // not a safe cut; past the last lobe the tail is bounded by the
    // monotone e^{-alpha(2l+h+g)} decay.
    const double lo = 0.8;
    const double hi = alpha0_search_hi(coil_);
    constexpr int kScan = 800;
    auto env = [&](double a) {
        const double p = coil_window_p(a, coil_.r1, coil_.r2);
        const double w = p / (a * a * a);
        return w * w * geometry_factor_a(a, coil_, extra_, form_);
    };
    std::vector<double> val(kScan + 1);
    int peak_idx = 0;
    for (int i = 0; i <= kScan; ++i) {
        const double a = lo * std::pow(hi / lo, static_cast<double>(i) / kScan);
        val[i] = env(a);
        if (val[i] > val[peak_idx]) peak_idx = i;
    }
    const double threshold = val[peak_idx] * settings_.rel_tol / settings_.alpha_max_factor;
    int cut = std::min(peak_idx + 1, kScan);
    for (int i = kScan; i > peak_idx; --i) {
        if (val[i] >= threshold) {
            cut = std::min(i + 1, kScan);
            break;
        }
    }
    alpha_max_ = lo * std::pow(hi / lo, static_cast<double>(cut) / kScan);
}

template <typename PhiFn>
std::complex<double> ForwardKernel::integrate(PhiFn&& phi) const {
    auto integrand = [&](double a) -> std::complex<double> {
        const double p = coil_window_p(a, coil_.r1, coil_.r2);
        const double w = p / (a * a * a);
        return w * w * geometry_factor_a(a, coil_, extra_, form_) * phi(a);
    };

    // Uniform panel doubling with left-to-right summation: deterministic.
    // The stopping threshold carries a 4x safety factor so that estimates
    // produced at rel_tol and rel_tol/2 agree to rel_tol relative, which is
    // the self-consistency contract callers rely on.
    std::complex<double> previous{0.0, 0.0};
    int panels = 32;
    for (;;) {
        std::complex<double> estimate{0.0, 0.0};
        for (int i = 0; i < panels; ++i) {
            const double a = alpha_max_ * i / panels;
            const double b = alpha_max_ * (i + 1) / panels;
            estimate += gauss_panel(integrand, a, b);
        }
        if (panels > 32 &&
            std::abs(estimate - previous) <= 0.25 * settings_.rel_tol * std::abs(estimate)) {
            return k_ * estimate;
        }
        if (panels >= settings_.max_panels) {
            std::ostringstream msg;
            msg << "delta_l: no convergence to rel_tol " << settings_.rel_tol << " within "
                << settings_.max_panels << " panels (last " << std::abs(k_ * estimate)
                << ", previous " << std::abs(k_ * previous) << ")";
            throw NumericalError(msg.str(), k_ * estimate, k_ * previous);
        }
        previous = estimate;
        panels *= 2;
    }
}

std::complex<double> ForwardKernel::delta_l(double omega, const Plate& plate) const {
    if (!(omega > 0.0)) throw ConfigError("delta_l: omega must be > 0");
    plate.validate();
    return integrate([&](double a) { return plate_phi(a, omega, plate); });
}

double ForwardKernel::delta_l0() const {
    return integrate([](double) { return std::complex<double>(1.0, 0.0); }).real();
}

}  // namespace detail

std::complex<double> delta_l(double omega, const CoilPair& coil, const Plate& plate,
                             double extra_liftoff, const QuadratureSettings& settings,
                             GeometryForm form) {
    detail::ForwardKernel kernel(coil, extra_liftoff, settings, form);
    return kernel.delta_l(omega, plate);
}

double delta_l0(const CoilPair& coil, double extra_liftoff,
                const QuadratureSettings& settings, GeometryForm form) {
    detail::ForwardKernel kernel(coil, extra_liftoff, settings, form);
    return kernel.delta_l0();
}

}  // namespace eddyspec
