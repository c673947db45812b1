// forward.hpp — Dodd-Deeds analytical solution for the complex inductance
// change of a coaxial coil pair above a conductive plate.
//
// The model evaluated here is
//
//     dL(w) = K * int_0^inf  P^2(a)/a^6 * A(a) * phi(a, w)  da
//
// with K the coil constant, P(a) the radial window integral of x*J1(x),
// A(a) the axial geometry/lift-off factor, and phi the plate reflection
// coefficient. The spatial envelope K*P^2/a^6*A peaks at a characteristic
// frequency alpha0 which carries all lift-off sensitivity.

#pragma once

#include <complex>

#include "eddyspec/types.hpp"

namespace eddyspec {

// Radial coil window P(a) = int_{a r1}^{a r2} x J1(x) dx, evaluated by
// composite fixed-order Gauss-Legendre with panel count scaled to the
// interval length (relative error well below 1e-12).
double coil_window_p(double alpha, double r1, double r2);

// Axial geometry factor A(a) at lift-off l_base + extra_liftoff.
// Both forms satisfy A(a, extra) = A(a, 0) * e^{-2 a extra} exactly.
double geometry_factor_a(double alpha, const CoilPair& coil, double extra_liftoff,
                         GeometryForm form);

// Coil constant K = pi*mu0*N^2 / (h^2 (r2-r1)^2).
double coil_constant_k(const CoilPair& coil);

// Plate reflection coefficient
//   phi(a) = (a1^2 - m^2 a^2)(1 - e^{2 a1 c})
//            / ((a1 + m a)^2 e^{2 a1 c} - (a1 - m a)^2),
// a1 = principal sqrt(a^2 + j w sigma mu0 mu_r), m = mu_r. |phi| <= 1.
// For Re(2 a1 c) > 700 the e^{2 a1 c}-dominant limit (m a - a1)/(m a + a1)
// is evaluated analytically instead of exponentiating.
std::complex<double> plate_phi(double alpha, double omega, const Plate& plate);

// Spectral envelope: the integrand of dL0, i.e. K * P^2(a)/a^6 * A(a).
// Uses the product geometry form, the only one with an interior maximum
// for narrow pancake coils (which is what defines alpha0).
double envelope(double alpha, const CoilPair& coil, double extra_liftoff);

// Characteristic spatial frequency: argmax of envelope() over
// [0.01/r2, 50/(r2-r1)], coarse log-grid scan + golden-section refinement
// to rel_tol relative. Throws NumericalError if the maximum sits on the
// search boundary.
double characteristic_alpha0(const CoilPair& coil, double extra_liftoff,
                             double rel_tol = 1e-6);

// Full complex inductance change dL(w), henries. Adaptive deterministic
// quadrature: truncation where the envelope has decayed below
// rel_tol/alpha_max_factor of its peak, then panel doubling until the
// estimate moves by less than rel_tol. Throws NumericalError (carrying the
// last two estimates) if max_panels is hit before convergence.
std::complex<double> delta_l(double omega, const CoilPair& coil, const Plate& plate,
                             double extra_liftoff, const QuadratureSettings& settings,
                             GeometryForm form = GeometryForm::product);

// Frequency-independent magnitude dL0 = K * int P^2/a^6 A da (phi == 1).
double delta_l0(const CoilPair& coil, double extra_liftoff,
                const QuadratureSettings& settings,
                GeometryForm form = GeometryForm::product);

namespace detail {

// Precomputed per-(coil, extra, form, settings) state so a frequency sweep
// does not redo the truncation scan for every sample. Pure value type.
class ForwardKernel {
public:
    ForwardKernel(const CoilPair& coil, double extra_liftoff,
                  const QuadratureSettings& settings, GeometryForm form);

    std::complex<double> delta_l(double omega, const Plate& plate) const;
    double delta_l0() const;

    double alpha_max() const { return alpha_max_; }

private:
    CoilPair coil_;
    double extra_;
    QuadratureSettings settings_;
    GeometryForm form_;
    double k_;
    double alpha_max_;

    template <typename PhiFn>
    std::complex<double> integrate(PhiFn&& phi) const;
};

}  // namespace detail
}  // namespace eddyspec
