// types.hpp — domain objects of the coil-above-plate model.
//
// All quantities are SI: meters, siemens/meter, henries, rad/s. Legal ranges
// are enforced by validate(); every constructor-path into the solvers calls
// it so the numerics only ever see sane geometry.

#pragma once

#include <numbers>

#include "eddyspec/errors.hpp"

namespace eddyspec {

namespace constants {
// Vacuum permeability, H/m. Fixed, never configurable.
inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;
}  // namespace constants

// Coaxial driver/pickup pair. Both coils share the same radial build and
// height; `gap` is the axial clearance between them and `l_base` the built-in
// lift-off of the lower coil face.
struct CoilPair {
    double r1 = 0.0;      // inner radius, m
    double r2 = 0.0;      // outer radius, m
    double h = 0.0;       // coil height, m
    double g = 0.0;       // axial gap between the coils, m
    double l_base = 0.0;  // built-in lift-off, m
    int n_turns = 0;      // turns per coil

    void validate() const {
        if (!(r1 > 0.0)) throw ConfigError("coil: r1 must be > 0");
        if (!(r2 > r1)) throw ConfigError("coil: r2 must be > r1");
        if (!(h > 0.0)) throw ConfigError("coil: h must be > 0");
        if (!(g >= 0.0)) throw ConfigError("coil: g must be >= 0");
        if (!(l_base >= 0.0)) throw ConfigError("coil: l_base must be >= 0");
        if (n_turns < 1) throw ConfigError("coil: n_turns must be >= 1");
    }
};

// Nonmagnetic-by-use conductive plate. mu_r is carried through the model but
// everything this artifact exercises runs at mu_r = 1.
struct Plate {
    double sigma = 0.0;  // conductivity, S/m
    double c = 0.0;      // thickness, m
    double mu_r = 1.0;   // relative permeability

    void validate() const {
        if (!(sigma > 0.0)) throw ConfigError("plate: sigma must be > 0");
        if (!(c > 0.0)) throw ConfigError("plate: c must be > 0");
        if (!(mu_r > 0.0)) throw ConfigError("plate: mu_r must be > 0");
    }
};

// Controls for the semi-infinite inductance integral.
//   rel_tol          relative convergence target of panel refinement
//   alpha_max_factor extra margin on the envelope-decay truncation point
//   max_panels       refinement cap; exceeding it raises NumericalError
struct QuadratureSettings {
    double rel_tol = 1e-9;
    double alpha_max_factor = 10.0;
    int max_panels = 4096;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
            throw ConfigError("quadrature: rel_tol must be in (0, 1e-6]");
        if (!(alpha_max_factor >= 1.0))
            throw ConfigError("quadrature: alpha_max_factor must be >= 1");
        if (max_panels < 64) throw ConfigError("quadrature: max_panels must be >= 64");
    }
};

// Arrangement of the axial geometry factor A(alpha). `paper` uses the
// (e^{-2ah} + 1) form seen in parts of the literature; `product` is the
// driver-pickup factorization (1 - e^{-ah})^2. Only `product` has an interior
// spectral peak for narrow pancake coils, so the characteristic-frequency
// machinery is hard-wired to it.
enum class GeometryForm { paper, product };

}  // namespace eddyspec
