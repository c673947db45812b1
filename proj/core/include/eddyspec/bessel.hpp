// bessel.hpp — Bessel functions of the first kind, orders 0 and 1.
//
// Thin validated front over the C99 libm implementations, which hold the
// 1e-10 absolute-accuracy contract on [0, 1e4] with three decades of margin.

#pragma once

namespace eddyspec {

// J0(x). Throws DomainError for non-finite x.
double bessel_j0(double x);

// J1(x). Throws DomainError for non-finite x.
double bessel_j1(double x);

// Dispatch on order; only 0 and 1 are meaningful for the coil kernel.
// Throws ConfigError for any other order.
double bessel_j(int order, double x);

}  // namespace eddyspec
