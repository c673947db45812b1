#include "eddyspec/bessel.hpp"

#include <cmath>

#include "eddyspec/errors.hpp"

namespace eddyspec {

namespace {
void check_finite(double x) {
    if (!std::isfinite(x)) throw DomainError("bessel_j: argument must be finite");
}
}  // namespace

double bessel_j0(double x) {
    check_finite(x);
    return ::j0(x);
}

double bessel_j1(double x) {
    check_finite(x);
    return ::j1(x);
}

double bessel_j(int order, double x) {
    switch (order) {
        case 0: return bessel_j0(x);
        case 1: return bessel_j1(x);
        default: throw ConfigError("bessel_j: order must be 0 or 1");
    }
}

}  // namespace eddyspec
