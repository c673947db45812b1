// errors.hpp — error taxonomy shared by the library and the CLI.
//
// ConfigError    invalid parameters, domain-object invariant violations,
//                inconsistent user input            (CLI exit code 2)
// FormatError    malformed files: CSV rows, headers, JSON schema
//                                                   (CLI exit code 4)
// NumericalError non-convergence, boundary peaks, no-peak spectra
//                                                   (CLI exit code 3)
// DomainError    math-domain violations of the compensation algebra
//                (discriminants, clamp overruns)    (CLI exit code 3)

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace eddyspec {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}

    NumericalError(const std::string& what,
                   std::complex<double> last, std::complex<double> previous)
        : std::runtime_error(what), last_estimate(last), previous_estimate(previous),
          has_estimates(true) {}

    // Last two quadrature estimates when a refinement loop gave up.
    std::complex<double> last_estimate{0.0, 0.0};
    std::complex<double> previous_estimate{0.0, 0.0};
    bool has_estimates = false;
};

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eddyspec
