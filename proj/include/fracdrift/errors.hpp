#pragma once
#include <stdexcept>
#include <string>

namespace fracdrift {

// Bad inputs, bad configs, schema violations. CLI exit code 1.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical breakdown at runtime (lost positive definiteness, blow-up, ...). CLI exit code 2.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fracdrift
