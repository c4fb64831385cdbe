#pragma once

#include <stdexcept>
#include <string>

namespace mla {

// Base of every library exception. `module()` names the component that raised it.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Caller supplied arguments outside an operation's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Evaluation at a pole of the Gamma function (or a singular point of a closed form).
class PoleError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Numerical failures: the inputs are valid but the method cannot deliver.
class NumericError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

// No evaluation regime reached the requested tolerance; carries the best attempt.
class AccuracyLossError : public NumericError {
public:
    AccuracyLossError(std::string module, const std::string& what, double best_value,
                      double best_imag, double estimate)
        : NumericError(std::move(module), what),
          best_value(best_value),
          best_imag(best_imag),
          error_estimate(estimate) {}
    double best_value;
    double best_imag;
    double error_estimate;
};

}  // namespace mla
