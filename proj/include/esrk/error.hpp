#pragma once

#include <stdexcept>
#include <string>

namespace esrk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownScheme : public Error {
public:
    explicit UnknownScheme(const std::string& name) : Error("unknown scheme: " + name) {}
};

class DegenerateTableau : public Error {
public:
    using Error::Error;
};

/// A state left the admissible domain of the entropy (e.g. u <= 0 for -log u).
class DomainViolation : public Error {
public:
    DomainViolation(const std::string& what, double value)
        : Error(what + " (u = " + std::to_string(value) + ")"), value_(value) {}
    double value() const noexcept { return value_; }

private:
    double value_;
};

class NonConvergence : public Error {
public:
    NonConvergence(int iterations, double norm)
        : Error("Newton iteration did not converge after " + std::to_string(iterations) +
                " iterations (defect " + std::to_string(norm) + ")"),
          iterations_(iterations), norm_(norm) {}
    int iterations() const noexcept { return iterations_; }
    double norm() const noexcept { return norm_; }

private:
    int iterations_;
    double norm_;
};

class LedgerUnavailable : public Error {
public:
    using Error::Error;
};

class NotQuadraticEntropy : public Error {
public:
    NotQuadraticEntropy() : Error("operation requires the quadratic entropy") {}
};

class UnsupportedOperator : public Error {
public:
    using Error::Error;
};

class NonPositiveWeights : public Error {
public:
    NonPositiveWeights() : Error("CFL bound requires all weights b_k > 0") {}
};

/// A run stopped because step `step` failed; the message carries the original error.
class RunAborted : public Error {
public:
    RunAborted(int step, const std::string& what)
        : Error("run aborted at step " + std::to_string(step) + ": " + what), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace esrk
