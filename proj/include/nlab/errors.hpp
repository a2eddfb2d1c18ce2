#pragma once

#include <stdexcept>
#include <string>

namespace nlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class SingularConfiguration : public Error {
public:
    using Error::Error;
};

class UnstableModel : public Error {
public:
    UnstableModel(const std::string& what, double max_real_eigenvalue)
        : Error(what), max_real_eigenvalue_(max_real_eigenvalue) {}
    double max_real_eigenvalue() const noexcept { return max_real_eigenvalue_; }

private:
    double max_real_eigenvalue_;
};

class SolverFailure : public Error {
public:
    using Error::Error;
};

// Raised when a trajectory leaves the physical set; the step must be refined.
class StepTooLarge : public Error {
public:
    using Error::Error;
};

class MatrixNotPhysical : public Error {
public:
    using Error::Error;
};

class OptBudgetExhausted : public Error {
public:
    using Error::Error;
};

class CutoffTooSmall : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nlab
