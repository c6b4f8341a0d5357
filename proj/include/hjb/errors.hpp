#ifndef HJB_ERRORS_HPP
#define HJB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hjb {

/// Consumption bracket never produced a sign change of the first-order
/// condition, even after expanding the cap. Usually means marginal utility
/// fails to decay (Assumption 4 violated) or c_cap is far too small.
class BracketFailure : public std::runtime_error {
public:
    explicit BracketFailure(const std::string& what) : std::runtime_error(what) {}
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double residual, int iters)
        : std::runtime_error(what), max_residual(residual), iterations(iters) {}
    double max_residual;
    int iterations;
};

class DegenerateGrid : public std::runtime_error {
public:
    explicit DegenerateGrid(const std::string& what) : std::runtime_error(what) {}
};

/// The Hamiltonian supremum is +infinity at some node; the sweep is poisoned
/// and the solve aborts rather than returning a spurious fixed point.
class UnboundedHamiltonian : public std::runtime_error {
public:
    explicit UnboundedHamiltonian(const std::string& what) : std::runtime_error(what) {}
};

/// A model fails the sampled assumption checks required by an operation.
class AssumptionViolation : public std::runtime_error {
public:
    AssumptionViolation(const std::string& what, int assumption_id)
        : std::runtime_error(what), id(assumption_id) {}
    int id;
};

class StepFailure : public std::runtime_error {
public:
    explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

class FormMismatch : public std::runtime_error {
public:
    explicit FormMismatch(const std::string& what) : std::runtime_error(what) {}
};

class UndefinedPayoff : public std::runtime_error {
public:
    explicit UndefinedPayoff(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hjb

#endif
