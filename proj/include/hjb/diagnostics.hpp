#ifndef HJB_DIAGNOSTICS_HPP
#define HJB_DIAGNOSTICS_HPP

#include "hjb/model.hpp"
#include "hjb/ode.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hjb {

/// One-sided derivative estimates of a concave scalar function; for concave
/// inputs the supporting slopes form the interval [d_plus, d_minus].
struct SubgradientInterval {
    double d_plus = 0.0;
    double d_minus = 0.0;
    double h_used = 0.0;
};

/// Richardson-extrapolated one-sided differences (two halvings of h).
/// Domain error if the stencil hits a -inf or non-finite value.
SubgradientInterval subgradient_interval(const std::function<double(double)>& g, double x, double h);

struct Series {
    std::vector<double> t;
    std::vector<double> value;
    double sup_norm() const;
};

struct NamedVerdict {
    std::string name;
    bool pass = false;
    double tolerance = 0.0;
    std::string detail;
};

struct DiagnosticsReport {
    Series euler;
    Series transversality;  // e^(-rho T) u'(c(T)) f(k(T)) at sampled horizons
    Series hjb_along_path;
    std::vector<NamedVerdict> verdicts;
};

/// Centered-difference residual of the consumption Euler equation
/// d/dt u'(c) = (rho + d - f'(k)) u'(c) along a sampled path. Requires the
/// production form f(k) - d*k - c with scalar utility.
Series euler_residual(const ModelSpec& m, const Path& path);

/// Evaluates e^(-rho T) u'(c(T)) f(k(T)) at the sample horizons; passes when
/// the sequence decreases and the final value is below tol.
NamedVerdict transversality_check(const ModelSpec& m, const Path& path,
                                  const std::vector<double>& sample_times, double tol = 1e-6);

/// Full residual diagnostics for a path against a model: Euler residual,
/// transversality samples, and the HJB residual of a candidate value function
/// along the path when one is supplied.
DiagnosticsReport diagnose_path(const ModelSpec& m, const Path& path,
                                const ValueOracle* V = nullptr);

// --- turnkey reproductions -------------------------------------------------

struct CounterexampleReport {
    // Linear model at unit discounting: V(k) = a*k solves the equation
    // exactly for every a >= 1, so the equation cannot pin down the value.
    std::vector<double> family_slopes;
    std::vector<double> family_max_residual;
    // At discount rate 2 every admissible payoff lies in [0, k_bar]...
    std::vector<double> trapped_fractions;
    std::vector<double> trapped_payoffs;
    double trapped_bound = 0.0;
    // ...yet the only candidate the equation allows is quadratic, whose
    // derivative drops below 1 near the origin: a contradiction.
    double forced_smallest_k = 0.0;
    double forced_vprime_there = 0.0;
    bool family_pass = false;
    bool trapped_pass = false;
};

CounterexampleReport counterexample_suite(double k_bar);

struct MagicReport {
    std::vector<double> sample_times;
    std::vector<double> admissibility_residual;  // k'(t) - F(k(t), c(t))
    double payoff = 0.0;
    double tail_bound = 0.0;
    double lower_bound = 0.0;  // -sqrt(32) - sqrt(8)/e
    bool admissible = false;
    bool bound_holds = false;
};

/// Builds the zero-initial-capital path k = t^2/16, c = t/8 under
/// F = sqrt(k) - c, u = -1/sqrt(c), checks admissibility, and integrates the
/// (singular but integrable) discounted payoff.
MagicReport magic_of_capital_demo();

} // namespace hjb

#endif
