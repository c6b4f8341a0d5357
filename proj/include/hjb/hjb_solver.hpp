#ifndef HJB_HJB_SOLVER_HPP
#define HJB_HJB_SOLVER_HPP

#include "hjb/model.hpp"
#include "hjb/value_grid.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hjb {

enum class Scheme { upwind_implicit, upwind_explicit };

struct SolveConfig {
    int max_iters = 600;
    double residual_tol = 1e-8;
    double relaxation = 1.0;           // in (0, 1]
    Scheme scheme = Scheme::upwind_implicit;
    double policy_tol = 1e-10;
    std::optional<std::vector<double>> init_values;  // overrides the stationary-payoff start
    int threads = 0;                   // 0: HJB_GROWTH_THREADS or hardware default
};

enum class GrowthStatus { satisfied, violated, inconclusive };

const char* to_string(GrowthStatus s);

struct GrowthSample {
    double k_bar = 0.0;
    double horizon = 0.0;
    double discounted_value = 0.0;  // e^(-rho T) V(k+(T, k_bar))
};

/// Certificate that a candidate value function lies in the uniqueness class:
/// increasing, concave, and discounted-value decay along pure accumulation
/// paths. Residuals cover interior nodes; the two boundary closures are
/// artifacts of the grid truncation and are excluded.
struct CertificateReport {
    bool in_class_V = false;
    bool increasing_ok = false;
    bool concavity_ok = false;
    GrowthStatus growth = GrowthStatus::inconclusive;
    double concavity_defect = 0.0;
    double max_abs_residual = 0.0;
    std::vector<double> residual_nodes;    // interior grid nodes
    std::vector<double> residual_profile;  // HJB residual at those nodes
    std::vector<GrowthSample> decay_samples;
    double growth_tol = 0.0;
    int iterations = 0;
};

/// sup_c { F(k,c) V'(k) + u(c,k) } - rho V(k) for an arbitrary candidate.
/// +inf when the supremum is unbounded (the bracket never closes).
double hjb_residual(const ModelSpec& m, const ValueOracle& V, double k);

/// Same residual with an explicit derivative value (used to evaluate the
/// equation under a particular one-sided difference).
double hjb_residual_at(const ModelSpec& m, double V_value, double V_deriv, double k);

/// Fresh upwind re-evaluation of the discrete HJB residual at every node of a
/// solved grid; derives policies and upwind directions from the tabulated
/// values alone.
std::vector<double> grid_residuals(const ModelSpec& m, const ValueGrid& V, double policy_tol = 1e-10);

/// Membership check for the uniqueness class. growth_tol <= 0 selects the
/// default 1e-4 * |V(mid)|. The discounted decay is sampled at horizon/4,
/// horizon/2, horizon from k_lo, the geometric midpoint, and k_hi.
CertificateReport check_class_V(const ModelSpec& m, const ValueGrid& V, double horizon,
                                double growth_tol = 0.0);

/// Solves the stationary HJB equation on the nodes of `grid_template` by
/// policy-iterated upwind finite differences (forward difference where the
/// optimal drift is positive, backward where negative, stationary closure at
/// sonic nodes). Requires the model to pass the sampled assumption checks
/// A1-A5; a model with non-decaying marginal utility is rejected up front
/// because its Hamiltonian supremum is unbounded at small shadow prices.
std::pair<ValueGrid, CertificateReport> solve_hjb(const ModelSpec& m, const ValueGrid& grid_template,
                                                  const SolveConfig& cfg = {});

/// Analytic upper bound on the value at k_bar from the linear-majorant
/// construction: a*V3 + b*V4 + cc/rho where V3, V4 integrate the CRRA
/// envelope along the majorizing linear technology.
double assumption6_upper_bound(const ModelSpec& m, const Assumption6Params& a6, double k_bar);

} // namespace hjb

#endif
