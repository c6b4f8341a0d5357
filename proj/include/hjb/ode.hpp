#ifndef HJB_ODE_HPP
#define HJB_ODE_HPP

#include "hjb/model.hpp"
#include "hjb/value_grid.hpp"

#include <string>
#include <vector>

namespace hjb {

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::rk45_adaptive;
    double step = 1e-2;        // rk4_fixed substep
    double rtol = 1e-9;
    double atol = 1e-12;
    double t_end = 100.0;
    double k_floor = 0.0;      // <= 0: 1e-8 * k(0)
    double divergence_cap = 0.0;  // <= 0: 1e6 * k(0); shooting only
    int n_samples = 401;       // uniform output resolution
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    double min_dt = 0.0;
    double max_dt = 0.0;
};

struct PathMeta {
    std::string integrator;
    StepStats stats;
    std::string termination;  // completed | k_collapsed | diverged | range_exit | step_failure
    std::string note;
};

/// Discretized trajectory (t, k(t), c(t)) on a uniform output grid.
struct Path {
    std::vector<double> times;
    std::vector<double> capital;
    std::vector<double> consumption;
    PathMeta meta;

    bool completed() const { return meta.termination == "completed"; }
    double min_capital() const;
    /// Linear interpolation within the sampled support.
    double capital_at(double t) const;
    double consumption_at(double t) const;
};

/// Integrates zero-consumption accumulation k' = F(k, 0) from k_bar.
Path pure_accumulation_path(const ModelSpec& m, double k_bar, const IntegratorConfig& cfg);

/// Integrates the one-dimensional optimal-consumption dynamics
/// k' = F(k, c*(V'(k), k)) and records the consumption along the path.
/// Terminates with reason range_exit if k leaves [k_range_lo, k_range_hi].
Path optimal_path(const ModelSpec& m, const ValueOracle& V, double k_bar, const IntegratorConfig& cfg,
                  double k_range_lo = 0.0, double k_range_hi = 0.0);
Path optimal_path(const ModelSpec& m, const ValueGrid& V, double k_bar, const IntegratorConfig& cfg);

/// Integrates the production/consumption Euler system
///   k' = f(k) - d k - c,   c' = (rho + d - f'(k)) u'(c)/u''(c)
/// from (k_bar, c0). The steady state is a saddle, so this terminates with
/// k_collapsed or diverged unless c0 sits on the stable manifold.
Path euler_shooting(const ModelSpec& m, double k_bar, double c0, const IntegratorConfig& cfg);

enum class Quadrature { trapezoid, clamped_singular };

struct PayoffResult {
    double value = 0.0;      // extended real; may be -inf
    double tail_bound = 0.0; // crude bound on the discarded discounted tail
};

/// Discounted quadrature of u(c(t), k(t)) over the path support. The
/// clamped_singular rule fits a power law to the first panel so integrable
/// -inf endpoint singularities contribute their limit value.
PayoffResult payoff(const ModelSpec& m, const Path& path, Quadrature rule = Quadrature::trapezoid);

} // namespace hjb

#endif
