#ifndef HJB_POLICY_HPP
#define HJB_POLICY_HPP

#include "hjb/model.hpp"

#include <vector>

namespace hjb {

/// Result of a one-dimensional Hamiltonian maximization at fixed (k, p).
struct PolicyResult {
    double c_star = 0.0;      // maximizing consumption; 0 only for an exact corner
    double h_value = 0.0;     // sup_c { F(k,c)p + u(c,k) }
    double foc_residual = 0.0;
    int iterations = 0;
    bool interior = true;     // false when the optimum sits at/near the c -> 0 corner
    bool near_corner = false; // c_star below 10x the bracket floor
};

/// F(k,c)*p + u(c,k); -inf when u(c,k) = -inf.
double hamiltonian(const ModelSpec& m, double k, double c, double p);

/// Maximizes c -> F(k,c)p + u(c,k) over c >= 0 by bracketing the stationarity
/// condition p*dF/dc + du/dc on (c_eps, c_cap] and bisecting. The cap doubles
/// at most twice before BracketFailure is raised; a nonpositive derivative at
/// the floor resolves against the exact corner c = 0 when u(0,k) is finite.
PolicyResult maximize_hamiltonian(const ModelSpec& m, double k, double p, double tol = 1e-10);

/// True when c*(p, k) has spread <= tol across the supplied capital samples.
/// Needs at least 3 distinct samples.
bool policy_independence_check(const ModelSpec& m, double p, const std::vector<double>& k_samples,
                               double tol);

} // namespace hjb

#endif
