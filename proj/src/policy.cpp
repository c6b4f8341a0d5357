#include "hjb/policy.hpp"
#include "hjb/errors.hpp"
#include "hjb/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hjb {

double hamiltonian(const ModelSpec& m, double k, double c, double p) {
    const double util = m.u(c, k);
    if (is_neg_inf(util)) return kNegInf;
    return m.F(k, c) * p + util;
}

namespace {

// Derivative of the Hamiltonian in c. Strictly decreasing in c under the
// model assumptions (strict concavity in c).
inline double foc(const ModelSpec& m, double k, double p, double c) {
    return p * m.dF_dc(k, c) + m.du_dc(c, k);
}

} // namespace

PolicyResult maximize_hamiltonian(const ModelSpec& m, double k, double p, double tol) {
    if (!(k > 0.0 && p > 0.0))
        throw std::invalid_argument("maximize_hamiltonian: need k > 0 and p > 0");
    if (!(m.c_cap > 0.0))
        throw std::invalid_argument("maximize_hamiltonian: model has no consumption cap");

    PolicyResult res;
    const double c_eps = 1e-12 * m.c_cap;

    double glo = foc(m, k, p, c_eps);
    ++res.iterations;
    if (glo <= 0.0) {
        // No interior stationary point above the floor. Resolve against the
        // exact corner when utility is finite there.
        const double h_eps = hamiltonian(m, k, c_eps, p);
        const double h_corner = hamiltonian(m, k, 0.0, p);
        if (!is_neg_inf(h_corner) && h_corner >= h_eps) {
            res.c_star = 0.0;
            res.h_value = h_corner;
        } else {
            res.c_star = c_eps;
            res.h_value = h_eps;
        }
        res.foc_residual = std::fabs(glo);
        res.interior = false;
        res.near_corner = true;
        return res;
    }

    double hi = m.c_cap;
    double ghi = foc(m, k, p, hi);
    ++res.iterations;
    int expansions = 0;
    while (ghi > 0.0 && expansions < 2) {
        hi *= 2.0;
        ghi = foc(m, k, p, hi);
        ++expansions;
        ++res.iterations;
    }
    if (ghi > 0.0) {
        std::ostringstream os;
        os << "maximize_hamiltonian: first-order condition positive up to c = " << hi
           << " at k = " << k << ", p = " << p
           << "; marginal utility does not decay (Assumption 4) or c_cap is too small";
        throw BracketFailure(os.str());
    }

    double lo = c_eps;
    double mid = 0.5 * (lo + hi);
    double gmid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        gmid = foc(m, k, p, mid);
        ++res.iterations;
        if (std::fabs(gmid) <= tol) break;
        if (gmid > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid) break;
    }

    res.c_star = mid;
    res.h_value = hamiltonian(m, k, mid, p);
    res.foc_residual = std::fabs(gmid);
    res.interior = true;
    res.near_corner = mid < 10.0 * c_eps;
    return res;
}

bool policy_independence_check(const ModelSpec& m, double p, const std::vector<double>& k_samples,
                               double tol) {
    if (k_samples.size() < 3)
        throw std::invalid_argument("policy_independence_check: need at least 3 capital samples");
    double cmin = kPosInf, cmax = kNegInf;
    for (double k : k_samples) {
        const double c = maximize_hamiltonian(m, k, p).c_star;
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    return cmax - cmin <= tol;
}

} // namespace hjb
