#include "hjb/hjb_solver.hpp"
#include "hjb/errors.hpp"
#include "hjb/numeric.hpp"
#include "hjb/ode.hpp"
#include "hjb/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace hjb {

const char* to_string(GrowthStatus s) {
    switch (s) {
        case GrowthStatus::satisfied: return "satisfied";
        case GrowthStatus::violated: return "violated";
        default: return "inconclusive";
    }
}

double hjb_residual_at(const ModelSpec& m, double V_value, double V_deriv, double k) {
    try {
        return maximize_hamiltonian(m, k, V_deriv).h_value - m.rho * V_value;
    } catch (const BracketFailure&) {
        return kPosInf;  // unbounded supremum is a legal extended-real outcome
    }
}

double hjb_residual(const ModelSpec& m, const ValueOracle& V, double k) {
    return hjb_residual_at(m, V.value(k), V.deriv(k), k);
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HJB_GROWTH_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::max(1u, std::min(hw, 8u));
}

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& body) {
    if (threads <= 1 || n < 64) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Stationary consumption: the root of c -> F(k, c). Returns 0 when F(k,0) <= 0.
double stationary_consumption(const ModelSpec& m, double k) {
    if (!(m.F(k, 0.0) > 0.0)) return 0.0;
    double hi = m.c_cap;
    int guard = 0;
    while (m.F(k, hi) > 0.0 && guard++ < 60) hi *= 2.0;
    if (m.F(k, hi) > 0.0) return 0.0;
    return bisect_root([&](double c) { return m.F(k, c); }, 0.0, hi, 1e-14);
}

enum class Dir { forward, backward, sonic };

struct NodeEval {
    Dir dir = Dir::sonic;
    double c = 0.0;
    double util = 0.0;      // u(c, k)
    double drift = 0.0;     // F(k, c)
    double hamilton = 0.0;  // u + drift * chosen slope
};

// Hamiltonian value at shadow price p; the bracket failing on a model that
// already passed the decay checks means the maximizer ran past the expanded
// consumption cap (transient tiny p), which we report as +inf so the caller
// treats the branch as unusable rather than aborting.
double hamiltonian_value(const ModelSpec& m, double k, double p, double policy_tol, double* c_out,
                         double* drift_out) {
    try {
        const PolicyResult pr = maximize_hamiltonian(m, k, p, policy_tol);
        if (c_out) *c_out = pr.c_star;
        if (drift_out) *drift_out = m.F(k, pr.c_star);
        return pr.h_value;
    } catch (const BracketFailure&) {
        return kPosInf;
    }
}

// Smallest shadow price worth evaluating: the first-order-condition price of
// consuming the cap itself. A difference quotient below it (flat or inverted
// table data mid-iteration) maps to the deepest-dissaving policy instead of
// an unusable bracket, so the implicit step can pull the node back up.
double price_floor(const ModelSpec& m, double k) {
    const double dFc = m.dF_dc(k, m.c_cap);
    const double duc = m.du_dc(m.c_cap, k);
    if (!(dFc < 0.0) || !std::isfinite(duc)) return 1e-12;
    return -duc / dFc;
}

// Interior upwind evaluation from tabulated values alone. Picks the one-sided
// difference consistent with the sign of the optimal drift; trustworthy but
// zero-bracketing drifts resolve to the stationary closure, degenerate data
// to the floor-priced dissaving branch.
NodeEval eval_interior(const ModelSpec& m, const std::vector<double>& k, const std::vector<double>& v,
                       size_t i, double policy_tol) {
    const double p_floor = price_floor(m, k[i]);
    const double p_fwd = (v[i + 1] - v[i]) / (k[i + 1] - k[i]);
    const double p_bwd = (v[i] - v[i - 1]) / (k[i] - k[i - 1]);
    NodeEval fw, bw;
    bool fw_ok = false, bw_ok = false;
    if (p_fwd > p_floor) {
        double c = 0.0, s = 0.0;
        const double h = hamiltonian_value(m, k[i], p_fwd, policy_tol, &c, &s);
        if (std::isfinite(h) && s > 0.0) {
            fw = NodeEval{Dir::forward, c, m.u(c, k[i]), s, h};
            fw_ok = true;
        }
    }
    if (p_bwd > p_floor) {
        double c = 0.0, s = 0.0;
        const double h = hamiltonian_value(m, k[i], p_bwd, policy_tol, &c, &s);
        if (std::isfinite(h) && s < 0.0) {
            bw = NodeEval{Dir::backward, c, m.u(c, k[i]), s, h};
            bw_ok = true;
        }
    }
    if (fw_ok && bw_ok) return fw.hamilton >= bw.hamilton ? fw : bw;
    if (fw_ok) return fw;
    if (bw_ok) return bw;

    if (p_fwd > p_floor && p_bwd > p_floor) {
        // trustworthy slopes with drifts bracketing zero: stationary node
        const double c0 = stationary_consumption(m, k[i]);
        const double util = m.u(c0, k[i]);
        if (!is_neg_inf(util)) return NodeEval{Dir::sonic, c0, util, 0.0, util};
    }
    {
        // degenerate (flat or inverted) table data: the floor price maps to
        // deepest dissaving, coupling the node back to its lower neighbor so
        // the implicit step can lift it
        double c = 0.0, s = 0.0;
        const double h = hamiltonian_value(m, k[i], p_floor, policy_tol, &c, &s);
        if (std::isfinite(h) && s < 0.0) return NodeEval{Dir::backward, c, m.u(c, k[i]), s, h};
    }
    const double c0 = stationary_consumption(m, k[i]);
    const double util = m.u(c0, k[i]);
    if (is_neg_inf(util))
        throw DegenerateGrid("solve_hjb: node k = " + std::to_string(k[i]) +
                             " has no valid one-sided drift and an infinite stationary closure");
    return NodeEval{Dir::sonic, c0, util, 0.0, util};
}

// Weights of the second-order one-sided derivative at an end node. For the
// top node (into = -1): V'(k_n) = a*V_n - b*V_{n-1} + g*V_{n-2}; mirrored for
// the bottom. A two-point one-sided closure would make the outer pair of node
// equations degenerate whenever the drift points out of the grid, so the
// boundary rows use the wider stencil.
struct OneSided {
    double a, b, g;  // all positive; signs applied by the caller
};

OneSided one_sided_weights(double h1, double h2) {
    return OneSided{(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2),
                    h1 / (h2 * (h1 + h2))};
}

// One-sided slope at node 0 or n-1.
double boundary_p(const std::vector<double>& k, const std::vector<double>& v, size_t i) {
    const size_t n = k.size();
    if (n < 3) return i == 0 ? (v[1] - v[0]) / (k[1] - k[0]) : (v[n - 1] - v[n - 2]) / (k[n - 1] - k[n - 2]);
    if (i == 0) {
        const OneSided w = one_sided_weights(k[1] - k[0], k[2] - k[1]);
        return -w.a * v[0] + w.b * v[1] - w.g * v[2];
    }
    const OneSided w = one_sided_weights(k[n - 1] - k[n - 2], k[n - 2] - k[n - 3]);
    return w.a * v[n - 1] - w.b * v[n - 2] + w.g * v[n - 3];
}

// Boundary closure: the end node keeps the HJB equation with its inward
// one-sided slope, whatever the sign of the implied drift.
NodeEval eval_boundary(const ModelSpec& m, const std::vector<double>& k, const std::vector<double>& v,
                       size_t i, double policy_tol) {
    const size_t n = k.size();
    const bool top = i == n - 1;
    const double p = boundary_p(k, v, i);
    if (p > 0.0) {
        double c = 0.0, s = 0.0;
        const double h = hamiltonian_value(m, k[i], p, policy_tol, &c, &s);
        if (std::isfinite(h)) return NodeEval{top ? Dir::backward : Dir::forward, c, m.u(c, k[i]), s, h};
    }
    const double c0 = stationary_consumption(m, k[i]);
    const double util = m.u(c0, k[i]);
    if (is_neg_inf(util))
        throw DegenerateGrid("solve_hjb: boundary node k = " + std::to_string(k[i]) +
                             " has no usable one-sided slope");
    return NodeEval{Dir::sonic, c0, util, 0.0, util};
}

// General tridiagonal solve: lo_i V_{i-1} + di_i V_i + up_i V_{i+1} = rhs_i.
std::vector<double> thomas(const std::vector<double>& lo, const std::vector<double>& di,
                           const std::vector<double>& up, const std::vector<double>& rhs) {
    const size_t n = rhs.size();
    std::vector<double> c_prime(n), d_prime(n), out(n);
    c_prime[0] = up[0] / di[0];
    d_prime[0] = rhs[0] / di[0];
    for (size_t i = 1; i < n; ++i) {
        const double denom = di[i] - lo[i] * c_prime[i - 1];
        c_prime[i] = up[i] / denom;
        d_prime[i] = (rhs[i] - lo[i] * d_prime[i - 1]) / denom;
    }
    out[n - 1] = d_prime[n - 1];
    for (size_t i = n - 1; i-- > 0;) out[i] = d_prime[i] - c_prime[i] * out[i + 1];
    return out;
}

} // namespace

std::vector<double> grid_residuals(const ModelSpec& m, const ValueGrid& V, double policy_tol) {
    const auto& k = V.nodes();
    const auto& v = V.values();
    const size_t n = k.size();
    std::vector<double> res(n);
    for (size_t i = 0; i < n; ++i) {
        const NodeEval ne = (i == 0 || i == n - 1) ? eval_boundary(m, k, v, i, policy_tol)
                                                   : eval_interior(m, k, v, i, policy_tol);
        res[i] = ne.hamilton - m.rho * v[i];
    }
    return res;
}

CertificateReport check_class_V(const ModelSpec& m, const ValueGrid& V, double horizon,
                                double growth_tol) {
    CertificateReport rep;
    const auto& v = V.values();
    rep.increasing_ok = true;
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i + 1] > v[i])) { rep.increasing_ok = false; break; }

    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::fabs(x));
    rep.concavity_defect = V.max_convexity_defect();
    rep.concavity_ok = rep.concavity_defect <= 1e-8 * std::max(scale, 1.0);

    const double k_mid = std::sqrt(V.k_min() * V.k_max());
    rep.growth_tol = growth_tol > 0.0 ? growth_tol : std::max(1e-4 * std::fabs(V.value(k_mid)), 1e-12);

    bool any_violated = false, all_satisfied = true;
    for (double k_bar : {V.k_min(), k_mid, V.k_max()}) {
        IntegratorConfig cfg;
        cfg.t_end = horizon;
        cfg.n_samples = 257;
        const Path pap = pure_accumulation_path(m, k_bar, cfg);
        std::vector<double> d;
        for (double frac : {0.25, 0.5, 1.0}) {
            const double T = horizon * frac;
            const double kT = pap.capital_at(std::min(T, pap.times.back()));
            const double disc = std::exp(-m.rho * T) * V.value(kT);
            d.push_back(disc);
            rep.decay_samples.push_back(GrowthSample{k_bar, T, disc});
        }
        const bool monotone = std::fabs(d[1]) <= std::fabs(d[0]) * (1.0 + 1e-9) &&
                              std::fabs(d[2]) <= std::fabs(d[1]) * (1.0 + 1e-9);
        const bool contracting = std::fabs(d[2]) < (1.0 - 1e-6) * std::fabs(d[0]);
        if (!monotone || !contracting) {
            any_violated = true;
            all_satisfied = false;
        } else if (!(std::fabs(d[2]) < rep.growth_tol)) {
            all_satisfied = false;  // decaying but not yet small: inconclusive
        }
    }
    rep.growth = any_violated ? GrowthStatus::violated
                              : (all_satisfied ? GrowthStatus::satisfied : GrowthStatus::inconclusive);

    const auto res = grid_residuals(m, V);
    for (size_t i = 1; i + 1 < res.size(); ++i) {
        rep.residual_nodes.push_back(V.nodes()[i]);
        rep.residual_profile.push_back(res[i]);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(res[i]));
    }
    rep.in_class_V = rep.increasing_ok && rep.concavity_ok && rep.growth == GrowthStatus::satisfied;
    return rep;
}

std::pair<ValueGrid, CertificateReport> solve_hjb(const ModelSpec& m, const ValueGrid& grid_template,
                                                  const SolveConfig& cfg) {
    if (grid_template.size() < 32) throw std::invalid_argument("solve_hjb: need at least 32 nodes");
    if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0))
        throw std::invalid_argument("solve_hjb: relaxation must lie in (0, 1]");

    {
        const AssumptionReport rep = check_assumptions(m, SampleGrid{});
        for (int id = 1; id <= 5; ++id) {
            const auto& vd = rep.verdict(id);
            if (vd.status == CheckStatus::fail) {
                std::ostringstream os;
                os << "solve_hjb: model fails the sampled Assumption " << id << " check";
                if (vd.witness) os << " (" << vd.witness->inequality << ")";
                if (id == 4)
                    os << "; the Hamiltonian supremum is unbounded at small shadow prices, so the "
                          "equation does not determine a unique value function";
                throw AssumptionViolation(os.str(), id);
            }
        }
    }

    const auto& k = grid_template.nodes();
    const size_t n = k.size();
    const int threads = resolve_threads(cfg.threads);

    std::vector<double> v(n);
    if (cfg.init_values) {
        if (cfg.init_values->size() != n)
            throw std::invalid_argument("solve_hjb: init_values size mismatch");
        v = *cfg.init_values;
    } else {
        // Stationary payoff as the starting anchor, monotonized so the upwind
        // bootstrap always sees increasing data (the raw stationary profile
        // turns over past the zero of dF/dk and would stall the sweep).
        double c_best = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double c0 = stationary_consumption(m, k[i]);
            if (c0 <= 0.0) c0 = 1e-3 * m.c_cap;
            c_best = std::max(c_best, c0);
            double util = m.u(c_best, k[i]);
            if (is_neg_inf(util)) util = m.u(1e-3 * m.c_cap, k[i]);
            v[i] = util / m.rho + 1e-6 * i;
        }
    }

    // The stationary equation is first order, so on a truncated window it
    // admits a one-parameter family of solutions; the member the theory
    // selects is fixed by tail behavior, not by any interior relation. The
    // boundary rows therefore continue the slope geometrically (a power law
    // in k, exact for CRRA/linear-technology value functions and second-order
    // otherwise), which pins that free mode; the one-sided HJB residual at
    // the end nodes is still reported but certifies nothing.
    auto slope_ratio = [&](size_t hi_idx, size_t lo_idx, size_t lo2_idx) {
        const double d1 = (v[hi_idx] - v[lo_idx]) / (k[hi_idx] - k[lo_idx]);
        const double d2 = (v[lo_idx] - v[lo2_idx]) / (k[lo_idx] - k[lo2_idx]);
        if (!(d1 > 0.0) || !(d2 > 0.0)) return 1.0;
        return std::clamp(d1 / d2, 1e-3, 1.1);
    };

    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0), res(n, 0.0);
    double max_res = kPosInf;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        std::exception_ptr node_error;
        parallel_for(n - 2, threads, [&](size_t j) {
            const size_t i = j + 1;
            try {
                const NodeEval ne = eval_interior(m, k, v, i, cfg.policy_tol);
                const double x = ne.dir == Dir::forward ? ne.drift / (k[i + 1] - k[i]) : 0.0;
                const double y = ne.dir == Dir::backward ? -ne.drift / (k[i] - k[i - 1]) : 0.0;
                di[i] = m.rho + x + y;
                up[i] = -x;
                lo[i] = -y;
                rhs[i] = ne.util;
                res[i] = ne.hamilton - m.rho * v[i];
            } catch (...) {
                if (!node_error) node_error = std::current_exception();
            }
        });
        if (node_error) std::rethrow_exception(node_error);

        // tail-continuation coefficients, frozen within the sweep
        const double r_top = slope_ratio(n - 2, n - 3, n - 4);
        const double q_top = r_top * (k[n - 1] - k[n - 2]) / (k[n - 2] - k[n - 3]);
        const double v_top_pred = (1.0 + q_top) * v[n - 2] - q_top * v[n - 3];
        const double r_bot = std::clamp(1.0 / slope_ratio(3, 2, 1), 1.0 / 1.1, 1e3);
        const double q_bot = r_bot * (k[1] - k[0]) / (k[2] - k[1]);
        const double v_bot_pred = (1.0 + q_bot) * v[1] - q_bot * v[2];
        res[0] = m.rho * (v_bot_pred - v[0]);
        res[n - 1] = m.rho * (v_top_pred - v[n - 1]);

        max_res = 0.0;
        for (size_t i = 0; i < n; ++i) max_res = std::max(max_res, std::fabs(res[i]));
        if (max_res < cfg.residual_tol) break;

        bool stepped = false;
        if (cfg.scheme == Scheme::upwind_implicit) {
            // reduced system over nodes 1..n-2 with the boundary rows folded in
            std::vector<double> rlo(lo.begin() + 1, lo.end() - 1);
            std::vector<double> rdi(di.begin() + 1, di.end() - 1);
            std::vector<double> rup(up.begin() + 1, up.end() - 1);
            std::vector<double> rrhs(rhs.begin() + 1, rhs.end() - 1);
            const size_t rn = n - 2;
            // V0 = (1+q_bot) V1 - q_bot V2
            rdi[0] += lo[1] * (1.0 + q_bot);
            rup[0] -= lo[1] * q_bot;
            rlo[0] = 0.0;
            // Vn-1 = (1+q_top) Vn-2 - q_top Vn-3
            rdi[rn - 1] += up[n - 2] * (1.0 + q_top);
            rlo[rn - 1] -= up[n - 2] * q_top;
            rup[rn - 1] = 0.0;
            const auto sol = thomas(rlo, rdi, rup, rrhs);
            bool finite = true;
            for (double t : sol) finite = finite && std::isfinite(t);
            if (finite) {
                const double w = cfg.relaxation;
                for (size_t i = 1; i + 1 < n; ++i) v[i] = (1.0 - w) * v[i] + w * sol[i - 1];
                v[0] = (1.0 - w) * v[0] + w * ((1.0 + q_bot) * v[1] - q_bot * v[2]);
                v[n - 1] = (1.0 - w) * v[n - 1] + w * ((1.0 + q_top) * v[n - 2] - q_top * v[n - 3]);
                stepped = true;
            }
        }
        if (!stepped) {
            // damped explicit relaxation; also the upwind_explicit scheme.
            // Boundary rows step at the same rate as the interior, otherwise
            // the two time scales pump the weakly-determined tail mode.
            double rate = m.rho;
            for (size_t i = 1; i + 1 < n; ++i)
                rate = std::max(rate, std::fabs(di[i]) + std::fabs(lo[i]) + std::fabs(up[i]));
            const double dt = 0.9 / rate;
            for (size_t i = 0; i < n; ++i) v[i] += cfg.relaxation * dt * res[i];
        }
    }
    if (max_res >= cfg.residual_tol) {
        std::ostringstream os;
        os << "solve_hjb: residual " << max_res << " after " << iter << " sweeps";
        throw NonConvergence(os.str(), max_res, iter);
    }

    ValueGrid out(k, v);
    CertificateReport cert = check_class_V(m, out, 20.0 / m.rho);
    cert.iterations = iter + 1;
    return {std::move(out), std::move(cert)};
}

double assumption6_upper_bound(const ModelSpec& m, const Assumption6Params& a6, double k_bar) {
    if (!(k_bar > 0.0)) throw std::domain_error("assumption6_upper_bound: k_bar must be positive");
    const double tl = m.rho - (1.0 - a6.theta) * a6.gamma;
    if (!(tl > 0.0))
        throw std::domain_error("assumption6_upper_bound: rho - (1-theta)*gamma must be positive");
    const double k_hat = k_bar - a6.k_star + (a6.delta * a6.c_star + m.F(a6.k_star, a6.c_star)) / a6.gamma;
    const double c_star_rate = tl / (a6.theta * a6.delta) * k_hat;
    if (!(c_star_rate > 0.0))
        throw std::domain_error("assumption6_upper_bound: majorant consumption level is not positive");
    if (!(k_hat > 0.0)) throw std::domain_error("assumption6_upper_bound: majorant capital level is not positive");

    const double rho = m.rho, gamma = a6.gamma, theta = a6.theta;
    double v3, v4 = 0.0;
    if (std::fabs(theta - 1.0) < 1e-12) {
        v3 = std::log(c_star_rate) / rho + (gamma - rho) / (rho * rho);
        if (a6.b != 0.0) v4 = std::log(k_hat) / rho + gamma / (rho * rho);
    } else {
        v3 = std::pow(c_star_rate, 1.0 - theta) * theta / ((1.0 - theta) * tl) - 1.0 / (rho * (1.0 - theta));
        if (a6.b != 0.0)
            v4 = std::pow(k_hat, 1.0 - theta) / ((1.0 - theta) * tl) - 1.0 / (rho * (1.0 - theta));
    }
    return a6.a * v3 + a6.b * v4 + a6.cc / rho;
}

} // namespace hjb
