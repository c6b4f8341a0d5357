#include "hjb/diagnostics.hpp"
#include "hjb/errors.hpp"
#include "hjb/hjb_solver.hpp"
#include "hjb/numeric.hpp"
#include "hjb/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hjb {

double Series::sup_norm() const {
    double s = 0.0;
    for (double v : value) s = std::max(s, std::fabs(v));
    return s;
}

SubgradientInterval subgradient_interval(const std::function<double(double)>& g, double x, double h) {
    if (!(h > 0.0 && x - h > 0.0))
        throw std::invalid_argument("subgradient_interval: need h > 0 and x - h > 0");
    auto probe = [&](double t) {
        const double v = g(t);
        if (!std::isfinite(v))
            throw std::domain_error("subgradient_interval: g not finite on the stencil");
        return v;
    };
    const double g0 = probe(x);
    auto dplus = [&](double hh) { return (probe(x + hh) - g0) / hh; };
    auto dminus = [&](double hh) { return (g0 - probe(x - hh)) / hh; };
    // One-sided differences converge linearly in h; one Richardson step on the
    // two finest levels removes the leading term without breaking kinks
    // (piecewise-linear inputs are reproduced exactly).
    const double p2 = dplus(h / 2.0), p4 = dplus(h / 4.0);
    const double m2 = dminus(h / 2.0), m4 = dminus(h / 4.0);
    SubgradientInterval out;
    out.d_plus = 2.0 * p4 - p2;
    out.d_minus = 2.0 * m4 - m2;
    out.h_used = h / 4.0;
    return out;
}

Series euler_residual(const ModelSpec& m, const Path& path) {
    if (!m.rck || !m.rck->u_prime)
        throw FormMismatch("euler_residual: model must have production form f(k) - d*k - c with "
                           "scalar marginal utility");
    int positive = 0;
    for (double c : path.consumption)
        if (c > 0.0) ++positive;
    if (positive < 3)
        throw std::invalid_argument("euler_residual: need at least 3 samples with c > 0");
    const RckForm& r = *m.rck;
    Series out;
    for (size_t i = 1; i + 1 < path.times.size(); ++i) {
        if (!(path.consumption[i - 1] > 0.0 && path.consumption[i] > 0.0 && path.consumption[i + 1] > 0.0))
            continue;
        const double dmu = (r.u_prime(path.consumption[i + 1]) - r.u_prime(path.consumption[i - 1])) /
                           (path.times[i + 1] - path.times[i - 1]);
        const double rhs = (m.rho + r.d - r.fprime(path.capital[i])) * r.u_prime(path.consumption[i]);
        out.t.push_back(path.times[i]);
        out.value.push_back(dmu - rhs);
    }
    return out;
}

NamedVerdict transversality_check(const ModelSpec& m, const Path& path,
                                  const std::vector<double>& sample_times, double tol) {
    if (!m.rck || !m.rck->u_prime)
        throw FormMismatch("transversality_check: model must have production form with scalar "
                           "marginal utility");
    const RckForm& r = *m.rck;
    NamedVerdict v{"transversality", true, tol, ""};
    double prev = kPosInf, last = 0.0;
    std::ostringstream detail;
    for (double T : sample_times) {
        if (T > path.times.back() + 1e-12)
            throw std::invalid_argument("transversality_check: sample beyond path support");
        const double c = path.consumption_at(T), k = path.capital_at(T);
        const double val = std::exp(-m.rho * T) * r.u_prime(std::max(c, 1e-300)) * r.f(k);
        detail << "T=" << T << ": " << val << "; ";
        if (!(std::fabs(val) <= std::fabs(prev) * (1.0 + 1e-9))) v.pass = false;
        prev = val;
        last = val;
    }
    if (!(std::fabs(last) < tol)) v.pass = false;
    v.detail = detail.str();
    return v;
}

DiagnosticsReport diagnose_path(const ModelSpec& m, const Path& path, const ValueOracle* V) {
    DiagnosticsReport rep;
    if (m.rck && m.rck->u_prime) {
        rep.euler = euler_residual(m, path);
        // tabulated policies carry first-order grid bias, so the pass bar sits
        // at a percent of the marginal-utility scale
        double scale = 1.0;
        for (double c : path.consumption)
            if (c > 0.0) scale = std::max(scale, std::fabs(m.rck->u_prime(c)));
        rep.verdicts.push_back(NamedVerdict{"euler_residual_sup", rep.euler.sup_norm() <= 1e-2 * scale,
                                            1e-2 * scale, "sup-norm " + std::to_string(rep.euler.sup_norm())});
        const double T = path.times.back();
        const std::vector<double> ts{0.25 * T, 0.5 * T, T};
        // limit condition at finite horizon: require at least discount-rate
        // decay over the observed span (an absolute bar would flag healthy
        // short paths)
        const double c1 = std::max(path.consumption_at(ts[0]), 1e-300);
        const double v1 = std::exp(-m.rho * ts[0]) * m.rck->u_prime(c1) * m.rck->f(path.capital_at(ts[0]));
        const double tv_tol = std::max(1e-6, 3.0 * std::fabs(v1) * std::exp(-m.rho * (T - ts[0])));
        const auto tv = transversality_check(m, path, ts, tv_tol);
        for (double t : ts) {
            const double c = std::max(path.consumption_at(t), 1e-300);
            rep.transversality.t.push_back(t);
            rep.transversality.value.push_back(std::exp(-m.rho * t) * m.rck->u_prime(c) *
                                               m.rck->f(path.capital_at(t)));
        }
        rep.verdicts.push_back(tv);
    }
    if (V) {
        for (size_t i = 0; i < path.times.size(); i += std::max<size_t>(1, path.times.size() / 64)) {
            const double k = path.capital[i];
            rep.hjb_along_path.t.push_back(path.times[i]);
            rep.hjb_along_path.value.push_back(hjb_residual(m, *V, k));
        }
        const double tol = 1e-6 * std::max(1.0, std::fabs(V->value(path.capital.front())));
        rep.verdicts.push_back(NamedVerdict{"hjb_along_path_sup",
                                            rep.hjb_along_path.sup_norm() <= tol, tol,
                                            "sup-norm " + std::to_string(rep.hjb_along_path.sup_norm())});
    }
    return rep;
}

CounterexampleReport counterexample_suite(double k_bar) {
    if (!(k_bar > 0.0)) throw std::invalid_argument("counterexample_suite: k_bar must be positive");
    CounterexampleReport rep;

    // (i) unit discounting: every V(k) = a*k with a >= 1 zeroes the residual
    {
        const ModelSpec m = with_domain(make_linear_counterexample(1.0), 0.1 * k_bar, 10.0 * k_bar);
        const auto grid = ValueGrid::log_spaced(m.k_lo, m.k_hi, 50);
        rep.family_pass = true;
        for (double a : {1.0, 2.0, 5.0}) {
            ValueOracle cand{[a](double k) { return a * k; }, [a](double) { return a; }, "a*k"};
            double worst = 0.0;
            for (double k : grid.nodes())
                worst = std::max(worst, std::fabs(hjb_residual(m, cand, k)));
            rep.family_slopes.push_back(a);
            rep.family_max_residual.push_back(worst);
            if (!(worst <= 1e-12 * a * m.k_hi)) rep.family_pass = false;
        }
    }

    // (ii) discount rate 2: admissible payoffs are trapped in [0, k_bar],
    // sampled over constant consumption fractions with closed-form capital
    // k(t) = s*k_bar + (1 - s)*k_bar*e^t (so quadrature is the only error).
    {
        const ModelSpec m = with_domain(make_linear_counterexample(2.0), 0.1 * k_bar, 10.0 * k_bar);
        rep.trapped_bound = k_bar;
        rep.trapped_pass = true;
        bool any_positive = false;
        for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            Path path;
            const int n = 8001;
            const double T = 20.0;
            for (int i = 0; i < n; ++i) {
                const double t = T * i / double(n - 1);
                path.times.push_back(t);
                path.capital.push_back(s * k_bar + (1.0 - s) * k_bar * std::exp(t));
                path.consumption.push_back(s * k_bar);
            }
            path.meta.termination = "completed";
            const double p = payoff(m, path).value;
            rep.trapped_fractions.push_back(s);
            rep.trapped_payoffs.push_back(p);
            if (!(p >= 0.0 && p <= k_bar + 1e-9)) rep.trapped_pass = false;
            if (p > 0.0) any_positive = true;
        }
        if (!any_positive) rep.trapped_pass = false;

        // (iii) the forced quadratic candidate k V' = 2 V, V(1) = 1 has
        // V'(k) = 2k, which undercuts the required slope 1 near the origin.
        const auto grid = ValueGrid::log_spaced(0.01, 10.0 * k_bar, 50);
        rep.forced_smallest_k = grid.nodes().front();
        rep.forced_vprime_there = 2.0 * 1.0 * rep.forced_smallest_k;
    }
    return rep;
}

MagicReport magic_of_capital_demo() {
    MagicReport rep;
    const ModelSpec m = make_sqrt_magic();

    for (double t : {0.1, 1.0, 10.0}) {
        const double k = t * t / 16.0, c = t / 8.0;
        const double kdot = t / 8.0;
        rep.sample_times.push_back(t);
        rep.admissibility_residual.push_back(kdot - m.F(k, c));
    }
    rep.admissible = true;
    for (double r : rep.admissibility_residual)
        if (std::fabs(r) > 1e-12) rep.admissible = false;

    // geometric time grid so the t^(-1/2) integrand is resolved near 0
    Path path;
    path.times.push_back(0.0);
    path.capital.push_back(0.0);
    path.consumption.push_back(0.0);
    const double t_min = 1e-10, t_max = 40.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
        const double t = t_min * std::pow(t_max / t_min, i / double(n));
        path.times.push_back(t);
        path.capital.push_back(t * t / 16.0);
        path.consumption.push_back(t / 8.0);
    }
    path.meta.termination = "completed";
    const PayoffResult pr = payoff(m, path, Quadrature::clamped_singular);
    rep.payoff = pr.value;
    rep.tail_bound = pr.tail_bound;
    rep.lower_bound = -std::sqrt(32.0) - std::sqrt(8.0) * std::exp(-1.0);
    rep.bound_holds = rep.payoff >= rep.lower_bound;
    return rep;
}

} // namespace hjb
