#include "hjb/ode.hpp"
#include "hjb/errors.hpp"
#include "hjb/numeric.hpp"
#include "hjb/policy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hjb {

double Path::min_capital() const {
    double m = kPosInf;
    for (double k : capital) m = std::min(m, k);
    return m;
}

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) throw std::invalid_argument("interp: empty path");
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t i = size_t(std::distance(xs.begin(), it)) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

} // namespace

double Path::capital_at(double t) const { return interp(times, capital, t); }
double Path::consumption_at(double t) const { return interp(times, consumption, t); }

namespace {

// Cash-Karp embedded Runge-Kutta pair, order 5(4).
constexpr double A2 = 0.2, A3 = 0.3, A4 = 0.6, A5 = 1.0, A6 = 0.875;
constexpr double B21 = 0.2;
constexpr double B31 = 3.0 / 40.0, B32 = 9.0 / 40.0;
constexpr double B41 = 0.3, B42 = -0.9, B43 = 1.2;
constexpr double B51 = -11.0 / 54.0, B52 = 2.5, B53 = -70.0 / 27.0, B54 = 35.0 / 27.0;
constexpr double B61 = 1631.0 / 55296.0, B62 = 175.0 / 512.0, B63 = 575.0 / 13824.0,
                 B64 = 44275.0 / 110592.0, B65 = 253.0 / 4096.0;
constexpr double C1 = 37.0 / 378.0, C3 = 250.0 / 621.0, C4 = 125.0 / 594.0, C6 = 512.0 / 1771.0;
constexpr double D1 = C1 - 2825.0 / 27648.0, D3 = C3 - 18575.0 / 48384.0,
                 D4 = C4 - 13525.0 / 55296.0, D5 = -277.0 / 14336.0, D6 = C6 - 0.25;

using Rhs = std::function<void(double, const double*, double*)>;

template <int N>
void ck_step(const Rhs& f, double t, const double* y, double dt, double* y5, double* err) {
    double k1[N], k2[N], k3[N], k4[N], k5[N], k6[N], tmp[N];
    f(t, y, k1);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + dt * B21 * k1[i];
    f(t + A2 * dt, tmp, k2);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + dt * (B31 * k1[i] + B32 * k2[i]);
    f(t + A3 * dt, tmp, k3);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + dt * (B41 * k1[i] + B42 * k2[i] + B43 * k3[i]);
    f(t + A4 * dt, tmp, k4);
    for (int i = 0; i < N; ++i)
        tmp[i] = y[i] + dt * (B51 * k1[i] + B52 * k2[i] + B53 * k3[i] + B54 * k4[i]);
    f(t + A5 * dt, tmp, k5);
    for (int i = 0; i < N; ++i)
        tmp[i] = y[i] + dt * (B61 * k1[i] + B62 * k2[i] + B63 * k3[i] + B64 * k4[i] + B65 * k5[i]);
    f(t + A6 * dt, tmp, k6);
    for (int i = 0; i < N; ++i) {
        y5[i] = y[i] + dt * (C1 * k1[i] + C3 * k3[i] + C4 * k4[i] + C6 * k6[i]);
        err[i] = dt * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]);
    }
}

template <int N>
void rk4_step(const Rhs& f, double t, const double* y, double dt, double* out) {
    double k1[N], k2[N], k3[N], k4[N], tmp[N];
    f(t, y, k1);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    f(t + 0.5 * dt, tmp, k2);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    f(t + 0.5 * dt, tmp, k3);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    f(t + dt, tmp, k4);
    for (int i = 0; i < N; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

struct Guard {
    double k_floor;
    double cap;           // 0 disables
    double range_lo = 0.0, range_hi = 0.0;  // 0 disables
    std::string check(double k, double c) const {
        if (!std::isfinite(k) || !std::isfinite(c)) return "step_failure";
        if (k < k_floor) return "k_collapsed";
        if (cap > 0.0 && (k > cap || c > cap)) return "diverged";
        if (range_hi > 0.0 && (k < range_lo || k > range_hi)) return "range_exit";
        return "";
    }
};

// Advance y from t0 to t1; accumulates step stats. Guard events are checked
// after every internal step (fast collapses would otherwise blow up between
// output samples); on an event the reached time is written to *t_event.
// Throws StepFailure when the adaptive controller stalls.
template <int N>
std::string advance(const Rhs& f, const IntegratorConfig& cfg, double t0, double t1, double* y,
                    StepStats& stats, const Guard& guard, double* t_event) {
    if (t1 <= t0) return "";
    auto accept = [&stats](double dt) {
        ++stats.accepted;
        stats.max_dt = std::max(stats.max_dt, dt);
        stats.min_dt = stats.min_dt == 0.0 ? dt : std::min(stats.min_dt, dt);
    };
    if (cfg.method == IntegratorMethod::rk4_fixed) {
        double t = t0;
        while (t < t1 - 1e-15 * std::max(1.0, t1)) {
            const double dt = std::min(cfg.step, t1 - t);
            double out[N];
            rk4_step<N>(f, t, y, dt, out);
            for (int i = 0; i < N; ++i) y[i] = out[i];
            t += dt;
            accept(dt);
            const std::string ev = guard.check(y[0], N > 1 ? y[1] : 0.0);
            if (!ev.empty()) {
                *t_event = t;
                return ev;
            }
        }
        return "";
    }
    double t = t0;
    double dt = std::min(0.1 * (t1 - t0), 1e-2 * (cfg.t_end > 0 ? cfg.t_end : 1.0));
    const double dt_min = 1e-14 * std::max(1.0, cfg.t_end);
    while (t < t1 - 1e-15 * std::max(1.0, t1)) {
        dt = std::min(dt, t1 - t);
        double y5[N], err[N];
        ck_step<N>(f, t, y, dt, y5, err);
        double enorm = 0.0;
        bool finite = true;
        for (int i = 0; i < N; ++i) {
            if (!std::isfinite(y5[i])) finite = false;
            enorm = std::max(enorm, std::fabs(err[i]) / (cfg.atol + cfg.rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]))));
        }
        if (finite && enorm <= 1.0) {
            t += dt;
            for (int i = 0; i < N; ++i) y[i] = y5[i];
            accept(dt);
            const std::string ev = guard.check(y[0], N > 1 ? y[1] : 0.0);
            if (!ev.empty()) {
                *t_event = t;
                return ev;
            }
            dt *= std::clamp(0.9 * std::pow(std::max(enorm, 1e-12), -0.2), 1.0, 5.0);
        } else {
            ++stats.rejected;
            dt *= finite ? std::clamp(0.9 * std::pow(enorm, -0.25), 0.1, 0.9) : 0.1;
            if (dt < dt_min) throw StepFailure("adaptive step collapsed at t = " + std::to_string(t));
        }
    }
    return "";
}

// Shared driver: integrates y (N components, y[0] = k) across the uniform
// output grid, recording samples and stopping on guard events.
template <int N>
Path drive(const Rhs& f, const IntegratorConfig& cfg, double k_bar, double c_init,
           const std::function<double(double, const double*)>& consumption_of, const Guard& guard,
           const char* name) {
    Path path;
    path.meta.integrator = name;
    const int ns = std::max(2, cfg.n_samples);
    double y[N];
    y[0] = k_bar;
    if (N > 1) y[1] = c_init;
    path.times.push_back(0.0);
    path.capital.push_back(y[0]);
    path.consumption.push_back(consumption_of(0.0, y));
    path.meta.termination = "completed";
    for (int s = 1; s < ns; ++s) {
        const double t0 = cfg.t_end * (s - 1) / double(ns - 1);
        const double t1 = cfg.t_end * s / double(ns - 1);
        double t_reached = t1;
        std::string ev;
        try {
            ev = advance<N>(f, cfg, t0, t1, y, path.meta.stats, guard, &t_reached);
        } catch (const StepFailure& e) {
            path.meta.termination = "step_failure";
            path.meta.note = e.what();
            break;
        }
        double c = 0.0;
        try {
            c = consumption_of(ev.empty() ? t1 : t_reached, y);
        } catch (const StepFailure&) {
            c = N > 1 ? y[1] : 0.0;  // state outside the policy's domain at an event
        }
        path.times.push_back(ev.empty() ? t1 : t_reached);
        path.capital.push_back(y[0]);
        path.consumption.push_back(std::max(c, 0.0));
        if (!ev.empty()) {
            path.meta.termination = ev;
            break;
        }
    }
    return path;
}

} // namespace

namespace {

void rethrow_step_failure(const Path& path) {
    if (path.meta.termination == "step_failure")
        throw StepFailure(path.meta.note.empty() ? "integrator step failure" : path.meta.note);
}

} // namespace

Path pure_accumulation_path(const ModelSpec& m, double k_bar, const IntegratorConfig& cfg) {
    if (!(k_bar > 0.0)) throw std::invalid_argument("pure_accumulation_path: k_bar must be positive");
    Guard guard{cfg.k_floor > 0.0 ? cfg.k_floor : 1e-8 * k_bar, 0.0};
    Rhs f = [&m](double, const double* y, double* dy) { dy[0] = m.F(std::max(y[0], 0.0), 0.0); };
    auto path = drive<1>(f, cfg, k_bar, 0.0, [](double, const double*) { return 0.0; }, guard,
                         cfg.method == IntegratorMethod::rk4_fixed ? "rk4_fixed" : "rk45_cash_karp");
    rethrow_step_failure(path);
    if (path.meta.termination == "k_collapsed")
        path.meta.note = "pure accumulation hit the capital floor; under the stated technology "
                         "assumptions this indicates a model or tolerance anomaly";
    return path;
}

Path optimal_path(const ModelSpec& m, const ValueOracle& V, double k_bar, const IntegratorConfig& cfg,
                  double k_range_lo, double k_range_hi) {
    if (!(k_bar > 0.0)) throw std::invalid_argument("optimal_path: k_bar must be positive");
    if (k_range_hi > 0.0 && (k_bar < k_range_lo || k_bar > k_range_hi))
        throw std::invalid_argument("optimal_path: k_bar outside the value function's node range");
    auto consumption = [&](double k) {
        const double p = V.deriv(k);
        if (!(p > 0.0)) throw StepFailure("optimal_path: nonpositive shadow price at k = " + std::to_string(k));
        return maximize_hamiltonian(m, k, p).c_star;
    };
    Guard guard{cfg.k_floor > 0.0 ? cfg.k_floor : 1e-8 * k_bar, 0.0, k_range_lo, k_range_hi};
    Rhs f = [&](double, const double* y, double* dy) {
        const double k = std::max(y[0], 1e-300);
        dy[0] = m.F(k, consumption(k));
    };
    auto path = drive<1>(f, cfg, k_bar, 0.0,
                         [&](double, const double* y) { return consumption(std::max(y[0], 1e-300)); },
                         guard,
                         cfg.method == IntegratorMethod::rk4_fixed ? "rk4_fixed" : "rk45_cash_karp");
    rethrow_step_failure(path);
    return path;
}

Path optimal_path(const ModelSpec& m, const ValueGrid& V, double k_bar, const IntegratorConfig& cfg) {
    return optimal_path(m, V.oracle(), k_bar, cfg, V.k_min(), V.k_max());
}

Path euler_shooting(const ModelSpec& m, double k_bar, double c0, const IntegratorConfig& cfg) {
    if (!m.rck || !m.rck->u_prime || !m.rck->u_second)
        throw FormMismatch("euler_shooting: model must have production form f(k) - d*k - c with "
                           "scalar utility derivatives");
    if (!(k_bar > 0.0 && c0 > 0.0))
        throw std::invalid_argument("euler_shooting: need k_bar > 0 and c0 > 0");
    const RckForm& r = *m.rck;
    const double rho = m.rho, d = r.d;
    Guard guard{cfg.k_floor > 0.0 ? cfg.k_floor : 1e-8 * k_bar,
                cfg.divergence_cap > 0.0 ? cfg.divergence_cap : 1e6 * k_bar};
    Rhs f = [&](double, const double* y, double* dy) {
        const double k = std::max(y[0], 1e-300), c = std::max(y[1], 1e-300);
        dy[0] = r.f(k) - d * k - c;
        dy[1] = (rho + d - r.fprime(k)) * r.u_prime(c) / r.u_second(c);
    };
    auto path = drive<2>(f, cfg, k_bar, c0, [](double, const double* y) { return y[1]; }, guard,
                         cfg.method == IntegratorMethod::rk4_fixed ? "rk4_fixed" : "rk45_cash_karp");
    rethrow_step_failure(path);
    return path;
}

PayoffResult payoff(const ModelSpec& m, const Path& path, Quadrature rule) {
    const size_t n = path.times.size();
    if (n == 0) throw std::invalid_argument("payoff: empty path");
    std::vector<double> g(n);
    for (size_t i = 0; i < n; ++i) {
        const double util = m.u(path.consumption[i], path.capital[i]);
        g[i] = is_neg_inf(util) ? kNegInf : std::exp(-m.rho * path.times[i]) * util;
    }

    double head = 0.0;
    size_t start = 0;
    bool head_infinite = false;
    if (is_neg_inf(g[0])) {
        if (rule == Quadrature::clamped_singular && n >= 3 && std::isfinite(g[1]) && std::isfinite(g[2]) &&
            g[1] < 0.0 && g[2] < 0.0 && path.times[1] > 0.0) {
            // Fit g ~ -A t^(-alpha) to the two samples nearest the endpoint;
            // integrable when alpha < 1.
            const double t1 = path.times[1], t2 = path.times[2];
            const double alpha = std::log(g[1] / g[2]) / std::log(t2 / t1);
            if (alpha < 1.0 && alpha > 0.0) {
                const double A = -g[1] * std::pow(t1, alpha);
                head = -A * std::pow(t1, 1.0 - alpha) / (1.0 - alpha);
                start = 1;
            } else {
                head_infinite = true;  // non-integrable endpoint at sampled resolution
            }
        } else {
            head_infinite = true;
        }
    }

    double pos = 0.0, neg = 0.0;
    for (size_t i = start + 1; i < n; ++i) {
        const double dt = path.times[i] - path.times[i - 1];
        const double a = g[i - 1], b = g[i];
        if (is_neg_inf(a) || is_neg_inf(b)) {
            neg = kNegInf;
            continue;
        }
        const double panel = 0.5 * (a + b) * dt;
        if (panel >= 0.0)
            pos += panel;
        else
            neg += panel;
    }
    if (head_infinite) neg = kNegInf;

    PayoffResult out;
    const double scale = std::max(1.0, std::fabs(pos));
    if (is_neg_inf(neg) || neg < -1e15 * scale) {
        if (pos > 1e15) throw UndefinedPayoff("payoff: positive and negative parts both diverge");
        out.value = kNegInf;
        out.tail_bound = 0.0;
        return out;
    }
    out.value = head + pos + neg;
    const double g_end = std::isfinite(g.back()) ? std::fabs(g.back()) : 0.0;
    out.tail_bound = g_end / m.rho;
    return out;
}

} // namespace hjb
