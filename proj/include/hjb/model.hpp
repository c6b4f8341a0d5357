#ifndef HJB_MODEL_HPP
#define HJB_MODEL_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hjb {

/// A real-valued field on the nonnegative quadrant. eval may return -inf on
/// the boundary (extended real); it must be finite on the strictly positive
/// quadrant. Analytic first partials are optional; when absent, callers fall
/// back to finite differences.
struct ScalarField2 {
    std::function<double(double, double)> eval;
    std::function<double(double, double)> d_dx;  // optional
    std::function<double(double, double)> d_dy;  // optional
    std::string label;

    bool has_analytic_partials() const { return static_cast<bool>(d_dx) && static_cast<bool>(d_dy); }

    /// Analytic partial when available, central finite difference otherwise.
    double dx(double x, double y) const;
    double dy(double x, double y) const;
};

/// Scalar production-side form F(k,c) = f(k) - d*k - c with scalar utility
/// u(c). Carried alongside the general oracles so that Euler-system
/// diagnostics and shooting can access f, f', u', u''.
struct RckForm {
    std::function<double(double)> f;
    std::function<double(double)> f_prime;   // optional
    double d = 0.0;
    std::function<double(double)> u_prime;   // optional
    std::function<double(double)> u_second;  // optional

    double fprime(double k) const;
};

/// Model primitives: discount rate rho, utility u(c,k), technology F(k,c),
/// plus the computational bounds the numerical layers operate on.
///
/// utility.eval takes (c, k); technology.eval takes (k, c).
/// d1, d2 are the linear lower-bound coefficients F(k,c) > -d1*k - d2*c.
struct ModelSpec {
    double rho = 0.0;
    ScalarField2 utility;
    ScalarField2 technology;
    double k_lo = 0.0, k_hi = 0.0;
    double c_cap = 0.0;
    double d1 = 0.0, d2 = 0.0;
    std::optional<RckForm> rck;
    std::string name;

    double u(double c, double k) const { return utility.eval(c, k); }
    double F(double k, double c) const { return technology.eval(k, c); }
    double du_dc(double c, double k) const { return utility.dx(c, k); }
    double du_dk(double c, double k) const { return utility.dy(c, k); }
    double dF_dk(double k, double c) const { return technology.dx(k, c); }
    double dF_dc(double k, double c) const { return technology.dy(k, c); }
};

/// Returns a copy with the computational window replaced. c_cap <= 0 picks
/// the default (consumption cap bracketing the Hamiltonian maximizer).
ModelSpec with_domain(ModelSpec m, double k_lo, double k_hi, double c_cap = 0.0);

/// Smallest c with F(k_hi, c) comfortably below -|F(k_hi, 0)|, so the
/// maximizer bracket (0, c_cap] always contains the interior optimum.
double default_c_cap(const ModelSpec& m);

/// Parameters of the linear-majorant value bound: a supporting plane
/// (gamma, -delta) of F at (k_star, c_star), a CRRA envelope
/// u(c,k) <= a*u_theta(c) + b*u_theta(k) + cc, and an auxiliary k_plus
/// with 0 < D_{k,+}F(k_plus, 0) <= gamma.
struct Assumption6Params {
    double k_star = 0.0;
    double k_plus = 0.0;
    double c_star = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double theta = 0.0;
    double a = 0.0;
    double b = 0.0;
    double cc = 0.0;
};

enum class CheckStatus { pass, fail, unknown };

const char* to_string(CheckStatus s);

struct Witness {
    double x = 0.0, y = 0.0;       // sample point (meaning depends on the check)
    std::string inequality;        // the violated/examined condition, human-readable
};

struct AssumptionVerdict {
    int id = 0;                    // 1..7
    CheckStatus status = CheckStatus::unknown;
    std::optional<Witness> witness;
    std::string evidence;
};

struct AssumptionReport {
    std::vector<AssumptionVerdict> verdicts;
    int sample_count = 0;

    const AssumptionVerdict& verdict(int id) const;
    bool all_pass(int first_id, int last_id) const;  // pass only, unknown excluded
    bool none_fail(int first_id, int last_id) const;
    int fail_count() const;
};

struct SampleGrid {
    int n_k = 24;
    int n_c = 24;
};

/// CRRA utility: (x^(1-theta) - 1)/(1-theta), log x at theta = 1. The branch
/// switches at |theta-1| < 1e-12; elsewhere expm1 keeps the formula stable
/// through theta -> 1. x = 0 returns the limit -1/(1-theta) for theta < 1 and
/// -inf for theta >= 1; negative x is a domain error.
double crra_eval(double theta, double x);

/// d/dx of crra_eval: x^(-theta).
double crra_deriv(double theta, double x);

// Builtin families ----------------------------------------------------------

/// u = log c, F = gamma*k - c. Requires gamma > rho > 0.
ModelSpec make_log_ak(double gamma, double rho);

/// u = CRRA(theta), F = gamma*k - c. Requires rho - (1-theta)*gamma > 0.
ModelSpec make_ak_crra(double gamma, double theta, double rho);

/// F(k,c) = f(k) - d*k - c with utility supplied by the caller.
ModelSpec make_rck(std::function<double(double)> f, std::function<double(double)> f_prime,
                   double d, ScalarField2 u, double rho);

/// f(k) = k^alpha with CRRA(theta) utility (theta = 1 gives log).
ModelSpec make_rck_cobb_douglas(double alpha, double d, double theta, double rho);

/// u(c,k) = c, F(k,c) = k - c. Violates the marginal-utility decay
/// requirement by construction; used by the non-uniqueness demos.
ModelSpec make_linear_counterexample(double rho);

/// rho = 1, F = sqrt(k) - c, u = -1/sqrt(c): production from zero capital.
ModelSpec make_sqrt_magic();

/// Sampled verification of the model assumptions. Limit conditions (marginal
/// utility divergence/decay) are classified from trend evidence across
/// decades of c and never promoted past "unknown" unless they actively fail.
/// Existential conditions report unknown when no sampled point exhibits them.
AssumptionReport check_assumptions(const ModelSpec& m, const SampleGrid& grid,
                                   const std::optional<Assumption6Params>& a6 = std::nullopt);

} // namespace hjb

#endif
