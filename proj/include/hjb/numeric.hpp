#ifndef HJB_NUMERIC_HPP
#define HJB_NUMERIC_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace hjb {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double x) { return std::isinf(x) && x < 0; }

/// Bisection root finder on [lo, hi]. Requires f(lo) and f(hi) of opposite
/// sign (zero endpoints are accepted as roots).
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol = 1e-14, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0))
        throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
    for (int i = 0; i < max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0 || (hi - lo) < x_tol * (1.0 + std::fabs(mid))) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

/// Central finite difference with a relative step suited to positive domains.
inline double central_diff(const std::function<double(double)>& f, double x) {
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(std::fabs(x), 1e-12);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace hjb

#endif
