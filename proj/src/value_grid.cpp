#include "hjb/value_grid.hpp"
#include "hjb/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjb {

ValueGrid::ValueGrid(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() < 2) throw std::invalid_argument("ValueGrid: need at least 2 nodes");
    if (nodes_.front() <= 0.0) throw std::invalid_argument("ValueGrid: nodes must be positive");
    for (size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i] < nodes_[i + 1]))
            throw std::invalid_argument("ValueGrid: nodes must be strictly increasing");
    if (values_.empty()) values_.assign(nodes_.size(), 0.0);
    if (values_.size() != nodes_.size())
        throw std::invalid_argument("ValueGrid: nodes/values size mismatch");
    build_slopes();
    build_tail();
}

ValueGrid ValueGrid::log_spaced(double k_lo, double k_hi, int n) {
    if (!(0.0 < k_lo && k_lo < k_hi) || n < 2)
        throw std::invalid_argument("ValueGrid::log_spaced: bad range");
    std::vector<double> nodes(n);
    const double a = std::log(k_lo), b = std::log(k_hi);
    for (int i = 0; i < n; ++i) nodes[i] = std::exp(a + (b - a) * i / double(n - 1));
    nodes.front() = k_lo;
    nodes.back() = k_hi;
    return ValueGrid(std::move(nodes), {});
}

ValueGrid ValueGrid::refined() const {
    std::vector<double> nodes;
    nodes.reserve(2 * nodes_.size());
    for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
        nodes.push_back(nodes_[i]);
        nodes.push_back(std::sqrt(nodes_[i] * nodes_[i + 1]));
    }
    nodes.push_back(nodes_.back());
    return ValueGrid(std::move(nodes), {});
}

void ValueGrid::set_values(std::vector<double> v) {
    if (v.size() != nodes_.size())
        throw std::invalid_argument("ValueGrid::set_values: size mismatch");
    values_ = std::move(v);
    build_slopes();
    build_tail();
}

double ValueGrid::node_slope(size_t i) const {
    const size_t n = nodes_.size();
    if (i >= n) throw std::out_of_range("node_slope");
    if (i == 0) return (values_[1] - values_[0]) / (nodes_[1] - nodes_[0]);
    if (i == n - 1) return (values_[n - 1] - values_[n - 2]) / (nodes_[n - 1] - nodes_[n - 2]);
    return (values_[i + 1] - values_[i - 1]) / (nodes_[i + 1] - nodes_[i - 1]);
}

// Fritsch-Carlson slopes: weighted harmonic mean of adjacent secants where
// they agree in sign, zero at local extrema. Keeps the interpolant monotone
// on monotone data.
void ValueGrid::build_slopes() {
    const size_t n = nodes_.size();
    slopes_.assign(n, 0.0);
    std::vector<double> h(n - 1), d(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = nodes_[i + 1] - nodes_[i];
        d[i] = (values_[i + 1] - values_[i]) / h[i];
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slopes_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    // one-sided endpoint slopes with the usual monotonicity clamp
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (d0 * d1 <= 0.0 && std::fabs(s) > 3.0 * std::fabs(d0))
            s = 3.0 * d0;
        return s;
    };
    if (n == 2) {
        slopes_[0] = slopes_[1] = d[0];
    } else {
        slopes_[0] = end_slope(h[0], h[1], d[0], d[1]);
        slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }
}

// Fit V'(k) ~ s_edge * (k/k_edge)^(-q) from the outer nodes; q is clamped to
// [0, 12] so the extension never turns convex. q = 0 reproduces a linear
// tail, q = 1 a logarithmic one.
void ValueGrid::build_tail() {
    const size_t n = nodes_.size();
    auto fit_q = [&](size_t i_near, size_t i_far) {
        const double s_near = node_slope(i_near), s_far = node_slope(i_far);
        if (!(s_near > 0.0 && s_far > 0.0)) return 0.0;
        const double q = -std::log(s_near / s_far) / std::log(nodes_[i_near] / nodes_[i_far]);
        if (!std::isfinite(q)) return 0.0;
        return std::clamp(q, 0.0, 12.0);
    };
    const size_t off = std::min<size_t>(n >= 16 ? 4 : 1, n - 2);
    tail_q_hi_ = fit_q(n - 1 - off, n - 1 - off - std::min<size_t>(4, n - 2 - off));
    tail_q_lo_ = fit_q(off, off + std::min<size_t>(4, n - 1 - off));
}

size_t ValueGrid::locate(double k) const {
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), k);
    size_t i = size_t(std::distance(nodes_.begin(), it));
    if (i == 0) return 0;
    if (i >= nodes_.size()) return nodes_.size() - 2;
    return i - 1;
}

namespace {

// integral of s_e * (k/k_e)^(-q) from k_e to k
double tail_integral(double s_e, double k_e, double q, double k) {
    if (std::fabs(q - 1.0) < 1e-9) return s_e * k_e * std::log(k / k_e);
    return s_e * k_e / (1.0 - q) * (std::pow(k / k_e, 1.0 - q) - 1.0);
}

} // namespace

double ValueGrid::value(double k) const {
    if (k > nodes_.back()) {
        const double s = node_slope(nodes_.size() - 1);
        return values_.back() + tail_integral(s, nodes_.back(), tail_q_hi_, k);
    }
    if (k < nodes_.front()) {
        const double s = node_slope(0);
        return values_.front() + tail_integral(s, nodes_.front(), tail_q_lo_, k);
    }
    const size_t i = locate(k);
    const double h = nodes_[i + 1] - nodes_[i];
    const double t = (k - nodes_[i]) / h;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
}

double ValueGrid::deriv(double k) const {
    if (k > nodes_.back()) {
        const double s = node_slope(nodes_.size() - 1);
        return s * std::pow(k / nodes_.back(), -tail_q_hi_);
    }
    if (k < nodes_.front()) {
        const double s = node_slope(0);
        return s * std::pow(k / nodes_.front(), -tail_q_lo_);
    }
    const size_t i = locate(k);
    const double h = nodes_[i + 1] - nodes_[i];
    const double t = (k - nodes_[i]) / h;
    const double g00 = 6.0 * t * (t - 1.0);
    const double g10 = (1.0 - t) * (1.0 - 3.0 * t);
    const double g01 = -g00;
    const double g11 = t * (3.0 * t - 2.0);
    return (g00 * values_[i] + g01 * values_[i + 1]) / h + g10 * slopes_[i] + g11 * slopes_[i + 1];
}

ValueOracle ValueGrid::oracle() const {
    return ValueOracle{[g = *this](double k) { return g.value(k); },
                       [g = *this](double k) { return g.deriv(k); }, "value-grid"};
}

bool ValueGrid::nondecreasing() const {
    for (size_t i = 0; i + 1 < values_.size(); ++i)
        if (values_[i + 1] < values_[i]) return false;
    return true;
}

double ValueGrid::max_convexity_defect() const {
    double worst = 0.0;
    for (size_t i = 1; i + 1 < nodes_.size(); ++i) {
        const double dl = (values_[i] - values_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
        const double dr = (values_[i + 1] - values_[i]) / (nodes_[i + 1] - nodes_[i]);
        worst = std::max(worst, dr - dl);
    }
    return worst;
}

} // namespace hjb
