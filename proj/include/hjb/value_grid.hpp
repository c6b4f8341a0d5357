#ifndef HJB_VALUE_GRID_HPP
#define HJB_VALUE_GRID_HPP

#include <functional>
#include <string>
#include <vector>

namespace hjb {

/// Value-and-derivative callable over positive capital. ValueGrid adapts to
/// this; closed-form candidates construct it directly.
struct ValueOracle {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::string label;
};

/// Tabulated value function on a strictly increasing positive capital grid.
///
/// Between nodes the value is a monotone (Fritsch-Carlson) cubic Hermite
/// interpolant, differentiated analytically, so a concave monotone table
/// yields a monotone derivative without spurious policy oscillation. Beyond
/// the grid the derivative is extended as a power law fitted to the upper
/// nodes (exact for both linear and logarithmic tails), which the growth
/// check needs because pure accumulation paths leave any finite grid.
class ValueGrid {
public:
    ValueGrid() = default;
    ValueGrid(std::vector<double> nodes, std::vector<double> values);

    static ValueGrid log_spaced(double k_lo, double k_hi, int n);
    /// Inserts geometric midpoints between existing nodes (shared-node
    /// refinement for convergence studies).
    ValueGrid refined() const;

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    void set_values(std::vector<double> v);

    double k_min() const { return nodes_.front(); }
    double k_max() const { return nodes_.back(); }
    size_t size() const { return nodes_.size(); }

    double value(double k) const;
    double deriv(double k) const;

    /// Finite-difference slope at node i (central on the interior, one-sided
    /// at the ends).
    double node_slope(size_t i) const;

    ValueOracle oracle() const;

    bool nondecreasing() const;
    /// Largest positive jump of consecutive secant slopes; <= tol means the
    /// table is concave to within tol.
    double max_convexity_defect() const;

private:
    void build_slopes();
    void build_tail();
    size_t locate(double k) const;

    std::vector<double> nodes_, values_, slopes_;
    // derivative tail model: V'(k) ~ edge_slope * (k / edge_k)^(-q)
    double tail_q_hi_ = 0.0, tail_q_lo_ = 0.0;
};

} // namespace hjb

#endif
