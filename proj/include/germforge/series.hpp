#pragma once

#include <vector>

namespace germforge {

/// Truncated power series in one variable r with double coefficients.
/// Index k holds the coefficient of r^k; every operation truncates to the shorter operand.
class Series {
public:
    Series() = default;
    explicit Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {}
    static Series constant(double value, int depth);
    static Series zero(int depth) { return constant(0.0, depth); }

    /// Highest power carried, -1 for the empty series.
    int depth() const { return static_cast<int>(c_.size()) - 1; }
    /// Coefficient of r^k; zero beyond the depth.
    double operator[](int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : 0.0; }
    double& at(int k) { return c_.at(k); }
    const std::vector<double>& coeffs() const { return c_; }

    Series truncated(int depth) const;
    /// Multiplies by r^k; the depth is kept, so the top k coefficients fall off.
    Series shifted_up(int k) const;
    /// Divides by r^k; the first k coefficients are discarded and the depth drops by k.
    Series shifted_down(int k) const;
    double evaluate(double r) const;

    Series operator-() const;
    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator*(double s, const Series& a);
    friend Series operator/(const Series& a, const Series& b);

private:
    std::vector<double> c_;
};

/// 1/a; requires a[0] != 0.
Series reciprocal(const Series& a);
/// Principal square root; requires a[0] > 0.
Series sqrt(const Series& a);

}  // namespace germforge
