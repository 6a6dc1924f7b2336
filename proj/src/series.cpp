#include "germforge/series.hpp"

#include "germforge/scalar.hpp"

#include <algorithm>
#include <cmath>

namespace germforge {

Series Series::constant(double value, int depth) {
    std::vector<double> c(static_cast<std::size_t>(depth + 1), 0.0);
    c[0] = value;
    return Series(std::move(c));
}

Series Series::truncated(int depth) const {
    std::vector<double> c(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), static_cast<std::size_t>(depth + 1)));
    c.resize(static_cast<std::size_t>(depth + 1), 0.0);
    return Series(std::move(c));
}

Series Series::shifted_up(int k) const {
    std::vector<double> c(c_.size(), 0.0);
    for (std::size_t i = 0; i + k < c_.size(); ++i) c[i + k] = c_[i];
    return Series(std::move(c));
}

Series Series::shifted_down(int k) const {
    if (k >= static_cast<int>(c_.size())) return Series();
    return Series(std::vector<double>(c_.begin() + k, c_.end()));
}

double Series::evaluate(double r) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + *it;
    return acc;
}

Series Series::operator-() const {
    Series out = *this;
    for (double& x : out.c_) x = -x;
    return out;
}

Series& Series::operator+=(const Series& o) {
    c_.resize(std::min(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Series& Series::operator-=(const Series& o) {
    c_.resize(std::min(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Series(std::move(c));
}

Series operator*(double s, const Series& a) {
    Series out = a;
    for (double& x : out.c_) x *= s;
    return out;
}

Series operator/(const Series& a, const Series& b) { return a * reciprocal(b); }

Series reciprocal(const Series& a) {
    if (a.depth() < 0 || a[0] == 0.0) throw UsageError("reciprocal of a series with zero constant term");
    std::vector<double> c(a.coeffs().size(), 0.0);
    c[0] = 1.0 / a[0];
    for (std::size_t k = 1; k < c.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 1; i <= k; ++i) acc += a[static_cast<int>(i)] * c[k - i];
        c[k] = -acc / a[0];
    }
    return Series(std::move(c));
}

Series sqrt(const Series& a) {
    if (a.depth() < 0 || !(a[0] > 0.0)) throw UsageError("square root of a series with nonpositive constant term");
    std::vector<double> c(a.coeffs().size(), 0.0);
    c[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k < c.size(); ++k) {
        double acc = a[static_cast<int>(k)];
        for (std::size_t i = 1; i < k; ++i) acc -= c[i] * c[k - i];
        c[k] = acc / (2.0 * c[0]);
    }
    return Series(std::move(c));
}

}  // namespace germforge
