#pragma once

#include "germforge/scalar.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace germforge {

/// Exponent pair of the monomial u^i v^j.
struct Exponent {
    int i = 0;
    int j = 0;
    int degree() const { return i + j; }
    auto operator<=>(const Exponent&) const = default;
};

enum class Var { U, V };

/// Relative cut below which float coefficients are dropped.
inline constexpr double kFloatZeroTolerance = 1e-9;

/// Truncated power series in (u, v). Terms of total degree above `order` are absent,
/// zero coefficients are never stored, and every coefficient shares one scalar mode.
class Jet2 {
public:
    using Terms = std::map<Exponent, Scalar>;

    Jet2() = default;
    Jet2(int order, ScalarMode mode);
    Jet2(int order, ScalarMode mode, const Terms& terms);

    static Jet2 constant(const Scalar& c, int order, ScalarMode mode);
    static Jet2 variable(Var var, int order, ScalarMode mode);
    static Jet2 monomial(int i, int j, const Scalar& c, int order, ScalarMode mode);

    int order() const { return order_; }
    ScalarMode mode() const { return mode_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Scalar coeff(int i, int j) const;
    Scalar constant_term() const { return coeff(0, 0); }
    /// Lowest total degree carrying a term; -1 for the zero jet.
    int valuation() const;

    /// Same terms re-truncated (or extended) to `order`.
    Jet2 with_order(int order) const;
    Jet2 in_mode(ScalarMode mode) const;
    /// Terms of exactly total degree d.
    Jet2 homogeneous_part(int d) const;

    double evaluate(double u, double v) const;

    Jet2 operator-() const;
    Jet2 scaled(const Scalar& c) const;

    friend bool operator==(const Jet2& a, const Jet2& b);

    std::string to_string(const std::string& u_name = "u", const std::string& v_name = "v") const;

private:
    void canonicalize();

    int order_ = 0;
    ScalarMode mode_ = ScalarMode::Exact;
    Terms terms_;
};

Jet2 add(const Jet2& a, const Jet2& b);
Jet2 subtract(const Jet2& a, const Jet2& b);
Jet2 mul(const Jet2& a, const Jet2& b);
Jet2 power(const Jet2& a, int exponent);

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return add(a, b); }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return subtract(a, b); }
inline Jet2 operator*(const Jet2& a, const Jet2& b) { return mul(a, b); }

/// p(u_new, v_new) truncated at p's order. Both replacements must vanish at the origin.
Jet2 substitute(const Jet2& p, const Jet2& u_new, const Jet2& v_new);

/// Compositional inverse of a one-variable series s = c t + ..., c != 0.
Jet2 invert_series_1d(const Jet2& s);

/// Formal partial derivative; the order drops by one (floored at zero).
Jet2 partial_derivative(const Jet2& p, Var var);

/// A map-germ (R^2,0) -> (R^3,0): three jets of a common order and mode, each vanishing at 0.
struct GermJets {
    Jet2 x, y, z;

    GermJets() = default;
    GermJets(Jet2 x_, Jet2 y_, Jet2 z_);

    int order() const { return x.order(); }
    ScalarMode mode() const { return x.mode(); }
    const Jet2& component(int k) const;
    GermJets with_order(int order) const;
    GermJets in_mode(ScalarMode mode) const;

    friend bool operator==(const GermJets&, const GermJets&) = default;
};

}  // namespace germforge
