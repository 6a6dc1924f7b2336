#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <variant>

namespace germforge {

enum class ScalarMode { Exact, Float };

std::string to_string(ScalarMode mode);
ScalarMode scalar_mode_from_string(const std::string& text);

/// Thrown on contract violations by callers (mismatched orders, bad arguments).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an internal cross-check between two independent routes fails.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A coefficient that is either an exact rational or a finite double.
/// Mixed arithmetic degrades to double.
class Scalar {
public:
    Scalar() : value_(mpq_class(0)) {}
    Scalar(int n) : value_(mpq_class(n)) {}  // NOLINT: literal convenience
    Scalar(long n) : value_(mpq_class(n)) {}  // NOLINT
    explicit Scalar(mpq_class q);
    explicit Scalar(double d);

    static Scalar rational(long num, long den);
    static Scalar zero(ScalarMode mode);
    static Scalar one(ScalarMode mode);

    ScalarMode mode() const { return std::holds_alternative<mpq_class>(value_) ? ScalarMode::Exact : ScalarMode::Float; }
    bool is_exact() const { return mode() == ScalarMode::Exact; }

    const mpq_class& exact() const;
    double to_double() const;
    Scalar in_mode(ScalarMode mode) const;

    bool is_zero() const;
    int sign() const;
    Scalar abs() const;

    /// Square root; exact when the argument is the square of a rational.
    Scalar sqrt() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    /// Exact comparison when both sides are exact, otherwise compares doubles.
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

    /// "p/q" (or "p") for exact values, 17 significant digits for floats.
    std::string to_string() const;
    /// Inverse of to_string; a '.' or exponent marks a float.
    static Scalar parse(const std::string& text);

private:
    std::variant<mpq_class, double> value_;
};

/// True iff mpq is a square of a rational; stores the root in `root`.
bool rational_sqrt(const mpq_class& q, mpq_class& root);

mpq_class factorial(int n);

}  // namespace germforge
