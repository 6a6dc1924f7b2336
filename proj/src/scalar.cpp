#include "germforge/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace germforge {

std::string to_string(ScalarMode mode) { return mode == ScalarMode::Exact ? "exact" : "float"; }

ScalarMode scalar_mode_from_string(const std::string& text) {
    if (text == "exact") return ScalarMode::Exact;
    if (text == "float") return ScalarMode::Float;
    throw UsageError("unknown scalar mode '" + text + "' (expected exact|float)");
}

Scalar::Scalar(mpq_class q) : value_(std::move(q)) { std::get<mpq_class>(value_).canonicalize(); }

Scalar::Scalar(double d) : value_(d) {
    if (!std::isfinite(d)) throw UsageError("non-finite float coefficient");
}

Scalar Scalar::rational(long num, long den) {
    if (den == 0) throw UsageError("zero denominator");
    return Scalar(mpq_class(num, den));
}

Scalar Scalar::zero(ScalarMode mode) { return mode == ScalarMode::Exact ? Scalar(0) : Scalar(0.0); }
Scalar Scalar::one(ScalarMode mode) { return mode == ScalarMode::Exact ? Scalar(1) : Scalar(1.0); }

const mpq_class& Scalar::exact() const {
    if (const auto* q = std::get_if<mpq_class>(&value_)) return *q;
    throw UsageError("exact value requested from a float scalar");
}

double Scalar::to_double() const {
    if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
    return std::get<double>(value_);
}

Scalar Scalar::in_mode(ScalarMode mode) const {
    if (mode == this->mode()) return *this;
    if (mode == ScalarMode::Float) return Scalar(to_double());
    mpq_class q(std::get<double>(value_));
    return Scalar(q);
}

bool Scalar::is_zero() const {
    if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q) == 0;
    return std::get<double>(value_) == 0.0;
}

int Scalar::sign() const {
    if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
    const double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

bool rational_sqrt(const mpq_class& q, mpq_class& root) {
    if (sgn(q) < 0) return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    root = mpq_class(n, d);
    root.canonicalize();
    return true;
}

Scalar Scalar::sqrt() const {
    if (sign() < 0) throw UsageError("square root of a negative scalar");
    if (const auto* q = std::get_if<mpq_class>(&value_)) {
        mpq_class root;
        if (rational_sqrt(*q, root)) return Scalar(root);
        return Scalar(std::sqrt(q->get_d()));
    }
    return Scalar(std::sqrt(std::get<double>(value_)));
}

Scalar Scalar::operator-() const {
    if (const auto* q = std::get_if<mpq_class>(&value_)) return Scalar(mpq_class(-*q));
    return Scalar(-std::get<double>(value_));
}

namespace {

template <class ExactOp, class FloatOp>
void combine(std::variant<mpq_class, double>& lhs, const Scalar& rhs, ExactOp exact_op, FloatOp float_op) {
    if (auto* q = std::get_if<mpq_class>(&lhs); q && rhs.is_exact()) {
        exact_op(*q, rhs.exact());
        return;
    }
    const double a = std::holds_alternative<mpq_class>(lhs) ? std::get<mpq_class>(lhs).get_d() : std::get<double>(lhs);
    const double r = float_op(a, rhs.to_double());
    if (!std::isfinite(r)) throw UsageError("float arithmetic produced a non-finite value");
    lhs = r;
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
    combine(value_, o, [](mpq_class& a, const mpq_class& b) { a += b; }, [](double a, double b) { return a + b; });
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    combine(value_, o, [](mpq_class& a, const mpq_class& b) { a -= b; }, [](double a, double b) { return a - b; });
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    combine(value_, o, [](mpq_class& a, const mpq_class& b) { a *= b; }, [](double a, double b) { return a * b; });
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) throw UsageError("division by zero scalar");
    combine(value_, o, [](mpq_class& a, const mpq_class& b) { a /= b; }, [](double a, double b) { return a / b; });
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
    return a.to_double() == b.to_double();
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
        const int c = cmp(a.exact(), b.exact());
        return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
    }
    return a.to_double() <=> b.to_double();
}

std::string Scalar::to_string() const {
    if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
    std::string s(buf);
    // keep floats recognisable as floats on re-parse
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

Scalar Scalar::parse(const std::string& text) {
    if (text.empty()) throw UsageError("empty numeric string");
    if (text.find_first_of(".eE") != std::string::npos || text == "inf" || text == "nan") {
        char* end = nullptr;
        const double d = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) throw UsageError("malformed float '" + text + "'");
        return Scalar(d);
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw UsageError("malformed rational '" + text + "'");
    if (q.get_den() == 0) throw UsageError("zero denominator in '" + text + "'");
    return Scalar(q);
}

mpq_class factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return mpq_class(f);
}

}  // namespace germforge
