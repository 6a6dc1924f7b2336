#include "germforge/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace germforge {

Jet2::Jet2(int order, ScalarMode mode) : order_(order), mode_(mode) {
    if (order < 0) throw UsageError("jet order must be nonnegative");
}

Jet2::Jet2(int order, ScalarMode mode, const Terms& terms) : Jet2(order, mode) {
    for (const auto& [e, c] : terms) {
        if (e.i < 0 || e.j < 0) throw UsageError("negative exponent in jet");
        if (e.degree() <= order_) terms_[e] = c.in_mode(mode_);
    }
    canonicalize();
}

Jet2 Jet2::constant(const Scalar& c, int order, ScalarMode mode) { return monomial(0, 0, c, order, mode); }

Jet2 Jet2::variable(Var var, int order, ScalarMode mode) {
    return var == Var::U ? monomial(1, 0, Scalar::one(mode), order, mode) : monomial(0, 1, Scalar::one(mode), order, mode);
}

Jet2 Jet2::monomial(int i, int j, const Scalar& c, int order, ScalarMode mode) {
    return Jet2(order, mode, Terms{{Exponent{i, j}, c}});
}

void Jet2::canonicalize() {
    if (mode_ == ScalarMode::Exact) {
        std::erase_if(terms_, [&](const auto& kv) { return kv.second.is_zero() || kv.first.degree() > order_; });
        return;
    }
    double largest = 1.0;
    for (const auto& [e, c] : terms_) largest = std::max(largest, std::abs(c.to_double()));
    const double cut = kFloatZeroTolerance * largest;
    std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second.to_double()) <= cut || kv.first.degree() > order_; });
}

Scalar Jet2::coeff(int i, int j) const {
    const auto it = terms_.find(Exponent{i, j});
    return it == terms_.end() ? Scalar::zero(mode_) : it->second;
}

int Jet2::valuation() const {
    int v = -1;
    for (const auto& [e, c] : terms_)
        if (v < 0 || e.degree() < v) v = e.degree();
    return v;
}

Jet2 Jet2::with_order(int order) const { return Jet2(order, mode_, terms_); }

Jet2 Jet2::in_mode(ScalarMode mode) const { return Jet2(order_, mode, terms_); }

Jet2 Jet2::homogeneous_part(int d) const {
    Terms part;
    for (const auto& [e, c] : terms_)
        if (e.degree() == d) part.emplace(e, c);
    return Jet2(order_, mode_, part);
}

double Jet2::evaluate(double u, double v) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) sum += c.to_double() * std::pow(u, e.i) * std::pow(v, e.j);
    return sum;
}

Jet2 Jet2::operator-() const {
    Jet2 out(order_, mode_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

Jet2 Jet2::scaled(const Scalar& c) const {
    const ScalarMode mode = (mode_ == ScalarMode::Exact && c.is_exact()) ? ScalarMode::Exact : ScalarMode::Float;
    Jet2 out(order_, mode);
    for (const auto& [e, a] : terms_) out.terms_.emplace(e, (a * c).in_mode(mode));
    out.canonicalize();
    return out;
}

bool operator==(const Jet2& a, const Jet2& b) {
    return a.order_ == b.order_ && a.mode_ == b.mode_ && a.terms_ == b.terms_;
}

std::string Jet2::to_string(const std::string& u_name, const std::string& v_name) const {
    if (terms_.empty()) return mode_ == ScalarMode::Exact ? "0" : "0.0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool negative = c.sign() < 0;
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        const Scalar mag = c.abs();
        const bool unit = mode_ == ScalarMode::Exact && mag == Scalar(1);
        std::vector<std::string> factors;
        if (!unit || e.degree() == 0) factors.push_back(mag.to_string());
        auto push_power = [&](const std::string& name, int p) {
            if (p == 1) factors.push_back(name);
            if (p > 1) factors.push_back(name + "^" + std::to_string(p));
        };
        push_power(u_name, e.i);
        push_power(v_name, e.j);
        for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
    }
    return os.str();
}

namespace {

void require_compatible(const Jet2& a, const Jet2& b) {
    if (a.order() != b.order()) throw UsageError("jet order mismatch");
    if (a.mode() != b.mode()) throw UsageError("jet scalar mode mismatch");
}

}  // namespace

Jet2 add(const Jet2& a, const Jet2& b) {
    require_compatible(a, b);
    Jet2::Terms sum = a.terms();
    for (const auto& [e, c] : b.terms()) {
        auto [it, inserted] = sum.emplace(e, c);
        if (!inserted) it->second += c;
    }
    return Jet2(a.order(), a.mode(), sum);
}

Jet2 subtract(const Jet2& a, const Jet2& b) { return add(a, -b); }

Jet2 mul(const Jet2& a, const Jet2& b) {
    require_compatible(a, b);
    Jet2::Terms prod;
    const int order = a.order();
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            if (ea.degree() + eb.degree() > order) continue;
            const Exponent e{ea.i + eb.i, ea.j + eb.j};
            auto [it, inserted] = prod.emplace(e, ca * cb);
            if (!inserted) it->second += ca * cb;
        }
    }
    return Jet2(order, a.mode(), prod);
}

Jet2 power(const Jet2& a, int exponent) {
    if (exponent < 0) throw UsageError("negative jet power");
    Jet2 result = Jet2::constant(Scalar::one(a.mode()), a.order(), a.mode());
    for (int k = 0; k < exponent; ++k) result = mul(result, a);
    return result;
}

Jet2 substitute(const Jet2& p, const Jet2& u_new, const Jet2& v_new) {
    if (!u_new.constant_term().is_zero() || !v_new.constant_term().is_zero())
        throw UsageError("substitution requires replacements without constant term");
    const bool all_exact = p.mode() == ScalarMode::Exact && u_new.mode() == ScalarMode::Exact && v_new.mode() == ScalarMode::Exact;
    const ScalarMode mode = all_exact ? ScalarMode::Exact : ScalarMode::Float;
    const int order = p.order();
    const Jet2 U = u_new.with_order(order).in_mode(mode);
    const Jet2 V = v_new.with_order(order).in_mode(mode);

    // Horner in V: p = sum_j V^j * q_j(U), with q_j assembled from cached powers of U.
    std::vector<Jet2> u_pow{Jet2::constant(Scalar::one(mode), order, mode)};
    for (int k = 1; k <= order; ++k) u_pow.push_back(mul(u_pow.back(), U));

    int max_j = 0;
    for (const auto& [e, c] : p.terms()) max_j = std::max(max_j, e.j);
    std::vector<Jet2::Terms> q(static_cast<std::size_t>(max_j) + 1);
    for (const auto& [e, c] : p.terms()) {
        for (const auto& [eu, cu] : u_pow[static_cast<std::size_t>(e.i)].terms()) {
            auto [it, inserted] = q[static_cast<std::size_t>(e.j)].emplace(eu, c.in_mode(mode) * cu);
            if (!inserted) it->second += c.in_mode(mode) * cu;
        }
    }
    Jet2 acc(order, mode);
    for (int j = max_j; j >= 0; --j) {
        acc = add(mul(acc, V), Jet2(order, mode, q[static_cast<std::size_t>(j)]));
    }
    return acc;
}

Jet2 invert_series_1d(const Jet2& s) {
    bool uses_u = false, uses_v = false;
    for (const auto& [e, c] : s.terms()) {
        if (e.i > 0 && e.j > 0) throw UsageError("invert_series_1d needs a one-variable series");
        uses_u |= e.i > 0;
        uses_v |= e.j > 0;
    }
    if (uses_u && uses_v) throw UsageError("invert_series_1d needs a one-variable series");
    if (!s.constant_term().is_zero()) throw UsageError("invert_series_1d needs a series vanishing at 0");
    const Var var = uses_v ? Var::V : Var::U;
    const Scalar lead = var == Var::U ? s.coeff(1, 0) : s.coeff(0, 1);
    if (lead.is_zero()) throw UsageError("invert_series_1d: vanishing linear coefficient (singular series)");

    const int order = s.order();
    const ScalarMode mode = s.mode();
    const Jet2 t = Jet2::variable(var, order, mode);
    const Jet2 higher = subtract(s, t.scaled(lead));
    const Scalar inv_lead = Scalar::one(mode) / lead;
    // w = (t - higher(w)) / lead, one more correct degree per pass
    Jet2 w = t.scaled(inv_lead);
    for (int pass = 1; pass < order; ++pass) {
        const Jet2 h = var == Var::U ? substitute(higher, w, Jet2(order, mode)) : substitute(higher, Jet2(order, mode), w);
        w = subtract(t, h).scaled(inv_lead);
    }
    return w;
}

Jet2 partial_derivative(const Jet2& p, Var var) {
    const int order = std::max(0, p.order() - 1);
    Jet2::Terms d;
    for (const auto& [e, c] : p.terms()) {
        if (var == Var::U && e.i > 0) d.emplace(Exponent{e.i - 1, e.j}, c * Scalar(e.i));
        if (var == Var::V && e.j > 0) d.emplace(Exponent{e.i, e.j - 1}, c * Scalar(e.j));
    }
    return Jet2(order, p.mode(), d);
}

GermJets::GermJets(Jet2 x_, Jet2 y_, Jet2 z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {
    if (x.order() != y.order() || x.order() != z.order()) throw UsageError("germ components must share one order");
    if (x.mode() != y.mode() || x.mode() != z.mode()) throw UsageError("germ components must share one scalar mode");
    if (!x.constant_term().is_zero() || !y.constant_term().is_zero() || !z.constant_term().is_zero())
        throw UsageError("germ components must vanish at the origin");
}

const Jet2& GermJets::component(int k) const {
    switch (k) {
        case 0: return x;
        case 1: return y;
        case 2: return z;
        default: throw UsageError("germ component index out of range");
    }
}

GermJets GermJets::with_order(int order) const { return {x.with_order(order), y.with_order(order), z.with_order(order)}; }

GermJets GermJets::in_mode(ScalarMode mode) const { return {x.in_mode(mode), y.in_mode(mode), z.in_mode(mode)}; }

}  // namespace germforge
