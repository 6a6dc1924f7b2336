#include "germforge/mond.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace germforge {

std::string to_string(MondTag tag) {
    switch (tag) {
        case MondTag::Immersion: return "Immersion";
        case MondTag::CrossCapS0: return "CrossCapS0";
        case MondTag::S: return "S";
        case MondTag::B: return "B";
        case MondTag::C: return "C";
        case MondTag::F4: return "F4";
        case MondTag::TwoJetUV: return "TwoJetUV";
        case MondTag::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string to_string(ClassSign sign) {
    switch (sign) {
        case ClassSign::Plus: return "+";
        case ClassSign::Minus: return "-";
        case ClassSign::NA: return "NA";
    }
    return "?";
}

MondClass MondClass::make(MondTag tag, int k, ClassSign sign) {
    MondClass m;
    m.tag = tag;
    m.k = k;
    m.sign = sign;
    return m;
}

MondClass MondClass::indeterminate(std::string reason) {
    MondClass m;
    m.reason = std::move(reason);
    return m;
}

std::string MondClass::name() const {
    switch (tag) {
        case MondTag::S:
        case MondTag::B:
        case MondTag::C: return to_string(tag) + std::to_string(k);
        case MondTag::CrossCapS0: return "S0";
        default: return to_string(tag);
    }
}

std::string MondClass::label() const {
    if (sign == ClassSign::NA) return name();
    return name() + to_string(sign);
}

int determinacy_order(MondTag tag, int k) {
    switch (tag) {
        case MondTag::S: return k + 2;
        case MondTag::B: return 2 * k + 1;
        case MondTag::C: return k + 1;
        case MondTag::F4: return 5;
        default: return 2;
    }
}

int working_order(int k_max, int max_order) {
    int need = 5;
    need = std::max(need, determinacy_order(MondTag::S, k_max));
    need = std::max(need, determinacy_order(MondTag::B, k_max));
    need = std::max(need, determinacy_order(MondTag::C, k_max));
    return std::min(need, max_order);
}

namespace {

ClassSign sign_of(const Scalar& s) { return s.sign() > 0 ? ClassSign::Plus : ClassSign::Minus; }

Jet2 shifted_u(const std::map<int, Scalar>& c, int order, ScalarMode mode) {
    Jet2::Terms t{{Exponent{1, 0}, Scalar::one(mode)}};
    for (const auto& [i, ci] : c) t[Exponent{0, 2 * (i - 1)}] = ci;
    return Jet2(order, mode, t);
}

Jet2 substituted_third(const NormalFormCoeffs& nf, const std::map<int, Scalar>& c, int order) {
    ScalarMode mode = nf.mode();
    for (const auto& [i, ci] : c)
        if (!ci.is_exact()) mode = ScalarMode::Float;
    const GermJets g = nf.with_order(order).in_mode(mode).reconstruct();
    return substitute(g.z, shifted_u(c, order, mode), Jet2::variable(Var::V, order, mode));
}

void check_bk_preconditions(const NormalFormCoeffs& nf, int k) {
    if (k < 2) throw UsageError("B_k recursion needs k >= 2");
    if (nf.is_zero(nf.a(2, 1))) throw UsageError("B_k recursion needs a_{2,1} != 0");
    if (!nf.is_zero(nf.a(0, 3))) throw UsageError("B_k recursion needs a_{0,3} = 0");
    if (nf.order() < 2 * k + 1) throw UsageError("B_k recursion needs order >= 2k+1");
}

/// Visits every (m_2, ..., m_n) with sum m_l = count and sum (l-1) m_l = weight.
void for_each_partition(int n, int count, int weight, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> m(static_cast<std::size_t>(n + 1), 0);
    std::function<void(int, int, int)> rec = [&](int l, int left_count, int left_weight) {
        if (l > n) {
            if (left_count == 0 && left_weight == 0) visit(m);
            return;
        }
        for (int mult = 0; mult <= left_count && mult * (l - 1) <= left_weight; ++mult) {
            m[static_cast<std::size_t>(l)] = mult;
            rec(l + 1, left_count - mult, left_weight - mult * (l - 1));
        }
        m[static_cast<std::size_t>(l)] = 0;
    };
    rec(2, count, weight);
}

Scalar monomial_in_c(const std::map<int, Scalar>& c, const std::vector<int>& m, ScalarMode mode) {
    Scalar prod = Scalar::one(mode);
    for (std::size_t l = 2; l < m.size(); ++l) {
        if (m[l] == 0) continue;
        const auto it = c.find(static_cast<int>(l));
        const Scalar cl = it == c.end() ? Scalar::zero(mode) : it->second;
        for (int p = 0; p < m[l]; ++p) prod *= cl;
        prod /= Scalar(factorial(m[l]));
    }
    return prod;
}

}  // namespace

Scalar xi_partition_sum(const NormalFormCoeffs& nf, const std::map<int, Scalar>& c, int n) {
    Scalar sum = Scalar::zero(nf.mode());
    for (int i = 0; i <= n; ++i)
        for (int j = 1; j <= n + 1; ++j) {
            const Scalar a = nf.a(i, 2 * j - 1);
            if (a.is_zero()) continue;
            for_each_partition(n, i, n - j + 1, [&](const std::vector<int>& m) {
                sum += a * monomial_in_c(c, m, nf.mode()) / Scalar(factorial(2 * j - 1));
            });
        }
    return sum;
}

Scalar a_hat_partition_sum(const NormalFormCoeffs& nf, const std::map<int, Scalar>& c, int n) {
    Scalar sum = Scalar::zero(nf.mode());
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const Scalar a = nf.a(i, 2 * j - 1);
            if (a.is_zero()) continue;
            for_each_partition(n, i - 1, n - j, [&](const std::vector<int>& l) {
                sum += a * monomial_in_c(c, l, nf.mode()) / Scalar(factorial(2 * j - 1));
            });
        }
    return sum;
}

BkRecursionTrace bk_recursion(const NormalFormCoeffs& nf, int k) {
    check_bk_preconditions(nf, k);
    const int order = 2 * k + 1;
    const Scalar a21 = nf.a(2, 1);
    BkRecursionTrace trace;
    trace.k = k;
    for (int n = 2; n <= k; ++n) {
        // u v^(2n-1) is affine in c_n with slope a_{2,1}: solve with c_n = 0 as the base point.
        trace.c[n] = Scalar::zero(nf.mode());
        const Jet2 base = substituted_third(nf, trace.c, 2 * n);
        trace.c[n] = -base.coeff(1, 2 * n - 1) / a21;
    }
    const Jet2 z = substituted_third(nf, trace.c, order);
    for (int n = 2; n <= k; ++n) {
        trace.a_hat_odd[n] = z.coeff(1, 2 * n - 1);
        trace.xi[n] = z.coeff(0, 2 * n + 1);
    }
    return trace;
}

bool verify_by_substitution(const NormalFormCoeffs& nf, const BkRecursionTrace& trace, int k) {
    if (k < 2 || nf.order() < 2 * k + 1) return false;
    for (int n = 2; n <= k; ++n)
        if (!trace.c.contains(n) || !trace.xi.contains(n)) return false;
    const Jet2 z = substituted_third(nf, trace.c, 2 * k + 1);
    auto same = [&](const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact()) return a == b;
        return std::abs((a - b).to_double()) <= kFloatZeroTolerance * nf.scale();
    };
    for (int n = 2; n <= k; ++n) {
        if (!same(z.coeff(1, 2 * n - 1), Scalar::zero(z.mode()))) return false;
        if (!same(z.coeff(0, 2 * n + 1), trace.xi.at(n))) return false;
    }
    return true;
}

ClassifyResult classify(const NormalFormCoeffs& nf, int k_max) {
    ClassifyResult res;
    if (nf.mode() == ScalarMode::Float)
        res.warnings.push_back("float mode: zero tests use a relative 1e-9 cut, classification is numerically certified only");
    const int order = nf.order();
    auto zero = [&](const Scalar& s) { return nf.is_zero(s); };
    auto too_small = [&](const std::string& what) {
        res.cls = MondClass::indeterminate("order " + std::to_string(order) + " too small to decide " + what);
        return res;
    };
    auto with_sign_note = [&](MondClass cls) {
        res.cls = cls;
        if (cls.sign != ClassSign::NA) res.warnings.push_back(kSignConventionNote);
        return res;
    };
    if (order < 3) return too_small("a_{0,3}");

    const Scalar a03 = nf.a(0, 3);
    if (!zero(a03)) {
        for (int k = 1; k <= k_max; ++k) {
            if (order < determinacy_order(MondTag::S, k)) return too_small("S_" + std::to_string(k));
            const Scalar lead = nf.a(k + 1, 1);
            if (!zero(lead)) {
                const ClassSign sign = k % 2 == 0 ? ClassSign::NA : sign_of(lead * a03);
                return with_sign_note(MondClass::make(MondTag::S, k, sign));
            }
        }
        res.cls = MondClass::indeterminate("S_k with k > k_max = " + std::to_string(k_max));
        return res;
    }
    const Scalar a21 = nf.a(2, 1);
    if (!zero(a21)) {
        for (int k = 2; k <= k_max; ++k) {
            if (order < determinacy_order(MondTag::B, k)) return too_small("B_" + std::to_string(k));
            BkRecursionTrace trace = bk_recursion(nf, k);
            const Scalar xi = trace.xi.at(k);
            if (!zero(xi)) {
                res.trace = std::move(trace);
                return with_sign_note(MondClass::make(MondTag::B, k, sign_of(xi * a21)));
            }
        }
        res.cls = MondClass::indeterminate("B_k with k > k_max = " + std::to_string(k_max));
        return res;
    }
    if (order < 4) return too_small("a_{1,3}");
    const Scalar a13 = nf.a(1, 3);
    if (!zero(a13)) {
        for (int k = 3; k <= k_max; ++k) {
            if (order < determinacy_order(MondTag::C, k)) return too_small("C_" + std::to_string(k));
            const Scalar lead = nf.a(k, 1);
            if (!zero(lead)) {
                const ClassSign sign = k % 2 == 0 ? ClassSign::NA : sign_of(lead * a13);
                return with_sign_note(MondClass::make(MondTag::C, k, sign));
            }
        }
        res.cls = MondClass::indeterminate("C_k with k > k_max = " + std::to_string(k_max));
        return res;
    }
    if (order < 5) return too_small("F_4");
    if (!zero(nf.a(3, 1)) && !zero(nf.a(0, 5))) {
        res.cls = MondClass::make(MondTag::F4, 4);
        return res;
    }
    res.cls = MondClass::indeterminate("not among S_k, B_k, C_k, F_4 (non-simple or H-type)");
    return res;
}

GermClassification classify_germ(const GermJets& g, int k_max) {
    GermClassification out;
    out.corank = corank_at_origin(g);
    if (g.mode() == ScalarMode::Float) out.warnings.push_back("float input: zero tests are numerical");
    if (out.corank == 0) {
        out.cls = MondClass::make(MondTag::Immersion);
        return out;
    }
    if (out.corank == 2) {
        out.cls = MondClass::indeterminate("corank 2 at the origin");
        return out;
    }
    out.two_jet = two_jet_class(g);
    switch (*out.two_jet) {
        case TwoJetClass::CrossCap: out.cls = MondClass::make(MondTag::CrossCapS0); return out;
        case TwoJetClass::UUV:
            out.cls = MondClass::make(MondTag::TwoJetUV);
            out.cls.reason = "2-jet (u, uv, 0): H_k branch, out of scope";
            return out;
        case TwoJetClass::Degenerate: out.cls = MondClass::indeterminate("2-jet (u, 0, 0)"); return out;
        case TwoJetClass::UVSquared: break;
    }
    out.reduction = reduce_to_normal_form(g, g.order());
    if (out.reduction->forced_float) out.warnings.push_back("irrational square root in the reduction: switched to float mode");
    ClassifyResult r = classify(out.reduction->nf, k_max);
    out.cls = r.cls;
    out.trace = std::move(r.trace);
    for (auto& w : r.warnings)
        if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(std::move(w));
    return out;
}

}  // namespace germforge
