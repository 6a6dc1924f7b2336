#include "germforge/oracle.hpp"

#include <map>

namespace germforge {

namespace {

Jet2 exact_copy(const Jet2& f) {
    if (f.mode() == ScalarMode::Exact) return f;
    return rationalize_jet(f).jet;
}

std::map<Exponent, int> monomial_index(int order) {
    std::map<Exponent, int> idx;
    for (int d = 0; d <= order; ++d)
        for (int i = d; i >= 0; --i) idx.emplace(Exponent{i, d - i}, static_cast<int>(idx.size()));
    return idx;
}

int rank_of(std::vector<std::vector<mpq_class>> rows, std::size_t cols) {
    int rank = 0;
    for (std::size_t col = 0; col < cols && rank < static_cast<int>(rows.size()); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        const mpq_class lead = rows[rank][col];
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][col] == 0) continue;
            const mpq_class factor = rows[r][col] / lead;
            for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::string SingularityType::name() const {
    switch (tag) {
        case SingularityTag::Regular: return "Regular";
        case SingularityTag::A: return "A" + std::to_string(k);
        case SingularityTag::D4: return "D4";
        case SingularityTag::MoreDegenerate: return "MoreDegenerate";
    }
    return "?";
}

mpq_class binary_cubic_discriminant(const mpq_class& p, const mpq_class& q, const mpq_class& r, const mpq_class& s) {
    return q * q * r * r - 4 * p * r * r * r - 4 * q * q * q * s - 27 * p * p * s * s + 18 * p * q * r * s;
}

SingularityType split_and_type(const Jet2& f_in, int order) {
    if (order < 2) throw UsageError("split_and_type needs order >= 2");
    const Jet2 f = exact_copy(f_in).with_order(order);
    const Jet2 g = f - Jet2::constant(f.constant_term(), order, ScalarMode::Exact);
    if (!g.coeff(1, 0).is_zero() || !g.coeff(0, 1).is_zero()) throw UsageError("split_and_type: nonzero gradient at the origin");

    const mpq_class c20 = g.coeff(2, 0).exact(), c11 = g.coeff(1, 1).exact(), c02 = g.coeff(0, 2).exact();
    SingularityType out;
    if (4 * c20 * c02 - c11 * c11 != 0) {
        out.tag = SingularityTag::A;
        out.k = 1;
        out.corank = 0;
        out.residual = Jet2(order, ScalarMode::Exact);
        return out;
    }
    if (c20 == 0 && c11 == 0 && c02 == 0) {
        out.corank = 2;
        out.residual = g.homogeneous_part(3);
        const mpq_class disc = binary_cubic_discriminant(g.coeff(3, 0).exact(), g.coeff(2, 1).exact(), g.coeff(1, 2).exact(),
                                                         g.coeff(0, 3).exact());
        out.tag = disc != 0 ? SingularityTag::D4 : SingularityTag::MoreDegenerate;
        return out;
    }

    // rank one: make the quadratic part lambda X^2
    const Jet2 u = Jet2::variable(Var::U, order, ScalarMode::Exact);
    const Jet2 v = Jet2::variable(Var::V, order, ScalarMode::Exact);
    Jet2 h;
    mpq_class lambda;
    if (c20 != 0) {
        h = substitute(g, u - v.scaled(Scalar(mpq_class(c11 / (2 * c20)))), v);
        lambda = c20;
    } else {
        h = substitute(g, v, u);
        lambda = c02;
    }

    // X = phi(Y) solving h_X = 0, by fixed-point iteration in the jet ring
    const Jet2 hx = partial_derivative(h, Var::U);
    const Scalar step(mpq_class(-1 / (2 * lambda)));
    Jet2 phi(order, ScalarMode::Exact);
    for (int it = 0; it <= order; ++it) phi = phi + substitute(hx, phi, v).with_order(order).scaled(step);

    out.corank = 1;
    out.residual = substitute(h, phi, v);
    const int m = out.residual.valuation();
    if (m < 0) {
        out.tag = SingularityTag::MoreDegenerate;
        out.undecided = true;
    } else {
        out.tag = SingularityTag::A;
        out.k = m - 1;
    }
    return out;
}

SingularityType function_type(const Jet2& f, int order) {
    if (!f.coeff(1, 0).is_zero() || !f.coeff(0, 1).is_zero()) {
        SingularityType out;
        out.tag = SingularityTag::Regular;
        return out;
    }
    return split_and_type(f, order);
}

std::string to_string(VersalityFlavor flavor) { return flavor == VersalityFlavor::RPlus ? "R+" : "K"; }

int monomial_rank(const std::vector<Jet2>& jets, int order) {
    const auto idx = monomial_index(order);
    std::vector<std::vector<mpq_class>> rows;
    rows.reserve(jets.size());
    for (const Jet2& j : jets) {
        std::vector<mpq_class> row(idx.size(), mpq_class(0));
        const Jet2 exact = exact_copy(j);
        for (const auto& [e, c] : exact.terms())
            if (e.degree() <= order) row[idx.at(e)] = c.exact();
        rows.push_back(std::move(row));
    }
    return rank_of(std::move(rows), idx.size());
}

bool versality_rank_oracle(const std::vector<Jet2>& generators, const Jet2& f_in, VersalityFlavor flavor, int order) {
    const Jet2 f = exact_copy(f_in).with_order(order + 1);
    std::vector<Jet2> module_gens{partial_derivative(f, Var::U).with_order(order), partial_derivative(f, Var::V).with_order(order)};
    if (flavor == VersalityFlavor::K)
        module_gens.push_back((f - Jet2::constant(f.constant_term(), order + 1, ScalarMode::Exact)).with_order(order));

    std::vector<Jet2> span;
    for (const Jet2& gen : module_gens)
        for (int d = 0; d <= order; ++d)
            for (int i = 0; i <= d; ++i) span.push_back(gen * Jet2::monomial(i, d - i, Scalar(1), order, ScalarMode::Exact));
    for (const Jet2& g : generators) span.push_back(exact_copy(g).with_order(order));
    if (flavor == VersalityFlavor::RPlus) span.push_back(Jet2::constant(Scalar(1), order, ScalarMode::Exact));

    const int monomials = (order + 1) * (order + 2) / 2;
    return monomial_rank(span, order) == monomials;
}

mpq_class rationalize(double x, long max_den) {
    if (max_den < 1) throw UsageError("rationalize needs a positive denominator bound");
    const mpq_class target(x);
    mpq_class rest = target;
    mpz_class h2 = 0, h1 = 1, k2 = 1, k1 = 0;
    for (;;) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        const mpz_class h = a * h1 + h2, k = a * k1 + k2;
        if (k > max_den) {
            // best semiconvergent within the bound, against the last convergent
            const mpz_class t = (mpz_class(max_den) - k2) / k1;
            mpq_class semi(t * h1 + h2, t * k1 + k2), last(h1, k1);
            semi.canonicalize();
            last.canonicalize();
            return abs(semi - target) < abs(last - target) ? semi : last;
        }
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        const mpq_class frac = rest - a;
        if (frac == 0) break;
        rest = 1 / frac;
    }
    mpq_class out(h1, k1);
    out.canonicalize();
    return out;
}

Rationalized rationalize_jet(const Jet2& f, long max_den) {
    Rationalized out;
    if (f.mode() == ScalarMode::Exact) {
        out.jet = f;
        return out;
    }
    Jet2::Terms terms;
    for (const auto& [e, c] : f.terms()) {
        const double d = c.to_double();
        const mpq_class q = rationalize(d, max_den);
        if (q != mpq_class(d)) out.approximated = true;
        terms[e] = Scalar(q);
    }
    out.jet = Jet2(f.order(), ScalarMode::Exact, terms);
    return out;
}

}  // namespace germforge
