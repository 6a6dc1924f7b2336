#include "germforge/normal_form.hpp"

#include <algorithm>
#include <cmath>

namespace germforge {

std::string to_string(TwoJetClass c) {
    switch (c) {
        case TwoJetClass::UVSquared: return "UVSquared";
        case TwoJetClass::UUV: return "UUV";
        case TwoJetClass::CrossCap: return "CrossCap";
        case TwoJetClass::Degenerate: return "Degenerate";
    }
    return "?";
}

// ---------------------------------------------------------------- NormalFormCoeffs

namespace {

bool structurally_absent(int i, int j) {
    return (i == 0 && j == 0) || (i == 1 && j == 0) || (i == 0 && j == 1) || (i == 1 && j == 1) || (i == 0 && j == 2);
}

double germ_scale(const GermJets& g) {
    double s = 1.0;
    for (int k = 0; k < 3; ++k)
        for (const auto& [e, c] : g.component(k).terms()) s = std::max(s, std::abs(c.to_double()));
    return s;
}

bool negligible(const Scalar& s, double scale) {
    if (s.is_exact()) return s.is_zero();
    return std::abs(s.to_double()) <= kFloatZeroTolerance * scale;
}

ScalarMode weaker(ScalarMode a, ScalarMode b) { return a == ScalarMode::Exact && b == ScalarMode::Exact ? ScalarMode::Exact : ScalarMode::Float; }

}  // namespace

Scalar NormalFormCoeffs::a(int i, int j) const {
    const auto it = a_.find(Exponent{i, j});
    return it == a_.end() ? Scalar::zero(mode_) : it->second;
}

Scalar NormalFormCoeffs::b(int i) const {
    const auto it = b_.find(i);
    return it == b_.end() ? Scalar::zero(mode_) : it->second;
}

void NormalFormCoeffs::set_a(int i, int j, const Scalar& value) {
    if (i < 0 || j < 0 || structurally_absent(i, j)) throw UsageError("a_{i,j} index is structurally zero in the pre-normal form");
    if (i + j > order_) throw UsageError("a_{i,j} index exceeds the truncation order");
    if (value.is_zero())
        a_.erase(Exponent{i, j});
    else
        a_[Exponent{i, j}] = value.in_mode(mode_);
}

void NormalFormCoeffs::set_b(int i, const Scalar& value) {
    if (i < 2) throw UsageError("b_i is defined for i >= 2");
    if (i > order_) throw UsageError("b_i index exceeds the truncation order");
    if (value.is_zero())
        b_.erase(i);
    else
        b_[i] = value.in_mode(mode_);
}

double NormalFormCoeffs::scale() const {
    double s = 1.0;
    for (const auto& [k, c] : b_) s = std::max(s, std::abs(c.to_double()));
    for (const auto& [k, c] : a_) s = std::max(s, std::abs(c.to_double()));
    return s;
}

bool NormalFormCoeffs::is_zero(const Scalar& s) const {
    if (mode_ == ScalarMode::Exact && s.is_exact()) return s.is_zero();
    return std::abs(s.to_double()) <= kFloatZeroTolerance * scale();
}

NormalFormCoeffs NormalFormCoeffs::in_mode(ScalarMode mode) const {
    NormalFormCoeffs out(order_, mode);
    for (const auto& [i, c] : b_) out.set_b(i, c.in_mode(mode));
    for (const auto& [e, c] : a_) out.set_a(e.i, e.j, c.in_mode(mode));
    return out;
}

NormalFormCoeffs NormalFormCoeffs::with_order(int order) const {
    NormalFormCoeffs out(order, mode_);
    for (const auto& [i, c] : b_)
        if (i <= order) out.set_b(i, c);
    for (const auto& [e, c] : a_)
        if (e.degree() <= order) out.set_a(e.i, e.j, c);
    return out;
}

GermJets NormalFormCoeffs::reconstruct() const {
    const Jet2 x = Jet2::variable(Var::U, order_, mode_);
    Jet2::Terms y{{Exponent{0, 2}, Scalar::rational(1, 2).in_mode(mode_)}};
    for (const auto& [i, c] : b_) y[Exponent{i, 0}] = c / Scalar(factorial(i)).in_mode(mode_);
    Jet2::Terms z;
    for (const auto& [e, c] : a_) z[e] = c / Scalar(factorial(e.i) * factorial(e.j)).in_mode(mode_);
    return GermJets(x, Jet2(order_, mode_, y), Jet2(order_, mode_, z));
}

NormalFormCoeffs NormalFormCoeffs::read_off(const GermJets& g) {
    const double scale = germ_scale(g);
    const ScalarMode mode = g.mode();
    const int order = g.order();
    auto fail = [](const std::string& why) { throw UsageError("germ is not in pre-normal form: " + why); };

    for (const auto& [e, c] : g.x.terms()) {
        const bool is_u = e.i == 1 && e.j == 0;
        if (is_u ? !negligible(c - Scalar::one(mode), scale) : !negligible(c, scale)) fail("first component is not u");
    }
    if (g.x.coeff(1, 0).is_zero()) fail("first component is not u");

    NormalFormCoeffs nf(order, mode);
    for (const auto& [e, c] : g.y.terms()) {
        if (e.j == 0) {
            if (e.i < 2) fail("second component has a linear term");
            nf.set_b(e.i, c * Scalar(factorial(e.i)).in_mode(mode));
        } else if (e.i == 0 && e.j == 2) {
            if (!negligible(c - Scalar::rational(1, 2), scale)) fail("v^2 coefficient of the second component is not 1/2");
        } else if (!negligible(c, scale)) {
            fail("second component has a mixed or pure-v term");
        }
    }
    if (order >= 2 && g.y.coeff(0, 2).is_zero()) fail("second component lacks v^2/2");
    for (const auto& [e, c] : g.z.terms()) {
        if (structurally_absent(e.i, e.j)) {
            if (!negligible(c, scale)) fail("third component has a forbidden low-order term");
            continue;
        }
        nf.set_a(e.i, e.j, c * Scalar(factorial(e.i) * factorial(e.j)).in_mode(mode));
    }
    return nf;
}

// ---------------------------------------------------------------- transforms

Matrix3 identity_matrix3() {
    Matrix3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m[r][c] = Scalar(r == c ? 1 : 0);
    return m;
}

namespace {

Matrix3 matmul(const Matrix3& a, const Matrix3& b) {
    Matrix3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            Scalar s(0);
            for (int k = 0; k < 3; ++k) s += a[r][k] * b[k][c];
            m[r][c] = s;
        }
    return m;
}

}  // namespace

bool is_orthogonal(const Matrix3& m, double tolerance) {
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            Scalar dot(0);
            for (int k = 0; k < 3; ++k) dot += m[k][r] * m[k][c];
            const Scalar want(r == c ? 1 : 0);
            if (dot.is_exact()) {
                if (!(dot == want)) return false;
            } else if (std::abs((dot - want).to_double()) > tolerance) {
                return false;
            }
        }
    return true;
}

GermJets apply_rotation(const Matrix3& r, const GermJets& g) {
    ScalarMode mode = g.mode();
    for (const auto& row : r)
        for (const Scalar& s : row) mode = weaker(mode, s.mode());
    std::array<Jet2, 3> out;
    for (int k = 0; k < 3; ++k) {
        Jet2 acc(g.order(), mode);
        for (int l = 0; l < 3; ++l) acc = add(acc, g.component(l).scaled(r[k][l]).in_mode(mode));
        out[k] = acc;
    }
    return GermJets(out[0], out[1], out[2]);
}

GermJets apply_substitution(const GermJets& g, const Jet2& u_new, const Jet2& v_new) {
    const Jet2 x = substitute(g.x, u_new, v_new);
    const Jet2 y = substitute(g.y, u_new, v_new);
    const Jet2 z = substitute(g.z, u_new, v_new);
    const ScalarMode mode = weaker(weaker(x.mode(), y.mode()), z.mode());
    return GermJets(x.in_mode(mode), y.in_mode(mode), z.in_mode(mode));
}

GermJets TransformLog::replay(const GermJets& g) const {
    GermJets cur = g;
    for (const TransformStep& s : steps)
        cur = s.kind == TransformStep::Kind::TargetRotation ? apply_rotation(s.rotation, cur) : apply_substitution(cur, s.u_new, s.v_new);
    return cur;
}

// ---------------------------------------------------------------- 2-jet analysis

int corank_at_origin(const GermJets& g) {
    const double scale = germ_scale(g);
    std::array<std::array<Scalar, 2>, 3> lin;
    bool any = false;
    for (int k = 0; k < 3; ++k) {
        lin[k] = {g.component(k).coeff(1, 0), g.component(k).coeff(0, 1)};
        any |= !negligible(lin[k][0], scale) || !negligible(lin[k][1], scale);
    }
    if (!any) return 2;
    for (int p = 0; p < 3; ++p)
        for (int q = p + 1; q < 3; ++q) {
            const Scalar minor = lin[p][0] * lin[q][1] - lin[p][1] * lin[q][0];
            if (!negligible(minor, scale * scale)) return 0;
        }
    return 1;
}

TwoJetClass two_jet_class(const GermJets& g) {
    if (corank_at_origin(g) != 1) throw UsageError("two_jet_class requires a corank-1 germ");
    const double scale = germ_scale(g);
    const int order = std::max(2, g.order());
    const ScalarMode mode = g.mode();

    // Row with a nonzero linear part becomes the first coordinate; the others lose their linear part.
    int pivot = 0;
    for (int k = 0; k < 3; ++k) {
        const Jet2& c = g.component(k);
        if (!negligible(c.coeff(1, 0), scale) || !negligible(c.coeff(0, 1), scale)) {
            pivot = k;
            break;
        }
    }
    const Jet2 p = g.component(pivot).with_order(order);
    const bool use_u = !negligible(p.coeff(1, 0), scale);
    const Scalar lead = use_u ? p.coeff(1, 0) : p.coeff(0, 1);
    std::vector<Jet2> rest;
    for (int k = 0; k < 3; ++k) {
        if (k == pivot) continue;
        const Jet2 c = g.component(k).with_order(order);
        const Scalar lc = use_u ? c.coeff(1, 0) : c.coeff(0, 1);
        rest.push_back(subtract(c, p.scaled(lc / lead).in_mode(mode)));
    }
    // Linear source change putting the pivot's linear part to u.
    const Scalar alpha = p.coeff(1, 0), beta = p.coeff(0, 1);
    const Jet2 u = Jet2::variable(Var::U, order, mode), v = Jet2::variable(Var::V, order, mode);
    Jet2 u_new, v_new;
    if (use_u) {
        u_new = subtract(u, v.scaled(beta)).scaled(Scalar::one(mode) / alpha).in_mode(mode);
        v_new = v;
    } else {
        u_new = v;
        v_new = u.scaled(Scalar::one(mode) / beta).in_mode(mode);
    }
    std::array<Scalar, 2> uv, vv;
    for (int k = 0; k < 2; ++k) {
        const Jet2 q = substitute(rest[static_cast<std::size_t>(k)].homogeneous_part(2), u_new, v_new);
        uv[k] = q.coeff(1, 1);
        vv[k] = q.coeff(0, 2);
    }
    const Scalar det = uv[0] * vv[1] - vv[0] * uv[1];
    if (!negligible(det, scale * scale)) return TwoJetClass::CrossCap;
    if (!negligible(vv[0], scale) || !negligible(vv[1], scale)) return TwoJetClass::UVSquared;
    if (!negligible(uv[0], scale) || !negligible(uv[1], scale)) return TwoJetClass::UUV;
    return TwoJetClass::Degenerate;
}

// ---------------------------------------------------------------- reduction

namespace {

/// Rotation taking the unit vector `a` to e1.
Matrix3 rotation_to_e1(const std::array<Scalar, 3>& a) {
    const Scalar c = a[0];
    if ((c + Scalar(1)).is_zero() || std::abs((c + Scalar(1)).to_double()) < 1e-14) {
        Matrix3 m = identity_matrix3();
        m[0][0] = Scalar(-1);
        m[1][1] = Scalar(-1);
        return m;
    }
    Matrix3 k;
    for (auto& row : k) row.fill(Scalar(0));
    // cross-product matrix of a x e1 = (0, a3, -a2)
    k[0][1] = a[1];
    k[0][2] = a[2];
    k[1][0] = -a[1];
    k[2][0] = -a[2];
    const Matrix3 k2 = matmul(k, k);
    Matrix3 r = identity_matrix3();
    const Scalar inv = Scalar(1) / (Scalar(1) + c);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = r[i][j] + k[i][j] + k2[i][j] * inv;
    return r;
}

void push_rotation(Reduction& red, const Matrix3& r, const std::string& note) {
    TransformStep s;
    s.kind = TransformStep::Kind::TargetRotation;
    s.rotation = r;
    s.note = note;
    red.log.steps.push_back(std::move(s));
}

void push_substitution(Reduction& red, const Jet2& u_new, const Jet2& v_new, const std::string& note) {
    TransformStep s;
    s.kind = TransformStep::Kind::SourceSubstitution;
    s.u_new = u_new;
    s.v_new = v_new;
    s.note = note;
    red.log.steps.push_back(std::move(s));
}

Jet2 drop_terms(const Jet2& j, const std::vector<Exponent>& gone, double scale) {
    Jet2::Terms t = j.terms();
    for (const Exponent& e : gone) {
        const auto it = t.find(e);
        if (it == t.end()) continue;
        if (!negligible(it->second, scale)) throw ConsistencyError("reduction left a nonzero low-order term");
        t.erase(it);
    }
    return Jet2(j.order(), j.mode(), t);
}

}  // namespace

Reduction reduce_to_normal_form(const GermJets& input, int order) {
    if (order < 2) throw UsageError("normal form reduction needs order >= 2");
    GermJets g = input.with_order(order);
    const int corank = corank_at_origin(g);
    if (corank != 1) throw UnsupportedGerm("normal form reduction needs a corank-1 germ (corank " + std::to_string(corank) + ")");
    switch (two_jet_class(g)) {
        case TwoJetClass::UVSquared: break;
        case TwoJetClass::UUV: throw OutOfScopeHk();
        case TwoJetClass::CrossCap: throw UnsupportedGerm("cross-cap germ: no pre-normal form of type (u, v^2, 0)");
        case TwoJetClass::Degenerate: throw UnsupportedGerm("2-jet is (u, 0, 0): degenerate germ");
    }
    Reduction red;
    const ScalarMode start_mode = g.mode();
    auto scale = [&] { return germ_scale(g); };

    // Image of the differential onto the x-axis.
    {
        std::array<Scalar, 3> w;
        bool u_col = false;
        for (int k = 0; k < 3; ++k) u_col |= !negligible(g.component(k).coeff(1, 0), scale());
        for (int k = 0; k < 3; ++k) w[k] = u_col ? g.component(k).coeff(1, 0) : g.component(k).coeff(0, 1);
        const Scalar norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        for (Scalar& c : w) c /= norm;
        if (!(w[1].is_zero() && w[2].is_zero() && w[0].sign() > 0)) {
            const Matrix3 r = rotation_to_e1(w);
            g = apply_rotation(r, g);
            push_rotation(red, r, "align differential image with x");
        }
    }
    // Source change so that the first component is exactly u.
    {
        const int o = g.order();
        ScalarMode mode = g.mode();
        const Jet2 u = Jet2::variable(Var::U, o, mode), v = Jet2::variable(Var::V, o, mode);
        if (negligible(g.x.coeff(1, 0), scale())) {
            g = apply_substitution(g, v, u);
            push_substitution(red, v, u, "swap source variables");
        }
        mode = g.mode();
        const Jet2 uu = u.in_mode(mode), vv = v.in_mode(mode);
        const Scalar alpha = g.x.coeff(1, 0), beta = g.x.coeff(0, 1);
        const Scalar inv_alpha = Scalar::one(mode) / alpha;
        Jet2 U = subtract(uu, vv.scaled(beta).in_mode(mode)).scaled(inv_alpha).in_mode(mode);
        for (int pass = 1; pass < o; ++pass) {
            const Jet2 residual = subtract(uu, substitute(g.x, U, vv).in_mode(mode));
            U = add(U, residual.scaled(inv_alpha).in_mode(mode));
        }
        if (!(U == uu)) {
            g = apply_substitution(g, U, vv);
            push_substitution(red, U, vv, "straighten first component");
        }
        g = GermJets(uu.in_mode(g.mode()), g.y, g.z);
    }
    // Rotate (y, z) so that only y carries v^2.
    {
        const Scalar y02 = g.y.coeff(0, 2), z02 = g.z.coeff(0, 2);
        const Scalar s = (y02 * y02 + z02 * z02).sqrt();
        Matrix3 r = identity_matrix3();
        r[1][1] = y02 / s;
        r[1][2] = z02 / s;
        r[2][1] = -z02 / s;
        r[2][2] = y02 / s;
        const bool flip = y02.sign() < 0;
        if (flip) {
            // Compose with the half-turn about the y-axis so that entry [2][2] is nonnegative.
            r[0][0] = Scalar(-1);
            r[2][1] = -r[2][1];
            r[2][2] = -r[2][2];
        }
        if (!(r == identity_matrix3())) {
            g = apply_rotation(r, g);
            push_rotation(red, r, "rotate (y,z) so v^2 sits in y");
        }
        if (flip) {
            const Jet2 u = Jet2::variable(Var::U, g.order(), g.mode()), v = Jet2::variable(Var::V, g.order(), g.mode());
            g = apply_substitution(g, -u, v);
            push_substitution(red, -u, v, "restore first component after half-turn");
        }
        g = GermJets(g.x, g.y, drop_terms(g.z, {{0, 1}, {1, 0}, {1, 1}, {0, 2}}, scale()));
    }
    // Scale v so that the v^2 coefficient of y is 1/2.
    {
        const Scalar lambda = (Scalar::one(g.mode()) / (g.y.coeff(0, 2) * Scalar(2))).sqrt();
        if (!(lambda == Scalar(1))) {
            const ScalarMode mode = weaker(g.mode(), lambda.mode());
            const Jet2 u = Jet2::variable(Var::U, g.order(), mode);
            const Jet2 v = Jet2::variable(Var::V, g.order(), mode).scaled(lambda);
            g = apply_substitution(g, u, v);
            push_substitution(red, u, v, "scale v");
        }
    }
    // Degree by degree, v -> v + P kills the terms u^i v^j (j >= 1) of y other than v^2/2.
    for (int m = 2; m <= g.order(); ++m) {
        const ScalarMode mode = g.mode();
        Jet2::Terms p;
        for (const auto& [e, c] : g.y.terms()) {
            if (e.degree() != m || e.j == 0 || (e.i == 0 && e.j == 2)) continue;
            p[Exponent{e.i, e.j - 1}] = -c;
        }
        if (p.empty()) continue;
        const Jet2 u = Jet2::variable(Var::U, g.order(), mode);
        const Jet2 v_new = add(Jet2::variable(Var::V, g.order(), mode), Jet2(g.order(), mode, p));
        g = apply_substitution(g, u, v_new);
        push_substitution(red, u, v_new, "clear degree-" + std::to_string(m) + " mixed terms of y");
    }
    // Float drift: tidy y's fixed coefficients before reading off.
    if (g.mode() == ScalarMode::Float) {
        Jet2::Terms t = g.y.terms();
        t[Exponent{0, 2}] = Scalar(0.5);
        for (auto it = t.begin(); it != t.end();) {
            const bool fixed = it->first.j == 0 || (it->first.i == 0 && it->first.j == 2);
            if (!fixed && negligible(it->second, scale())) it = t.erase(it);
            else ++it;
        }
        g = GermJets(g.x, Jet2(g.order(), g.mode(), t), g.z);
    }
    red.nf = NormalFormCoeffs::read_off(g);
    red.forced_float = start_mode == ScalarMode::Exact && g.mode() == ScalarMode::Float;
    return red;
}

}  // namespace germforge
