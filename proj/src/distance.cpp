#include "germforge/distance.hpp"

#include <algorithm>
#include <cmath>

namespace germforge {

namespace {

ScalarMode weaker(ScalarMode a, ScalarMode b) {
    return a == ScalarMode::Exact && b == ScalarMode::Exact ? ScalarMode::Exact : ScalarMode::Float;
}

// A value together with the sum of magnitudes of the terms it was built from.
struct Tracked {
    Scalar v;
    double m = 0;

    Tracked() = default;
    explicit Tracked(const Scalar& s) : v(s), m(std::abs(s.to_double())) {}
    Tracked(const Scalar& s, double magnitude) : v(s), m(magnitude) {}
};

Tracked operator+(const Tracked& a, const Tracked& b) { return {a.v + b.v, a.m + b.m}; }
Tracked operator-(const Tracked& a, const Tracked& b) { return {a.v - b.v, a.m + b.m}; }
Tracked operator*(const Tracked& a, const Tracked& b) { return {a.v * b.v, a.m * b.m}; }
Tracked operator*(int k, const Tracked& a) { return {Scalar(k) * a.v, std::abs(k) * a.m}; }

bool tracked_zero(const Tracked& t) {
    if (t.v.is_exact()) return t.v.is_zero();
    if (t.m == 0.0) return true;
    return std::abs(t.v.to_double()) <= kFloatZeroTolerance * t.m;
}

class WitnessLog {
public:
    explicit WitnessLog(std::vector<WitnessValue>& out) : out_(out) {}
    bool zero(const std::string& name, const Tracked& t) {
        const bool z = tracked_zero(t);
        out_.push_back(WitnessValue{name, t.v, t.m, z});
        return z;
    }

private:
    std::vector<WitnessValue>& out_;
};

// v = phi(u) solving d_v = 0 on the branch y0 != 0 (d_vv(0) = -y0), then the
// valuation of the restricted function.
std::optional<int> eliminate_off_principal(const NormalFormCoeffs& nf, const ProbePoint& p) {
    const int order = nf.order();
    const Jet2 d = distance_jet(nf, p, order);
    const ScalarMode mode = d.mode();
    const Jet2 d0 = d - Jet2::constant(d.constant_term(), order, mode);
    const Jet2 dv = partial_derivative(d0, Var::V).with_order(order);
    const Jet2 u = Jet2::variable(Var::U, order, mode);
    const Scalar step = Scalar(1) / p.y0;
    Jet2 phi(order, mode);
    for (int it = 0; it <= order; ++it) phi = phi + substitute(dv, u, phi).scaled(step);
    const Jet2 residual = substitute(d0, u, phi);
    const int m = residual.valuation();
    if (m < 0) return std::nullopt;
    return m - 1;
}

DistanceVerdict classify_impl(const NormalFormCoeffs& nf, const ProbePoint& p) {
    DistanceVerdict out;
    out.p0 = p;
    const bool exact = nf.mode() == ScalarMode::Exact && p.mode() == ScalarMode::Exact;
    if (!exact) out.warnings.push_back("float mode: coefficient zero tests use a relative tolerance");
    WitnessLog log(out.witness);

    const double pnorm = std::abs(p.x0.to_double()) + std::abs(p.y0.to_double()) + std::abs(p.z0.to_double());
    const Tracked x0(p.x0, pnorm), y0(p.y0, pnorm), z0(p.z0, pnorm);
    const auto a = [&](int i, int j) { return Tracked(nf.a(i, j)); };
    const auto b = [&](int i) { return Tracked(nf.b(i)); };
    const Tracked one(Scalar(1));
    const bool y0_zero = tracked_zero(y0);
    out.branch = y0_zero ? ProbeBranch::PrincipalNormal : ProbeBranch::OffPrincipal;

    if (!log.zero("x0", x0)) {
        out.sing_type = DistanceSingType::Regular;
        out.condition = "regular";
        return out;
    }
    const auto set = [&](DistanceSingType t, const char* cond, bool rplus, bool k) {
        out.sing_type = t;
        out.condition = cond;
        out.r_plus_versal = rplus;
        out.k_versal = k;
    };

    if (!log.zero("y0", y0)) {
        if (!log.zero("b2*y0 + a20*z0 - 1", b(2) * y0 + a(2, 0) * z0 - one)) {
            set(DistanceSingType::A1, "1", true, true);
            return out;
        }
        if (!log.zero("b3*y0 + a30*z0", b(3) * y0 + a(3, 0) * z0)) {
            set(DistanceSingType::A2, "2a", true, true);
            return out;
        }
        const Tracked quartic = b(4) * y0 * y0 + a(4, 0) * y0 * z0 - 3 * (a(2, 1) * a(2, 1) * z0 * z0) -
                                3 * ((a(2, 0) * a(2, 0) + b(2) * b(2)) * y0);
        if (!log.zero("b4*y0^2 + a40*y0*z0 - 3*a21^2*z0^2 - 3*(a20^2 + b2^2)*y0", quartic)) {
            const bool k = !log.zero("a20*y0 - b2*z0", a(2, 0) * y0 - b(2) * z0);
            set(DistanceSingType::A3, "3a", true, k);
            return out;
        }
        const bool a30_zero = log.zero("a30", a(3, 0));
        const bool b3_zero = log.zero("b3", b(3));
        out.exact_k = eliminate_off_principal(nf, p);
        const bool a4 = out.exact_k && *out.exact_k == 4;
        if (!out.exact_k) out.warnings.push_back("A_k order beyond the working jet order");
        set(DistanceSingType::A4plus, "4a", a4 && !(a30_zero && b3_zero), false);
        return out;
    }

    if (log.zero("a20*z0 - 1", a(2, 0) * z0 - one)) {
        set(DistanceSingType::D4plus, "5", false, false);
        return out;
    }
    if (!log.zero("a03*z0", a(0, 3) * z0)) {
        set(DistanceSingType::A2, "2b", false, false);
        return out;
    }
    const Tracked quartic = (a(0, 4) * a(2, 0) - 3 * (a(1, 2) * a(1, 2))) * z0 * z0 - (a(0, 4) + 3 * a(2, 0)) * z0 + 3 * one;
    if (!log.zero("(a04*a20 - 3*a12^2)*z0^2 - (a04 + 3*a20)*z0 + 3", quartic)) {
        set(DistanceSingType::A3, "3b", false, false);
        return out;
    }
    set(DistanceSingType::A4plus, "4b", false, false);
    return out;
}

std::array<double, 2> unit(double y, double z) {
    const double len = std::hypot(y, z);
    return {y / len, z / len};
}

bool near_one(double x) { return std::abs(x - 1.0) <= 1e-9 * (std::abs(x) + 1.0); }

}  // namespace

ScalarMode ProbePoint::mode() const { return weaker(weaker(x0.mode(), y0.mode()), z0.mode()); }

std::string to_string(DistanceSingType t) {
    switch (t) {
        case DistanceSingType::Regular: return "Regular";
        case DistanceSingType::A1: return "A1";
        case DistanceSingType::A2: return "A2";
        case DistanceSingType::A3: return "A3";
        case DistanceSingType::A4plus: return "A4plus";
        case DistanceSingType::D4plus: return "D4plus";
    }
    return "?";
}

std::string to_string(ProbeBranch b) { return b == ProbeBranch::PrincipalNormal ? "PrincipalNormal" : "OffPrincipal"; }

std::string to_string(FocalKind k) {
    switch (k) {
        case FocalKind::IntersectingPair: return "IntersectingPair";
        case FocalKind::ParallelPair: return "ParallelPair";
        case FocalKind::SingleLine: return "SingleLine";
    }
    return "?";
}

std::string to_string(SingularPointType t) {
    switch (t) {
        case SingularPointType::Hyperbolic: return "Hyperbolic";
        case SingularPointType::Inflection: return "Inflection";
        case SingularPointType::DegenerateInflection: return "DegenerateInflection";
    }
    return "?";
}

Jet2 distance_jet(const NormalFormCoeffs& nf, const ProbePoint& p, int order) {
    if (order > nf.order()) throw UsageError("distance jet order exceeds the normal form order");
    if (order < 0) throw UsageError("distance jet order must be nonnegative");
    const ScalarMode mode = weaker(nf.mode(), p.mode());
    const GermJets g = nf.reconstruct().with_order(order).in_mode(mode);
    const auto c = [&](const Scalar& s) { return Jet2::constant(s.in_mode(mode), order, mode); };
    const Jet2 dx = g.x - c(p.x0), dy = g.y - c(p.y0), dz = g.z - c(p.z0);
    return (dx * dx + dy * dy + dz * dz).scaled(Scalar::rational(1, 2).in_mode(mode));
}

DistanceVerdict classify_distance(const NormalFormCoeffs& nf, const ProbePoint& p) { return classify_impl(nf, p); }

std::vector<Jet2> distance_family_generators(const NormalFormCoeffs& nf, const ProbePoint& p, int order) {
    const ScalarMode mode = weaker(nf.mode(), p.mode());
    const GermJets g = nf.reconstruct().with_order(order).in_mode(mode);
    const auto c = [&](const Scalar& s) { return Jet2::constant(s.in_mode(mode), order, mode); };
    return {c(p.x0) - g.x, c(p.y0) - g.y, c(p.z0) - g.z};
}

bool versality_rank_test(const NormalFormCoeffs& nf, const ProbePoint& p, VersalityFlavor flavor) {
    const int jet_order = nf.order();
    const int max_order = jet_order - 1;
    if (max_order < 1) throw UsageError("versality test needs a normal form of order >= 2");
    const Jet2 d = distance_jet(nf, p, jet_order);

    const SingularityType type = function_type(d, jet_order);
    int needed = max_order;
    switch (type.tag) {
        case SingularityTag::Regular: needed = 1; break;
        case SingularityTag::A: needed = type.k + 1; break;
        case SingularityTag::D4: needed = 3; break;
        case SingularityTag::MoreDegenerate: needed = max_order; break;
    }
    const int order = std::min(needed, max_order);
    const bool ok = versality_rank_oracle(distance_family_generators(nf, p, order), d, flavor, order);
    if (ok && order < needed) throw UsageError("jet order too low to decide versality");
    return ok;
}

FocalLocus focal_locus(const NormalFormCoeffs& nf) {
    FocalLocus out;
    FocalLine principal{Scalar(1), Scalar(0), Scalar(0), {0.0, 1.0}, {0.0, 0.0}};
    out.lines.push_back(principal);
    const Scalar a20 = nf.a(2, 0), b2 = nf.b(2);
    const bool a20_zero = nf.is_zero(a20), b2_zero = nf.is_zero(b2);
    if (a20_zero && b2_zero) {
        out.kind = FocalKind::SingleLine;
        return out;
    }
    const double by = b2.to_double(), az = a20.to_double();
    const double n2 = by * by + az * az;
    out.lines.push_back(FocalLine{b2, a20, Scalar::one(nf.mode()), unit(az, -by), {by / n2, az / n2}});
    if (!a20_zero) {
        out.kind = FocalKind::IntersectingPair;
        out.intersection = std::array<Scalar, 2>{Scalar::zero(nf.mode()), Scalar::one(nf.mode()) / a20};
    } else {
        out.kind = FocalKind::ParallelPair;
    }
    return out;
}

SingularPointType singular_point_type(const NormalFormCoeffs& nf) {
    if (!nf.is_zero(nf.a(2, 0))) return SingularPointType::Hyperbolic;
    if (!nf.is_zero(nf.b(2))) return SingularPointType::Inflection;
    return SingularPointType::DegenerateInflection;
}

ExpectedVerdict expected_from_flags(const GeometricFlags& f) {
    using T = DistanceSingType;
    if (f.principal_normal) {
        if (f.at_focal_intersection) return {{T::D4plus}, false, false};
        return {{T::A2, T::A3, T::A4plus}, false, false};
    }
    if (!f.on_focal_locus) return {{T::A1}, true, true};
    if (!f.is_ridge) return {{T::A2}, true, true};
    if (f.is_first_order_ridge) return {{T::A3}, true, !f.is_subparabolic};
    ExpectedVerdict e{{T::A4plus}, std::nullopt, false};
    if (f.ridge_everywhere) e.r_plus_versal = false;
    return e;
}

bool routes_agree(const DistanceVerdict& v, const ExpectedVerdict& e) {
    if (std::find(e.allowed.begin(), e.allowed.end(), v.sing_type) == e.allowed.end()) return false;
    if (e.r_plus_versal && *e.r_plus_versal != v.r_plus_versal) return false;
    if (e.k_versal && *e.k_versal != v.k_versal) return false;
    return true;
}

namespace {

void require_agreement(const GeometricVerdict& g) {
    if (routes_agree(g.coefficient, g.expected)) return;
    throw ConsistencyError("geometric verdict disagrees with the coefficient verdict: coefficient route gives " +
                           to_string(g.coefficient.sing_type) + " (condition " + g.coefficient.condition + ")");
}

}  // namespace

GeometricVerdict geometric_verdict(const BlowupContext& ctx, double theta0, double lambda) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw UsageError("lambda must be finite and nonzero");
    const Vec3 nrm = extended_normal_at(ctx, 0.0, theta0);
    const ProbePoint p{Scalar(lambda * nrm[0]), Scalar(lambda * nrm[1]), Scalar(lambda * nrm[2])};
    const NormalFormCoeffs nf = ctx.nf().in_mode(ScalarMode::Float);

    GeometricVerdict out;
    GeometricFlags& f = out.flags;
    const RidgeReport rr = ridge_report(ctx, theta0);
    f.principal_normal = std::abs(std::cos(theta0)) <= kCosTolerance;
    f.ridge_everywhere = nf.is_zero(nf.a(3, 0)) && nf.is_zero(nf.b(3));
    if (f.principal_normal) {
        const double a20 = ctx.a(2, 0);
        f.at_focal_intersection = !nf.is_zero(nf.a(2, 0)) && near_one(a20 * lambda * nrm[2]);
    } else {
        f.parabolic = rr.point_type == PointType::Parabolic;
        f.on_focal_locus = !f.parabolic && near_one(lambda * k10_at(ctx, theta0));
        f.is_ridge = rr.is_ridge;
        f.is_first_order_ridge = rr.is_first_order_ridge;
        f.is_subparabolic = rr.is_subparabolic;
    }
    out.expected = expected_from_flags(f);
    out.coefficient = classify_distance(nf, p);
    require_agreement(out);
    return out;
}

std::optional<mpq_class> focal_mu(const NormalFormCoeffs& nf, int n, const mpq_class& c, const mpq_class& s) {
    const NormalFormCoeffs ex = nf.in_mode(ScalarMode::Exact);
    const mpq_class a = ex.a(n + 1, 1).exact(), f = factorial(n + 1);
    const mpq_class den = -a * ex.b(2).exact() * c + f * ex.a(2, 0).exact() * s;
    if (den == 0) return std::nullopt;
    return mpq_class(1 / den);
}

GeometricVerdict geometric_verdict_exact(const NormalFormCoeffs& nf_in, int n, const mpq_class& c, const mpq_class& s,
                                         const mpq_class& mu) {
    if (c == 0 && s == 0) throw UsageError("direction (c, s) must be nonzero");
    if (mu == 0) throw UsageError("mu must be nonzero");
    if (nf_in.mode() != ScalarMode::Exact) throw UsageError("exact geometric verdict needs an exact normal form");
    const NormalFormCoeffs& nf = nf_in;
    const auto A = [&](int i, int j) { return nf.a(i, j).exact(); };
    const auto B = [&](int i) { return nf.b(i).exact(); };
    const mpq_class a = A(n + 1, 1), f = factorial(n + 1);
    if (a == 0) throw UsageError("a_{n+1,1} vanishes: the blow-up is not regular");

    const ProbePoint p{Scalar(0), Scalar(mpq_class(-mu * a * c)), Scalar(mpq_class(mu * f * s))};

    GeometricVerdict out;
    GeometricFlags& g = out.flags;
    const mpq_class d1 = a * B(3) * c - f * A(3, 0) * s;
    const mpq_class d2 = -(a * B(4) * c - f * A(4, 0) * s) * c +
                         3 * (A(2, 0) * A(2, 0) + B(2) * B(2)) * (a * B(2) * c - f * A(2, 0) * s) * c + 12 * A(2, 1) * s * s;
    const mpq_class d3 = A(2, 0) * a * c + f * B(2) * s;
    const mpq_class curv = -a * B(2) * c + f * A(2, 0) * s;

    g.principal_normal = c == 0;
    g.ridge_everywhere = A(3, 0) == 0 && B(3) == 0;
    if (g.principal_normal) {
        g.at_focal_intersection = A(2, 0) * p.z0.exact() == 1;
    } else {
        g.parabolic = curv == 0;
        g.on_focal_locus = !g.parabolic && mu * curv == 1;
        g.is_ridge = d1 == 0;
        g.is_first_order_ridge = g.is_ridge && d2 != 0;
        g.is_subparabolic = d3 == 0;
    }
    out.expected = expected_from_flags(g);
    out.coefficient = classify_distance(nf, p);
    require_agreement(out);
    return out;
}

Json distance_json(const DistanceVerdict& v) {
    Json j;
    j["p0"] = Json::array({number_json(v.p0.x0), number_json(v.p0.y0), number_json(v.p0.z0)});
    j["sing_type"] = to_string(v.sing_type);
    j["branch"] = to_string(v.branch);
    j["condition"] = v.condition;
    j["r_plus_versal"] = v.r_plus_versal;
    j["k_versal"] = v.k_versal;
    j["exact_k"] = v.exact_k ? Json(*v.exact_k) : Json(nullptr);
    Json w = Json::object();
    for (const WitnessValue& wv : v.witness) w[wv.name] = {{"value", number_json(wv.value)}, {"zero", wv.zero}};
    j["witness"] = w;
    return j;
}

Json focal_json(const FocalLocus& f) {
    Json j;
    j["kind"] = to_string(f.kind);
    Json lines = Json::array();
    for (const FocalLine& l : f.lines) {
        Json lj;
        lj["equation"] = {{"cy", number_json(l.cy)}, {"cz", number_json(l.cz)}, {"rhs", number_json(l.rhs)}};
        lj["direction"] = Json::array({number_json(l.direction[0]), number_json(l.direction[1])});
        lj["point"] = Json::array({number_json(l.point[0]), number_json(l.point[1])});
        lines.push_back(lj);
    }
    j["lines"] = lines;
    j["intersection"] = f.intersection ? Json::array({number_json((*f.intersection)[0]), number_json((*f.intersection)[1])})
                                       : Json(nullptr);
    return j;
}

}  // namespace germforge
