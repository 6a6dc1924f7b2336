#include "germforge/blowup.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace germforge {

namespace {

Poly2 to_poly(const Jet2& j) {
    Poly2 p;
    for (const auto& [e, c] : j.terms()) p[e] = c.to_double();
    return p;
}

Poly2 derivative(const Poly2& p, Var var) {
    Poly2 out;
    for (const auto& [e, c] : p) {
        const int k = var == Var::U ? e.i : e.j;
        if (k == 0) continue;
        const Exponent d = var == Var::U ? Exponent{e.i - 1, e.j} : Exponent{e.i, e.j - 1};
        out[d] += c * k;
    }
    return out;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) out[{ea.i + eb.i, ea.j + eb.j}] += ca * cb;
    return out;
}

Poly2 operator-(const Poly2& a, const Poly2& b) {
    Poly2 out = a;
    for (const auto& [e, c] : b) out[e] -= c;
    return out;
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 out = a;
    for (const auto& [e, c] : b) out[e] += c;
    return out;
}

std::array<Poly2, 3> cross(const std::array<Poly2, 3>& a, const std::array<Poly2, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Poly2 dot(const std::array<Poly2, 3>& a, const std::array<Poly2, 3>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double ipow(double x, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= x;
    return out;
}

Series dot(const std::array<Series, 3>& a, const std::array<Series, 3>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

std::array<Series, 3> at(const BlowupContext& ctx, const std::array<Poly2, 3>& p, double theta, int depth) {
    return {pullback_series(ctx, p[0]).at(theta, depth), pullback_series(ctx, p[1]).at(theta, depth),
            pullback_series(ctx, p[2]).at(theta, depth)};
}

// Everything the curvature computations need at one angle, to an internal depth
// deep enough that the later shifts by powers of r lose nothing below `depth`.
struct FormsAtTheta {
    int depth = 0;
    std::array<Series, 3> normal;
    Series E, F, G, L, M, N;
};

FormsAtTheta forms_at(const BlowupContext& ctx, double theta, int depth) {
    const int n = ctx.n();
    const int inner = depth + 2 * n + 2;
    FormsAtTheta f;
    f.depth = inner - n;

    std::array<Series, 3> bracket;
    for (int k = 0; k < 3; ++k) bracket[k] = ctx.normal_bracket()[k].at(theta, inner);
    const Series inv_norm = reciprocal(sqrt(dot(bracket, bracket)));
    for (int k = 0; k < 3; ++k) f.normal[k] = bracket[k] * inv_norm;

    f.E = pullback_series(ctx, dot(ctx.gu(), ctx.gu())).at(theta, inner);
    f.F = pullback_series(ctx, dot(ctx.gu(), ctx.gv())).at(theta, inner + n + 2).shifted_down(n + 2);
    f.G = pullback_series(ctx, dot(ctx.gv(), ctx.gv())).at(theta, inner + 2 * n + 2).shifted_down(2 * n + 2);
    f.L = dot(at(ctx, ctx.guu(), theta, inner), f.normal);
    f.M = dot(at(ctx, ctx.guv(), theta, inner), f.normal).shifted_down(n);
    f.N = dot(at(ctx, ctx.gvv(), theta, inner), f.normal);
    return f;
}

void require_off_principal(double theta) {
    if (std::abs(std::cos(theta)) <= kCosTolerance) throw PrincipalNormalDirection(theta);
}

struct CurvaturePipeline {
    Series K, k1, k2;
    bool swapped = false;
    LiftSeries lifts;
};

CurvaturePipeline curvature_pipeline(const BlowupContext& ctx, double theta, int depth) {
    require_off_principal(theta);
    const FormsAtTheta f = forms_at(ctx, theta, depth);
    const int n = ctx.n();
    const int lift = 2 * n + 2;

    const Series W = f.E * f.G - (f.F * f.F).shifted_up(2);
    const Series P = f.L * f.N - (f.M * f.M).shifted_up(2 * n);
    const Series T = f.E * f.N + (f.G * f.L - 2.0 * (f.F * f.M)).shifted_up(lift);
    const Series disc = T * T - 4.0 * (W * P).shifted_up(lift);
    const double sgn = T[0] < 0 ? -1.0 : 1.0;
    const Series S = sgn * sqrt(disc);

    CurvaturePipeline out;
    out.swapped = f.N[0] < 0;
    out.K = P / W;
    out.k2 = (T + S) / (2.0 * W);
    out.k1 = 2.0 * P / (T + S);

    const double c = std::cos(theta), s = std::sin(theta);
    const double r_u = c - n * s * s / c;
    const double r_v = s / ipow(c, n);
    const double th_v = ipow(c, 1) / ipow(c, n);

    // v1 = (N - k1 G) d_u - (M - k1 F) d_v, with M - k1 F = r^n (M^ - r^2 k1 F^)
    const Series A1 = f.N - (out.k1 * f.G).shifted_up(lift);
    const Series B1 = f.M - (out.k1 * f.F).shifted_up(2);
    const Series xi1 = r_u * A1 - r_v * B1;
    const Series r_eta1 = -((n + 1) * s) * A1 - th_v * B1;
    out.lifts.xi10 = xi1[0];
    out.lifts.xi11 = xi1[1];
    out.lifts.eta10 = r_eta1[1];
    out.lifts.eta11 = r_eta1[2];

    // v2 with kappa2 = k2 / r^(2n+2); both components scaled by r^(2n+1)
    const Series A2 = f.N - out.k2 * f.G;
    const Series k2F = out.k2 * f.F;
    const Series r_xi2 = r_v * k2F.shifted_up(1) + (r_u * A2 - r_v * f.M).shifted_up(2 * n + 1);
    const Series r_eta2 = th_v * k2F - ((n + 1) * s * A2 + th_v * f.M).shifted_up(2 * n);
    out.lifts.xi21 = r_xi2[1];
    out.lifts.eta20 = r_eta2[0];
    out.lifts.eta21 = r_eta2[1];

    out.K = out.K.truncated(depth);
    out.k1 = out.k1.truncated(depth);
    out.k2 = out.k2.truncated(depth);
    return out;
}

bool near_zero(double value, double scale) { return std::abs(value) <= 1e-9 * std::max(scale, 1e-300); }

}  // namespace

PrincipalNormalDirection::PrincipalNormalDirection(double theta)
    : UsageError([&] {
          std::ostringstream os;
          os.precision(17);
          os << "theta = " << theta << " is the principal normal direction (cos theta = 0)";
          return os.str();
      }()) {}

double TrigSeries::coeff(int r, int c, int s) const {
    const auto it = terms_.find({r, c, s});
    return it == terms_.end() ? 0.0 : it->second;
}

void TrigSeries::add_term(const TrigMonomial& m, double value) {
    if (value == 0.0) return;
    const double sum = (terms_[m] += value);
    if (sum == 0.0) terms_.erase(m);
}

Series TrigSeries::at(double theta, int depth) const {
    const double c = std::cos(theta), s = std::sin(theta);
    Series out = Series::zero(depth);
    for (const auto& [m, v] : terms_)
        if (m.r <= depth) out.at(m.r) += v * ipow(c, m.c) * ipow(s, m.s);
    return out;
}

double TrigSeries::evaluate(double r, double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    double acc = 0.0;
    for (const auto& [m, v] : terms_) acc += v * ipow(r, m.r) * ipow(c, m.c) * ipow(s, m.s);
    return acc;
}

TrigSeries TrigSeries::divided_by(const TrigMonomial& d) const {
    TrigSeries out;
    for (const auto& [m, v] : terms_) {
        if (m.r < d.r || m.c < d.c || m.s < d.s) throw ConsistencyError("blow-up bracket is not divisible by r^(n+1) cos^n");
        out.add_term({m.r - d.r, m.c - d.c, m.s - d.s}, v);
    }
    return out;
}

TrigSeries operator+(const TrigSeries& a, const TrigSeries& b) {
    TrigSeries out = a;
    for (const auto& [m, v] : b.terms_) out.add_term(m, v);
    return out;
}

TrigSeries operator-(const TrigSeries& a, const TrigSeries& b) {
    TrigSeries out = a;
    for (const auto& [m, v] : b.terms_) out.add_term(m, -v);
    return out;
}

TrigSeries operator*(const TrigSeries& a, const TrigSeries& b) {
    TrigSeries out;
    for (const auto& [ma, va] : a.terms_)
        for (const auto& [mb, vb] : b.terms_) out.add_term({ma.r + mb.r, ma.c + mb.c, ma.s + mb.s}, va * vb);
    return out;
}

BlowupContext::BlowupContext(const NormalFormCoeffs& nf, int n) : nf_(nf), n_(n), fact_(1.0) {
    if (n < 1) throw UsageError("blow-up exponent must be at least 1");
    for (int i = 2; i <= n + 1; ++i) fact_ *= i;
    if (nf.is_zero(nf.a(n + 1, 1)))
        throw ConsistencyError("a_{" + std::to_string(n + 1) + ",1} vanishes: blow-up exponent inconsistent with the class");
    for (int i = 2; i <= n; ++i)
        if (!nf.is_zero(nf.a(i, 1)))
            throw ConsistencyError("a_{" + std::to_string(i) + ",1} is nonzero: blow-up exponent inconsistent with the class");

    const GermJets germ = nf.reconstruct();
    g_ = {to_poly(germ.x), to_poly(germ.y), to_poly(germ.z)};
    for (int k = 0; k < 3; ++k) {
        gu_[k] = derivative(g_[k], Var::U);
        gv_[k] = derivative(g_[k], Var::V);
        guu_[k] = derivative(gu_[k], Var::U);
        guv_[k] = derivative(gu_[k], Var::V);
        gvv_[k] = derivative(gv_[k], Var::V);
    }
    const std::array<Poly2, 3> x = cross(gu_, gv_);
    for (int k = 0; k < 3; ++k) bracket_[k] = pullback_series(*this, x[k]).divided_by({n + 1, n, 0});
}

double BlowupContext::a(int i, int j) const { return nf_.a(i, j).to_double(); }
double BlowupContext::b(int i) const { return nf_.b(i).to_double(); }

double BlowupContext::ma(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return std::sqrt(lead() * lead() * c * c + fact_ * fact_ * s * s);
}

int blowup_exponent(const MondClass& cls) {
    switch (cls.tag) {
        case MondTag::S:
            if (cls.k >= 1) return cls.k;
            break;
        case MondTag::B:
            return 1;
        case MondTag::C:
            return cls.k - 1;
        case MondTag::F4:
            return 2;
        default:
            break;
    }
    throw UsageError("class " + cls.label() + " has no blow-up chart (need S_k, B_k, C_k or F4)");
}

BlowupContext build_context(const NormalFormCoeffs& nf, const MondClass& cls) { return BlowupContext(nf, blowup_exponent(cls)); }

double evaluate(const Poly2& p, double u, double v) {
    double acc = 0.0;
    for (const auto& [e, c] : p) acc += c * ipow(u, e.i) * ipow(v, e.j);
    return acc;
}

TrigSeries pullback_series(const BlowupContext& ctx, const Poly2& p) {
    const int n = ctx.n();
    TrigSeries out;
    for (const auto& [e, c] : p) out.add_term({e.i + e.j * (n + 1), e.i + e.j * n, e.j}, c);
    return out;
}

TrigSeries pullback_series(const BlowupContext& ctx, const Jet2& p) { return pullback_series(ctx, to_poly(p)); }

NormalSeries extended_normal(const BlowupContext& ctx, double theta, int depth) {
    std::array<Series, 3> bracket;
    for (int k = 0; k < 3; ++k) bracket[k] = ctx.normal_bracket()[k].at(theta, depth);
    const Series inv_norm = reciprocal(sqrt(dot(bracket, bracket)));
    NormalSeries out;
    for (int k = 0; k < 3; ++k) out.n[k] = bracket[k] * inv_norm;
    return out;
}

FormSeries fundamental_forms(const BlowupContext& ctx, double theta, int depth) {
    const FormsAtTheta f = forms_at(ctx, theta, depth);
    return {f.E.truncated(depth), f.F.truncated(depth), f.G.truncated(depth),
            f.L.truncated(depth), f.M.truncated(depth), f.N.truncated(depth)};
}

CurvatureSeries curvature_series(const BlowupContext& ctx, double theta, int depth) {
    const CurvaturePipeline p = curvature_pipeline(ctx, theta, depth);
    CurvatureSeries out;
    out.K = p.K;
    out.k1 = p.k1;
    out.k2 = p.k2;
    out.swapped = p.swapped;
    out.lifts = p.lifts;
    return out;
}

LiftSeries principal_direction_lifts(const BlowupContext& ctx, double theta) { return curvature_pipeline(ctx, theta, kDefaultDepth).lifts; }

double k10_at(const BlowupContext& ctx, double theta) {
    const NormalSeries nrm = extended_normal(ctx, theta, 0);
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) acc += pullback_series(ctx, ctx.guu()[k]).at(theta, 0)[0] * nrm.n[k][0];
    return acc;
}

LeadingClosedForms leading_closed_forms(const BlowupContext& ctx, double theta) {
    const int n = ctx.n();
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = ctx.lead(), f = ctx.fact(), ma = ctx.ma(theta);
    const double a20 = ctx.a(2, 0), a30 = ctx.a(3, 0), a12 = ctx.a(1, 2), an2 = ctx.a(n + 2, 1);
    const double b2 = ctx.b(2), b3 = ctx.b(3);
    const double f2 = f * (n + 2);
    const bool principal = std::abs(c) <= kCosTolerance;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double ma3 = ma * ma * ma;

    LeadingClosedForms out{};
    out.n20 = -a * c / ma;
    out.n30 = f * s / ma;
    out.E2 = (a20 * a20 + b2 * b2) * c * c;
    out.F0 = (a * a20 / f * c + b2 * s) * ipow(c, n + 1);
    out.G0 = ((a / f) * (a / f) * c * c + s * s) * ipow(c, 2 * n);
    out.F1 = ((an2 * a20 / f2 + a * a30 / (2 * f)) * c + (a12 * a20 + b3 / 2) * s) * ipow(c, n + 2);
    out.G1 = 2 * a / f * (an2 / f2 * c + a12 * s) * ipow(c, 2 * n + 2);
    out.L0 = (-a * b2 * c + f * a20 * s) / ma;
    out.M0 = (n + 1) * a * ipow(c, n) * s / ma;
    out.N0 = -a * c / ma;
    out.k10 = out.L0;
    out.xi10 = -a / ma;
    out.eta10 = -(f2 * a12 * s + an2 * c) * c * s / ((n + 2) * ma);
    if (principal) {
        out.K0 = out.k20 = out.xi21 = out.eta20 = nan;
    } else {
        out.K0 = f * f * a * (a * b2 * c - f * a20 * s) / (ma3 * ma * ipow(c, 2 * n - 1));
        out.k20 = -f * f * a / (ma3 * ipow(c, 2 * n - 1));
        const double d3 = a20 * a * c + f * b2 * s;
        out.xi21 = -f * a * d3 * s / (ma3 * std::pow(c, n - 2));
        out.eta20 = -f * a * d3 / (ma3 * std::pow(c, n - 1));
    }
    return out;
}

RawCurvature raw_curvature(const BlowupContext& ctx, double r, double theta) {
    const int n = ctx.n();
    const double c = std::cos(theta), s = std::sin(theta);
    const double u = r * c, v = ipow(r, n + 1) * ipow(c, n) * s;
    auto eval3 = [&](const std::array<Poly2, 3>& p) { return Vec3{evaluate(p[0], u, v), evaluate(p[1], u, v), evaluate(p[2], u, v)}; };
    auto dot3 = [](const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; };
    const Vec3 gu = eval3(ctx.gu()), gv = eval3(ctx.gv());
    Vec3 nrm{gu[1] * gv[2] - gu[2] * gv[1], gu[2] * gv[0] - gu[0] * gv[2], gu[0] * gv[1] - gu[1] * gv[0]};
    const double orient = ipow(r, n + 1) * ipow(c, n) < 0 ? -1.0 : 1.0;
    const double len = std::sqrt(dot3(nrm, nrm));
    for (double& x : nrm) x *= orient / len;

    const double E = dot3(gu, gu), F = dot3(gu, gv), G = dot3(gv, gv);
    const double L = dot3(eval3(ctx.guu()), nrm), M = dot3(eval3(ctx.guv()), nrm), N = dot3(eval3(ctx.gvv()), nrm);
    const double W = E * G - F * F, P = L * N - M * M, T = E * N - 2 * F * M + G * L;
    const double S = (T < 0 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, T * T - 4 * W * P));

    RawCurvature out;
    out.K = P / W;
    out.kappa2 = (T + S) / (2 * W);
    out.kappa1 = 2 * P / (T + S);
    out.point = eval3(ctx.g());
    out.normal = nrm;
    return out;
}

Vec3 extended_normal_at(const BlowupContext& ctx, double r, double theta) {
    Vec3 x{};
    for (int k = 0; k < 3; ++k) x[k] = ctx.normal_bracket()[k].evaluate(r, theta);
    const double len = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    for (double& e : x) e /= len;
    return x;
}

double delta1(const BlowupContext& ctx, double theta) {
    return ctx.lead() * ctx.b(3) * std::cos(theta) - ctx.fact() * ctx.a(3, 0) * std::sin(theta);
}

double delta2(const BlowupContext& ctx, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = ctx.lead(), f = ctx.fact();
    const double a20 = ctx.a(2, 0), b2 = ctx.b(2);
    return -(a * ctx.b(4) * c - f * ctx.a(4, 0) * s) * c + 3 * (a20 * a20 + b2 * b2) * (a * b2 * c - f * a20 * s) * c +
           12 * ctx.a(2, 1) * s * s;
}

double delta3(const BlowupContext& ctx, double theta) {
    return ctx.a(2, 0) * ctx.lead() * std::cos(theta) + ctx.fact() * ctx.b(2) * std::sin(theta);
}

std::string to_string(PointType t) {
    switch (t) {
        case PointType::Elliptic: return "Elliptic";
        case PointType::Hyperbolic: return "Hyperbolic";
        case PointType::Parabolic: return "Parabolic";
    }
    return "?";
}

RidgeReport ridge_report(const BlowupContext& ctx, double theta) {
    const double a = std::abs(ctx.lead()), f = ctx.fact();
    const double a20 = std::abs(ctx.a(2, 0)), b2 = std::abs(ctx.b(2));
    const double scale1 = a * std::abs(ctx.b(3)) + f * std::abs(ctx.a(3, 0));
    const double scale2 = a * std::abs(ctx.b(4)) + f * std::abs(ctx.a(4, 0)) + 3 * (a20 * a20 + b2 * b2) * (a * b2 + f * a20) +
                          12 * std::abs(ctx.a(2, 1));
    const double scale3 = a20 * a + f * b2;

    RidgeReport out;
    out.theta = theta;
    out.delta1 = delta1(ctx, theta);
    out.delta2 = delta2(ctx, theta);
    out.delta3 = delta3(ctx, theta);
    out.is_ridge = scale1 == 0.0 || near_zero(out.delta1, scale1);
    out.is_first_order_ridge = out.is_ridge && !(scale2 == 0.0 || near_zero(out.delta2, scale2));
    out.is_subparabolic = scale3 == 0.0 || near_zero(out.delta3, scale3);

    const double c = std::cos(theta), s = std::sin(theta);
    if (std::abs(c) > kCosTolerance) {
        // sign of K0 is the sign of a_{n+1,1} (a_{n+1,1} b2 cos - (n+1)! a20 sin) for cos > 0
        const double num = ctx.lead() * (ctx.lead() * ctx.b(2) * c - f * ctx.a(2, 0) * s) * (c < 0 ? -1.0 : 1.0);
        const double scale = a * (a * b2 + f * a20);
        if (scale == 0.0 || near_zero(num, scale))
            out.point_type = PointType::Parabolic;
        else
            out.point_type = num > 0 ? PointType::Elliptic : PointType::Hyperbolic;
    }
    return out;
}

std::vector<double> theta_grid(int samples) {
    if (samples < 1) throw UsageError("theta grid needs at least one sample");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int k = 1; k <= samples; ++k) out.push_back(-std::numbers::pi / 2 + std::numbers::pi * k / samples);
    out.back() = std::numbers::pi / 2;
    return out;
}

Json geometry_json(const BlowupContext& ctx, const std::vector<double>& thetas) {
    Json records = Json::array();
    for (const double theta : thetas) {
        const RidgeReport rr = ridge_report(ctx, theta);
        Json rec;
        rec["theta"] = number_json(theta);
        Json flags{{"ridge", rr.is_ridge}, {"first_order_ridge", rr.is_first_order_ridge}, {"subparabolic", rr.is_subparabolic}};
        if (std::abs(std::cos(theta)) > kCosTolerance) {
            const CurvatureSeries cs = curvature_series(ctx, theta);
            rec["K0"] = number_json(cs.K0());
            rec["k10"] = number_json(cs.k10());
            rec["k20"] = number_json(cs.k20());
            flags["swapped"] = cs.swapped;
        } else {
            rec["K0"] = nullptr;
            rec["k10"] = number_json(k10_at(ctx, theta));
            rec["k20"] = nullptr;
            flags["swapped"] = nullptr;
        }
        rec["delta1"] = number_json(rr.delta1);
        rec["delta2"] = number_json(rr.delta2);
        rec["delta3"] = number_json(rr.delta3);
        rec["point_type"] = rr.point_type ? Json(to_string(*rr.point_type)) : Json(nullptr);
        rec["flags"] = flags;
        records.push_back(rec);
    }
    Json out;
    out["n"] = ctx.n();
    out["epsilon"] = ctx.epsilon();
    out["records"] = records;
    return out;
}

}  // namespace germforge
