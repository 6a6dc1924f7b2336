#include <doctest.h>

#include "germforge/blowup.hpp"
#include "germforge/germ_io.hpp"
#include "support/generators.hpp"

#include <cmath>
#include <numbers>

using namespace germforge;
using namespace germforge::testing;

namespace {

constexpr double kPi = std::numbers::pi;

NormalFormCoeffs s1_example() {
    const VariableNames xy{"x", "y"};
    const GermJets g(parse_polynomial("x", xy, 8), parse_polynomial("y^2", xy, 8), parse_polynomial("x^2*y + y^3", xy, 8));
    return reduce_to_normal_form(g, 8).nf;
}

struct ClassCase {
    MondTag tag;
    int k;
    int n;
};

const ClassCase kCases[] = {{MondTag::S, 1, 1}, {MondTag::S, 2, 2}, {MondTag::S, 3, 3},
                            {MondTag::B, 2, 1}, {MondTag::C, 3, 2}, {MondTag::F4, 4, 2}};

bool close(double got, double want, double tol = 1e-9) { return std::abs(got - want) <= tol * (1.0 + std::abs(want)); }

// Raw principal data at Pi(r, theta): forms, the two curvatures and their eigen-directions in (r, theta).
struct RawFrame {
    double E, F, G, L, M, N;
};

RawFrame raw_frame(const BlowupContext& ctx, double r, double theta) {
    const int n = ctx.n();
    const double u = r * std::cos(theta), v = std::pow(r, n + 1) * std::pow(std::cos(theta), n) * std::sin(theta);
    auto ev = [&](const std::array<Poly2, 3>& p) { return std::array<double, 3>{evaluate(p[0], u, v), evaluate(p[1], u, v), evaluate(p[2], u, v)}; };
    auto dot = [](const std::array<double, 3>& a, const std::array<double, 3>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    const auto gu = ev(ctx.gu()), gv = ev(ctx.gv());
    const Vec3 nrm = raw_curvature(ctx, r, theta).normal;
    const std::array<double, 3> nn{nrm[0], nrm[1], nrm[2]};
    return {dot(gu, gu), dot(gu, gv), dot(gv, gv), dot(ev(ctx.guu()), nn), dot(ev(ctx.guv()), nn), dot(ev(ctx.gvv()), nn)};
}

// Direction (N - k G) d_u - (M - k F) d_v pulled back to (d_r, d_theta).
std::array<double, 2> raw_direction(const BlowupContext& ctx, const RawFrame& f, double kappa, double r, double theta) {
    const int n = ctx.n();
    const double c = std::cos(theta), s = std::sin(theta);
    const double du = f.N - kappa * f.G, dv = -(f.M - kappa * f.F);
    const double dr = (c - n * s * s / c) * du + s / (std::pow(r, n) * std::pow(c, n)) * dv;
    const double dth = -(n + 1) * s / r * du + std::pow(c, 1 - n) / std::pow(r, n + 1) * dv;
    return {dr, dth};
}

}  // namespace

TEST_CASE("pullback of monomials") {
    const NormalFormCoeffs nf = s1_example();
    const BlowupContext ctx1(nf, 1);
    const TrigSeries uv = pullback_series(ctx1, Poly2{{Exponent{1, 1}, 1.0}});
    CHECK(uv.terms().size() == 1);
    CHECK(uv.coeff(3, 2, 1) == 1.0);

    NormalFormCoeffs nf2(6, ScalarMode::Exact);
    nf2.set_a(3, 1, Scalar(1));
    const BlowupContext ctx2(nf2, 2);
    const TrigSeries vv = pullback_series(ctx2, Poly2{{Exponent{0, 2}, 1.0}});
    CHECK(vv.coeff(6, 4, 2) == 1.0);
    CHECK(vv.evaluate(0.5, 0.3) == doctest::Approx(std::pow(0.5, 6) * std::pow(std::cos(0.3), 4) * std::pow(std::sin(0.3), 2)));

    const TrigSeries k = pullback_series(ctx1, Poly2{{Exponent{0, 0}, 2.5}});
    CHECK(k.coeff(0, 0, 0) == 2.5);
    CHECK(k.at(1.0, 3)[0] == 2.5);
    CHECK(k.at(1.0, 3)[1] == 0.0);
}

TEST_CASE("blow-up exponent per class") {
    std::mt19937_64 rng(11);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        CHECK(ctx.n() == cc.n);
        CHECK(ctx.epsilon() == (cc.n == 1 ? 1 : 0));
        CHECK(ctx.lead() != 0.0);
    }
    CHECK(blowup_exponent(MondClass::make(MondTag::B, 4, ClassSign::Plus)) == 1);
    CHECK_THROWS_AS(blowup_exponent(MondClass::make(MondTag::Immersion)), UsageError);

    NormalFormCoeffs nf(6, ScalarMode::Exact);
    nf.set_a(0, 3, Scalar(1));
    CHECK_THROWS_AS(BlowupContext(nf, 1), ConsistencyError);
}

TEST_CASE("extended normal of the S1 example") {
    const NormalFormCoeffs nf = s1_example();
    const BlowupContext ctx(nf, 1);
    CHECK(ctx.a(2, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(ctx.ma(kPi / 4) == doctest::Approx(std::sqrt(3.0)));

    const NormalSeries q = extended_normal(ctx, kPi / 4);
    CHECK(q.n[0][0] == doctest::Approx(0.0));
    CHECK(q.n[1][0] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(q.n[2][0] == doctest::Approx(std::sqrt(2.0) / std::sqrt(3.0)).epsilon(1e-12));

    const NormalSeries top = extended_normal(ctx, kPi / 2);
    CHECK(std::abs(top.n[1][0]) < 1e-12);
    CHECK(top.n[2][0] == doctest::Approx(1.0));

    const NormalSeries zero = extended_normal(ctx, 0.0);
    CHECK(zero.n[1][0] == doctest::Approx(-1.0));
    CHECK(std::abs(zero.n[2][0]) < 1e-12);
}

TEST_CASE("extended normal at theta = 0 follows the sign of the lead coefficient") {
    NormalFormCoeffs nf(6, ScalarMode::Exact);
    nf.set_a(2, 1, Scalar(-3));
    nf.set_a(0, 3, Scalar(1));
    const BlowupContext ctx(nf, 1);
    CHECK(extended_normal(ctx, 0.0).n[1][0] == doctest::Approx(1.0));
}

TEST_CASE("unit normal series on a 64-point grid") {
    std::mt19937_64 rng(5);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        for (const double theta : theta_grid(64)) {
            const NormalSeries q = extended_normal(ctx, theta);
            const Series len = q.n[0] * q.n[0] + q.n[1] * q.n[1] + q.n[2] * q.n[2];
            CHECK(close(len[0], 1.0, 1e-12));
            CHECK(std::abs(len[1]) < 1e-10);
            CHECK(std::abs(len[2]) < 1e-10);
            CHECK(std::abs(q.n[0][0]) < 1e-12);
        }
    }
}

TEST_CASE("pipeline agrees with the leading closed forms") {
    std::mt19937_64 rng(21);
    for (const ClassCase& cc : kCases) {
        for (int rep = 0; rep < 3; ++rep) {
            const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
            const BlowupContext ctx = build_context(nf, classify(nf).cls);
            for (const double theta : theta_grid(32)) {
                const LeadingClosedForms cf = leading_closed_forms(ctx, theta);
                const NormalSeries q = extended_normal(ctx, theta);
                const FormSeries fs = fundamental_forms(ctx, theta);
                CHECK(close(q.n[1][0], cf.n20));
                CHECK(close(q.n[2][0], cf.n30));
                CHECK(close(fs.E[0], 1.0));
                CHECK(std::abs(fs.E[1]) < 1e-12);
                CHECK(close(fs.E2(), cf.E2));
                CHECK(close(fs.F0(), cf.F0));
                CHECK(close(fs.F1(), cf.F1));
                CHECK(close(fs.G0(), cf.G0));
                CHECK(close(fs.G1(), cf.G1));
                CHECK(close(fs.L0(), cf.L0));
                CHECK(close(fs.M0(), cf.M0));
                CHECK(close(fs.N0(), cf.N0));
                CHECK(close(k10_at(ctx, theta), cf.k10));
                if (std::abs(std::cos(theta)) <= kCosTolerance) continue;
                CHECK(fs.G0() > 0.0);
                const CurvatureSeries cs = curvature_series(ctx, theta);
                CHECK(close(cs.K0(), cf.K0, 1e-8));
                CHECK(close(cs.k10(), cf.k10));
                CHECK(close(cs.k20(), cf.k20, 1e-8));
                CHECK(close(cs.lifts.xi10, cf.xi10));
                CHECK(close(cs.lifts.eta10, cf.eta10));
                CHECK(cs.swapped == (fs.N0() < 0));
            }
        }
    }
}

TEST_CASE("closed forms at the special angles") {
    std::mt19937_64 rng(8);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        const double a = ctx.lead(), f = ctx.fact();

        const FormSeries top = fundamental_forms(ctx, kPi / 2);
        CHECK(std::abs(top.E2()) < 1e-12);
        CHECK(std::abs(top.G0()) < 1e-12);
        CHECK(close(top.L0(), ctx.a(2, 0)));
        CHECK(close(k10_at(ctx, kPi / 2), ctx.a(2, 0)));
        CHECK_THROWS_AS(curvature_series(ctx, kPi / 2), PrincipalNormalDirection);
        CHECK_THROWS_AS(principal_direction_lifts(ctx, -kPi / 2), PrincipalNormalDirection);

        const CurvatureSeries zero = curvature_series(ctx, 0.0);
        CHECK(close(zero.K0(), f * f * ctx.b(2) / (a * a)));
        CHECK(std::abs(zero.lifts.eta10) < 1e-12);
        CHECK(close(zero.lifts.eta20, -f * ctx.a(2, 0) * a * a / std::pow(std::abs(a), 3)));
    }
}

TEST_CASE("curvature factorization identities") {
    std::mt19937_64 rng(3);
    int count = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const ClassCase& cc = kCases[rep % std::size(kCases)];
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        for (const double theta : theta_grid(32)) {
            if (std::abs(std::cos(theta)) <= kCosTolerance) continue;
            const CurvatureSeries cs = curvature_series(ctx, theta);
            const FormSeries fs = fundamental_forms(ctx, theta);
            const double scale = 1.0 + std::abs(cs.k10() * cs.k20()) + std::abs(cs.k11() * cs.k20()) + std::abs(cs.k10() * cs.k21());
            CHECK(std::abs(cs.K0() - cs.k10() * cs.k20()) <= 1e-10 * scale);
            CHECK(std::abs(cs.K1() - cs.k10() * cs.k21() - cs.k11() * cs.k20()) <= 1e-10 * scale);
            CHECK(std::abs(cs.k10() - fs.L0()) <= 1e-10 * (1.0 + std::abs(fs.L0())));
            CHECK(close(cs.k11(), fs.L1(), 1e-10));
            const double k12 = -fs.E2() * fs.L0() + fs.L2() - ctx.epsilon() * fs.M0() * fs.M0() / fs.N0();
            CHECK(close(cs.k12(), k12, 1e-9));
            ++count;
        }
    }
    CHECK(count == 20 * 31);
}

TEST_CASE("curvature series matches the raw curvature near the exceptional set") {
    const NormalFormCoeffs nf = s1_example();
    const BlowupContext ctx(nf, 1);
    const double theta = kPi / 6;
    const CurvatureSeries cs = curvature_series(ctx, theta);
    const double rs[] = {1e-2, 5e-3, 2.5e-3};
    double err[3];
    for (int i = 0; i < 3; ++i) {
        const double r = rs[i];
        const double scaled = std::pow(r, 4) * raw_curvature(ctx, r, theta).K;
        err[i] = std::abs(scaled - cs.K.evaluate(r));
    }
    const double order1 = std::log2(err[0] / err[1]), order2 = std::log2(err[1] / err[2]);
    CHECK(order1 >= 1.0);
    CHECK(order2 >= 1.0);
    CHECK(err[2] < 1e-5);
}

TEST_CASE("raw principal curvatures converge to the series on random germs") {
    std::mt19937_64 rng(13);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k, 10);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        const int lift = 2 * ctx.n() + 2;
        for (const double theta : {-1.0, -0.4, 0.2, 0.9}) {
            const CurvatureSeries cs = curvature_series(ctx, theta);
            const double r = 2e-3;
            const RawCurvature raw = raw_curvature(ctx, r, theta);
            CHECK(std::abs(raw.kappa1 - cs.k1.evaluate(r)) <= 1e-4 * (1.0 + std::abs(cs.k10())));
            CHECK(std::abs(std::pow(r, lift) * raw.kappa2 - cs.k2.evaluate(r)) <= 1e-4 * (1.0 + std::abs(cs.k20())));
        }
    }
}

TEST_CASE("lifted principal vectors are principal directions") {
    std::mt19937_64 rng(17);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k, 10);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        for (const double theta : {-1.1, -0.3, 0.5, 1.2}) {
            const LiftSeries lf = principal_direction_lifts(ctx, theta);
            CHECK(close(lf.xi21, std::tan(theta) * lf.eta20, 1e-9));
            double err1[2], err2[2];
            const double rs[] = {2e-3, 1e-3};
            for (int i = 0; i < 2; ++i) {
                const double r = rs[i];
                const RawFrame fr = raw_frame(ctx, r, theta);
                const RawCurvature rc = raw_curvature(ctx, r, theta);
                const auto d1 = raw_direction(ctx, fr, rc.kappa1, r, theta);
                const auto d2 = raw_direction(ctx, fr, rc.kappa2, r, theta);
                err1[i] = std::abs(d1[1] / d1[0] - (lf.eta10 + lf.eta11 * r) / (lf.xi10 + lf.xi11 * r));
                err2[i] = std::abs(d2[0] / d2[1] - lf.xi21 * r / (lf.eta20 + lf.eta21 * r));
            }
            // first-order lifts leave an O(r^2) error in the slope
            CHECK(err1[1] < 1e-4 * (1.0 + std::abs(lf.eta10 / lf.xi10)));
            CHECK(err2[1] < 1e-4 * (1.0 + std::abs(lf.xi21 / lf.eta20)));
            CHECK(err1[1] <= 0.35 * err1[0] + 1e-12);
            CHECK(err2[1] <= 0.35 * err2[0] + 1e-12);
        }
    }
}

TEST_CASE("ridge reports") {
    NormalFormCoeffs nf(8, ScalarMode::Exact);
    nf.set_a(2, 1, Scalar(2));
    nf.set_a(0, 3, Scalar(1));
    nf.set_a(2, 0, Scalar(1));
    nf.set_b(2, Scalar(3));
    nf.set_a(3, 0, Scalar(4));
    const BlowupContext ctx(nf, 1);

    const RidgeReport at0 = ridge_report(ctx, 0.0);
    CHECK(at0.delta1 == doctest::Approx(0.0));
    CHECK(at0.is_ridge);
    CHECK_FALSE(at0.is_subparabolic);
    CHECK(at0.point_type == PointType::Elliptic);

    const RidgeReport top = ridge_report(ctx, kPi / 2);
    CHECK(top.delta1 == doctest::Approx(-2.0 * 4.0));
    CHECK_FALSE(top.is_ridge);
    CHECK_FALSE(top.point_type.has_value());

    // Delta3 vanishes where tan = -a20 a / (2 b2)
    const double sub = std::atan(-1.0 * 2.0 / (2.0 * 3.0));
    CHECK(ridge_report(ctx, sub).is_subparabolic);

    // parabolic where a b2 cos = 2 a20 sin
    const double par = std::atan(2.0 * 3.0 / 2.0);
    CHECK(ridge_report(ctx, par).point_type == PointType::Parabolic);
    CHECK(ridge_report(ctx, par + 0.1).point_type == PointType::Hyperbolic);
    CHECK(ridge_report(ctx, par - 0.1).point_type == PointType::Elliptic);

    NormalFormCoeffs flat(8, ScalarMode::Exact);
    flat.set_a(2, 1, Scalar(1));
    flat.set_a(0, 3, Scalar(1));
    const BlowupContext fctx(flat, 1);
    for (const double theta : theta_grid(16)) CHECK(ridge_report(fctx, theta).is_ridge);
}

TEST_CASE("point type agrees with the sign of K0") {
    std::mt19937_64 rng(4);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        for (const double theta : theta_grid(32)) {
            const RidgeReport rr = ridge_report(ctx, theta);
            if (!rr.point_type) {
                CHECK(std::abs(std::cos(theta)) <= kCosTolerance);
                continue;
            }
            const double k0 = curvature_series(ctx, theta).K0();
            if (*rr.point_type == PointType::Elliptic) CHECK(k0 > 0);
            if (*rr.point_type == PointType::Hyperbolic) CHECK(k0 < 0);
        }
    }
}

TEST_CASE("Delta1 has at most one zero modulo pi") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 30; ++rep) {
        const ClassCase& cc = kCases[rep % std::size(kCases)];
        NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        const std::vector<double> grid = theta_grid(720);
        int changes = 0, ridges = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            ridges += ridge_report(ctx, grid[i]).is_ridge ? 1 : 0;
            if (i > 0 && delta1(ctx, grid[i - 1]) * delta1(ctx, grid[i]) < 0) ++changes;
        }
        if (ctx.b(3) == 0.0 && ctx.a(3, 0) == 0.0) {
            CHECK(ridges == static_cast<int>(grid.size()));
        } else {
            CHECK(changes <= 1);
            CHECK(ridges <= 2);
        }
    }
}

TEST_CASE("theta grid and geometry records") {
    const std::vector<double> g = theta_grid(64);
    CHECK(g.size() == 64);
    CHECK(g.back() == kPi / 2);
    CHECK(g.front() > -kPi / 2);
    CHECK_THROWS_AS(theta_grid(0), UsageError);

    const BlowupContext ctx(s1_example(), 1);
    const Json j = geometry_json(ctx, {0.0, kPi / 2});
    CHECK(j["n"] == 1);
    CHECK(j["epsilon"] == 1);
    CHECK(j["records"].size() == 2);
    CHECK(j["records"][1]["K0"].is_null());
    CHECK(j["records"][1]["point_type"].is_null());
    CHECK(j["records"][0]["flags"]["ridge"] == true);
    CHECK(j["records"][0]["point_type"] == "Parabolic");
}

TEST_CASE("normal and form series match direct evaluation to third order") {
    std::mt19937_64 rng(23);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k, 10);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        const int n = ctx.n();
        for (const double theta : {-1.2, -0.5, 0.3, 1.0}) {
            const NormalSeries q = extended_normal(ctx, theta);
            const FormSeries fs = fundamental_forms(ctx, theta);
            const double rs[] = {4e-3, 2e-3};
            double err_n[2], err_lmn[2];
            for (int i = 0; i < 2; ++i) {
                const double r = rs[i];
                const Vec3 nrm = extended_normal_at(ctx, r, theta);
                const RawFrame fr = raw_frame(ctx, r, theta);
                err_n[i] = 0.0;
                for (int k = 0; k < 3; ++k) err_n[i] = std::max(err_n[i], std::abs(nrm[k] - q.n[k].evaluate(r)));
                err_lmn[i] = std::max({std::abs(fr.L - fs.L.evaluate(r)), std::abs(fr.M / std::pow(r, n) - fs.M.evaluate(r)),
                                       std::abs(fr.N - fs.N.evaluate(r))});
            }
            // a third-order remainder shrinks eightfold when r halves
            CHECK(err_n[1] < 1e-5);
            CHECK(err_lmn[1] < 1e-5);
            CHECK(err_n[1] <= 0.2 * err_n[0] + 1e-13);
            CHECK(err_lmn[1] <= 0.2 * err_lmn[0] + 1e-13);
        }
    }
}

TEST_CASE("curvature series match direct evaluation to third order") {
    std::mt19937_64 rng(29);
    for (const ClassCase& cc : kCases) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k, 12);
        const BlowupContext ctx = build_context(nf, classify(nf).cls);
        const int lift = 2 * ctx.n() + 2;
        for (const double theta : {-1.0, -0.4, 0.2, 0.9}) {
            const CurvatureSeries cs = curvature_series(ctx, theta);
            double e1[2], e2[2];
            const double rs[] = {4e-3, 2e-3};
            for (int i = 0; i < 2; ++i) {
                const RawCurvature raw = raw_curvature(ctx, rs[i], theta);
                e1[i] = std::abs(raw.kappa1 - cs.k1.evaluate(rs[i]));
                e2[i] = std::abs(std::pow(rs[i], lift) * raw.kappa2 - cs.k2.evaluate(rs[i]));
            }
            CHECK(e1[1] <= 0.2 * e1[0] + 1e-11);
            CHECK(e2[1] <= 0.2 * e2[0] + 1e-11);
        }
    }
}
