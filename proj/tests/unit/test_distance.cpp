#include "germforge/distance.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

using namespace germforge;
using namespace germforge::testing;

namespace {

NormalFormCoeffs nf_from(std::initializer_list<std::pair<Exponent, mpq_class>> a, std::initializer_list<std::pair<int, mpq_class>> b,
                         int order = 8) {
    NormalFormCoeffs nf(order, ScalarMode::Exact);
    for (const auto& [e, q] : a) nf.set_a(e.i, e.j, Scalar(q));
    for (const auto& [i, q] : b) nf.set_b(i, Scalar(q));
    return nf;
}

ProbePoint point(const mpq_class& x, const mpq_class& y, const mpq_class& z) { return {Scalar(x), Scalar(y), Scalar(z)}; }

bool oracle_matches(DistanceSingType mine, const SingularityType& o) {
    switch (mine) {
        case DistanceSingType::Regular: return o.tag == SingularityTag::Regular;
        case DistanceSingType::A1: return o.tag == SingularityTag::A && o.k == 1;
        case DistanceSingType::A2: return o.tag == SingularityTag::A && o.k == 2;
        case DistanceSingType::A3: return o.tag == SingularityTag::A && o.k == 3;
        case DistanceSingType::A4plus:
            return (o.tag == SingularityTag::A && o.k >= 4) || (o.tag == SingularityTag::MoreDegenerate && o.corank == 1);
        case DistanceSingType::D4plus:
            return o.tag == SingularityTag::D4 || (o.tag == SingularityTag::MoreDegenerate && o.corank == 2);
    }
    return false;
}

struct ClassCase {
    MondTag tag;
    int k;
};
const ClassCase kClasses[] = {{MondTag::S, 1}, {MondTag::S, 2}, {MondTag::S, 3}, {MondTag::B, 2}, {MondTag::C, 3}, {MondTag::F4, 0}};

}  // namespace

TEST_CASE("distance jet of the flat germ") {
    const NormalFormCoeffs flat(4, ScalarMode::Exact);
    const Jet2 d = distance_jet(flat, point(0, 0, 0), 4);
    CHECK(d.coeff(2, 0) == Scalar::rational(1, 2));
    CHECK(d.coeff(0, 4) == Scalar::rational(1, 8));
    CHECK(d.terms().size() == 2);
    const Jet2 d3 = distance_jet(flat, point(0, 0, 0), 3);
    CHECK(d3.terms().size() == 1);
    CHECK(d3.coeff(2, 0) == Scalar::rational(1, 2));
    CHECK_THROWS_AS(distance_jet(flat, point(0, 0, 0), 5), UsageError);
}

TEST_CASE("distance jet: gradient and two-jet") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const NormalFormCoeffs nf = random_nf(rng, 6);
        const mpq_class x0 = random_rational(rng), y0 = random_rational(rng), z0 = random_rational(rng);
        const Jet2 d = distance_jet(nf, point(x0, y0, z0), 6);
        CHECK(d.coeff(1, 0) == Scalar(mpq_class(-x0)));
        CHECK(d.coeff(0, 1).is_zero());
        CHECK(d.constant_term() == Scalar(mpq_class((x0 * x0 + y0 * y0 + z0 * z0) / 2)));
        if (x0 != 0) continue;
        const mpq_class b2 = nf.b(2).exact(), a20 = nf.a(2, 0).exact();
        CHECK(d.coeff(2, 0) == Scalar(mpq_class(-(b2 * y0 + a20 * z0 - 1) / 2)));
        CHECK(d.coeff(1, 1).is_zero());
        CHECK(d.coeff(0, 2) == Scalar(mpq_class(-y0 / 2)));
    }
}

TEST_CASE("regular off the normal plane") {
    std::mt19937_64 rng(3);
    const NormalFormCoeffs nf = random_nf(rng, 6);
    const DistanceVerdict v = classify_distance(nf, point(1, 2, 3));
    CHECK(v.sing_type == DistanceSingType::Regular);
    CHECK(v.r_plus_versal);
    CHECK(v.k_versal);
    CHECK(versality_rank_test(nf, point(1, 2, 3), VersalityFlavor::RPlus));
    CHECK(versality_rank_test(nf, point(1, 2, 3), VersalityFlavor::K));
}

TEST_CASE("A2 on the principal normal is never versal") {
    const NormalFormCoeffs nf = nf_from({{{2, 0}, 1}, {{2, 1}, 1}, {{0, 3}, 2}}, {{2, 1}});
    const ProbePoint p = point(0, 0, 2);
    const DistanceVerdict v = classify_distance(nf, p);
    CHECK(v.sing_type == DistanceSingType::A2);
    CHECK(v.condition == "2b");
    CHECK(v.branch == ProbeBranch::PrincipalNormal);
    CHECK_FALSE(v.r_plus_versal);
    CHECK_FALSE(v.k_versal);
    CHECK_FALSE(versality_rank_test(nf, p, VersalityFlavor::RPlus));
    CHECK_FALSE(versality_rank_test(nf, p, VersalityFlavor::K));
}

TEST_CASE("A1 is versal in both senses") {
    const NormalFormCoeffs nf = nf_from({{{2, 0}, 1}, {{2, 1}, 1}}, {{2, 1}});
    const ProbePoint p = point(0, 1, 3);
    const DistanceVerdict v = classify_distance(nf, p);
    CHECK(v.sing_type == DistanceSingType::A1);
    CHECK(versality_rank_test(nf, p, VersalityFlavor::RPlus));
    CHECK(versality_rank_test(nf, p, VersalityFlavor::K));
}

TEST_CASE("A3 off the principal normal with a20 y0 = b2 z0 is not K-versal") {
    // y0 = z0 = 1, a20 = b2 = 1/2 puts p0 on the focal line with a20 y0 - b2 z0 = 0
    const NormalFormCoeffs nf = nf_from({{{2, 0}, mpq_class(1, 2)}, {{2, 1}, 1}, {{3, 0}, 2}, {{0, 3}, 1}},
                                        {{2, mpq_class(1, 2)}, {3, -2}});
    const ProbePoint p = point(0, 1, 1);
    const DistanceVerdict v = classify_distance(nf, p);
    CHECK(v.sing_type == DistanceSingType::A3);
    CHECK(v.condition == "3a");
    CHECK(v.r_plus_versal);
    CHECK_FALSE(v.k_versal);
    CHECK(versality_rank_test(nf, p, VersalityFlavor::RPlus));
    CHECK_FALSE(versality_rank_test(nf, p, VersalityFlavor::K));
}

TEST_CASE("D4 at the crossing of the focal lines") {
    const NormalFormCoeffs nf = nf_from({{{2, 0}, 2}, {{3, 0}, 1}, {{2, 1}, 1}, {{1, 2}, 3}, {{0, 3}, 1}}, {{2, 1}});
    const ProbePoint p = point(0, 0, mpq_class(1, 2));
    const DistanceVerdict v = classify_distance(nf, p);
    CHECK(v.sing_type == DistanceSingType::D4plus);
    CHECK(v.condition == "5");
    CHECK(split_and_type(distance_jet(nf, p, 8)).tag == SingularityTag::D4);
    CHECK_FALSE(versality_rank_test(nf, p, VersalityFlavor::RPlus));
    CHECK_FALSE(versality_rank_test(nf, p, VersalityFlavor::K));
}

TEST_CASE("coefficient classifier agrees with the splitting-lemma oracle") {
    std::mt19937_64 rng(2024);
    std::map<std::string, int> seen;
    for (int trial = 0; trial < 300; ++trial) {
        DistanceConfig cfg = random_distance_config(rng);
        if (cfg.target == "regular") cfg.p.x0 = Scalar(0);
        const DistanceVerdict v = classify_distance(cfg.nf, cfg.p);
        const SingularityType o = split_and_type(distance_jet(cfg.nf, cfg.p, 8), 8);
        INFO("trial " << trial << " condition " << v.condition << " oracle " << o.name());
        CHECK(oracle_matches(v.sing_type, o));
        ++seen[v.condition];
    }
    for (const char* c : {"1", "2a", "3a", "4a", "2b", "3b", "4b", "5"}) {
        INFO("condition " << c);
        CHECK(seen[c] > 0);
    }
}

TEST_CASE("closed-form versality agrees with the rank test") {
    std::mt19937_64 rng(77);
    int a4_versal = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const DistanceConfig cfg = random_distance_config(rng);
        const DistanceVerdict v = classify_distance(cfg.nf, cfg.p);
        INFO("trial " << trial << " condition " << v.condition);
        CHECK(v.r_plus_versal == versality_rank_test(cfg.nf, cfg.p, VersalityFlavor::RPlus));
        CHECK(v.k_versal == versality_rank_test(cfg.nf, cfg.p, VersalityFlavor::K));
        if (v.condition == "4a" && v.r_plus_versal) ++a4_versal;
    }
    CHECK(a4_versal > 0);
}

TEST_CASE("the A4 elimination reports the exact k") {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 20; ++trial) {
        const DistanceConfig cfg = random_distance_config(rng);
        const DistanceVerdict v = classify_distance(cfg.nf, cfg.p);
        if (v.condition != "4a") continue;
        ++checked;
        const SingularityType o = split_and_type(distance_jet(cfg.nf, cfg.p, 8), 8);
        REQUIRE(v.exact_k.has_value());
        CHECK(o.tag == SingularityTag::A);
        CHECK(o.k == *v.exact_k);
    }
    CHECK(checked >= 5);
}

TEST_CASE("focal locus trichotomy examples") {
    const FocalLocus hyp = focal_locus(nf_from({{{2, 0}, 1}}, {{2, 1}}));
    CHECK(hyp.kind == FocalKind::IntersectingPair);
    REQUIRE(hyp.intersection.has_value());
    CHECK((*hyp.intersection)[0].is_zero());
    CHECK((*hyp.intersection)[1] == Scalar(1));
    CHECK(hyp.lines.size() == 2);

    const FocalLocus par = focal_locus(nf_from({}, {{2, 1}}));
    CHECK(par.kind == FocalKind::ParallelPair);
    CHECK_FALSE(par.intersection.has_value());
    REQUIRE(par.lines.size() == 2);
    CHECK(par.lines[1].point[0] == doctest::Approx(1.0));
    CHECK(par.lines[1].point[1] == doctest::Approx(0.0));
    CHECK(std::abs(par.lines[1].direction[1]) == doctest::Approx(1.0));

    const FocalLocus single = focal_locus(nf_from({{{2, 1}, 1}}, {}));
    CHECK(single.kind == FocalKind::SingleLine);
    CHECK(single.lines.size() == 1);

    CHECK(singular_point_type(nf_from({{{2, 0}, 1}}, {})) == SingularPointType::Hyperbolic);
    CHECK(singular_point_type(nf_from({}, {{2, 1}})) == SingularPointType::Inflection);
    CHECK(singular_point_type(nf_from({}, {})) == SingularPointType::DegenerateInflection);
}

TEST_CASE("focal kind follows the singular point type") {
    std::mt19937_64 rng(8);
    std::bernoulli_distribution drop(0.4);
    for (int trial = 0; trial < 50; ++trial) {
        NormalFormCoeffs nf = random_nf(rng, 6);
        if (drop(rng)) nf.set_a(2, 0, Scalar(0));
        if (drop(rng)) nf.set_b(2, Scalar(0));
        const FocalKind k = focal_locus(nf).kind;
        switch (singular_point_type(nf)) {
            case SingularPointType::Hyperbolic: CHECK(k == FocalKind::IntersectingPair); break;
            case SingularPointType::Inflection: CHECK(k == FocalKind::ParallelPair); break;
            case SingularPointType::DegenerateInflection: CHECK(k == FocalKind::SingleLine); break;
        }
    }
}

TEST_CASE("degenerate exactly on the focal lines") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        NormalFormCoeffs nf = random_nf(rng, 6);
        const FocalLocus f = focal_locus(nf);
        std::bernoulli_distribution on(0.5);
        mpq_class y = random_rational(rng), z = random_rational(rng);
        if (on(rng)) {
            const FocalLine& l = f.lines[trial % f.lines.size()];
            if (l.cz.exact() != 0)
                z = (l.rhs.exact() - l.cy.exact() * y) / l.cz.exact();
            else
                y = l.rhs.exact() / l.cy.exact();
        }
        bool on_locus = false;
        for (const FocalLine& l : f.lines) on_locus = on_locus || l.cy.exact() * y + l.cz.exact() * z == l.rhs.exact();
        const DistanceSingType t = classify_distance(nf, point(0, y, z)).sing_type;
        CHECK(on_locus == (t != DistanceSingType::A1));
    }
}

TEST_CASE("exact geometric route agrees with the coefficients") {
    std::mt19937_64 rng(99);
    for (const ClassCase& cc : kClasses) {
        std::map<DistanceSingType, int> seen;
        for (int trial = 0; trial < 30; ++trial) {
            const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
            const int n = blowup_exponent(classify(nf).cls);
            const mpq_class a = nf.a(n + 1, 1).exact(), f = factorial(n + 1);
            mpq_class c = random_nonzero_rational(rng), s = random_rational(rng);
            const int branch = trial % 3;
            if (branch == 2) {
                // a ridge direction: Delta1 = a b3 c - f a30 s = 0
                const mpq_class a30 = nf.a(3, 0).exact(), b3 = nf.b(3).exact();
                if (a30 == 0) continue;
                c = f * a30;
                s = a * b3;
            }
            std::optional<mpq_class> mu = focal_mu(nf, n, c, s);
            if (branch == 0 || !mu) mu = random_nonzero_rational(rng);
            INFO("class " << classify(nf).cls.name() << " branch " << branch);
            GeometricVerdict g;
            CHECK_NOTHROW(g = geometric_verdict_exact(nf, n, c, s, *mu));
            ++seen[g.coefficient.sing_type];
        }
        INFO("tag " << to_string(cc.tag) << cc.k);
        CHECK(seen[DistanceSingType::A1] > 0);
        CHECK(seen[DistanceSingType::A2] > 0);
        CHECK(seen[DistanceSingType::A3] > 0);
    }
}

TEST_CASE("principal normal direction in the geometric route") {
    std::mt19937_64 rng(4);
    const NormalFormCoeffs nf = random_class_nf(rng, MondTag::S, 1);
    const mpq_class a20 = nf.a(2, 0).exact();
    const GeometricVerdict g = geometric_verdict_exact(nf, 1, 0, 1, 3);
    CHECK(g.flags.principal_normal);
    CHECK_FALSE(g.coefficient.r_plus_versal);
    CHECK_FALSE(g.coefficient.k_versal);
    if (a20 != 0) {
        const GeometricVerdict d = geometric_verdict_exact(nf, 1, 0, 1, mpq_class(1 / (2 * a20)));
        CHECK(d.flags.at_focal_intersection);
        CHECK(d.coefficient.sing_type == DistanceSingType::D4plus);
    }
}

TEST_CASE("float geometric route: off focal, focal, ridge") {
    std::mt19937_64 rng(123);
    for (const ClassCase& cc : kClasses) {
        const NormalFormCoeffs nf = random_class_nf(rng, cc.tag, cc.k);
        const MondClass cls = classify(nf).cls;
        const BlowupContext ctx = build_context(nf, cls);
        const double theta = 0.3;
        const double k10 = k10_at(ctx, theta);
        if (std::abs(k10) < 1e-6) continue;
        INFO("class " << cls.name());
        CHECK(geometric_verdict(ctx, theta, 0.5 / k10).coefficient.sing_type == DistanceSingType::A1);
        const GeometricVerdict focal = geometric_verdict(ctx, theta, 1.0 / k10);
        CHECK(focal.flags.on_focal_locus);
        CHECK(focal.coefficient.sing_type == (focal.flags.is_ridge ? DistanceSingType::A3 : DistanceSingType::A2));

        const double a30 = ctx.a(3, 0), b3 = ctx.b(3);
        if (a30 == 0.0) continue;
        const double ridge = std::atan(ctx.lead() * b3 / (ctx.fact() * a30));
        const double kr = k10_at(ctx, ridge);
        if (std::abs(kr) < 1e-6) continue;
        const GeometricVerdict r = geometric_verdict(ctx, ridge, 1.0 / kr);
        CHECK(r.flags.is_ridge);
        if (r.flags.is_first_order_ridge) CHECK(r.coefficient.sing_type == DistanceSingType::A3);
    }
}

TEST_CASE("routes_agree rejects a mismatch") {
    DistanceVerdict v;
    v.sing_type = DistanceSingType::A2;
    CHECK_FALSE(routes_agree(v, ExpectedVerdict{{DistanceSingType::A1}, true, true}));
    CHECK(routes_agree(v, ExpectedVerdict{{DistanceSingType::A2}, true, true}));
    v.k_versal = false;
    CHECK_FALSE(routes_agree(v, ExpectedVerdict{{DistanceSingType::A2}, true, true}));
    CHECK(routes_agree(v, ExpectedVerdict{{DistanceSingType::A2}, true, std::nullopt}));
}

TEST_CASE("float mode warns and still classifies") {
    const NormalFormCoeffs nf = nf_from({{{2, 0}, 1}, {{2, 1}, 1}}, {{2, 1}}).in_mode(ScalarMode::Float);
    const DistanceVerdict v = classify_distance(nf, ProbePoint{Scalar(0.0), Scalar(1.0), Scalar(3.0)});
    CHECK(v.sing_type == DistanceSingType::A1);
    CHECK_FALSE(v.warnings.empty());
}

TEST_CASE("report sections") {
    const NormalFormCoeffs nf = nf_from({{{2, 0}, 1}, {{0, 3}, 2}}, {{2, 1}});
    const Json d = distance_json(classify_distance(nf, point(0, 0, 2)));
    CHECK(d["sing_type"] == "A2");
    CHECK(d["branch"] == "PrincipalNormal");
    CHECK(d["r_plus_versal"] == false);
    CHECK(d["p0"].size() == 3);
    CHECK(d["witness"].contains("a03*z0"));
    const Json f = focal_json(focal_locus(nf));
    CHECK(f["kind"] == "IntersectingPair");
    CHECK(f["lines"].size() == 2);
    CHECK(f["intersection"][1] == "1");
}
