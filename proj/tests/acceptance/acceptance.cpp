// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include "germforge/appendix.hpp"
#include "germforge/blowup.hpp"
#include "germforge/distance.hpp"
#include "germforge/frontcaustic.hpp"
#include "germforge/germ_io.hpp"
#include "germforge/mond.hpp"
#include "germforge/oracle.hpp"
#include "germforge/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace germforge;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct ClassPick {
    MondTag tag;
    int k;
};

const ClassPick kGeometryClasses[] = {{MondTag::S, 1}, {MondTag::S, 2}, {MondTag::B, 2}, {MondTag::C, 3}, {MondTag::F4, 0}};

std::string class_name(const ClassPick& c) { return c.tag == MondTag::F4 ? "F4" : to_string(c.tag) + std::to_string(c.k); }

BlowupContext context_for(const NormalFormCoeffs& nf) { return build_context(nf, classify(nf).cls); }

GermJets table_germ(const std::string& z, int order) {
    const VariableNames xy{"x", "y"};
    return GermJets(parse_polynomial("x", xy, order), parse_polynomial("y^2", xy, order), parse_polynomial(z, xy, order));
}

// Table of simple germs: (x, y^2, z) with the expected tag, k and sign; a sign of NA
// means the two signed forms are equivalent.
Outcome table_golden() {
    struct Row {
        std::string z;
        MondTag tag;
        int k;
        ClassSign sign;
    };
    std::vector<Row> rows{{"x*y", MondTag::CrossCapS0, 0, ClassSign::NA}, {"x^3*y + y^5", MondTag::F4, 4, ClassSign::NA}};
    const auto signed_pair = [&](const std::string& a, const std::string& b, MondTag tag, int k, bool sign_matters) {
        rows.push_back({a + " + " + b, tag, k, sign_matters ? ClassSign::Plus : ClassSign::NA});
        rows.push_back({a + " - " + b, tag, k, sign_matters ? ClassSign::Minus : ClassSign::NA});
    };
    for (int k = 1; k <= 5; ++k) signed_pair("y^3", "x^" + std::to_string(k + 1) + "*y", MondTag::S, k, k % 2 == 1);
    for (int k = 2; k <= 5; ++k) signed_pair("x^2*y", "y^" + std::to_string(2 * k + 1), MondTag::B, k, true);
    for (int k = 3; k <= 5; ++k) signed_pair("x*y^3", "x^" + std::to_string(k) + "*y", MondTag::C, k, k % 2 == 1);

    int failures = 0;
    std::string first;
    for (const Row& r : rows) {
        const MondClass got = classify_germ(table_germ(r.z, working_order(kDefaultKMax))).cls;
        const bool ok = got.tag == r.tag && got.k == r.k && got.sign == r.sign;
        if (!ok && failures++ == 0) first = " first: " + r.z + " -> " + got.label();
    }
    return {failures == 0, std::to_string(rows.size()) + " germs, " + std::to_string(failures) + " failures" + first};
}

Outcome recursion_identities() {
    std::mt19937_64 rng(101);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        NormalFormCoeffs nf = random_nf(rng, 11);
        nf.set_a(0, 3, Scalar(0));
        nf.set_a(2, 1, Scalar(random_nonzero_rational(rng)));
        const int k = 2 + trial % 4;
        const BkRecursionTrace t = bk_recursion(nf, k);
        const mpq_class a21 = nf.a(2, 1).exact(), a13 = nf.a(1, 3).exact(), a05 = nf.a(0, 5).exact();
        const mpq_class c2 = -a13 / (6 * a21);
        const mpq_class xi2 = (3 * a05 * a21 - 5 * a13 * a13) / (360 * a21);
        const bool ok = t.c.at(2).exact() == c2 && t.xi.at(2).exact() == xi2 && verify_by_substitution(nf, t, k);
        if (!ok) ++failures;
    }
    return {failures == 0, "100 germs, " + std::to_string(failures) + " failures"};
}

// Splitting-lemma type the coefficient verdict must be compatible with.
bool compatible(DistanceSingType mine, const SingularityType& o) {
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

Outcome oracle_equivalence() {
    std::mt19937_64 rng(202);
    int failures = 0;
    std::map<std::string, int> seen;
    const int samples = 250;
    for (int trial = 0; trial < samples; ++trial) {
        DistanceConfig cfg = random_distance_config(rng);
        cfg.p.x0 = Scalar(0);
        const DistanceVerdict v = classify_distance(cfg.nf, cfg.p);
        const SingularityType o = split_and_type(distance_jet(cfg.nf, cfg.p, cfg.nf.order()), cfg.nf.order());
        if (!compatible(v.sing_type, o)) ++failures;
        ++seen[to_string(v.sing_type)];
    }
    std::string mix;
    for (const auto& [name, count] : seen) mix += " " + name + "=" + std::to_string(count);
    return {failures == 0, std::to_string(samples) + " samples, " + std::to_string(failures) + " disagreements;" + mix};
}

Outcome versality_dual() {
    std::mt19937_64 rng(303);
    int failures = 0, rplus_true = 0, k_true = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const DistanceConfig cfg = random_distance_config(rng);
        const DistanceVerdict v = classify_distance(cfg.nf, cfg.p);
        const bool rplus = versality_rank_test(cfg.nf, cfg.p, VersalityFlavor::RPlus);
        const bool kv = versality_rank_test(cfg.nf, cfg.p, VersalityFlavor::K);
        if (rplus != v.r_plus_versal) ++failures;
        if (kv != v.k_versal) ++failures;
        rplus_true += rplus;
        k_true += kv;
    }
    return {failures == 0, "100 configurations x 2 flavors, " + std::to_string(failures) + " disagreements; versal R+ " +
                               std::to_string(rplus_true) + ", K " + std::to_string(k_true)};
}

// 16 angles strictly inside (-pi/2, pi/2).
std::vector<double> open_half_circle(int samples) {
    std::vector<double> out;
    for (int k = 0; k < samples; ++k) out.push_back(-std::numbers::pi / 2 + std::numbers::pi * (k + 0.5) / samples);
    return out;
}

// The error must fall at every step with a two-point order estimate of at least 1, and the
// quadratic extrapolation to r = 0 of the three scaled values must reproduce K0.
Outcome curvature_limit() {
    std::mt19937_64 rng(404);
    const double rs[] = {1e-2, 5e-3, 2.5e-3};
    int order_failures = 0, monotone_failures = 0, fit_failures = 0, checked = 0;
    double worst_order = 1e300, worst_fit = 0;
    for (const ClassPick& cp : kGeometryClasses) {
        for (int rep = 0; rep < 10; ++rep) {
            const NormalFormCoeffs nf = random_class_nf(rng, cp.tag, cp.k, 10);
            const BlowupContext ctx = context_for(nf);
            const int lift = 2 * ctx.n() + 2;
            for (const double theta : open_half_circle(16)) {
                const double closed = leading_closed_forms(ctx, theta).K0;
                double scaled[3], err[3];
                for (int i = 0; i < 3; ++i) {
                    scaled[i] = std::pow(rs[i], lift) * raw_curvature(ctx, rs[i], theta).K;
                    err[i] = std::abs(scaled[i] - closed);
                }
                const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
                const double fitted = (8 * scaled[2] - 6 * scaled[1] + scaled[0]) / 3;
                const double fit_rel = std::abs(fitted - closed) / std::max(1.0, std::abs(closed));
                worst_order = std::min(worst_order, order);
                worst_fit = std::max(worst_fit, fit_rel);
                ++checked;
                if (!(err[0] > err[1] && err[1] > err[2])) ++monotone_failures;
                if (!(order >= 1.0)) ++order_failures;
                if (!(fit_rel <= 1e-4)) ++fit_failures;
            }
        }
    }
    std::ostringstream d;
    d << checked << " (germ, theta) pairs; not decreasing " << monotone_failures << ", order below 1 " << order_failures
      << " (min " << worst_order << "), fit off by more than 1e-4 " << fit_failures << " (max " << worst_fit << ")";
    return {monotone_failures == 0 && order_failures == 0 && fit_failures == 0, d.str()};
}

Outcome identity_suite() {
    std::mt19937_64 rng(505);
    int failures = 0, checked = 0;
    double worst = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const ClassPick& cp = kGeometryClasses[rep % std::size(kGeometryClasses)];
        const BlowupContext ctx = context_for(random_class_nf(rng, cp.tag, cp.k));
        for (const double theta : open_half_circle(32)) {
            const CurvatureSeries cs = curvature_series(ctx, theta);
            const FormSeries fs = fundamental_forms(ctx, theta);
            const NormalSeries ns = extended_normal(ctx, theta);
            const Series len = ns.n[0] * ns.n[0] + ns.n[1] * ns.n[1] + ns.n[2] * ns.n[2];
            const double residuals[] = {
                std::abs(cs.k10() - fs.L0()) / (1.0 + std::abs(fs.L0())),
                std::abs(cs.K0() - cs.k10() * cs.k20()) / (1.0 + std::abs(cs.k10() * cs.k20())),
                std::abs(cs.K1() - cs.k10() * cs.k21() - cs.k11() * cs.k20()) /
                    (1.0 + std::abs(cs.k10() * cs.k21()) + std::abs(cs.k11() * cs.k20())),
                std::abs(len[0] - 1.0),
                std::abs(len[1]),
                std::abs(len[2]),
            };
            for (const double r : residuals) {
                worst = std::max(worst, r);
                if (!(r <= 1e-10)) ++failures;
            }
            ++checked;
        }
    }
    std::ostringstream d;
    d << checked << " (germ, theta) pairs, " << failures << " failures; worst relative residual " << worst;
    return {failures == 0, d.str()};
}

Outcome route_agreement() {
    std::mt19937_64 rng(606);
    int failures = 0, total = 0;
    std::string missing;
    for (const ClassPick& cp : kGeometryClasses) {
        std::set<DistanceSingType> seen;
        for (int trial = 0; trial < 20; ++trial) {
            const NormalFormCoeffs nf = random_class_nf(rng, cp.tag, cp.k);
            const int n = blowup_exponent(classify(nf).cls);
            const mpq_class lead = nf.a(n + 1, 1).exact(), fact = factorial(n + 1);
            mpq_class c = random_nonzero_rational(rng), s = random_rational(rng);
            const int branch = trial % 3;
            if (branch == 2 && nf.a(3, 0).exact() != 0) {
                c = fact * nf.a(3, 0).exact();
                s = lead * nf.b(3).exact();
            }
            std::optional<mpq_class> mu = focal_mu(nf, n, c, s);
            if (branch == 0 || !mu) mu = random_nonzero_rational(rng);
            ++total;
            try {
                const GeometricVerdict g = geometric_verdict_exact(nf, n, c, s, *mu);
                if (!routes_agree(g.coefficient, g.expected)) ++failures;
                seen.insert(g.coefficient.sing_type);
            } catch (const ConsistencyError&) {
                ++failures;
            }
        }
        for (DistanceSingType t : {DistanceSingType::A1, DistanceSingType::A2, DistanceSingType::A3})
            if (!seen.count(t)) missing += " " + class_name(cp) + ":" + to_string(t);
    }
    return {failures == 0 && missing.empty(), std::to_string(total) + " triples, " + std::to_string(failures) +
                                                  " disagreements; missing branches:" + (missing.empty() ? " none" : missing)};
}

Outcome focal_trichotomy() {
    const auto crafted = [](std::initializer_list<std::pair<Exponent, int>> a, std::initializer_list<std::pair<int, int>> b) {
        NormalFormCoeffs nf(6, ScalarMode::Exact);
        for (const auto& [e, q] : a) nf.set_a(e.i, e.j, Scalar(q));
        for (const auto& [i, q] : b) nf.set_b(i, Scalar(q));
        nf.set_a(2, 1, Scalar(1));
        nf.set_a(0, 3, Scalar(1));
        return nf;
    };
    std::vector<NormalFormCoeffs> germs{crafted({{{2, 0}, 1}}, {{2, 1}}), crafted({}, {{2, 1}}), crafted({}, {})};
    std::mt19937_64 rng(707);
    std::bernoulli_distribution drop(0.4);
    for (int trial = 0; trial < 50; ++trial) {
        NormalFormCoeffs nf = random_nf(rng, 6);
        if (drop(rng)) nf.set_a(2, 0, Scalar(0));
        if (drop(rng)) nf.set_b(2, Scalar(0));
        germs.push_back(nf);
    }
    int failures = 0;
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < germs.size(); ++i) {
        const NormalFormCoeffs& nf = germs[i];
        // a20 decides hyperbolic; among a20 = 0, b2 separates inflection from degenerate
        const SingularPointType want = !nf.a(2, 0).is_zero() ? SingularPointType::Hyperbolic
                                       : !nf.b(2).is_zero()  ? SingularPointType::Inflection
                                                             : SingularPointType::DegenerateInflection;
        const FocalKind kind = focal_locus(nf).kind;
        const FocalKind want_kind = want == SingularPointType::Hyperbolic   ? FocalKind::IntersectingPair
                                    : want == SingularPointType::Inflection ? FocalKind::ParallelPair
                                                                            : FocalKind::SingleLine;
        if (singular_point_type(nf) != want || kind != want_kind) ++failures;
        if (i < 3 && static_cast<int>(want) != static_cast<int>(i)) ++failures;
        ++seen[to_string(kind)];
    }
    std::string mix;
    for (const auto& [name, count] : seen) mix += " " + name + "=" + std::to_string(count);
    return {failures == 0, "3 crafted + 50 random, " + std::to_string(failures) + " disagreements;" + mix};
}

Outcome appendix_table() {
    std::mt19937_64 rng(808);
    const std::vector<double> thetas{-0.9, 0.35, 1.2};
    const auto& symbols = appendix_symbols();
    int failures = 0, typo_mismatches = 0;
    std::size_t rows_total = 0;
    Json table = Json::array();
    for (const ClassPick& cp : kGeometryClasses) {
        const NormalFormCoeffs nf = random_class_nf(rng, cp.tag, cp.k, 10);
        const std::vector<AppendixRow> rows = appendix_crosscheck(context_for(nf), thetas);
        if (rows.size() != symbols.size() * thetas.size()) ++failures;
        rows_total += rows.size();
        for (const AppendixRow& r : rows) {
            if (r.suspected_typo) {
                if (r.mismatch) ++typo_mismatches;
            } else if (!(std::abs(r.delta) < 1e-9)) {
                ++failures;
            }
            Json j = appendix_json({r})[0];
            j["germ"] = class_name(cp);
            table.push_back(j);
        }
    }
    std::ofstream("acceptance_appendix.json") << table.dump(2) << '\n';
    return {failures == 0, std::to_string(rows_total) + " rows (5 germs x 3 angles x " + std::to_string(symbols.size()) +
                               " symbols), " + std::to_string(failures) + " failures; " + std::to_string(typo_mismatches) +
                               " suspected-typo mismatches logged to acceptance_appendix.json"};
}

double distance3(const Vec3& a, const Vec3& b) { return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]); }

Outcome mesh_sanity() {
    std::mt19937_64 rng(909);
    int failures = 0;
    double worst = 0;
    for (const ClassPick& cp : {kGeometryClasses[0], kGeometryClasses[3]}) {
        const BlowupContext ctx = context_for(random_class_nf(rng, cp.tag, cp.k));
        for (Chart chart : {Chart::Direct, Chart::Blowup}) {
            const MeshGrid grid{64, 64, 0.3, chart};
            const Mesh surface = surface_mesh(ctx, grid);
            const Mesh zero = wavefront_mesh(ctx, WavefrontSpec{0.0, grid}, OffsetSign::Plus);
            if (zero.vertices != surface.vertices || zero.faces != surface.faces) ++failures;
            for (OffsetSign sign : {OffsetSign::Plus, OffsetSign::Minus}) {
                const double t0 = 0.2;
                const Mesh front = wavefront_mesh(ctx, WavefrontSpec{t0, grid}, sign);
                std::map<std::array<double, 2>, Vec3> base;
                for (std::size_t i = 0; i < surface.vertices.size(); ++i) base[surface.parameters[i]] = surface.vertices[i];
                if (front.vertices.empty()) ++failures;
                for (std::size_t i = 0; i < front.vertices.size(); ++i) {
                    const auto it = base.find(front.parameters[i]);
                    if (it == base.end()) {
                        ++failures;
                        continue;
                    }
                    worst = std::max(worst, std::abs(distance3(front.vertices[i], it->second) - t0));
                }
            }
        }
    }
    if (!(worst <= 1e-9)) ++failures;
    std::ostringstream d;
    d << "64x64, 2 germs x 2 charts x 2 sides, " << failures << " failures; worst offset error " << worst;
    return {failures == 0, d.str()};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"table golden suite", table_golden},
        {"B_k recursion identities", recursion_identities},
        {"oracle equivalence", oracle_equivalence},
        {"versality dual implementation", versality_dual},
        {"curvature limit", curvature_limit},
        {"identity suite", identity_suite},
        {"route agreement", route_agreement},
        {"focal trichotomy", focal_trichotomy},
        {"appendix cross-check", appendix_table},
        {"mesh sanity", mesh_sanity},
    };
    int failed = 0, index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
