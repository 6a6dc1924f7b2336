#include "germforge/verify.hpp"

#include "germforge/mond.hpp"
#include "germforge/sampling.hpp"

#include <random>

namespace germforge {

bool oracle_agrees(DistanceSingType mine, const SingularityType& o) {
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

int VerifySummary::hard_mismatches() const {
    int n = 0;
    for (const AppendixEntry& e : appendix)
        if (e.row.mismatch && !e.row.suspected_typo) ++n;
    for (const VerifyCheck& c : checks) n += c.mismatches;
    return n;
}

namespace {

struct ClassPick {
    MondTag tag;
    int k;
};
constexpr ClassPick kClasses[] = {{MondTag::S, 1}, {MondTag::S, 2}, {MondTag::B, 2}, {MondTag::C, 3}, {MondTag::F4, 0}};

std::string describe(const DistanceConfig& cfg) {
    return "target " + cfg.target + " p0 (" + cfg.p.x0.to_string() + ", " + cfg.p.y0.to_string() + ", " + cfg.p.z0.to_string() +
           ")";
}

void fail(VerifyCheck& c, std::string line) {
    ++c.mismatches;
    c.failures.push_back(std::move(line));
}

VerifyCheck oracle_check(std::mt19937_64& rng, int samples) {
    VerifyCheck c;
    c.name = "oracle_equivalence";
    for (int i = 0; i < samples; ++i) {
        DistanceConfig cfg = random_distance_config(rng);
        cfg.p.x0 = Scalar(0);
        const DistanceVerdict v = classify_distance(cfg.nf, cfg.p);
        const SingularityType o = split_and_type(distance_jet(cfg.nf, cfg.p, cfg.nf.order()), cfg.nf.order());
        ++c.runs;
        if (!oracle_agrees(v.sing_type, o)) fail(c, describe(cfg) + ": " + to_string(v.sing_type) + " vs oracle " + o.name());
    }
    return c;
}

VerifyCheck versality_check(std::mt19937_64& rng, int samples) {
    VerifyCheck c;
    c.name = "versality_dual";
    for (int i = 0; i < samples; ++i) {
        const DistanceConfig cfg = random_distance_config(rng);
        const DistanceVerdict v = classify_distance(cfg.nf, cfg.p);
        for (VersalityFlavor flavor : {VersalityFlavor::RPlus, VersalityFlavor::K}) {
            const bool closed = flavor == VersalityFlavor::RPlus ? v.r_plus_versal : v.k_versal;
            const bool rank = versality_rank_test(cfg.nf, cfg.p, flavor);
            ++c.runs;
            if (closed != rank)
                fail(c, describe(cfg) + " " + to_string(flavor) + ": closed form " + (closed ? "true" : "false") + ", rank " +
                            (rank ? "true" : "false"));
        }
    }
    return c;
}

VerifyCheck route_check(std::mt19937_64& rng, int samples) {
    VerifyCheck c;
    c.name = "route_agreement";
    for (int i = 0; i < samples; ++i) {
        const ClassPick pick = kClasses[i % std::size(kClasses)];
        const NormalFormCoeffs nf = random_class_nf(rng, pick.tag, pick.k);
        const int n = blowup_exponent(classify(nf).cls);
        mpq_class cs = random_nonzero_rational(rng), sn = random_rational(rng);
        const int branch = (i / static_cast<int>(std::size(kClasses))) % 3;
        if (branch == 2 && nf.a(3, 0).exact() != 0) {
            cs = factorial(n + 1) * nf.a(3, 0).exact();
            sn = nf.a(n + 1, 1).exact() * nf.b(3).exact();
        }
        std::optional<mpq_class> mu = focal_mu(nf, n, cs, sn);
        if (branch == 0 || !mu) mu = random_nonzero_rational(rng);
        ++c.runs;
        try {
            geometric_verdict_exact(nf, n, cs, sn, *mu);
        } catch (const ConsistencyError& e) {
            fail(c, "class " + classify(nf).cls.name() + " direction (" + cs.get_str() + ", " + sn.get_str() + "): " + e.what());
        }
    }
    return c;
}

}  // namespace

VerifySummary run_verification(const VerifyOptions& options) {
    if (options.samples < 0) throw UsageError("sample count must be nonnegative");
    std::mt19937_64 rng(options.seed);
    VerifySummary out;
    for (const ClassPick& pick : kClasses) {
        const NormalFormCoeffs nf = random_class_nf(rng, pick.tag, pick.k);
        const MondClass cls = classify(nf).cls;
        for (const AppendixRow& row : appendix_crosscheck(build_context(nf, cls), options.appendix_thetas))
            out.appendix.push_back({cls.name(), row});
    }
    out.checks.push_back(oracle_check(rng, options.samples));
    out.checks.push_back(versality_check(rng, options.samples));
    out.checks.push_back(route_check(rng, options.samples));
    return out;
}

Json verify_json(const VerifySummary& s) {
    Json rows = Json::array();
    for (const AppendixEntry& e : s.appendix)
        rows.push_back({{"germ", e.germ},
                        {"symbol", e.row.symbol},
                        {"theta", number_json(e.row.theta)},
                        {"series", number_json(e.row.series_value)},
                        {"closed_form", number_json(e.row.closed_value)},
                        {"delta", number_json(e.row.delta)},
                        {"mismatch", e.row.mismatch},
                        {"suspected_typo", e.row.suspected_typo}});
    Json checks = Json::array();
    for (const VerifyCheck& c : s.checks)
        checks.push_back({{"name", c.name}, {"runs", c.runs}, {"mismatches", c.mismatches}, {"failures", c.failures}});
    return {{"appendix", rows}, {"checks", checks}, {"hard_mismatches", s.hard_mismatches()}};
}

}  // namespace germforge
