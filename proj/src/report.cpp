#include "germforge/report.hpp"

namespace germforge {

Json normal_form_json(const NormalFormCoeffs& nf) {
    Json j;
    j["order"] = nf.order();
    j["mode"] = to_string(nf.mode());
    Json b = Json::object();
    for (const auto& [i, c] : nf.b_terms())
        if (!c.is_zero()) b[std::to_string(i)] = number_json(c);
    Json a = Json::object();
    for (const auto& [e, c] : nf.a_terms())
        if (!c.is_zero()) a[std::to_string(e.i) + "," + std::to_string(e.j)] = number_json(c);
    j["b"] = b;
    j["a"] = a;
    const GermJets g = nf.reconstruct();
    j["germ"] = Json::array({g.x.to_string(), g.y.to_string(), g.z.to_string()});
    return j;
}

Json trace_json(const BkRecursionTrace& t) {
    Json j;
    j["k"] = t.k;
    Json c = Json::object(), xi = Json::object();
    for (const auto& [i, v] : t.c) c[std::to_string(i)] = number_json(v);
    for (const auto& [i, v] : t.xi) xi[std::to_string(i)] = number_json(v);
    j["c"] = c;
    j["xi"] = xi;
    return j;
}

Json class_json(const GermClassification& c) {
    Json j;
    j["label"] = c.cls.label();
    j["name"] = c.cls.name();
    j["tag"] = to_string(c.cls.tag);
    j["k"] = c.cls.k;
    j["sign"] = to_string(c.cls.sign);
    j["reason"] = c.cls.reason;
    j["corank"] = c.corank;
    j["two_jet"] = c.two_jet ? Json(to_string(*c.two_jet)) : Json(nullptr);
    j["singular_point_type"] = c.reduction ? Json(to_string(singular_point_type(c.reduction->nf))) : Json(nullptr);
    j["trace"] = c.trace ? trace_json(*c.trace) : Json(nullptr);
    return j;
}

Json flags_json(const GeometricFlags& f) {
    return {{"principal_normal", f.principal_normal},
            {"parabolic", f.parabolic},
            {"on_focal_locus", f.on_focal_locus},
            {"is_ridge", f.is_ridge},
            {"is_first_order_ridge", f.is_first_order_ridge},
            {"is_subparabolic", f.is_subparabolic},
            {"ridge_everywhere", f.ridge_everywhere},
            {"at_focal_intersection", f.at_focal_intersection}};
}

Json expected_json(const ExpectedVerdict& e) {
    Json allowed = Json::array();
    for (DistanceSingType t : e.allowed) allowed.push_back(to_string(t));
    return {{"allowed", allowed},
            {"r_plus_versal", e.r_plus_versal ? Json(*e.r_plus_versal) : Json(nullptr)},
            {"k_versal", e.k_versal ? Json(*e.k_versal) : Json(nullptr)}};
}

Json geometric_json(const GeometricVerdict& g) {
    return {{"flags", flags_json(g.flags)}, {"expected", expected_json(g.expected)}, {"coefficient", distance_json(g.coefficient)}};
}

}  // namespace germforge
