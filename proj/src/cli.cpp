#include "germforge/cli.hpp"

#include "germforge/distance.hpp"
#include "germforge/germ_io.hpp"
#include "germforge/report.hpp"
#include "germforge/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace germforge {

std::string to_string(Subcommand s) {
    switch (s) {
        case Subcommand::Classify: return "classify";
        case Subcommand::Geometry: return "geometry";
        case Subcommand::Distance: return "distance";
        case Subcommand::Focal: return "focal";
        case Subcommand::Mesh: return "mesh";
        case Subcommand::Verify: return "verify";
    }
    return "?";
}

std::string to_string(MeshKind k) {
    switch (k) {
        case MeshKind::Surface: return "surface";
        case MeshKind::Wavefront: return "wavefront";
        case MeshKind::Focal: return "focal";
    }
    return "?";
}

MeshKind mesh_kind_from_string(const std::string& text) {
    if (text == "surface") return MeshKind::Surface;
    if (text == "wavefront") return MeshKind::Wavefront;
    if (text == "focal") return MeshKind::Focal;
    throw UsageError("unknown mesh kind '" + text + "' (expected surface|wavefront|focal)");
}

void RunConfig::validate() const {
    if (subcommand != Subcommand::Verify && input.empty()) throw UsageError("--input is required for " + to_string(subcommand));
    if (order && (*order < 1 || *order > 64)) throw UsageError("--order must be in 1..64");
    if (kmax < 1) throw UsageError("--kmax must be at least 1");
    if (theta_samples < kMinThetaSamples) throw UsageError("--theta-samples must be at least " + std::to_string(kMinThetaSamples));
    if (samples < 0) throw UsageError("--samples must be nonnegative");
    WavefrontSpec{t0, grid}.validate();
}

std::pair<int, int> parse_grid_size(const std::string& text) {
    const auto number = [&](const std::string& part) {
        if (part.empty() || !std::all_of(part.begin(), part.end(), [](unsigned char ch) { return std::isdigit(ch); }) ||
            part.size() > 6)
            throw UsageError("malformed grid size '" + text + "' (expected N or RxC)");
        return std::stoi(part);
    };
    const auto x = text.find('x');
    if (x == std::string::npos) {
        const int n = number(text);
        return {n, n};
    }
    return {number(text.substr(0, x)), number(text.substr(x + 1))};
}

std::optional<RunConfig> parse_run_config(int argc, const char* const* argv, const char* env_mode, std::ostream& out) {
    RunConfig c;
    CLI::App app{"Classification, blow-up geometry and distance-squared analysis of map germs from the plane to space", "germforge"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> mode_text, output_text;
    std::string grid_text, chart_text = "direct", sign_text = "+", kind_text = "surface", branch_text = "bounded", format_text;
    app.add_option("--input,-i", c.input, "Germ file (JSON)");
    app.add_option("--output,-o", output_text, "Report or mesh path; standard output when absent");
    app.add_option("--order", c.order, "Truncation order; overrides the germ file");
    app.add_option("--kmax", c.kmax, "Largest k probed by the classifier")->capture_default_str();
    app.add_option("--theta-samples", c.theta_samples, "Angles in the geometry sweep")->capture_default_str();
    app.add_option("--t0", c.t0, "Offset distance of the wavefront")->capture_default_str();
    app.add_option("--grid", grid_text, "Mesh grid: N or RxC");
    app.add_option("--extent", c.grid.extent, "Half-width of the mesh parameter range")->capture_default_str();
    app.add_option("--chart", chart_text, "Mesh chart: direct|blowup")->capture_default_str();
    app.add_option("--kind", kind_text, "Mesh kind: surface|wavefront|focal")->capture_default_str();
    app.add_option("--sign", sign_text, "Wavefront side: +|-")->capture_default_str();
    app.add_option("--branch", branch_text, "Focal sheet: bounded|unbounded")->capture_default_str();
    app.add_option("--format", format_text, "Mesh format: obj|csv; default from the output extension");
    app.add_option("--seed", c.seed, "Seed of the sampler used by verify")->capture_default_str();
    app.add_option("--samples", c.samples, "Random runs per verify check")->capture_default_str();
    app.add_option("--mode", mode_text, "exact|float; overrides GERMFORGE_MODE and the germ file");
    app.add_option("--probe", c.probes, "Target point x0,y0,z0 for distance (repeatable)");
    app.add_option("--direction", c.directions, "Normal direction theta,lambda for distance (repeatable)");

    const std::pair<const char*, const char*> commands[] = {
        {"classify", "Normal form, class and singular point type"},
        {"geometry", "Ridge and curvature sweep over the exceptional circle"},
        {"distance", "Distance-squared verdicts at target points"},
        {"focal", "Focal locus in the normal plane"},
        {"mesh", "Surface, wavefront or focal sheet mesh"},
        {"verify", "Randomised cross-checks against the independent oracles"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        std::ostringstream sink;
        app.exit(e, out, sink);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    const std::string name = app.get_subcommands().front()->get_name();
    for (Subcommand s : {Subcommand::Classify, Subcommand::Geometry, Subcommand::Distance, Subcommand::Focal, Subcommand::Mesh,
                         Subcommand::Verify})
        if (to_string(s) == name) c.subcommand = s;

    if (output_text) {
        if (output_text->empty()) throw UsageError("--output must not be empty");
        c.output = *output_text;
    }
    if (mode_text) {
        c.mode = scalar_mode_from_string(*mode_text);
    } else if (env_mode != nullptr && *env_mode != '\0') {
        try {
            c.mode = scalar_mode_from_string(env_mode);
        } catch (const UsageError&) {
            throw UsageError(std::string("GERMFORGE_MODE must be exact or float, got '") + env_mode + "'");
        }
    }
    if (!grid_text.empty()) std::tie(c.grid.rows, c.grid.cols) = parse_grid_size(grid_text);
    c.grid.chart = chart_from_string(chart_text);
    c.mesh_kind = mesh_kind_from_string(kind_text);
    c.sign = offset_sign_from_string(sign_text);
    c.branch = focal_branch_from_string(branch_text);
    if (!format_text.empty()) c.format = mesh_format_from_string(format_text);
    c.validate();
    return c;
}

namespace {

void add_warning(std::vector<std::string>& to, const std::string& w) {
    if (std::find(to.begin(), to.end(), w) == to.end()) to.push_back(w);
}

void write_text(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + c.output + "'");
    file << text;
    if (!file) throw UsageError("write to '" + c.output + "' failed");
}

struct LoadedGerm {
    Json raw;
    GermJets jets;
    GermClassification classification;
    std::vector<std::string> warnings;

    const NormalFormCoeffs& nf() const {
        if (!classification.reduction)
            throw UsageError("germ of class " + classification.cls.label() + " has no pre-normal form (need 2-jet (u, v^2, 0))");
        return classification.reduction->nf;
    }
    BlowupContext context() const { return build_context(nf(), classification.cls); }
};

LoadedGerm load(const RunConfig& c) {
    LoadedGerm g;
    g.raw = read_json_file(c.input);
    GermSpec spec = germ_spec_from_json(g.raw);
    if (c.mode) spec.mode = *c.mode;
    g.jets = germ_from_spec(spec, c.order.value_or(std::max(spec.order, working_order(c.kmax))));
    if (c.mode == ScalarMode::Exact && g.jets.mode() == ScalarMode::Float)
        add_warning(g.warnings, "decimal literals in the germ force float mode");
    g.classification = classify_germ(g.jets, c.kmax);
    for (const auto& w : g.classification.warnings) add_warning(g.warnings, w);
    return g;
}

Report base_report(const LoadedGerm& g) {
    Report r;
    r.klass = class_json(g.classification);
    r.normal_form = g.classification.reduction ? normal_form_json(g.classification.reduction->nf) : Json(nullptr);
    r.warnings = g.warnings;
    return r;
}

void finish(const RunConfig& c, const Report& r, std::ostream& out, std::ostream& err) {
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    write_text(c, to_json(r).dump(2) + "\n", out);
}

Scalar scalar_field(const Json& j, const std::string& path) {
    try {
        if (j.is_string()) return Scalar::parse(j.get<std::string>());
        if (j.is_number_integer()) return Scalar(j.get<long>());
        if (j.is_number_float()) return Scalar(j.get<double>());
    } catch (const UsageError& e) {
        throw SchemaError(path, e.what());
    }
    throw SchemaError(path, "expected a number or a numeric string");
}

double double_field(const Json& j, const std::string& path) { return scalar_field(j, path).to_double(); }

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        parts.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return parts;
}

ProbePoint probe_from_text(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 3) throw UsageError("--probe expects x0,y0,z0, got '" + text + "'");
    return {Scalar::parse(parts[0]), Scalar::parse(parts[1]), Scalar::parse(parts[2])};
}

std::pair<double, double> direction_from_text(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 2) throw UsageError("--direction expects theta,lambda, got '" + text + "'");
    return {Scalar::parse(parts[0]).to_double(), Scalar::parse(parts[1]).to_double()};
}

ProbePoint probe_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected [x0, y0, z0]");
    return {scalar_field(j[0], path + "/0"), scalar_field(j[1], path + "/1"), scalar_field(j[2], path + "/2")};
}

std::pair<double, double> direction_from_json(const Json& j, const std::string& path) {
    if (j.is_array() && j.size() == 2) return {double_field(j[0], path + "/0"), double_field(j[1], path + "/1")};
    if (j.is_object() && j.contains("theta") && j.contains("lambda"))
        return {double_field(j["theta"], path + "/theta"), double_field(j["lambda"], path + "/lambda")};
    throw SchemaError(path, "expected [theta, lambda] or {\"theta\": ..., \"lambda\": ...}");
}

int run_classify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const LoadedGerm g = load(c);
    finish(c, base_report(g), out, err);
    return 0;
}

int run_geometry(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const LoadedGerm g = load(c);
    const BlowupContext ctx = g.context();
    const std::vector<double> thetas = theta_grid(c.theta_samples);
    Report r = base_report(g);
    r.geometry = geometry_json(ctx, thetas);
    Json fronts = Json::array();
    for (const double theta : thetas) {
        try {
            fronts.push_back(front_json(front_verdict(ctx, theta)));
        } catch (const HypothesisError& e) {
            fronts.push_back({{"theta0", number_json(theta)}, {"error", e.what()}});
        }
    }
    r.geometry["fronts"] = fronts;
    finish(c, r, out, err);
    return 0;
}

int run_distance(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const LoadedGerm g = load(c);
    std::vector<ProbePoint> probes;
    std::vector<std::pair<double, double>> directions;
    if (g.raw.contains("probes")) {
        const Json& list = g.raw["probes"];
        if (!list.is_array()) throw SchemaError("/probes", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) probes.push_back(probe_from_json(list[i], "/probes/" + std::to_string(i)));
    }
    if (g.raw.contains("directions")) {
        const Json& list = g.raw["directions"];
        if (!list.is_array()) throw SchemaError("/directions", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i)
            directions.push_back(direction_from_json(list[i], "/directions/" + std::to_string(i)));
    }
    for (const auto& p : c.probes) probes.push_back(probe_from_text(p));
    for (const auto& d : c.directions) directions.push_back(direction_from_text(d));
    if (probes.empty() && directions.empty())
        throw UsageError("distance needs target points: \"probes\" or \"directions\" in the germ file, or --probe/--direction");

    const NormalFormCoeffs& nf = g.nf();
    Report r = base_report(g);
    Json probe_out = Json::array();
    for (const ProbePoint& p : probes) {
        const DistanceVerdict v = classify_distance(nf, p);
        for (const auto& w : v.warnings) add_warning(r.warnings, w);
        probe_out.push_back(distance_json(v));
    }
    Json direction_out = Json::array();
    if (!directions.empty()) {
        const BlowupContext ctx = g.context();
        for (const auto& [theta, lambda] : directions) {
            const GeometricVerdict v = geometric_verdict(ctx, theta, lambda);
            for (const auto& w : v.coefficient.warnings) add_warning(r.warnings, w);
            Json j = geometric_json(v);
            j["theta0"] = number_json(theta);
            j["lambda"] = number_json(lambda);
            direction_out.push_back(j);
        }
    }
    r.distance = {{"probes", probe_out}, {"directions", direction_out}};
    r.focal_locus = focal_json(focal_locus(nf));
    finish(c, r, out, err);
    return 0;
}

int run_focal(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const LoadedGerm g = load(c);
    Report r = base_report(g);
    r.focal_locus = focal_json(focal_locus(g.nf()));
    finish(c, r, out, err);
    return 0;
}

int run_mesh(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const LoadedGerm g = load(c);
    const bool blowup = c.grid.chart == Chart::Blowup;
    Mesh m;
    switch (c.mesh_kind) {
        case MeshKind::Surface: m = blowup ? surface_mesh(g.context(), c.grid) : surface_mesh(g.jets, c.grid); break;
        case MeshKind::Wavefront: {
            const WavefrontSpec spec{c.t0, c.grid};
            m = blowup ? wavefront_mesh(g.context(), spec, c.sign) : wavefront_mesh(g.jets, spec, c.sign);
            break;
        }
        case MeshKind::Focal:
            m = blowup ? focal_sheet_mesh(g.context(), c.grid, c.branch) : focal_sheet_mesh(g.jets, c.grid, c.branch);
            break;
    }
    const bool csv_path = c.output.size() >= 4 && c.output.compare(c.output.size() - 4, 4, ".csv") == 0;
    const MeshFormat format = c.format.value_or(csv_path ? MeshFormat::Csv : MeshFormat::Obj);
    for (const auto& w : g.warnings) err << "warning: " << w << '\n';
    if (m.skipped_cells > 0) err << "warning: " << m.skipped_cells << " grid cells skipped\n";
    write_text(c, mesh_to_string(m, format), out);
    return 0;
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    VerifyOptions options;
    options.seed = c.seed;
    options.samples = c.samples;
    const VerifySummary s = run_verification(options);
    std::vector<std::string> warnings;
    for (const AppendixEntry& e : s.appendix)
        if (e.row.mismatch && e.row.suspected_typo)
            add_warning(warnings, "appendix: printed " + e.row.symbol + " disagrees with the pipeline (suspected typo)");
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    const Json j{{"verify", verify_json(s)}, {"warnings", warnings}};
    write_text(c, j.dump(2) + "\n", out);
    if (const int n = s.hard_mismatches(); n > 0) {
        const Json e{{"error", {{"kind", "verify_mismatch"}, {"message", std::to_string(n) + " hard mismatches"}, {"count", n}}}};
        err << e.dump() << '\n';
        return 2;
    }
    return 0;
}

Json error_json(const std::string& kind, const std::string& message) { return {{"error", {{"kind", kind}, {"message", message}}}}; }

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    c.validate();
    switch (c.subcommand) {
        case Subcommand::Classify: return run_classify(c, out, err);
        case Subcommand::Geometry: return run_geometry(c, out, err);
        case Subcommand::Distance: return run_distance(c, out, err);
        case Subcommand::Focal: return run_focal(c, out, err);
        case Subcommand::Mesh: return run_mesh(c, out, err);
        case Subcommand::Verify: return run_verify(c, out, err);
    }
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Json e;
    int code = 1;
    try {
        const std::optional<RunConfig> config = parse_run_config(argc, argv, std::getenv("GERMFORGE_MODE"), out);
        if (!config) return 0;
        return run(*config, out, err);
    } catch (const HypothesisError& x) {
        e = error_json("hypothesis", x.what());
    } catch (const ParseError& x) {
        e = error_json("parse", x.what());
        e["error"]["line"] = x.line();
        e["error"]["column"] = x.column();
    } catch (const SchemaError& x) {
        e = error_json("schema", x.what());
        e["error"]["field"] = x.field_path();
    } catch (const UsageError& x) {
        e = error_json("usage", x.what());
    } catch (const ConsistencyError& x) {
        e = error_json("consistency", x.what());
        code = 2;
    } catch (const std::exception& x) {
        e = error_json("internal", x.what());
        code = 2;
    }
    err << e.dump() << '\n';
    return code;
}

}  // namespace germforge
