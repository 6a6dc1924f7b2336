#include "germforge/frontcaustic.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

namespace germforge {

std::string to_string(FrontType t) {
    switch (t) {
        case FrontType::CuspidalEdge: return "CuspidalEdge";
        case FrontType::Swallowtail: return "Swallowtail";
        case FrontType::Undetermined: return "Undetermined";
    }
    return "?";
}

FrontVerdict front_verdict_from_flags(const RidgeReport& flags, bool principal_normal) {
    FrontVerdict out;
    out.theta0 = flags.theta;
    out.basis = flags;
    out.principal_normal = principal_normal;
    if (principal_normal) return out;
    if (!flags.is_ridge) {
        out.wavefront = FrontType::CuspidalEdge;
    } else if (flags.is_first_order_ridge && !flags.is_subparabolic) {
        out.wavefront = FrontType::Swallowtail;
        out.caustic = FrontType::CuspidalEdge;
    }
    return out;
}

FrontVerdict front_verdict(const BlowupContext& ctx, double theta0) {
    const RidgeReport rr = ridge_report(ctx, theta0);
    const bool principal = std::abs(std::cos(theta0)) <= kCosTolerance;
    if (!principal && rr.point_type == PointType::Parabolic)
        throw HypothesisError("kappa1 vanishes at (0, theta0): no focal point along this normal");
    return front_verdict_from_flags(rr, principal);
}

Json front_json(const FrontVerdict& v) {
    Json j;
    j["theta0"] = number_json(v.theta0);
    j["wavefront"] = to_string(v.wavefront);
    j["caustic"] = to_string(v.caustic);
    j["principal_normal"] = v.principal_normal;
    j["basis"] = {{"is_ridge", v.basis.is_ridge},
                  {"is_first_order_ridge", v.basis.is_first_order_ridge},
                  {"is_subparabolic", v.basis.is_subparabolic}};
    return j;
}

std::string to_string(Chart c) { return c == Chart::Direct ? "direct" : "blowup"; }

Chart chart_from_string(const std::string& text) {
    if (text == "direct") return Chart::Direct;
    if (text == "blowup") return Chart::Blowup;
    throw UsageError("unknown chart '" + text + "' (expected direct|blowup)");
}

void MeshGrid::validate() const {
    if (rows < 2 || cols < 2) throw UsageError("mesh grid sizes must be at least 2");
    if (!(extent > 0) || !std::isfinite(extent)) throw UsageError("mesh extent must be positive and finite");
}

void WavefrontSpec::validate() const {
    grid.validate();
    if (!(t0 >= 0) || !std::isfinite(t0)) throw UsageError("t0 must be nonnegative and finite");
}

std::string to_string(OffsetSign s) { return s == OffsetSign::Plus ? "+" : "-"; }

OffsetSign offset_sign_from_string(const std::string& text) {
    if (text == "+" || text == "plus") return OffsetSign::Plus;
    if (text == "-" || text == "minus") return OffsetSign::Minus;
    throw UsageError("unknown offset sign '" + text + "' (expected +|-)");
}

std::string to_string(FocalBranch b) { return b == FocalBranch::Bounded ? "bounded" : "unbounded"; }

FocalBranch focal_branch_from_string(const std::string& text) {
    if (text == "bounded") return FocalBranch::Bounded;
    if (text == "unbounded") return FocalBranch::Unbounded;
    throw UsageError("unknown focal branch '" + text + "' (expected bounded|unbounded)");
}

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 axpy(const Vec3& x, double t, const Vec3& n) { return {x[0] + t * n[0], x[1] + t * n[1], x[2] + t * n[2]}; }

std::string fmt(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

using NodeFn = std::function<std::optional<Vec3>(double, double)>;

// Samples the grid node by node, then emits two counterclockwise triangles per cell
// whose corners all exist. In the blow-up chart cells touching |cos theta| <= tol are skipped.
Mesh build_grid_mesh(const MeshGrid& grid, const NodeFn& node, const std::string& kind) {
    grid.validate();
    const bool blowup = grid.chart == Chart::Blowup;
    const double lo2 = blowup ? -std::numbers::pi / 2 : -grid.extent;
    const double hi2 = blowup ? std::numbers::pi / 2 : grid.extent;
    const auto p1 = [&](int i) { return -grid.extent + 2 * grid.extent * i / (grid.rows - 1); };
    const auto p2 = [&](int j) { return lo2 + (hi2 - lo2) * j / (grid.cols - 1); };

    Mesh m;
    m.metadata["kind"] = kind;
    m.metadata["chart"] = to_string(grid.chart);
    m.metadata["rows"] = std::to_string(grid.rows);
    m.metadata["cols"] = std::to_string(grid.cols);
    m.metadata["extent"] = fmt(grid.extent);

    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(static_cast<std::size_t>(grid.rows) * grid.cols, none);
    std::vector<bool> edge(index.size(), false);
    for (int i = 0; i < grid.rows; ++i)
        for (int j = 0; j < grid.cols; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * grid.cols + j;
            edge[k] = blowup && std::abs(std::cos(p2(j))) <= kCosTolerance;
            const std::optional<Vec3> v = node(p1(i), p2(j));
            if (!v || !std::isfinite((*v)[0]) || !std::isfinite((*v)[1]) || !std::isfinite((*v)[2])) continue;
            index[k] = m.vertices.size();
            m.vertices.push_back(*v);
            m.parameters.push_back({p1(i), p2(j)});
        }
    for (int i = 0; i + 1 < grid.rows; ++i)
        for (int j = 0; j + 1 < grid.cols; ++j) {
            const std::size_t k00 = static_cast<std::size_t>(i) * grid.cols + j, k10 = k00 + grid.cols;
            const std::size_t k01 = k00 + 1, k11 = k10 + 1;
            bool skip = false;
            for (std::size_t k : {k00, k10, k01, k11}) skip = skip || index[k] == none || edge[k];
            if (skip) {
                ++m.skipped_cells;
                continue;
            }
            m.faces.push_back({index[k00], index[k10], index[k11]});
            m.faces.push_back({index[k00], index[k11], index[k01]});
        }
    m.metadata["skipped_cells"] = std::to_string(m.skipped_cells);
    return m;
}

// Derivative jets of a germ for direct-chart evaluation.
struct DirectSurface {
    std::array<Jet2, 3> g, gu, gv, guu, guv, gvv;

    explicit DirectSurface(const GermJets& germ) {
        for (int k = 0; k < 3; ++k) {
            g[k] = germ.component(k);
            gu[k] = partial_derivative(g[k], Var::U);
            gv[k] = partial_derivative(g[k], Var::V);
            guu[k] = partial_derivative(gu[k], Var::U);
            guv[k] = partial_derivative(gu[k], Var::V);
            gvv[k] = partial_derivative(gv[k], Var::V);
        }
    }
    static Vec3 at(const std::array<Jet2, 3>& p, double u, double v) {
        return {p[0].evaluate(u, v), p[1].evaluate(u, v), p[2].evaluate(u, v)};
    }
    std::optional<Vec3> unit_normal(double u, double v) const {
        const Vec3 x = cross(at(gu, u, v), at(gv, u, v));
        const double len = std::sqrt(dot(x, x));
        if (len <= kSingularCrossTolerance) return std::nullopt;
        return Vec3{x[0] / len, x[1] / len, x[2] / len};
    }
};

// Principal curvatures (kappa_small, kappa_large by magnitude) from the fundamental forms.
std::array<double, 2> principal_pair(double E, double F, double G, double L, double M, double N) {
    const double W = E * G - F * F, P = L * N - M * M, T = E * N - 2 * F * M + G * L;
    const double S = (T < 0 ? -1.0 : 1.0) * std::sqrt(std::max(0.0, T * T - 4 * W * P));
    const double large = (T + S) / (2 * W);
    const double small = (T + S) == 0.0 ? 0.0 : 2 * P / (T + S);
    return {small, large};
}

std::optional<Vec3> focal_point(const Vec3& point, const Vec3& normal, double kappa, double scale) {
    if (!std::isfinite(kappa) || std::abs(kappa) <= 1e-12 * scale) return std::nullopt;
    return axpy(point, 1.0 / kappa, normal);
}

void require_direct(const MeshGrid& grid) {
    if (grid.chart != Chart::Direct) throw UsageError("the blow-up chart needs the germ's class (a blow-up context)");
}

Vec3 blowup_point(const BlowupContext& ctx, double r, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double u = r * c, v = ipow(r, ctx.n() + 1) * ipow(c, ctx.n()) * s;
    return {evaluate(ctx.g()[0], u, v), evaluate(ctx.g()[1], u, v), evaluate(ctx.g()[2], u, v)};
}

GermJets context_germ(const BlowupContext& ctx) { return ctx.nf().reconstruct().in_mode(ScalarMode::Float); }

}  // namespace

Mesh surface_mesh(const GermJets& g, const MeshGrid& grid) {
    require_direct(grid);
    const DirectSurface s(g.in_mode(ScalarMode::Float));
    return build_grid_mesh(grid, [&](double u, double v) { return std::optional<Vec3>(DirectSurface::at(s.g, u, v)); }, "surface");
}

Mesh surface_mesh(const BlowupContext& ctx, const MeshGrid& grid) {
    if (grid.chart == Chart::Direct) return surface_mesh(context_germ(ctx), grid);
    return build_grid_mesh(grid, [&](double r, double t) { return std::optional<Vec3>(blowup_point(ctx, r, t)); }, "surface");
}

namespace {

void tag_wavefront(Mesh& m, const WavefrontSpec& spec, OffsetSign sign) {
    m.metadata["t0"] = fmt(spec.t0);
    m.metadata["sign"] = to_string(sign);
}

}  // namespace

Mesh wavefront_mesh(const GermJets& g, const WavefrontSpec& spec, OffsetSign sign) {
    spec.validate();
    require_direct(spec.grid);
    const DirectSurface s(g.in_mode(ScalarMode::Float));
    const double t = sign == OffsetSign::Plus ? spec.t0 : -spec.t0;
    Mesh m = build_grid_mesh(
        spec.grid,
        [&](double u, double v) -> std::optional<Vec3> {
            const Vec3 p = DirectSurface::at(s.g, u, v);
            if (spec.t0 == 0.0) return p;
            const std::optional<Vec3> n = s.unit_normal(u, v);
            if (!n) return std::nullopt;
            return axpy(p, t, *n);
        },
        "wavefront");
    tag_wavefront(m, spec, sign);
    return m;
}

Mesh wavefront_mesh(const BlowupContext& ctx, const WavefrontSpec& spec, OffsetSign sign) {
    spec.validate();
    if (spec.grid.chart == Chart::Direct) return wavefront_mesh(context_germ(ctx), spec, sign);
    const double t = sign == OffsetSign::Plus ? spec.t0 : -spec.t0;
    Mesh m = build_grid_mesh(
        spec.grid,
        [&](double r, double theta) -> std::optional<Vec3> {
            const Vec3 p = blowup_point(ctx, r, theta);
            if (spec.t0 == 0.0) return p;
            return axpy(p, t, extended_normal_at(ctx, r, theta));
        },
        "wavefront");
    tag_wavefront(m, spec, sign);
    return m;
}

Mesh focal_sheet_mesh(const GermJets& g, const MeshGrid& grid, FocalBranch branch) {
    require_direct(grid);
    const DirectSurface s(g.in_mode(ScalarMode::Float));
    Mesh m = build_grid_mesh(
        grid,
        [&](double u, double v) -> std::optional<Vec3> {
            const std::optional<Vec3> n = s.unit_normal(u, v);
            if (!n) return std::nullopt;
            const Vec3 gu = DirectSurface::at(s.gu, u, v), gv = DirectSurface::at(s.gv, u, v);
            const double E = dot(gu, gu), F = dot(gu, gv), G = dot(gv, gv);
            const double L = dot(DirectSurface::at(s.guu, u, v), *n), M = dot(DirectSurface::at(s.guv, u, v), *n),
                         N = dot(DirectSurface::at(s.gvv, u, v), *n);
            const auto [small, large] = principal_pair(E, F, G, L, M, N);
            const double scale = std::max({1.0, std::abs(small), std::abs(large)});
            return focal_point(DirectSurface::at(s.g, u, v), *n, branch == FocalBranch::Bounded ? small : large, scale);
        },
        "focal");
    m.metadata["branch"] = to_string(branch);
    return m;
}

Mesh focal_sheet_mesh(const BlowupContext& ctx, const MeshGrid& grid, FocalBranch branch) {
    if (grid.chart == Chart::Direct) return focal_sheet_mesh(context_germ(ctx), grid, branch);
    Mesh m = build_grid_mesh(
        grid,
        [&](double r, double theta) -> std::optional<Vec3> {
            if (r == 0.0) {
                if (branch == FocalBranch::Unbounded) return std::nullopt;
                return focal_point(Vec3{0, 0, 0}, extended_normal_at(ctx, 0.0, theta), k10_at(ctx, theta), 1.0);
            }
            const RawCurvature rc = raw_curvature(ctx, r, theta);
            const double kappa = branch == FocalBranch::Bounded ? rc.kappa1 : rc.kappa2;
            return focal_point(rc.point, rc.normal, kappa, std::max(1.0, std::abs(rc.kappa1)));
        },
        "focal");
    m.metadata["branch"] = to_string(branch);
    return m;
}

std::size_t degenerate_triangle_count(const Mesh& m, double ratio) {
    std::size_t count = 0;
    for (const auto& f : m.faces) {
        const Vec3 &a = m.vertices[f[0]], &b = m.vertices[f[1]], &c = m.vertices[f[2]];
        const Vec3 ab = sub(b, a), ac = sub(c, a), bc = sub(c, b);
        const Vec3 x = cross(ab, ac);
        const double area = 0.5 * std::sqrt(dot(x, x));
        const double longest = std::max({dot(ab, ab), dot(ac, ac), dot(bc, bc)});
        if (longest == 0.0 || area / longest < ratio) ++count;
    }
    return count;
}

}  // namespace germforge
