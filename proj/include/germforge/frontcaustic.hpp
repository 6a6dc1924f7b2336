#pragma once

#include "germforge/blowup.hpp"
#include "germforge/mesh.hpp"

#include <string>

namespace germforge {

enum class FrontType { CuspidalEdge, Swallowtail, Undetermined };
std::string to_string(FrontType t);

/// kappa1 vanishes at r = 0 along the requested direction, so there is no focal point.
class HypothesisError : public UsageError {
public:
    using UsageError::UsageError;
};

struct FrontVerdict {
    double theta0 = 0;
    FrontType wavefront = FrontType::Undetermined;
    FrontType caustic = FrontType::Undetermined;
    /// The flags the verdict was read from.
    RidgeReport basis;
    bool principal_normal = false;
};

/// Table from the ridge flags to the predicted types; pure.
FrontVerdict front_verdict_from_flags(const RidgeReport& flags, bool principal_normal);

/// Prediction at p0 = n(0, theta0) / kappa1(0, theta0). Throws HypothesisError if kappa1 vanishes there.
FrontVerdict front_verdict(const BlowupContext& ctx, double theta0);

Json front_json(const FrontVerdict& v);

enum class Chart { Direct, Blowup };
std::string to_string(Chart c);
Chart chart_from_string(const std::string& text);

/// Direct chart: (u, v) in [-extent, extent]^2. Blow-up chart: (r, theta) in
/// [-extent, extent] x [-pi/2, pi/2] through (r cos, r^(n+1) cos^n sin).
struct MeshGrid {
    int rows = 64;
    int cols = 64;
    double extent = 0.5;
    Chart chart = Chart::Direct;

    void validate() const;
};

struct WavefrontSpec {
    double t0 = 0;
    MeshGrid grid;

    void validate() const;
};

enum class OffsetSign { Plus, Minus };
std::string to_string(OffsetSign s);
OffsetSign offset_sign_from_string(const std::string& text);

/// Which principal curvature the focal sheet uses: the one bounded at the singular
/// point, or the other. In the direct chart "bounded" means the smaller magnitude.
enum class FocalBranch { Bounded, Unbounded };
std::string to_string(FocalBranch b);
FocalBranch focal_branch_from_string(const std::string& text);

/// Unit normal below this cross-product length counts as undefined in the direct chart.
inline constexpr double kSingularCrossTolerance = 1e-12;

Mesh surface_mesh(const GermJets& g, const MeshGrid& grid);
Mesh surface_mesh(const BlowupContext& ctx, const MeshGrid& grid);

Mesh wavefront_mesh(const GermJets& g, const WavefrontSpec& spec, OffsetSign sign);
Mesh wavefront_mesh(const BlowupContext& ctx, const WavefrontSpec& spec, OffsetSign sign);

Mesh focal_sheet_mesh(const GermJets& g, const MeshGrid& grid, FocalBranch branch = FocalBranch::Bounded);
Mesh focal_sheet_mesh(const BlowupContext& ctx, const MeshGrid& grid, FocalBranch branch = FocalBranch::Bounded);

/// Triangles with area / longest_edge^2 below `ratio`.
std::size_t degenerate_triangle_count(const Mesh& m, double ratio = 1e-3);

}  // namespace germforge
