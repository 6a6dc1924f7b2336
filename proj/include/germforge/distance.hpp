#pragma once

#include "germforge/blowup.hpp"
#include "germforge/germ_io.hpp"
#include "germforge/normal_form.hpp"
#include "germforge/oracle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace germforge {

/// Target point p0 of the distance-squared function.
struct ProbePoint {
    Scalar x0, y0, z0;

    ScalarMode mode() const;
    /// x0 = 0.
    bool on_normal_plane() const { return x0.is_zero(); }
};

enum class DistanceSingType { Regular, A1, A2, A3, A4plus, D4plus };
std::string to_string(DistanceSingType t);

enum class ProbeBranch { PrincipalNormal, OffPrincipal };
std::string to_string(ProbeBranch b);

/// One tested coefficient expression. `scale` is the sum of the magnitudes of its summands,
/// used for the float-mode zero test.
struct WitnessValue {
    std::string name;
    Scalar value;
    double scale = 0;
    bool zero = false;
};

struct DistanceVerdict {
    ProbePoint p0;
    DistanceSingType sing_type = DistanceSingType::Regular;
    ProbeBranch branch = ProbeBranch::OffPrincipal;
    /// "regular", "1", "2a", "2b", "3a", "3b", "4a", "4b" or "5".
    std::string condition;
    bool r_plus_versal = true;
    bool k_versal = true;
    std::vector<WitnessValue> witness;
    /// For condition 4a: k of the A_k found by eliminating the nondegenerate direction;
    /// absent when the working order cannot decide it.
    std::optional<int> exact_k;
    std::vector<std::string> warnings;
};

/// Jet of (1/2)|g(u,v) - p|^2 for the germ described by `nf`, constant term kept.
Jet2 distance_jet(const NormalFormCoeffs& nf, const ProbePoint& p, int order);

/// Coefficient decision tree for the type of the distance-squared function at the origin
/// and the versality of the family over the target point.
DistanceVerdict classify_distance(const NormalFormCoeffs& nf, const ProbePoint& p);

/// Parameter derivatives D_x, D_y, D_z of the family restricted to p, as jets.
std::vector<Jet2> distance_family_generators(const NormalFormCoeffs& nf, const ProbePoint& p, int order);

/// Rank version of the versality test: types the jet with the splitting-lemma oracle, then
/// checks the tangent-space equality up to the determinacy order.
bool versality_rank_test(const NormalFormCoeffs& nf, const ProbePoint& p, VersalityFlavor flavor);

enum class FocalKind { IntersectingPair, ParallelPair, SingleLine };
std::string to_string(FocalKind k);

/// Line cy*y + cz*z = rhs in the normal (y, z) plane.
struct FocalLine {
    Scalar cy, cz, rhs;
    /// Unit direction and the point closest to the origin, as doubles.
    std::array<double, 2> direction{};
    std::array<double, 2> point{};
};

struct FocalLocus {
    FocalKind kind = FocalKind::SingleLine;
    std::vector<FocalLine> lines;
    /// (y, z) of the crossing, for an intersecting pair.
    std::optional<std::array<Scalar, 2>> intersection;
};

FocalLocus focal_locus(const NormalFormCoeffs& nf);

enum class SingularPointType { Hyperbolic, Inflection, DegenerateInflection };
std::string to_string(SingularPointType t);
SingularPointType singular_point_type(const NormalFormCoeffs& nf);

/// Ridge and sub-parabolic flags in the form the geometric route consumes.
struct GeometricFlags {
    bool principal_normal = false;
    bool parabolic = false;
    bool on_focal_locus = false;
    bool is_ridge = false;
    bool is_first_order_ridge = false;
    bool is_subparabolic = false;
    /// Delta1 vanishes for every angle, i.e. (a30, b3) = (0, 0).
    bool ridge_everywhere = false;
    /// On the principal normal: p0 is the crossing of the focal lines.
    bool at_focal_intersection = false;
};

/// What the ridge-based route predicts. Versality left empty is not predicted.
struct ExpectedVerdict {
    std::vector<DistanceSingType> allowed;
    std::optional<bool> r_plus_versal;
    std::optional<bool> k_versal;
};

ExpectedVerdict expected_from_flags(const GeometricFlags& flags);

struct GeometricVerdict {
    DistanceVerdict coefficient;
    GeometricFlags flags;
    ExpectedVerdict expected;
};

/// True if the coefficient verdict is one the flags allow.
bool routes_agree(const DistanceVerdict& v, const ExpectedVerdict& e);

/// p0 = lambda * n(0, theta0) with the extended unit normal; both routes run in float mode.
/// Throws ConsistencyError if they disagree.
GeometricVerdict geometric_verdict(const BlowupContext& ctx, double theta0, double lambda);

/// Exact variant. The normal direction at (0, theta) is proportional to
/// (0, -a_{n+1,1} c, (n+1)! s), with (c, s) any rational multiple of (cos, sin);
/// p0 = mu * (0, -a_{n+1,1} c, (n+1)! s). Throws ConsistencyError if the routes disagree.
GeometricVerdict geometric_verdict_exact(const NormalFormCoeffs& nf, int n, const mpq_class& c, const mpq_class& s,
                                         const mpq_class& mu);

/// mu placing p0 on the focal locus along direction (c, s); empty if the point is parabolic.
std::optional<mpq_class> focal_mu(const NormalFormCoeffs& nf, int n, const mpq_class& c, const mpq_class& s);

Json distance_json(const DistanceVerdict& v);
Json focal_json(const FocalLocus& f);

}  // namespace germforge
