#pragma once

#include "germforge/germ_io.hpp"
#include "germforge/mond.hpp"
#include "germforge/series.hpp"

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace germforge {

/// The requested angle points along the principal normal (cos theta = 0), where the
/// curvature quotients are undefined.
class PrincipalNormalDirection : public UsageError {
public:
    explicit PrincipalNormalDirection(double theta);
};

/// |cos theta| at or below this counts as the principal normal direction.
inline constexpr double kCosTolerance = 1e-8;

/// Monomial r^r cos^c(theta) sin^s(theta).
struct TrigMonomial {
    int r = 0;
    int c = 0;
    int s = 0;
    auto operator<=>(const TrigMonomial&) const = default;
};

/// Finite sum of TrigMonomials: a polynomial in r whose coefficients are
/// trigonometric monomials in theta.
class TrigSeries {
public:
    using Terms = std::map<TrigMonomial, double>;

    const Terms& terms() const { return terms_; }
    double coeff(int r, int c, int s) const;
    void add_term(const TrigMonomial& m, double value);

    /// Coefficients of r^0 .. r^depth at the given angle.
    Series at(double theta, int depth) const;
    double evaluate(double r, double theta) const;
    /// Exact division by a monomial; throws ConsistencyError if a term does not divide.
    TrigSeries divided_by(const TrigMonomial& m) const;

    friend TrigSeries operator+(const TrigSeries& a, const TrigSeries& b);
    friend TrigSeries operator-(const TrigSeries& a, const TrigSeries& b);
    friend TrigSeries operator*(const TrigSeries& a, const TrigSeries& b);

private:
    Terms terms_;
};

/// Polynomial in (u, v) with double coefficients; the geometry works on the germ
/// reconstructed from the normal-form coefficients, taken as an exact polynomial.
using Poly2 = std::map<Exponent, double>;

/// Blow-up data for one germ in pre-normal form: the exponent n of the map
/// (r, theta) -> (r cos, r^(n+1) cos^n sin) and the derivative polynomials of the germ.
class BlowupContext {
public:
    BlowupContext(const NormalFormCoeffs& nf, int n);

    const NormalFormCoeffs& nf() const { return nf_; }
    int n() const { return n_; }
    /// 1 when n = 1, else 0.
    int epsilon() const { return n_ == 1 ? 1 : 0; }
    double a(int i, int j) const;
    double b(int i) const;
    /// a_{n+1,1}, the coefficient that makes the blow-up regular.
    double lead() const { return a(n_ + 1, 1); }
    /// (n+1)!
    double fact() const { return fact_; }
    double ma(double theta) const;

    /// Components of g_u, g_v, g_uu, g_uv, g_vv as polynomials.
    const std::array<Poly2, 3>& gu() const { return gu_; }
    const std::array<Poly2, 3>& gv() const { return gv_; }
    const std::array<Poly2, 3>& guu() const { return guu_; }
    const std::array<Poly2, 3>& guv() const { return guv_; }
    const std::array<Poly2, 3>& gvv() const { return gvv_; }
    /// The surface itself.
    const std::array<Poly2, 3>& g() const { return g_; }
    /// Pullback of g_u x g_v divided by r^(n+1) cos^n.
    const std::array<TrigSeries, 3>& normal_bracket() const { return bracket_; }

private:
    NormalFormCoeffs nf_;
    int n_;
    double fact_;
    std::array<Poly2, 3> g_, gu_, gv_, guu_, guv_, gvv_;
    std::array<TrigSeries, 3> bracket_;
};

/// Blow-up exponent by class: S_k -> k, B_k -> 1, C_k -> k-1, F4 -> 2.
int blowup_exponent(const MondClass& cls);
BlowupContext build_context(const NormalFormCoeffs& nf, const MondClass& cls);

double evaluate(const Poly2& p, double u, double v);
TrigSeries pullback_series(const BlowupContext& ctx, const Poly2& p);
TrigSeries pullback_series(const BlowupContext& ctx, const Jet2& p);

inline constexpr int kDefaultDepth = 2;

struct NormalSeries {
    /// Components n1, n2, n3 as series in r.
    std::array<Series, 3> n;
};

/// Series coefficients of the pulled-back fundamental forms with their leading powers
/// of r removed: F = r^(n+2) F^, G = r^(2n+2) G^, M = r^n M^.
struct FormSeries {
    Series E, F, G, L, M, N;
    double E2() const { return E[2]; }
    double F0() const { return F[0]; }
    double F1() const { return F[1]; }
    double G0() const { return G[0]; }
    double G1() const { return G[1]; }
    double L0() const { return L[0]; }
    double L1() const { return L[1]; }
    double L2() const { return L[2]; }
    double M0() const { return M[0]; }
    double M1() const { return M[1]; }
    double M2() const { return M[2]; }
    double N0() const { return N[0]; }
    double N1() const { return N[1]; }
    double N2() const { return N[2]; }
};

/// Coefficients of the lifted principal vectors
///   v1 = (xi10 + xi11 r) d_r + (eta10 + eta11 r) d_theta,
///   v2 = r^-(2n+1) ((xi21 r) d_r + (eta20 + eta21 r) d_theta).
struct LiftSeries {
    double xi10 = 0, xi11 = 0, eta10 = 0, eta11 = 0;
    double xi21 = 0, eta20 = 0, eta21 = 0;
};

struct CurvatureSeries {
    /// r^(2n+2) K
    Series K;
    /// the bounded principal curvature
    Series k1;
    /// r^(2n+2) times the unbounded one
    Series k2;
    /// N0 < 0: with the root labelling of the quadratic formula the two curvatures trade names.
    bool swapped = false;
    LiftSeries lifts;

    double K0() const { return K[0]; }
    double K1() const { return K[1]; }
    double K2() const { return K[2]; }
    double k10() const { return k1[0]; }
    double k11() const { return k1[1]; }
    double k12() const { return k1[2]; }
    double k20() const { return k2[0]; }
    double k21() const { return k2[1]; }
    double k22() const { return k2[2]; }
};

NormalSeries extended_normal(const BlowupContext& ctx, double theta, int depth = kDefaultDepth);
FormSeries fundamental_forms(const BlowupContext& ctx, double theta, int depth = kDefaultDepth);
CurvatureSeries curvature_series(const BlowupContext& ctx, double theta, int depth = kDefaultDepth);
LiftSeries principal_direction_lifts(const BlowupContext& ctx, double theta);
/// The bounded principal curvature at r = 0; finite for every theta, including +-pi/2.
double k10_at(const BlowupContext& ctx, double theta);

/// Closed-form leading coefficients. Quantities carrying a negative power of cos theta
/// are NaN on the principal normal direction.
struct LeadingClosedForms {
    double n20, n30, E2, F0, F1, G0, G1, L0, M0, N0, K0, k10, k20, xi10, eta10, xi21, eta20;
};
LeadingClosedForms leading_closed_forms(const BlowupContext& ctx, double theta);

/// Direct evaluation at the point Pi(r, theta), r != 0, from the germ's derivatives,
/// with the normal oriented like the extended normal.
struct RawCurvature {
    double K = 0, kappa1 = 0, kappa2 = 0;
    Vec3 point{}, normal{};
};
RawCurvature raw_curvature(const BlowupContext& ctx, double r, double theta);
/// Extended unit normal at (r, theta), evaluated from the full polynomial bracket.
Vec3 extended_normal_at(const BlowupContext& ctx, double r, double theta);

double delta1(const BlowupContext& ctx, double theta);
double delta2(const BlowupContext& ctx, double theta);
double delta3(const BlowupContext& ctx, double theta);

enum class PointType { Elliptic, Hyperbolic, Parabolic };
std::string to_string(PointType t);

struct RidgeReport {
    double theta = 0;
    double delta1 = 0, delta2 = 0, delta3 = 0;
    bool is_ridge = false;
    bool is_first_order_ridge = false;
    bool is_subparabolic = false;
    /// Absent on the principal normal direction.
    std::optional<PointType> point_type;
};
RidgeReport ridge_report(const BlowupContext& ctx, double theta);

/// Uniform samples of (-pi/2, pi/2], the last one being pi/2.
std::vector<double> theta_grid(int samples);

/// Per-theta records of the geometry report section.
Json geometry_json(const BlowupContext& ctx, const std::vector<double>& thetas);

}  // namespace germforge
