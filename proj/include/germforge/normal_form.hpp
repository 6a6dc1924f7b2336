#pragma once

#include "germforge/jet.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace germforge {

enum class TwoJetClass {
    UVSquared,   ///< 2-jet ~ (u, v^2, 0)
    UUV,         ///< 2-jet ~ (u, uv, 0), the H_k branch
    CrossCap,    ///< 2-jet ~ (u, v^2, uv), the Whitney umbrella
    Degenerate,  ///< 2-jet ~ (u, 0, 0)
};

std::string to_string(TwoJetClass c);

/// A corank-1 germ whose 2-jet is (u, uv, 0); its reduction is not supported.
class OutOfScopeHk : public UsageError {
public:
    OutOfScopeHk() : UsageError("2-jet is (u, uv, 0): H_k germs are detected but not reduced") {}
};

class UnsupportedGerm : public UsageError {
public:
    using UsageError::UsageError;
};

/// Coefficients of the pre-normal form
///   (u, v^2/2 + sum b_i u^i/i!, a_20 u^2/2 + sum a_ij u^i v^j/(i! j!)).
/// The entries a_00, a_10, a_01, a_11, a_02 are structurally zero and never stored.
class NormalFormCoeffs {
public:
    NormalFormCoeffs() = default;
    NormalFormCoeffs(int order, ScalarMode mode) : order_(order), mode_(mode) {}

    int order() const { return order_; }
    ScalarMode mode() const { return mode_; }

    Scalar a(int i, int j) const;
    Scalar b(int i) const;
    void set_a(int i, int j, const Scalar& value);
    void set_b(int i, const Scalar& value);

    const std::map<Exponent, Scalar>& a_terms() const { return a_; }
    const std::map<int, Scalar>& b_terms() const { return b_; }

    /// Largest coefficient magnitude, at least 1; scales float zero tests.
    double scale() const;
    /// Zero test: exact in exact mode, relative 1e-9 cut in float mode.
    bool is_zero(const Scalar& s) const;

    NormalFormCoeffs in_mode(ScalarMode mode) const;
    NormalFormCoeffs with_order(int order) const;

    /// The germ (u, y, z) this coefficient set describes.
    GermJets reconstruct() const;
    /// Reads coefficients off a germ already in pre-normal form; throws if it is not.
    static NormalFormCoeffs read_off(const GermJets& g);

    friend bool operator==(const NormalFormCoeffs&, const NormalFormCoeffs&) = default;

private:
    int order_ = 0;
    ScalarMode mode_ = ScalarMode::Exact;
    std::map<int, Scalar> b_;
    std::map<Exponent, Scalar> a_;
};

using Matrix3 = std::array<std::array<Scalar, 3>, 3>;

Matrix3 identity_matrix3();
bool is_orthogonal(const Matrix3& m, double tolerance);

struct TransformStep {
    enum class Kind { TargetRotation, SourceSubstitution };
    Kind kind = Kind::SourceSubstitution;
    Matrix3 rotation = identity_matrix3();
    Jet2 u_new;
    Jet2 v_new;
    std::string note;
};

struct TransformLog {
    std::vector<TransformStep> steps;

    /// Applies every step in order: rotations act on the target, substitutions on the source.
    GermJets replay(const GermJets& g) const;
};

GermJets apply_rotation(const Matrix3& r, const GermJets& g);
GermJets apply_substitution(const GermJets& g, const Jet2& u_new, const Jet2& v_new);

/// 2 minus the rank of the linear part at the origin.
int corank_at_origin(const GermJets& g);

TwoJetClass two_jet_class(const GermJets& g);

struct Reduction {
    NormalFormCoeffs nf;
    TransformLog log;
    /// True if an irrational square root pushed the computation into float mode.
    bool forced_float = false;
};

/// Brings a corank-1 germ with 2-jet (u, v^2, 0) to pre-normal form at `order`.
Reduction reduce_to_normal_form(const GermJets& g, int order);

}  // namespace germforge
