#pragma once

#include "germforge/jet.hpp"

#include <string>
#include <vector>

namespace germforge {

enum class SingularityTag { Regular, A, D4, MoreDegenerate };

struct SingularityType {
    SingularityTag tag = SingularityTag::MoreDegenerate;
    /// k of A_k; 0 otherwise.
    int k = 0;
    int corank = 0;
    /// One-variable residual after splitting off the nondegenerate square (corank 1),
    /// or the cubic part (corank 2).
    Jet2 residual;
    /// The residual vanished to the working order, so the type is only bounded below.
    bool undecided = false;

    /// "Regular", "A1", "A3", "D4", "MoreDegenerate".
    std::string name() const;
};

inline constexpr int kOracleOrder = 6;

/// Splitting-lemma typer for a function jet with a critical point at the origin.
/// Exact jets only; throws UsageError on a nonzero gradient or a float jet.
SingularityType split_and_type(const Jet2& f, int order = kOracleOrder);
/// Like split_and_type, but a nonzero gradient gives Regular.
SingularityType function_type(const Jet2& f, int order = kOracleOrder);

/// Discriminant of p u^3 + q u^2 v + r u v^2 + s v^3.
mpq_class binary_cubic_discriminant(const mpq_class& p, const mpq_class& q, const mpq_class& r, const mpq_class& s);

enum class VersalityFlavor { RPlus, K };
std::string to_string(VersalityFlavor flavor);

/// Rank test for versality modulo m^(order+1). R+: E{f_u, f_v} + R{1} + R{generators};
/// K: E{f_u, f_v, f - f(0)} + R{generators}. True iff these span all jets of degree <= order.
bool versality_rank_oracle(const std::vector<Jet2>& generators, const Jet2& f, VersalityFlavor flavor, int order);

/// Rank of the coefficient matrix of the given jets over monomials of degree <= order.
int monomial_rank(const std::vector<Jet2>& jets, int order);

/// Best rational approximation with denominator at most max_den.
mpq_class rationalize(double x, long max_den = 1'000'000);

struct Rationalized {
    Jet2 jet;
    /// Some coefficient was not reproduced exactly.
    bool approximated = false;
};
/// Exact copy of a jet; float coefficients are replaced by bounded-denominator rationals.
Rationalized rationalize_jet(const Jet2& f, long max_den = 1'000'000);

}  // namespace germforge
