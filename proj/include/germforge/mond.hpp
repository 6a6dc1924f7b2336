#pragma once

#include "germforge/normal_form.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace germforge {

enum class MondTag { Immersion, CrossCapS0, S, B, C, F4, TwoJetUV, Indeterminate };
enum class ClassSign { Plus, Minus, NA };

std::string to_string(MondTag tag);
std::string to_string(ClassSign sign);

struct MondClass {
    MondTag tag = MondTag::Indeterminate;
    int k = 0;
    ClassSign sign = ClassSign::NA;
    std::string reason;

    static MondClass make(MondTag tag, int k = 0, ClassSign sign = ClassSign::NA);
    static MondClass indeterminate(std::string reason);

    /// "S1", "B3", "F4", "S0", ... without the sign.
    std::string name() const;
    /// name() followed by "+" or "-" when the sign is meaningful.
    std::string label() const;

    friend bool operator==(const MondClass& a, const MondClass& b) { return a.tag == b.tag && a.k == b.k && a.sign == b.sign; }
};

inline constexpr int kDefaultKMax = 8;
inline constexpr int kDefaultMaxOrder = 20;

/// Jet order that decides the class: S_k k+2, B_k 2k+1, C_k k+1, F4 5.
int determinacy_order(MondTag tag, int k);
/// Working order needed to probe every class up to k_max, capped at max_order.
int working_order(int k_max, int max_order = kDefaultMaxOrder);

/// Constants c_i of the substitution u -> u + sum c_i v^(2(i-1)) and the invariants xi_n.
struct BkRecursionTrace {
    int k = 0;
    std::map<int, Scalar> c;
    std::map<int, Scalar> xi;
    /// Coefficient of u v^(2n-1) after the substitution; zero by construction.
    std::map<int, Scalar> a_hat_odd;
};

BkRecursionTrace bk_recursion(const NormalFormCoeffs& nf, int k);

/// Re-expands the substituted third component and checks the trace against it.
bool verify_by_substitution(const NormalFormCoeffs& nf, const BkRecursionTrace& trace, int k);

/// xi_n from the partition-sum formula, evaluated at the given constants.
Scalar xi_partition_sum(const NormalFormCoeffs& nf, const std::map<int, Scalar>& c, int n);
/// Coefficient of u v^(2n-1) from the partition-sum formula.
Scalar a_hat_partition_sum(const NormalFormCoeffs& nf, const std::map<int, Scalar>& c, int n);

struct ClassifyResult {
    MondClass cls;
    std::optional<BkRecursionTrace> trace;
    std::vector<std::string> warnings;
};

ClassifyResult classify(const NormalFormCoeffs& nf, int k_max = kDefaultKMax);

/// Whole pipeline for a raw germ: corank, 2-jet, reduction, classification.
struct GermClassification {
    MondClass cls;
    std::optional<Reduction> reduction;
    std::optional<BkRecursionTrace> trace;
    std::optional<TwoJetClass> two_jet;
    int corank = 1;
    std::vector<std::string> warnings;
};

GermClassification classify_germ(const GermJets& g, int k_max = kDefaultKMax);

inline constexpr const char* kSignConventionNote = "sign convention: artifact-local";

}  // namespace germforge
