#pragma once

#include "germforge/appendix.hpp"
#include "germforge/distance.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace germforge {

/// The coefficient type is consistent with the oracle's: A4plus covers A_k for k >= 4 and an
/// undecided corank-1 residual, D4plus covers D4 and an undecided corank-2 cubic.
bool oracle_agrees(DistanceSingType mine, const SingularityType& oracle);

struct VerifyOptions {
    std::uint64_t seed = 0;
    int samples = 50;
    std::vector<double> appendix_thetas{0.3, 0.9, -0.7};
};

struct AppendixEntry {
    std::string germ;
    AppendixRow row;
};

struct VerifyCheck {
    std::string name;
    int runs = 0;
    int mismatches = 0;
    /// One line per mismatch.
    std::vector<std::string> failures;
};

struct VerifySummary {
    std::vector<AppendixEntry> appendix;
    std::vector<VerifyCheck> checks;

    /// Appendix mismatches off the suspected-typo list plus every failed check.
    int hard_mismatches() const;
};

/// Appendix cross-check on one random germ per class S1, S2, B2, C3, F4, then `samples` runs each
/// of the oracle equivalence, the versality dual check and the geometric route agreement.
VerifySummary run_verification(const VerifyOptions& options);

Json verify_json(const VerifySummary& s);

}  // namespace germforge
