#pragma once

#include "germforge/distance.hpp"
#include "germforge/mond.hpp"
#include "germforge/normal_form.hpp"

#include <gmpxx.h>

#include <random>
#include <string>

namespace germforge {

/// Random rational with numerator in [-num, num] and denominator in [1, den].
mpq_class random_rational(std::mt19937_64& rng, long num = 9, long den = 9);
mpq_class random_nonzero_rational(std::mt19937_64& rng, long num = 9, long den = 9);

/// Exact pre-normal-form coefficients with random entries up to `order`.
NormalFormCoeffs random_nf(std::mt19937_64& rng, int order, double density = 0.7);

/// Random exact pre-normal form in the class (tag, k); k is ignored for F4.
NormalFormCoeffs random_class_nf(std::mt19937_64& rng, MondTag tag, int k, int order = 8);

struct DistanceConfig {
    NormalFormCoeffs nf;
    ProbePoint p;
    /// Condition the sample was steered towards; the classifier is not consulted.
    std::string target;
};

/// Random (germ, target point) steered uniformly towards one branch of the distance
/// decision tree by solving the branch's defining equations for one coefficient.
DistanceConfig random_distance_config(std::mt19937_64& rng, int order = 8);

}  // namespace germforge
