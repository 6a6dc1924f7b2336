#pragma once

#include "germforge/jet.hpp"
#include "germforge/normal_form.hpp"
#include "germforge/sampling.hpp"

#include <random>

namespace germforge::testing {

using germforge::DistanceConfig;
using germforge::random_class_nf;
using germforge::random_distance_config;
using germforge::random_nf;
using germforge::random_nonzero_rational;
using germforge::random_rational;


/// Exact jet with every monomial of degree in [min_degree, order] present with probability `density`.
inline Jet2 random_jet(std::mt19937_64& rng, int order, int min_degree = 0, double density = 0.6, long den = 9) {
    std::bernoulli_distribution keep(density);
    Jet2::Terms t;
    for (int d = min_degree; d <= order; ++d)
        for (int i = 0; i <= d; ++i)
            if (keep(rng)) t[Exponent{i, d - i}] = Scalar(random_rational(rng, 9, den));
    return Jet2(order, ScalarMode::Exact, t);
}


}  // namespace germforge::testing

namespace germforge::testing {

/// Rational rotation from the unnormalised quaternion (1, p, q, r).
inline Matrix3 random_rotation(std::mt19937_64& rng) {
    const mpq_class p = random_rational(rng, 5, 4), q = random_rational(rng, 5, 4), r = random_rational(rng, 5, 4);
    const mpq_class n = 1 + p * p + q * q + r * r;
    mpq_class m[3][3] = {
        {1 + p * p - q * q - r * r, 2 * (p * q - r), 2 * (p * r + q)},
        {2 * (p * q + r), 1 - p * p + q * q - r * r, 2 * (q * r - p)},
        {2 * (p * r - q), 2 * (q * r + p), 1 - p * p - q * q + r * r},
    };
    Matrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = Scalar(mpq_class(m[i][j] / n));
    return out;
}

/// Source diffeomorphism with identity linear part plus random higher terms.
inline std::pair<Jet2, Jet2> random_source_diffeo(std::mt19937_64& rng, int order) {
    const Jet2 u = Jet2::variable(Var::U, order, ScalarMode::Exact), v = Jet2::variable(Var::V, order, ScalarMode::Exact);
    return {add(u, random_jet(rng, order, 2, 0.5, 5)), add(v, random_jet(rng, order, 2, 0.5, 5))};
}

}  // namespace germforge::testing

#include "germforge/mond.hpp"

namespace germforge::testing {


}  // namespace germforge::testing

#include "germforge/distance.hpp"

namespace germforge::testing {


}  // namespace germforge::testing
