#include "germforge/sampling.hpp"

namespace germforge {

mpq_class random_rational(std::mt19937_64& rng, long num, long den) {
    std::uniform_int_distribution<long> n(-num, num), d(1, den);
    mpq_class q(n(rng), d(rng));
    q.canonicalize();
    return q;
}

mpq_class random_nonzero_rational(std::mt19937_64& rng, long num, long den) {
    for (;;) {
        mpq_class q = random_rational(rng, num, den);
        if (q != 0) return q;
    }
}

NormalFormCoeffs random_nf(std::mt19937_64& rng, int order, double density) {
    std::bernoulli_distribution keep(density);
    NormalFormCoeffs nf(order, ScalarMode::Exact);
    for (int i = 2; i <= order; ++i)
        if (keep(rng)) nf.set_b(i, Scalar(random_rational(rng)));
    for (int d = 2; d <= order; ++d)
        for (int i = 0; i <= d; ++i) {
            const int j = d - i;
            if ((i == 1 && j == 1) || (i == 0 && j == 2)) continue;
            if (keep(rng)) nf.set_a(i, j, Scalar(random_rational(rng)));
        }
    return nf;
}

NormalFormCoeffs random_class_nf(std::mt19937_64& rng, MondTag tag, int k, int order) {
    auto nonzero = [&] { return Scalar(random_nonzero_rational(rng)); };
    for (;;) {
        NormalFormCoeffs nf = random_nf(rng, order);
        switch (tag) {
            case MondTag::S:
                for (int i = 2; i <= k; ++i) nf.set_a(i, 1, Scalar(0));
                nf.set_a(k + 1, 1, nonzero());
                nf.set_a(0, 3, nonzero());
                break;
            case MondTag::B:
                nf.set_a(0, 3, Scalar(0));
                nf.set_a(2, 1, nonzero());
                break;
            case MondTag::C:
                nf.set_a(0, 3, Scalar(0));
                for (int i = 2; i < k; ++i) nf.set_a(i, 1, Scalar(0));
                nf.set_a(k, 1, nonzero());
                nf.set_a(1, 3, nonzero());
                break;
            case MondTag::F4:
                nf.set_a(0, 3, Scalar(0));
                nf.set_a(2, 1, Scalar(0));
                nf.set_a(1, 3, Scalar(0));
                nf.set_a(3, 1, nonzero());
                nf.set_a(0, 5, nonzero());
                break;
            default:
                throw UsageError("random_class_nf: unsupported tag");
        }
        const MondClass got = classify(nf).cls;
        if (got.tag == tag && (tag == MondTag::F4 || got.k == k)) return nf;
    }
}

DistanceConfig random_distance_config(std::mt19937_64& rng, int order) {
    static const char* const targets[] = {"regular", "1", "2a", "3a", "4a", "4a0", "2b", "3b", "4b", "5"};
    std::uniform_int_distribution<int> pick(0, 9);
    const std::string target = targets[pick(rng)];
    NormalFormCoeffs nf = random_nf(rng, order);
    const auto A = [&](int i, int j) { return nf.a(i, j).exact(); };
    const auto B = [&](int i) { return nf.b(i).exact(); };
    const auto set_a = [&](int i, int j, const mpq_class& q) { nf.set_a(i, j, Scalar(q)); };
    const auto set_b = [&](int i, const mpq_class& q) { nf.set_b(i, Scalar(q)); };

    mpq_class x0 = 0, y0 = 0, z0 = random_rational(rng);
    if (target == "regular") {
        x0 = random_nonzero_rational(rng);
        y0 = random_rational(rng);
    } else if (target == "1" || target == "2a" || target == "3a" || target.rfind("4a", 0) == 0) {
        y0 = random_nonzero_rational(rng);
        if (target != "1") set_b(2, (1 - A(2, 0) * z0) / y0);
        if (target == "4a0") {
            set_a(3, 0, 0);
            set_b(3, 0);
        }
        if (target == "3a" || target.rfind("4a", 0) == 0) set_b(3, -A(3, 0) * z0 / y0);
        if (target.rfind("4a", 0) == 0) {
            const mpq_class s = A(2, 0) * A(2, 0) + B(2) * B(2);
            set_b(4, (-A(4, 0) * y0 * z0 + 3 * A(2, 1) * A(2, 1) * z0 * z0 + 3 * s * y0) / (y0 * y0));
        }
    } else if (target == "5") {
        if (A(2, 0) == 0) set_a(2, 0, random_nonzero_rational(rng));
        z0 = 1 / A(2, 0);
    } else {
        z0 = random_nonzero_rational(rng);
        while (A(2, 0) * z0 == 1) z0 = random_nonzero_rational(rng);
        if (target != "2b") set_a(0, 3, 0);
        if (target == "4b") {
            const mpq_class top = 3 * A(1, 2) * A(1, 2) * z0 * z0 + 3 * A(2, 0) * z0 - 3;
            set_a(0, 4, top / (A(2, 0) * z0 * z0 - z0));
        }
    }
    return {nf, ProbePoint{Scalar(x0), Scalar(y0), Scalar(z0)}, target};
}

}  // namespace germforge
