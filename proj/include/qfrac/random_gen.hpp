#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qfrac/qmatrix.hpp"
#include "qfrac/quaternion.hpp"
#include "qfrac/spectral.hpp"

namespace qfrac {

// Seeded generator for the property harnesses.  Draws go through ldexp so the
// produced doubles depend only on the mt19937_64 stream, not on a library
// distribution implementation.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double uniform() { return std::ldexp(double(gen_() >> 11), -53); }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    Quaternion quaternion(double scale) {
        return {uniform(-scale, scale), uniform(-scale, scale),
                uniform(-scale, scale), uniform(-scale, scale)};
    }

    ImaginaryUnit unit() {
        while (true) {
            const Quaternion q(0.0, uniform(-1.0, 1.0), uniform(-1.0, 1.0),
                               uniform(-1.0, 1.0));
            const double n = norm(q);
            if (n > 0.1 && n <= 1.0) return ImaginaryUnit(q / n);
        }
    }

    QMatrix matrix(int n, double scale = 1.0) {
        QMatrix t(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.at(i, j) = quaternion(scale);
        return t;
    }

    // Random operator with S-spectrum in the open right half-space: a bounded
    // perturbation shifted by more than its norm.
    QMatrix sectorial_matrix(int n, double scale = 1.0) {
        const QMatrix a = matrix(n, scale);
        const double shift = opnorm(a) + 0.5 * scale + 0.1;
        return a + shift * QMatrix::identity(n);
    }

    // Point of rho_S(T) at a comfortable d_S distance from every sphere.
    Quaternion resolvent_point(const SpectralReport& rep, double reach = 3.0) {
        const double bound = rep.maxModulus + reach;
        for (int tries = 0; tries < 1000; ++tries) {
            const Quaternion s = quaternion(bound);
            if (ds_to_spectrum(s, rep) > 0.05 * (1.0 + norm2(s))) return s;
        }
        // far outside the spectral disk, always resolvent
        return Quaternion(2.0 * bound + 2.0);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace qfrac
