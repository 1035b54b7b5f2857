#pragma once

#include <cmath>
#include <string>

#include "qfrac/errors.hpp"

namespace qfrac {

// A quaternion w + x e1 + y e2 + z e3 with double components.
// Basis products: e1 e2 = e3, e2 e3 = e1, e3 e1 = e2, e_i^2 = -1.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_) : w(w_) {}
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion e1() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion e2() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion e3() { return {0.0, 0.0, 0.0, 1.0}; }

    constexpr bool operator==(const Quaternion& o) const {
        return w == o.w && x == o.x && y == o.y && z == o.z;
    }
    constexpr bool operator!=(const Quaternion& o) const { return !(*this == o); }
};

constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}
constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
}
constexpr Quaternion operator-(const Quaternion& a) {
    return {-a.w, -a.x, -a.y, -a.z};
}
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
constexpr Quaternion operator*(double t, const Quaternion& a) {
    return {t * a.w, t * a.x, t * a.y, t * a.z};
}
constexpr Quaternion operator*(const Quaternion& a, double t) { return t * a; }
constexpr Quaternion operator/(const Quaternion& a, double t) {
    return {a.w / t, a.x / t, a.y / t, a.z / t};
}

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double re(const Quaternion& q) { return q.w; }
constexpr double norm2(const Quaternion& q) {
    return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}
inline double norm(const Quaternion& q) { return std::sqrt(norm2(q)); }
constexpr double imag_norm2(const Quaternion& q) {
    return q.x * q.x + q.y * q.y + q.z * q.z;
}
inline double imag_norm(const Quaternion& q) { return std::sqrt(imag_norm2(q)); }

inline Quaternion inverse(const Quaternion& q) {
    const double n2 = norm2(q);
    if (n2 == 0.0) throw DomainError("quaternion inverse of zero");
    return conj(q) / n2;
}

inline bool isfinite(const Quaternion& q) {
    return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) &&
           std::isfinite(q.z);
}

// Purely imaginary quaternion of unit norm, the "axis" of a slice plane C_I.
class ImaginaryUnit {
public:
    // Validates Re = 0 and |q| = 1 within 1e-12.
    explicit ImaginaryUnit(const Quaternion& q) : u_(q) {
        if (std::abs(q.w) > 1e-12 || std::abs(norm(q) - 1.0) > 1e-12)
            throw DomainError("imaginary unit must be purely imaginary with unit norm");
        u_.w = 0.0;
    }
    static ImaginaryUnit e1() { return ImaginaryUnit(Quaternion::e1()); }
    static ImaginaryUnit e2() { return ImaginaryUnit(Quaternion::e2()); }
    static ImaginaryUnit e3() { return ImaginaryUnit(Quaternion::e3()); }

    const Quaternion& q() const { return u_; }

private:
    Quaternion u_;
};

// Slice decomposition q = s0 + I s1 with s1 >= 0.  Real inputs get I = e1 by
// convention so downstream results are deterministic.
struct Slice {
    double s0;
    double s1;
    ImaginaryUnit axis;
};

inline Slice slice_of(const Quaternion& q) {
    const double s1 = imag_norm(q);
    if (s1 == 0.0) return {q.w, 0.0, ImaginaryUnit::e1()};
    return {q.w, s1, ImaginaryUnit(Quaternion(0.0, q.x / s1, q.y / s1, q.z / s1))};
}

// exp(q) = e^{q0} (cos q1 + I_q sin q1).
inline Quaternion qexp(const Quaternion& q) {
    const Slice s = slice_of(q);
    const double r = std::exp(s.s0);
    return Quaternion(r * std::cos(s.s1)) + s.axis.q() * (r * std::sin(s.s1));
}

// arg(q): unique theta in [0, pi] with q = |q| e^{theta I_q}.
inline double arg(const Quaternion& q) {
    if (norm2(q) == 0.0) throw DomainError("arg of zero quaternion");
    // atan2(s1, s0) equals arccos(s0/|q|) on s1 >= 0 and is accurate near 0 and pi.
    return std::atan2(imag_norm(q), q.w);
}

// Exclusion band for the logarithm's branch cut: s1 <= 1e-12 (1 + |s|), s0 < 0.
inline bool on_negative_real_axis(const Quaternion& q) {
    return q.w < 0.0 && imag_norm(q) <= 1e-12 * (1.0 + norm(q));
}

// log q = ln|q| + I_q arccos(q0/|q|), defined off the closed negative real axis.
inline Quaternion qlog(const Quaternion& q) {
    if (norm2(q) == 0.0 || on_negative_real_axis(q))
        throw DomainError("qlog on the closed negative real axis");
    const Slice s = slice_of(q);
    const double r = std::hypot(s.s0, s.s1);
    double c = s.s0 / r;
    // clamp absorbs rounding at |s0/|q|| = 1 +- ulp
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return Quaternion(std::log(r)) + s.axis.q() * std::acos(c);
}

// q^alpha = exp(alpha log q) for real alpha.
inline Quaternion qpow(const Quaternion& q, double alpha) {
    return qexp(alpha * qlog(q));
}

// d_S(s, p) = max{ 2|s0 - p0|, ||p|^2 - |s|^2| }: the sphere-level distance
// controlling the pseudo-resolvent series.  Constant on the spheres [s], [p].
inline double ds_metric(const Quaternion& s, const Quaternion& p) {
    return std::max(2.0 * std::abs(re(s) - re(p)), std::abs(norm2(p) - norm2(s)));
}

inline std::string to_string(const Quaternion& q) {
    return "(" + std::to_string(q.w) + ", " + std::to_string(q.x) + ", " +
           std::to_string(q.y) + ", " + std::to_string(q.z) + ")";
}

} // namespace qfrac
