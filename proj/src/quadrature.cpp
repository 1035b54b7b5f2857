#include "qfrac/quadrature.hpp"

#include <cmath>
#include <limits>

namespace qfrac {

namespace {

struct Point2 {
    double u, v;
};

double segment_distance(Point2 p, Point2 a, Point2 b) {
    const double du = b.u - a.u, dv = b.v - a.v;
    const double len2 = du * du + dv * dv;
    double t = len2 > 0.0 ? ((p.u - a.u) * du + (p.v - a.v) * dv) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double cu = a.u + t * du - p.u, cv = a.v + t * dv - p.v;
    return std::hypot(cu, cv);
}

double arc_distance(Point2 p, const ArcPiece& arc) {
    const double lo = std::min(arc.phi0, arc.phi1), hi = std::max(arc.phi0, arc.phi1);
    const double du = p.u - arc.center_re, dv = p.v;
    const double phi = std::atan2(dv, du);
    const double r = std::hypot(du, dv);
    if (phi >= lo && phi <= hi) return std::abs(r - arc.radius);
    const Point2 e0{arc.center_re + arc.radius * std::cos(arc.phi0),
                    arc.radius * std::sin(arc.phi0)};
    const Point2 e1{arc.center_re + arc.radius * std::cos(arc.phi1),
                    arc.radius * std::sin(arc.phi1)};
    return std::min(std::hypot(p.u - e0.u, p.v - e0.v),
                    std::hypot(p.u - e1.u, p.v - e1.v));
}

double piece_distance(Point2 p, const PathPiece& piece) {
    if (std::holds_alternative<RayPiece>(piece)) {
        const RayPiece& ray = std::get<RayPiece>(piece);
        const double c = std::cos(ray.angle), s = std::sin(ray.angle);
        return segment_distance(p, {ray.r0 * c, ray.r0 * s}, {ray.r1 * c, ray.r1 * s});
    }
    return arc_distance(p, std::get<ArcPiece>(piece));
}

} // namespace

ContourPath make_keyhole(const ImaginaryUnit& plane, double theta, double a,
                         double radius) {
    if (!(theta > 0.0 && theta < M_PI))
        throw PathInvalidError("keyhole opening angle must lie in (0, pi)");
    if (!(a > 0.0 && radius > a))
        throw PathInvalidError("keyhole radii must satisfy 0 < a < R");
    ContourPath path{plane, {}};
    path.pieces.push_back(RayPiece{theta, radius, a});
    path.pieces.push_back(ArcPiece{0.0, a, theta, -theta});
    path.pieces.push_back(RayPiece{-theta, a, radius});
    return path;
}

ContourPath make_circle(const ImaginaryUnit& plane, double radius, double center_re) {
    if (!(radius > 0.0)) throw PathInvalidError("circle radius must be positive");
    ContourPath path{plane, {}};
    path.pieces.push_back(ArcPiece{center_re, radius, -M_PI, M_PI});
    return path;
}

double path_distance(const ContourPath& path, double u, double v) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& piece : path.pieces)
        d = std::min(d, piece_distance({u, v}, piece));
    return d;
}

bool path_touches_negative_axis(const ContourPath& path) {
    for (const auto& piece : path.pieces) {
        if (std::holds_alternative<RayPiece>(piece)) {
            const RayPiece& ray = std::get<RayPiece>(piece);
            if (std::min(ray.r0, ray.r1) <= 0.0) return true;
            if (std::abs(std::abs(ray.angle) - M_PI) < 1e-12) return true;
        } else {
            const ArcPiece& arc = std::get<ArcPiece>(piece);
            const double lo = std::min(arc.phi0, arc.phi1);
            const double hi = std::max(arc.phi0, arc.phi1);
            if ((lo <= -M_PI + 1e-12 || hi >= M_PI - 1e-12) &&
                arc.center_re - arc.radius <= 0.0)
                return true;
            if (lo <= 0.0 && hi >= 0.0 && arc.center_re + arc.radius <= 0.0)
                return true;
        }
    }
    return false;
}

double path_max_modulus(const ContourPath& path) {
    double m = 0.0;
    for (const auto& piece : path.pieces) {
        if (std::holds_alternative<RayPiece>(piece)) {
            const RayPiece& ray = std::get<RayPiece>(piece);
            m = std::max(m, std::max(std::abs(ray.r0), std::abs(ray.r1)));
        } else {
            const ArcPiece& arc = std::get<ArcPiece>(piece);
            m = std::max(m, std::abs(arc.center_re) + arc.radius);
        }
    }
    return m;
}

double path_min_modulus(const ContourPath& path) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& piece : path.pieces) {
        if (std::holds_alternative<RayPiece>(piece)) {
            const RayPiece& ray = std::get<RayPiece>(piece);
            m = std::min(m, std::min(std::abs(ray.r0), std::abs(ray.r1)));
        } else {
            const ArcPiece& arc = std::get<ArcPiece>(piece);
            m = std::min(m, std::abs(std::abs(arc.center_re) - arc.radius));
        }
    }
    return m;
}

} // namespace qfrac
