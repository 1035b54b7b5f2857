#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <variant>
#include <vector>

#include "qfrac/qmatrix.hpp"
#include "qfrac/quaternion.hpp"

namespace qfrac {

struct QuadratureConfig {
    double relTol = 1e-10;
    double absTol = 1e-12;
    int maxSubdiv = 10000;
    double truncationRadius = 0.0; // 0 = derive from the declared tail decay
};

template <class V>
struct QuadratureReport {
    V value{};
    double errorEstimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

inline double entrywise_max(const Quaternion& q) {
    return std::max(std::max(std::abs(q.w), std::abs(q.x)),
                    std::max(std::abs(q.y), std::abs(q.z)));
}
inline double entrywise_max(const QMatrix& m) {
    double r = 0.0;
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j) r = std::max(r, entrywise_max(m.at(i, j)));
    return r;
}

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1] (QUADPACK dqk15).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
    double a, b;
    V value;
    double err;
    long index; // creation order, used as a deterministic heap tie-break
    bool splittable;
};

template <class V>
struct PanelWorse {
    bool operator()(Panel<V>* l, Panel<V>* r) const {
        if (l->err != r->err) return l->err < r->err;
        return l->index > r->index;
    }
};

template <class V, class F>
Panel<V> evaluate_panel(const F& f, double a, double b, long index, long& evals) {
    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V fc = f(mid);
    V k15 = kKronrodWeights[7] * fc;
    V g7 = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[i];
        V fsum = f(mid + dx) + f(mid - dx);
        k15 = k15 + kKronrodWeights[i] * fsum;
        if (i % 2 == 1) g7 = g7 + kGaussWeights[i / 2] * fsum;
    }
    evals += 15;
    Panel<V> p{a, b, h * k15, h * entrywise_max(k15 - g7), index, true};
    const double width_floor = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
    p.splittable = (b - a) > width_floor;
    return p;
}

// Fixed pairwise reduction over ascending panel positions; keeps the
// accumulated value independent of the refinement history.
template <class V>
V pairwise_value(const std::vector<const Panel<V>*>& panels, size_t lo, size_t hi) {
    if (hi - lo == 1) return panels[lo]->value;
    const size_t mid = lo + (hi - lo) / 2;
    return pairwise_value(panels, lo, mid) + pairwise_value(panels, mid, hi);
}

template <class V>
double pairwise_err(const std::vector<const Panel<V>*>& panels, size_t lo, size_t hi) {
    if (hi - lo == 1) return panels[lo]->err;
    const size_t mid = lo + (hi - lo) / 2;
    return pairwise_err(panels, lo, mid) + pairwise_err(panels, mid, hi);
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
// Refinement always splits the panel with the largest error estimate.
template <class V, class F>
QuadratureReport<V> integrate_interval(const F& f, double a, double b,
                                       const QuadratureConfig& cfg) {
    using detail::Panel;
    QuadratureReport<V> rep;
    if (!(b > a)) throw DomainError("integrate_interval requires b > a");

    std::deque<Panel<V>> storage;
    std::priority_queue<Panel<V>*, std::vector<Panel<V>*>, detail::PanelWorse<V>>
        heap;
    long nextIndex = 0;
    storage.push_back(detail::evaluate_panel<V>(f, a, b, nextIndex++, rep.evaluations));
    heap.push(&storage.back());
    double errSum = storage.back().err;
    double scale = entrywise_max(storage.back().value);

    int sinceRescale = 0;
    while (static_cast<int>(storage.size()) < cfg.maxSubdiv) {
        const double target = std::max(cfg.absTol, cfg.relTol * scale);
        if (errSum <= target) break;
        if (heap.empty()) break;
        Panel<V>* worst = heap.top();
        heap.pop();
        if (!worst->splittable) continue;
        const double mid = 0.5 * (worst->a + worst->b);
        errSum -= worst->err;
        storage.push_back(
            detail::evaluate_panel<V>(f, worst->a, mid, nextIndex++, rep.evaluations));
        errSum += storage.back().err;
        heap.push(&storage.back());
        storage.push_back(
            detail::evaluate_panel<V>(f, mid, worst->b, nextIndex++, rep.evaluations));
        errSum += storage.back().err;
        heap.push(&storage.back());
        worst->err = -1.0; // retired
        if (++sinceRescale >= 8) {
            sinceRescale = 0;
            double s = 0.0;
            for (const auto& p : storage)
                if (p.err >= 0.0) s = std::max(s, entrywise_max(p.value));
            scale = std::max(scale, s);
        }
    }

    std::vector<const Panel<V>*> live;
    for (const auto& p : storage)
        if (p.err >= 0.0) live.push_back(&p);
    std::sort(live.begin(), live.end(),
              [](const Panel<V>* l, const Panel<V>* r) { return l->a < r->a; });
    rep.value = detail::pairwise_value(live, 0, live.size());
    rep.errorEstimate = detail::pairwise_err(live, 0, live.size());
    rep.converged = rep.errorEstimate <=
                    std::max(cfg.absTol, cfg.relTol * entrywise_max(rep.value));
    return rep;
}

// Integrand on the open ray (0, inf) with declared endpoint behaviour:
//   |f(t)| ~ t^{-singular_exponent} as t -> 0 (exponent < 1; negative values
//   declare a vanishing order), and |f(t)| <= decay_scale t^{-decay_exponent}
//   for large t with decay_exponent > 1.
template <class V>
struct RayIntegrand {
    std::function<V(double)> f;
    double singular_exponent = 0.0;
    double decay_exponent = 2.0;
    double decay_scale = 1.0;
};

// Adaptive quadrature of f over (0, inf): the substitution t = u^{1/(1-gamma)}
// removes the declared endpoint exponent on (0, 1], the substitution t = e^u
// maps [1, R) to a finite interval, and R is chosen so the declared tail bound
// drops below absTol.
template <class V>
QuadratureReport<V> integrate_ray(const RayIntegrand<V>& ri,
                                  const QuadratureConfig& cfg) {
    if (ri.singular_exponent >= 1.0)
        throw DomainError("ray integrand must have an integrable endpoint");
    if (ri.decay_exponent <= 1.0)
        throw DomainError("ray integrand must decay faster than 1/t");

    double radius = cfg.truncationRadius;
    double clampedTail = 0.0;
    if (radius <= 0.0) {
        // decay_scale * R^{1-d} <= absTol
        const double ideal = std::pow(ri.decay_scale / cfg.absTol,
                                      1.0 / (ri.decay_exponent - 1.0));
        radius = std::clamp(ideal, 10.0, 1e280);
        if (ideal > radius)
            clampedTail =
                ri.decay_scale * std::pow(radius, 1.0 - ri.decay_exponent);
    } else if (radius <= 1.0) {
        throw DomainError("truncation radius must exceed 1");
    }

    QuadratureConfig part = cfg;
    part.absTol = 0.5 * cfg.absTol;
    part.maxSubdiv = cfg.maxSubdiv / 2;

    QuadratureReport<V> head;
    if (ri.singular_exponent != 0.0) {
        const double m = 1.0 / (1.0 - ri.singular_exponent);
        auto g = [&](double u) {
            return (m * std::pow(u, m - 1.0)) * ri.f(std::pow(u, m));
        };
        head = integrate_interval<V>(g, 0.0, 1.0, part);
    } else {
        head = integrate_interval<V>(ri.f, 0.0, 1.0, part);
    }

    auto tail_f = [&](double u) {
        const double t = std::exp(u);
        return t * ri.f(t);
    };
    QuadratureReport<V> tail =
        integrate_interval<V>(tail_f, 0.0, std::log(radius), part);

    QuadratureReport<V> rep;
    rep.value = head.value + tail.value;
    rep.errorEstimate = head.errorEstimate + tail.errorEstimate + clampedTail;
    rep.evaluations = head.evaluations + tail.evaluations;
    rep.converged = head.converged && tail.converged;
    return rep;
}

// A piecewise path in the plane C_I.  Rays are s = r e^{I angle} traversed
// from r0 to r1; arcs are s = center_re + radius e^{I phi} traversed from
// phi0 to phi1.  Pieces are listed in traversal order.
struct RayPiece {
    double angle;
    double r0;
    double r1;
};
struct ArcPiece {
    double center_re = 0.0;
    double radius;
    double phi0;
    double phi1;
};
using PathPiece = std::variant<RayPiece, ArcPiece>;

struct ContourPath {
    ImaginaryUnit plane;
    std::vector<PathPiece> pieces;
};

// Keyhole from R e^{I theta} to R e^{-I theta}: ray in at angle theta, arc of
// radius a through the positive real axis, ray out at angle -theta.
ContourPath make_keyhole(const ImaginaryUnit& plane, double theta, double a,
                         double radius);

// Positively oriented circle centered at a real point.
ContourPath make_circle(const ImaginaryUnit& plane, double radius,
                        double center_re = 0.0);

// Minimal Euclidean distance (within the plane) from the path trace to the
// point u + I v.
double path_distance(const ContourPath& path, double u, double v);

// True when some piece meets the closed negative real axis of the plane.
bool path_touches_negative_axis(const ContourPath& path);

// Largest |s| over the path trace and smallest |s| (for enclosure checks).
double path_max_modulus(const ContourPath& path);
double path_min_modulus(const ContourPath& path);

namespace detail {

inline Quaternion plane_point(const ImaginaryUnit& I, double u, double v) {
    return Quaternion(u) + I.q() * v;
}

template <class V, class F>
QuadratureReport<V> integrate_piece(const F& f, const ImaginaryUnit& I,
                                    const RayPiece& ray,
                                    const QuadratureConfig& cfg) {
    const double c = std::cos(ray.angle), s = std::sin(ray.angle);
    // ds_I = -I ds with ds = e^{I angle} dr
    const Quaternion dsI = Quaternion(s) - I.q() * c;
    auto g = [&](double r) {
        return f(plane_point(I, r * c, r * s), dsI);
    };
    const double lo = std::min(ray.r0, ray.r1), hi = std::max(ray.r0, ray.r1);
    const double sign = ray.r1 >= ray.r0 ? 1.0 : -1.0;
    QuadratureReport<V> rep;
    if (lo > 0.0 && hi / lo > 32.0) {
        auto glog = [&](double u) {
            const double r = std::exp(u);
            return r * g(r);
        };
        rep = integrate_interval<V>(glog, std::log(lo), std::log(hi), cfg);
    } else {
        rep = integrate_interval<V>(g, lo, hi, cfg);
    }
    rep.value = sign * rep.value;
    return rep;
}

template <class V, class F>
QuadratureReport<V> integrate_piece(const F& f, const ImaginaryUnit& I,
                                    const ArcPiece& arc,
                                    const QuadratureConfig& cfg) {
    auto g = [&](double phi) {
        const double cp = std::cos(phi), sp = std::sin(phi);
        // ds_I = -I (a I e^{I phi}) dphi = a e^{I phi} dphi
        const Quaternion dsI = Quaternion(arc.radius * cp) + I.q() * (arc.radius * sp);
        return f(plane_point(I, arc.center_re + arc.radius * cp, arc.radius * sp),
                 dsI);
    };
    const double lo = std::min(arc.phi0, arc.phi1), hi = std::max(arc.phi0, arc.phi1);
    const double sign = arc.phi1 >= arc.phi0 ? 1.0 : -1.0;
    QuadratureReport<V> rep = integrate_interval<V>(g, lo, hi, cfg);
    rep.value = sign * rep.value;
    return rep;
}

} // namespace detail

// Computes (1/2pi) integral over the path of f(s) ds_I in the path's
// orientation.  The callback receives the path point s and the measure
// density ds_I/dtau = -I s'(tau), and must compose them in the position the
// kernel side requires.
template <class V>
QuadratureReport<V> integrate_contour(
    const std::function<V(const Quaternion&, const Quaternion&)>& f,
    const ContourPath& path, const QuadratureConfig& cfg) {
    if (path.pieces.empty()) throw PathInvalidError("empty contour");
    QuadratureConfig part = cfg;
    part.absTol = cfg.absTol / double(path.pieces.size());
    part.maxSubdiv = std::max(64, cfg.maxSubdiv / int(path.pieces.size()));

    QuadratureReport<V> total;
    bool first = true;
    for (const auto& piece : path.pieces) {
        QuadratureReport<V> r = std::visit(
            [&](const auto& p) {
                return detail::integrate_piece<V>(f, path.plane, p, part);
            },
            piece);
        if (first) {
            total = r;
            first = false;
        } else {
            total.value = total.value + r.value;
            total.errorEstimate += r.errorEstimate;
            total.evaluations += r.evaluations;
            total.converged = total.converged && r.converged;
        }
    }
    const double inv2pi = 1.0 / (2.0 * M_PI);
    total.value = inv2pi * total.value;
    total.errorEstimate *= inv2pi;
    total.converged = total.converged &&
                      total.errorEstimate <=
                          std::max(cfg.absTol,
                                   cfg.relTol * entrywise_max(total.value));
    return total;
}

} // namespace qfrac
