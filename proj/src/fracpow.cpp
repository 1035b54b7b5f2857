#include "qfrac/fracpow.hpp"

#include <cmath>

#include "qfrac/slice_kernels.hpp"

namespace qfrac {

namespace {

bool is_integer(double alpha) {
    return std::abs(alpha - std::round(alpha)) <= 1e-12 * std::max(1.0, std::abs(alpha));
}

// Validates a path against the spectrum and, when enclosure is required,
// checks every sphere slice lies between the inner modulus and the rays.
void require_path_clear(const ContourPath& path, const SpectralReport& rep) {
    for (const auto& sp : rep.spheres) {
        const double tol = 1e-8 * (1.0 + std::hypot(sp.s0, sp.s1));
        if (path_distance(path, sp.s0, sp.s1) <= tol ||
            path_distance(path, sp.s0, -sp.s1) <= tol)
            throw PathInvalidError("integration path meets a spectral sphere");
    }
}

void require_keyhole_encloses(const ContourPath& path, const SpectralReport& rep) {
    const double a = path_min_modulus(path);
    double theta = M_PI;
    for (const auto& piece : path.pieces)
        if (std::holds_alternative<RayPiece>(piece))
            theta = std::min(theta, std::abs(std::get<RayPiece>(piece).angle));
    for (const auto& sp : rep.spheres) {
        const double mod = std::hypot(sp.s0, sp.s1);
        const double angle = std::atan2(sp.s1, sp.s0);
        if (mod <= a || angle >= theta)
            throw PathInvalidError("keyhole does not enclose the S-spectrum");
    }
}

double ray_outer_radius(double decayScale, double decayExponent,
                        const QuadratureConfig& cfg) {
    if (cfg.truncationRadius > 0.0) return cfg.truncationRadius;
    return std::clamp(std::pow(decayScale / cfg.absTol, 1.0 / (decayExponent - 1.0)),
                      10.0, 1e280);
}

FracPowResult from_ray(const QuadratureReport<QMatrix>& r, double factor) {
    FracPowResult out;
    out.value = factor * r.value;
    out.errorEstimate = std::abs(factor) * r.errorEstimate;
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    return out;
}

} // namespace

FracPowResult frac_power_neg(const QMatrix& t, double alpha,
                             const QuadratureConfig& cfg) {
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    return frac_power_neg(t, alpha, cfg, rep, sec);
}

FracPowResult frac_power_neg(const QMatrix& t, double alpha,
                             const QuadratureConfig& cfg,
                             const SpectralReport& rep, const SectorEstimate& sec) {
    if (!(alpha > 0.0)) throw DomainError("frac_power_neg requires alpha > 0");
    if (!spectrum_clears_negative_axis(rep))
        throw PreconditionError("operator is not sectorial: S-spectrum meets (-inf, 0]");

    if (is_integer(alpha)) {
        FracPowResult out;
        out.value = mat_pow(inverse(t), static_cast<int>(std::round(alpha)));
        return out;
    }

    const int n = alpha < 1.0 ? 0 : static_cast<int>(std::ceil(alpha));
    double prod = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= n; ++k) {
        prod *= double(k) - alpha;
        fact *= double(k);
    }
    const double sign = (n % 2 == 0) ? -1.0 : 1.0; // (-1)^{n+1}
    const double factor = sign * std::sin(alpha * M_PI) / M_PI * fact / prod;

    if (static_cast<size_t>(n + 1) > sec.Mn.size())
        throw PreconditionError("sector estimate does not cover the kernel power");

    RayIntegrand<QMatrix> ri;
    ri.f = [&, n](double ti) {
        return std::pow(ti, double(n) - alpha) *
               sresolvent_right_pow(n + 1, Quaternion(-ti), t, rep);
    };
    ri.singular_exponent = alpha - double(n);
    ri.decay_exponent = 1.0 + alpha;
    ri.decay_scale = sec.Mn[static_cast<size_t>(n)];

    QuadratureConfig rcfg = cfg;
    rcfg.absTol = cfg.absTol / std::max(1.0, std::abs(factor));
    return from_ray(integrate_ray(ri, rcfg), factor);
}

ContourPath default_keyhole(const SectorEstimate& sec, const ImaginaryUnit& plane,
                            double alpha, const QuadratureConfig& cfg) {
    const double theta = 0.5 * (sec.theta0 + M_PI);
    const double a = 0.5 * sec.a0;
    const double radius =
        ray_outer_radius(sec.Mn.empty() ? 1.0 : sec.Mn[0], 1.0 + std::min(alpha, 1.0),
                         cfg);
    return make_keyhole(plane, theta, a, radius);
}

FracPowResult frac_power_neg_contour(const QMatrix& t, double alpha,
                                     const ContourPath& path, KernelSide side,
                                     const QuadratureConfig& cfg) {
    if (!(alpha > 0.0)) throw DomainError("frac_power_neg_contour requires alpha > 0");
    const SpectralReport rep = s_spectrum(t);
    if (!spectrum_clears_negative_axis(rep))
        throw PreconditionError("operator is not sectorial: S-spectrum meets (-inf, 0]");
    if (path_touches_negative_axis(path))
        throw PathInvalidError("path meets the branch cut of s^{-alpha}");
    require_path_clear(path, rep);
    require_keyhole_encloses(path, rep);

    std::function<QMatrix(const Quaternion&, const Quaternion&)> f;
    if (side == KernelSide::right) {
        f = [&](const Quaternion& s, const Quaternion& dsI) {
            return scalar_left(qpow(s, -alpha) * dsI, sresolvent_right(s, t, rep));
        };
    } else {
        f = [&](const Quaternion& s, const Quaternion& dsI) {
            return scalar_right(sresolvent_left(s, t, rep), dsI * qpow(s, -alpha));
        };
    }
    const QuadratureReport<QMatrix> r = integrate_contour<QMatrix>(f, path, cfg);
    FracPowResult out;
    out.value = r.value;
    out.errorEstimate = r.errorEstimate;
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    return out;
}

FracPowResult frac_power_halfplane(const QMatrix& t, double alpha,
                                   const QuadratureConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("frac_power_halfplane requires alpha in (0,1)");
    const SpectralReport rep = s_spectrum(t);
    const double tol = 1e-8 * (1.0 + rep.maxModulus);
    for (const auto& sp : rep.spheres)
        if (sp.s0 <= tol)
            throw PreconditionError(
                "half-plane representation requires Re(sigma_S) > 0");

    const QMatrix id = QMatrix::identity(t.n());
    const QMatrix t2 = t * t;
    const double ca = std::cos(alpha * M_PI / 2.0);
    const double sa = std::sin(alpha * M_PI / 2.0);

    RayIntegrand<QMatrix> ri;
    ri.f = [&](double tau) {
        const QMatrix res = inverse(t2 + (tau * tau) * id);
        return std::pow(tau, -alpha) * ((ca * t + (sa * tau) * id) * res);
    };
    ri.singular_exponent = alpha;
    ri.decay_exponent = 1.0 + alpha;
    // |integrand| <= tau^{-alpha} (||T|| + tau) / (tau^2 - ||T||^2) for large tau
    const double tn = opnorm(t);
    ri.decay_scale = 4.0 * std::max(1.0, tn);

    QuadratureConfig rcfg = cfg;
    rcfg.absTol = cfg.absTol * M_PI;
    return from_ray(integrate_ray(ri, rcfg), 1.0 / M_PI);
}

FracPowResult frac_power_pos(const QMatrix& t, double alpha,
                             const QuadratureConfig& cfg) {
    if (!(alpha > 0.0)) throw DomainError("frac_power_pos requires alpha > 0");
    if (is_integer(alpha)) {
        FracPowResult out;
        out.value = mat_pow(t, static_cast<int>(std::round(alpha)));
        return out;
    }
    const int whole = static_cast<int>(std::floor(alpha));
    const double fracpart = alpha - double(whole);
    FracPowResult neg = frac_power_neg(t, fracpart, cfg);
    FracPowResult out;
    out.value = mat_pow(t, whole) * inverse(neg.value);
    out.errorEstimate = neg.errorEstimate;
    out.evaluations = neg.evaluations;
    out.converged = neg.converged;
    return out;
}

Quaternion intrinsic_eval(const IntrinsicFunction& f, const Quaternion& s) {
    const Slice sl = slice_of(s);
    const Quaternion z = Quaternion(sl.s0) + Quaternion::e1() * sl.s1;
    const Quaternion fz = f.on_plane(z);
    const Quaternion fzc = f.on_plane(conj(z));
    return represent(fz, fzc, ImaginaryUnit::e1(), s);
}

namespace {

// Sample 8 parameter points along the path and check f(conj z) = conj f(z).
void spot_check_intrinsic(const IntrinsicFunction& f, const ContourPath& path) {
    if (!f.intrinsic_asserted)
        throw PreconditionError("s_calculus requires an intrinsic function");
    int checked = 0;
    const int perPiece =
        static_cast<int>((8 + path.pieces.size() - 1) / path.pieces.size());
    for (const auto& piece : path.pieces) {
        for (int k = 0; k < perPiece && checked < 8; ++k) {
            const double tau = (k + 1) / double(perPiece + 1);
            double u, v;
            if (std::holds_alternative<RayPiece>(piece)) {
                const RayPiece& ray = std::get<RayPiece>(piece);
                const double r = ray.r0 + tau * (ray.r1 - ray.r0);
                u = r * std::cos(ray.angle);
                v = r * std::sin(ray.angle);
            } else {
                const ArcPiece& arc = std::get<ArcPiece>(piece);
                const double phi = arc.phi0 + tau * (arc.phi1 - arc.phi0);
                u = arc.center_re + arc.radius * std::cos(phi);
                v = arc.radius * std::sin(phi);
            }
            const Quaternion z = Quaternion(u) + Quaternion::e1() * v;
            const Quaternion fz = f.on_plane(z);
            const Quaternion fzc = f.on_plane(conj(z));
            if (!isfinite(fz) || !isfinite(fzc))
                throw PreconditionError("function is singular on the path");
            if (norm(fzc - conj(fz)) > 1e-10 * (1.0 + norm(fz)))
                throw PreconditionError(
                    "function fails the intrinsic spot-check f(conj z) = conj f(z)");
            ++checked;
        }
    }
}

} // namespace

FracPowResult s_calculus(const QMatrix& t, const IntrinsicFunction& f,
                         const ContourPath& path, const QuadratureConfig& cfg) {
    const SpectralReport rep = s_spectrum(t);
    require_path_clear(path, rep);
    spot_check_intrinsic(f, path);

    auto g = [&](const Quaternion& s, const Quaternion& dsI) {
        const Quaternion fs = intrinsic_eval(f, s);
        if (!isfinite(fs))
            throw PreconditionError("function is singular on the path");
        return scalar_right(sresolvent_left(s, t, rep), dsI * fs);
    };
    const QuadratureReport<QMatrix> r = integrate_contour<QMatrix>(
        std::function<QMatrix(const Quaternion&, const Quaternion&)>(g), path, cfg);
    FracPowResult out;
    out.value = r.value;
    out.errorEstimate = r.errorEstimate;
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    return out;
}

FracPowResult kato_F(const Quaternion& p, const QMatrix& t, double alpha,
                     const QuadratureConfig& cfg) {
    const SpectralReport rep = s_spectrum(t);
    return kato_F(p, t, alpha, cfg, rep,
                  sector_estimate(t, default_sector_grid(), 4, rep));
}

FracPowResult kato_F(const Quaternion& p, const QMatrix& t, double alpha,
                     const QuadratureConfig& cfg, const SpectralReport& rep,
                     const SectorEstimate& sec) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("kato_F requires alpha in (0,1)");
    if (!sec.typeMWHolds)
        throw PreconditionError("operator failed the sampled type-(M, omega) check");
    const double argp = arg(p);
    if (!(argp > std::max(alpha * M_PI, sec.omega)))
        throw PreconditionError("kato_F requires arg(p) > max(alpha pi, omega)");

    const double cosap = std::cos(alpha * M_PI);
    const Quaternion p2 = p * p;
    const Quaternion twop = 2.0 * p;
    auto f = [&](double ti) {
        const double ta = std::pow(ti, alpha);
        const Quaternion cell = p2 - twop * (ta * cosap) + Quaternion(ta * ta);
        return scalar_left(inverse(cell) * ta,
                           sresolvent_right(Quaternion(-ti), t, rep));
    };

    // |p - t^a e^{+-I arg-gap}| >= t^a sin(gap); both gaps are positive here.
    const double gap1 = std::sin(argp - alpha * M_PI);
    const double g2 = argp + alpha * M_PI;
    const double gap2 = std::sin(std::min(g2, 2.0 * M_PI - g2));
    const double ck = 1.0 / std::max(1e-300, gap1 * gap2);

    RayIntegrand<QMatrix> ri;
    ri.f = f;
    ri.singular_exponent = -alpha;
    ri.decay_exponent = 1.0 + alpha;
    ri.decay_scale = ck * std::max(1.0, sec.M);

    const double factor = std::sin(alpha * M_PI) / M_PI;
    QuadratureConfig rcfg = cfg;
    rcfg.absTol = cfg.absTol / factor;
    return from_ray(integrate_ray(ri, rcfg), factor);
}

KatoPowerResult kato_power(const QMatrix& t, double alpha, double mu0,
                           const QuadratureConfig& cfg) {
    if (!(mu0 < 0.0)) throw DomainError("kato_power requires mu0 < 0");
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    if (!(alpha > 0.0 && alpha < 1.0) || !(alpha * sec.omega < M_PI))
        throw PreconditionError("kato_power requires alpha in (0,1) with alpha omega < pi");

    const FracPowResult f0 = kato_F(Quaternion(mu0), t, alpha, cfg, rep, sec);
    const QMatrix f0inv = inverse(f0.value);
    KatoPowerResult out;
    out.value = mu0 * QMatrix::identity(t.n()) - f0inv;
    out.errorEstimate = f0.errorEstimate;
    out.evaluations = f0.evaluations;
    out.resolventResidual = 0.0;

    const double f0invNorm = opnorm(f0inv);
    const double amplification = f0invNorm * f0invNorm;
    const SpectralReport repB = s_spectrum(out.value);

    // (a) the constructed operator reproduces the Kato integrand as its
    //     right S-resolvent at five sampled negative points
    for (double factor : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double mu = mu0 * factor;
        const FracPowResult fm = kato_F(Quaternion(mu), t, alpha, cfg, rep, sec);
        const QMatrix res = sresolvent_right(Quaternion(mu), out.value, repB);
        const double residual = opnorm(res - fm.value);
        out.resolventResidual = std::max(out.resolventResidual, residual);
        out.errorEstimate += fm.errorEstimate;
        out.evaluations += fm.evaluations;
        const double tol = std::max(100.0 * (fm.errorEstimate +
                                             amplification * f0.errorEstimate),
                                    1e-7 * (1.0 + opnorm(fm.value)));
        if (residual > tol)
            throw InconsistencyError(
                "S_R^{-1}(mu, B_alpha) does not match F_alpha(mu, T) at mu = " +
                    std::to_string(mu),
                residual);
    }

    // (b) B_alpha is of type (M, alpha omega)
    const SectorEstimate secB = sector_estimate(out.value, default_sector_grid(), 4, repB);
    out.omega = secB.omega;
    if (secB.omega > alpha * sec.omega + 1e-3)
        throw InconsistencyError("sector of B_alpha exceeds alpha omega",
                                 secB.omega - alpha * sec.omega);

    // (c) inverse(B_alpha) agrees with the ray representation of T^{-alpha}
    const FracPowResult ray = frac_power_neg(t, alpha, cfg, rep, sec);
    out.inverseResidual = opnorm(inverse(out.value) - ray.value);
    out.errorEstimate += ray.errorEstimate;
    out.evaluations += ray.evaluations;
    const double tolc = std::max(
        100.0 * (ray.errorEstimate + amplification * f0.errorEstimate),
        1e-7 * (1.0 + opnorm(ray.value)));
    if (out.inverseResidual > tolc)
        throw InconsistencyError("inverse(B_alpha) does not match T^{-alpha}",
                                 out.inverseResidual);
    return out;
}

SemigroupReport verify_semigroup(const QMatrix& t, double alpha, double beta,
                                 const QuadratureConfig& cfg) {
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    const FracPowResult fa = frac_power_neg(t, alpha, cfg, rep, sec);
    const FracPowResult fb = frac_power_neg(t, beta, cfg, rep, sec);
    const FracPowResult fab = frac_power_neg(t, alpha + beta, cfg, rep, sec);
    SemigroupReport out;
    out.residual = opnorm(fa.value * fb.value - fab.value);
    out.sumErrorEstimates =
        fa.errorEstimate + fb.errorEstimate + fab.errorEstimate;
    out.tolerance = 100.0 * out.sumErrorEstimates;
    out.pass = out.residual <= out.tolerance;
    return out;
}

} // namespace qfrac
