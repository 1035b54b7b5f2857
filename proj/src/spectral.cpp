#include "qfrac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace qfrac {

namespace {

Quaternion qpow_int(const Quaternion& q, int k) {
    Quaternion r(1.0);
    for (int i = 0; i < k; ++i) r = r * q;
    return r;
}

double binom(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * double(n - i + 1) / double(i);
    return c;
}

Quaternion sphere_point(const SpectrumSphere& s) {
    return Quaternion(s.s0) + Quaternion::e1() * s.s1;
}

void require_resolvent_point(const Quaternion& s, const SpectralReport& rep) {
    if (!in_resolvent_set(s, rep))
        throw SpectralSingularityError("point on or near the S-spectrum, d_S = " +
                                       std::to_string(ds_to_spectrum(s, rep)));
}

} // namespace

SpectralReport s_spectrum(const QMatrix& t) {
    Eigen::ComplexEigenSolver<CEmbedding> solver(embed(t), false);
    if (solver.info() != Eigen::Success)
        throw Error("eigenvalue computation on the complex embedding failed");
    const auto& ev = solver.eigenvalues();

    SpectralReport rep;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        rep.maxModulus = std::max(rep.maxModulus, std::abs(ev(i)));

    // Eigenvalues of the embedding come in conjugate pairs; fold each onto the
    // closed upper half plane and cluster with the pairing tolerance.
    const double tol = 1e-8 * (1.0 + rep.maxModulus);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        pts.emplace_back(ev(i).real(), std::abs(ev(i).imag()));
    std::sort(pts.begin(), pts.end());

    std::vector<std::vector<std::pair<double, double>>> clusters;
    for (const auto& p : pts) {
        if (!clusters.empty()) {
            const auto& c = clusters.back();
            const double r0 = c.front().first, i0 = c.front().second;
            if (std::abs(p.first - r0) <= tol && std::abs(p.second - i0) <= tol) {
                clusters.back().push_back(p);
                continue;
            }
        }
        clusters.push_back({p});
    }

    for (const auto& c : clusters) {
        if (c.size() % 2 != 0)
            throw Error("conjugate eigenvalue pairing failed on the embedding");
        double s0 = 0.0, s1 = 0.0;
        for (const auto& p : c) {
            s0 += p.first;
            s1 += p.second;
        }
        s0 /= double(c.size());
        s1 /= double(c.size());
        if (s1 < tol) s1 = 0.0;
        rep.spheres.push_back({s0, s1, static_cast<int>(c.size() / 2)});
    }

    for (const auto& s : rep.spheres)
        if (s.s0 != 0.0 || s.s1 != 0.0)
            rep.maxArg = std::max(rep.maxArg, std::atan2(s.s1, s.s0));
    return rep;
}

double ds_to_spectrum(const Quaternion& s, const SpectralReport& rep) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& sp : rep.spheres)
        d = std::min(d, ds_metric(s, sphere_point(sp)));
    return d;
}

bool in_resolvent_set(const Quaternion& s, const SpectralReport& rep) {
    // far outside the spectral ball the membership is immediate; this also
    // sidesteps |s|^2 overflow for points at the end of truncated rays
    const double reach = std::max(std::max(std::abs(s.w), std::abs(s.x)),
                                  std::max(std::abs(s.y), std::abs(s.z)));
    if (reach > 2.0 * (1.0 + rep.maxModulus)) return true;
    return ds_to_spectrum(s, rep) > 1e-8 * (1.0 + norm2(s));
}

QMatrix spectral_pencil(const Quaternion& s, const QMatrix& t) {
    const Slice sl = slice_of(s);
    const double m2 = sl.s0 * sl.s0 + sl.s1 * sl.s1;
    return t * t - (2.0 * sl.s0) * t + m2 * QMatrix::identity(t.n());
}

QMatrix pseudo_resolvent(const Quaternion& s, const QMatrix& t) {
    return pseudo_resolvent(s, t, s_spectrum(t));
}

QMatrix pseudo_resolvent(const Quaternion& s, const QMatrix& t,
                         const SpectralReport& rep) {
    require_resolvent_point(s, rep);
    const Slice sl = slice_of(s);
    const double sigma = std::max({1.0, std::abs(sl.s0), sl.s1});
    if (sigma == 1.0) return inverse(spectral_pencil(s, t));
    // factor sigma out of the pencil so huge |s| neither overflows nor
    // spoils the condition estimate:
    //   Q_s(T) = sigma^2 [ (T/sigma)^2 - 2 (s0/sigma)(T/sigma) + |s/sigma|^2 ]
    const double u0 = sl.s0 / sigma, u1 = sl.s1 / sigma;
    const QMatrix ts = (1.0 / sigma) * t;
    const QMatrix b = ts * ts - (2.0 * u0) * ts +
                      (u0 * u0 + u1 * u1) * QMatrix::identity(t.n());
    return (1.0 / sigma) * ((1.0 / sigma) * inverse(b));
}

QMatrix sresolvent_left(const Quaternion& s, const QMatrix& t) {
    return sresolvent_left(s, t, s_spectrum(t));
}

QMatrix sresolvent_left(const Quaternion& s, const QMatrix& t,
                        const SpectralReport& rep) {
    const QMatrix qinv = pseudo_resolvent(s, t, rep);
    return scalar_right(qinv, conj(s)) - t * qinv;
}

QMatrix sresolvent_right(const Quaternion& s, const QMatrix& t) {
    return sresolvent_right(s, t, s_spectrum(t));
}

QMatrix sresolvent_right(const Quaternion& s, const QMatrix& t,
                         const SpectralReport& rep) {
    const QMatrix qinv = pseudo_resolvent(s, t, rep);
    return -((t - QMatrix::scalar(t.n(), conj(s))) * qinv);
}

QMatrix sresolvent_left_pow(int n, const Quaternion& s, const QMatrix& t) {
    return sresolvent_left_pow(n, s, t, s_spectrum(t));
}

QMatrix sresolvent_left_pow(int n, const Quaternion& s, const QMatrix& t,
                            const SpectralReport& rep) {
    if (n < 1) throw DomainError("sresolvent_left_pow requires n >= 1");
    const QMatrix qinv_n = mat_pow(pseudo_resolvent(s, t, rep), n);
    const QMatrix negT = -t;
    QMatrix sum(t.n());
    for (int k = 0; k <= n; ++k)
        sum = sum + binom(n, k) * scalar_right(mat_pow(negT, k) * qinv_n,
                                               qpow_int(conj(s), n - k));
    return sum;
}

QMatrix sresolvent_right_pow(int n, const Quaternion& s, const QMatrix& t) {
    return sresolvent_right_pow(n, s, t, s_spectrum(t));
}

QMatrix sresolvent_right_pow(int n, const Quaternion& s, const QMatrix& t,
                             const SpectralReport& rep) {
    if (n < 1) throw DomainError("sresolvent_right_pow requires n >= 1");
    const QMatrix qinv_n = mat_pow(pseudo_resolvent(s, t, rep), n);
    const QMatrix negT = -t;
    QMatrix sum(t.n());
    for (int k = 0; k <= n; ++k)
        sum = sum + binom(n, k) * scalar_left(qpow_int(conj(s), n - k),
                                              mat_pow(negT, k) * qinv_n);
    return sum;
}

NeumannReport neumann_pseudo_resolvent(const Quaternion& s, const Quaternion& p,
                                       const QMatrix& t, int nmax) {
    const SpectralReport rep = s_spectrum(t);
    require_resolvent_point(p, rep);
    const QMatrix qp_inv = pseudo_resolvent(p, t, rep);

    const Slice ss = slice_of(s), sp = slice_of(p);
    const double ms2 = ss.s0 * ss.s0 + ss.s1 * ss.s1;
    const double mp2 = sp.s0 * sp.s0 + sp.s1 * sp.s1;
    // Q_p(T) - Q_s(T) = 2(s0 - p0) T + (|p|^2 - |s|^2) Id
    const QMatrix diff = 2.0 * (ss.s0 - sp.s0) * t +
                         (mp2 - ms2) * QMatrix::identity(t.n());
    const QMatrix step = diff * qp_inv;

    NeumannReport out;
    QMatrix term = qp_inv;
    QMatrix sum = term;
    double prevNorm = opnorm(term);
    const double stop = 1e-13 * (1.0 + prevNorm);
    out.termsUsed = 1;
    out.lastTermNorm = prevNorm;
    if (prevNorm <= stop) {
        out.converged = true;
        out.value = sum;
        return out;
    }
    for (int k = 1; k < nmax; ++k) {
        term = step * term;
        const double tn = opnorm(term);
        if (prevNorm > 0.0)
            out.maxTermRatio = std::max(out.maxTermRatio, tn / prevNorm);
        sum = sum + term;
        ++out.termsUsed;
        out.lastTermNorm = tn;
        if (tn <= stop) {
            out.converged = true;
            break;
        }
        prevNorm = tn;
    }
    out.value = sum;
    return out;
}

bool spectrum_clears_negative_axis(const SpectralReport& rep) {
    const double tol = 1e-8 * (1.0 + rep.maxModulus * rep.maxModulus);
    for (const auto& sp : rep.spheres) {
        // d_S distance from the sphere to the closed negative real axis
        const double d = sp.s0 <= 0.0 ? sp.s1 * sp.s1
                                      : std::max(2.0 * sp.s0, sp.s0 * sp.s0 + sp.s1 * sp.s1);
        if (d <= tol) return false;
    }
    return true;
}

std::vector<double> default_sector_grid() {
    std::vector<double> g;
    g.reserve(200);
    for (int i = 0; i < 200; ++i)
        g.push_back(std::pow(10.0, -6.0 + 12.0 * double(i) / 199.0));
    return g;
}

SectorEstimate sector_estimate(const QMatrix& t) {
    return sector_estimate(t, default_sector_grid(), 6);
}

SectorEstimate sector_estimate(const QMatrix& t, const std::vector<double>& grid,
                               int nmax) {
    return sector_estimate(t, grid, nmax, s_spectrum(t));
}

SectorEstimate sector_estimate(const QMatrix& t, const std::vector<double>& grid,
                               int nmax, const SpectralReport& rep) {
    if (!spectrum_clears_negative_axis(rep))
        throw PreconditionError("S-spectrum touches the closed negative real axis");

    SectorEstimate est;
    est.omega = rep.maxArg;
    for (double ti : grid) {
        const QMatrix r = sresolvent_right(Quaternion(-ti), t, rep);
        est.M = std::max(est.M, (1.0 + ti) * opnorm(r));
    }
    est.a0 = std::min(1.0 / (4.0 * est.M), 1.0);
    const double phi = M_PI - std::atan(1.0 / (2.0 * est.M));
    est.theta0 = std::atan2(std::sin(phi), std::cos(phi) - 1.0);
    est.Mn.resize(static_cast<size_t>(nmax));
    for (int k = 1; k <= nmax; ++k)
        est.Mn[static_cast<size_t>(k - 1)] =
            std::pow((1.0 + 1.0 / (2.0 * est.M)) * 4.0 * est.M, k);

    // Sample the type-(M, omega) condition on rays strictly between omega and pi.
    est.typeMWHolds = true;
    for (int k = 1; k <= 5; ++k) {
        const double ang = est.omega + k * (M_PI - est.omega) / 6.0;
        for (size_t i = 0; i < grid.size(); i += 8) {
            const double ti = grid[i];
            const Quaternion s =
                Quaternion(ti * std::cos(ang)) + Quaternion::e1() * (ti * std::sin(ang));
            if (!in_resolvent_set(s, rep)) {
                est.typeMWHolds = false;
                continue;
            }
            const double b = norm(s) * opnorm(sresolvent_right(s, t, rep));
            est.rayBound = std::max(est.rayBound, b);
            if (!std::isfinite(b)) est.typeMWHolds = false;
        }
    }
    return est;
}

} // namespace qfrac
