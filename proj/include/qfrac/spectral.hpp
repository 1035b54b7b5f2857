#pragma once

#include <vector>

#include "qfrac/qmatrix.hpp"
#include "qfrac/quaternion.hpp"

namespace qfrac {

// One axially symmetric spectral sphere [s] = {s0 + I s1 : I in S}.
// s1 = 0 is a real spectral point; multiplicity is dimension-weighted so the
// multiplicities of a report sum to n.
struct SpectrumSphere {
    double s0 = 0.0;
    double s1 = 0.0;
    int multiplicity = 0;
};

struct SpectralReport {
    std::vector<SpectrumSphere> spheres;
    double maxModulus = 0.0;
    double maxArg = 0.0;
};

// S-spectrum of T as the axially symmetric hull of the eigenvalues of the
// complex embedding.  Eigenvalues come in conjugate pairs; pairs are clustered
// with tolerance 1e-8 (1 + maxModulus) and each cluster of 2m eigenvalues
// yields one sphere of multiplicity m.
SpectralReport s_spectrum(const QMatrix& t);

// d_S distance from s to the nearest sphere of the report.
double ds_to_spectrum(const Quaternion& s, const SpectralReport& rep);

// Scale-aware rho_S membership: d_S distance to all spheres > 1e-8 (1+|s|^2).
bool in_resolvent_set(const Quaternion& s, const SpectralReport& rep);

// Q_s(T) = T^2 - 2 s0 T + |s|^2 Id.  Depends on s only through (s0, s1), so
// the result is bitwise identical across the sphere [s] whenever the slice
// data of the inputs agree bitwise.
QMatrix spectral_pencil(const Quaternion& s, const QMatrix& t);

// Pseudo-resolvent Q_s(T)^{-1}.  Throws SpectralSingularityError off rho_S.
QMatrix pseudo_resolvent(const Quaternion& s, const QMatrix& t);
QMatrix pseudo_resolvent(const Quaternion& s, const QMatrix& t,
                         const SpectralReport& rep);

// Left and right S-resolvent operators
//   S_L^{-1}(s,T) = Q_s^{-1} conj(s) - T Q_s^{-1},
//   S_R^{-1}(s,T) = -(T - conj(s) Id) Q_s^{-1}.
// Both reduce to the classical resolvent (s Id - T)^{-1} for real s.
QMatrix sresolvent_left(const Quaternion& s, const QMatrix& t);
QMatrix sresolvent_left(const Quaternion& s, const QMatrix& t,
                        const SpectralReport& rep);
QMatrix sresolvent_right(const Quaternion& s, const QMatrix& t);
QMatrix sresolvent_right(const Quaternion& s, const QMatrix& t,
                         const SpectralReport& rep);

// n-th S-resolvent powers
//   S_L^{-n}(s,T) = sum_k C(n,k) (-T)^k Q_s^{-n} conj(s)^{n-k},
//   S_R^{-n}(s,T) = sum_k C(n,k) conj(s)^{n-k} (-T)^k Q_s^{-n}.
QMatrix sresolvent_left_pow(int n, const Quaternion& s, const QMatrix& t);
QMatrix sresolvent_left_pow(int n, const Quaternion& s, const QMatrix& t,
                            const SpectralReport& rep);
QMatrix sresolvent_right_pow(int n, const Quaternion& s, const QMatrix& t);
QMatrix sresolvent_right_pow(int n, const Quaternion& s, const QMatrix& t,
                             const SpectralReport& rep);

struct NeumannReport {
    QMatrix value;
    int termsUsed = 0;
    bool converged = false;
    double lastTermNorm = 0.0;
    double maxTermRatio = 0.0; // max ||term_{k+1}|| / ||term_k|| observed
};

// Series expansion of Q_s(T)^{-1} around a base point p in rho_S(T):
//   sum_n (Q_p(T) - Q_s(T))^n Q_p(T)^{-(n+1)},
// which converges whenever d_S(s,p) < 1/(||T Q_p^{-1}|| + ||Q_p^{-1}||).
// Non-convergence within nmax terms is reported, not thrown.
NeumannReport neumann_pseudo_resolvent(const Quaternion& s, const Quaternion& p,
                                       const QMatrix& t, int nmax);

// Numerically estimated sector data for an operator with no S-spectrum on
// (-inf, 0]:
//   M      = max over the grid of (1+t) ||S_R^{-1}(-t, T)||,
//   omega  = largest argument of the spectral spheres,
//   a0     = min{1/(4M), 1},
//   theta0 = pi/2 + (pi - arctan(1/(2M)))/2,
//   Mn[k]  = (1 + 1/(2M))^k 4^k M^k   (k = 1..nmax, stored at index k-1).
// typeMWHolds records whether ||s S_R^{-1}(s,T)|| stayed bounded on the
// sampled rays between omega and pi (the type-(M,omega) condition).
struct SectorEstimate {
    double M = 0.0;
    double omega = 0.0;
    double a0 = 0.0;
    double theta0 = 0.0;
    std::vector<double> Mn;
    bool typeMWHolds = false;
    double rayBound = 0.0; // sampled sup of ||s S_R^{-1}(s,T)|| inside the sector
};

std::vector<double> default_sector_grid(); // 200 log-spaced points in [1e-6, 1e6]

SectorEstimate sector_estimate(const QMatrix& t, const std::vector<double>& grid,
                               int nmax);
SectorEstimate sector_estimate(const QMatrix& t, const std::vector<double>& grid,
                               int nmax, const SpectralReport& rep);
SectorEstimate sector_estimate(const QMatrix& t);

// True when no spectral sphere touches the closed negative real axis.
bool spectrum_clears_negative_axis(const SpectralReport& rep);

} // namespace qfrac
