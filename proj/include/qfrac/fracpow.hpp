#pragma once

#include <functional>

#include "qfrac/quadrature.hpp"
#include "qfrac/spectral.hpp"

namespace qfrac {

// Which S-resolvent carries the operator in a contour integral.
enum class KernelSide { left, right };

struct FracPowResult {
    QMatrix value;
    double errorEstimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

// T^{-alpha} for alpha > 0 by the ray representations along the negative axis:
//   alpha integer m:      inverse(T)^m,
//   alpha in (0,1):       -(sin(alpha pi)/pi) Int t^{-alpha} S_R^{-1}(-t,T) dt,
//   alpha non-integer >1: the n = ceil(alpha) form with the n-th kernel power.
// Requires the S-spectrum to clear (-inf, 0].
FracPowResult frac_power_neg(const QMatrix& t, double alpha,
                             const QuadratureConfig& cfg = {});
FracPowResult frac_power_neg(const QMatrix& t, double alpha,
                             const QuadratureConfig& cfg,
                             const SpectralReport& rep, const SectorEstimate& sec);

// Default keyhole for T: opening (theta0 + pi)/2, inner radius a0/2, outer
// radius from the declared tail decay of s^{-alpha} S_R^{-1}(s, T).
ContourPath default_keyhole(const SectorEstimate& sec, const ImaginaryUnit& plane,
                            double alpha, const QuadratureConfig& cfg);

// T^{-alpha} as the keyhole contour integral
//   right side: (1/2pi) Int s^{-alpha} ds_I S_R^{-1}(s,T),
//   left side:  (1/2pi) Int S_L^{-1}(s,T) ds_I s^{-alpha}.
// The path must avoid (-inf, 0] and enclose the spectrum.
FracPowResult frac_power_neg_contour(const QMatrix& t, double alpha,
                                     const ContourPath& path, KernelSide side,
                                     const QuadratureConfig& cfg = {});

// T^{-alpha} for alpha in (0,1) when the spectrum lies in the open right
// half-space:
//   (1/pi) Int tau^{-alpha} (cos(alpha pi/2) T + sin(alpha pi/2) tau Id)
//          (T^2 + tau^2 Id)^{-1} dtau.
FracPowResult frac_power_halfplane(const QMatrix& t, double alpha,
                                   const QuadratureConfig& cfg = {});

// T^{alpha} for alpha > 0 as T^{floor(alpha)} inverse(T^{-frac(alpha)}).
FracPowResult frac_power_pos(const QMatrix& t, double alpha,
                             const QuadratureConfig& cfg = {});

// Scalar slice function assumed intrinsic: supplied on the plane C_{e1} and
// extended to other planes by the representation formula.  Intrinsicness is
// asserted by the caller and spot-checked at 8 conjugate pairs on the path.
struct IntrinsicFunction {
    std::function<Quaternion(const Quaternion&)> on_plane;
    bool intrinsic_asserted = true;
};

// Evaluate the intrinsic function at an arbitrary quaternion.
Quaternion intrinsic_eval(const IntrinsicFunction& f, const Quaternion& s);

// S-functional calculus f(T) = (1/2pi) Int S_L^{-1}(s,T) ds_I f(s) over a
// path surrounding the S-spectrum inside f's slice domain.
FracPowResult s_calculus(const QMatrix& t, const IntrinsicFunction& f,
                         const ContourPath& path, const QuadratureConfig& cfg = {});

// Kato integrand F_alpha(p, T) =
//   (sin(alpha pi)/pi) Int t^alpha (p^2 - 2 p t^alpha cos(alpha pi)
//                                   + t^{2 alpha})^{-1} S_R^{-1}(-t,T) dt,
// the right S-resolvent of T^alpha at p.  Requires arg(p) > max(alpha pi, omega).
FracPowResult kato_F(const Quaternion& p, const QMatrix& t, double alpha,
                     const QuadratureConfig& cfg = {});
FracPowResult kato_F(const Quaternion& p, const QMatrix& t, double alpha,
                     const QuadratureConfig& cfg, const SpectralReport& rep,
                     const SectorEstimate& sec);

struct KatoPowerResult {
    QMatrix value;               // B_alpha = mu0 Id - F_alpha(mu0, T)^{-1}
    double resolventResidual;    // worst ||S_R^{-1}(mu, B_alpha) - F_alpha(mu, T)||
    double inverseResidual;      // ||inverse(B_alpha) - frac_power_neg(T, alpha)||
    double omega;                // spectral argument bound of B_alpha
    double errorEstimate;        // combined quadrature error estimates
    long evaluations;
};

// B_alpha construction from one negative base point mu0, with the mandatory
// post-checks: the resolvent identity at five sampled mu < 0, the re-run
// sector estimate of type (M, alpha omega), and consistency with the ray
// representation of T^{-alpha}.  A post-check failing beyond tolerance
// throws InconsistencyError.
KatoPowerResult kato_power(const QMatrix& t, double alpha, double mu0 = -1.0,
                           const QuadratureConfig& cfg = {});

struct SemigroupReport {
    double residual = 0.0;          // ||T^{-a} T^{-b} - T^{-(a+b)}||
    double tolerance = 0.0;         // 100 x (sum of quadrature error estimates)
    double sumErrorEstimates = 0.0;
    bool pass = false;
};

SemigroupReport verify_semigroup(const QMatrix& t, double alpha, double beta,
                                 const QuadratureConfig& cfg = {});

} // namespace qfrac
