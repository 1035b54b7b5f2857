#pragma once

#include "qfrac/quaternion.hpp"

namespace qfrac {

// Scalar slice-hyperholomorphic Cauchy kernels and their closed-form powers.
//
// Both kernels share the factor Q_s(x) = x^2 - 2 Re(s) x + |s|^2, which
// vanishes exactly when x lies on the sphere [s].  All operations below throw
// SingularKernelError when |Q_s(x)| < 1e-10 (1 + |s|)^2.

// S_L^{-1}(s, x) = -(x^2 - 2 Re(s) x + |s|^2)^{-1} (x - conj(s)).
Quaternion cauchy_left(const Quaternion& s, const Quaternion& x);

// S_R^{-1}(s, x) = -(x - conj(s)) (x^2 - 2 Re(s) x + |s|^2)^{-1}.
// Satisfies S_R^{-1}(s, x) = -S_L^{-1}(x, s).
Quaternion cauchy_right(const Quaternion& s, const Quaternion& x);

// n-th kernel powers by the closed binomial formulas
//   S_L^{-n}(s,x) = Q_s(x)^{-n} sum_k C(n,k) (-x)^k conj(s)^{n-k},
//   S_R^{-n}(s,x) = sum_k C(n,k) conj(s)^{n-k} (-x)^k Q_s(x)^{-n}.
// n = 1 reduces to the plain kernels.
Quaternion cauchy_left_pow(int n, const Quaternion& s, const Quaternion& x);
Quaternion cauchy_right_pow(int n, const Quaternion& s, const Quaternion& x);

// Representation-formula extension of a left slice function: given the values
// fI = f(x_I) and fIconj = f(conj(x_I)) on the plane C_I (x_I = x0 + I x1 for
// the slice x = x0 + I_x x1), reconstructs
//   f(x) = 1/2 (1 - I_x I) f(x_I) + 1/2 (1 + I_x I) f(conj(x_I)).
Quaternion represent(const Quaternion& fI, const Quaternion& fIconj,
                     const ImaginaryUnit& I, const Quaternion& x);

} // namespace qfrac
