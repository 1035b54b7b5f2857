#include "qfrac/slice_kernels.hpp"

#include <cmath>
#include <vector>

namespace qfrac {

namespace {

Quaternion companion_factor(const Quaternion& s, const Quaternion& x) {
    return x * x - 2.0 * re(s) * x + Quaternion(norm2(s));
}

void require_off_sphere(const Quaternion& s, const Quaternion& q_factor) {
    const double guard = 1e-10 * (1.0 + norm(s)) * (1.0 + norm(s));
    if (norm(q_factor) < guard)
        throw SingularKernelError("kernel evaluated on the singular sphere [s]");
}

// Binomial coefficients of row n.
std::vector<double> binomial_row(int n) {
    std::vector<double> c(static_cast<size_t>(n) + 1, 1.0);
    for (int k = 1; k <= n; ++k) c[k] = c[k - 1] * double(n - k + 1) / double(k);
    return c;
}

Quaternion qpow_int(const Quaternion& q, int k) {
    Quaternion r(1.0);
    for (int i = 0; i < k; ++i) r = r * q;
    return r;
}

} // namespace

Quaternion cauchy_left(const Quaternion& s, const Quaternion& x) {
    const Quaternion q = companion_factor(s, x);
    require_off_sphere(s, q);
    return -(inverse(q) * (x - conj(s)));
}

Quaternion cauchy_right(const Quaternion& s, const Quaternion& x) {
    const Quaternion q = companion_factor(s, x);
    require_off_sphere(s, q);
    return -((x - conj(s)) * inverse(q));
}

Quaternion cauchy_left_pow(int n, const Quaternion& s, const Quaternion& x) {
    if (n < 1) throw DomainError("cauchy_left_pow requires n >= 1");
    const Quaternion q = companion_factor(s, x);
    require_off_sphere(s, q);
    const Quaternion qinv_n = qpow_int(inverse(q), n);
    const std::vector<double> c = binomial_row(n);
    Quaternion sum(0.0);
    for (int k = 0; k <= n; ++k)
        sum = sum + c[k] * (qpow_int(-x, k) * qpow_int(conj(s), n - k));
    return qinv_n * sum;
}

Quaternion cauchy_right_pow(int n, const Quaternion& s, const Quaternion& x) {
    if (n < 1) throw DomainError("cauchy_right_pow requires n >= 1");
    const Quaternion q = companion_factor(s, x);
    require_off_sphere(s, q);
    const Quaternion qinv_n = qpow_int(inverse(q), n);
    const std::vector<double> c = binomial_row(n);
    Quaternion sum(0.0);
    for (int k = 0; k <= n; ++k)
        sum = sum + c[k] * (qpow_int(conj(s), n - k) * qpow_int(-x, k));
    return sum * qinv_n;
}

Quaternion represent(const Quaternion& fI, const Quaternion& fIconj,
                     const ImaginaryUnit& I, const Quaternion& x) {
    const Slice sx = slice_of(x);
    const Quaternion ii = sx.axis.q() * I.q();
    return 0.5 * ((Quaternion(1.0) - ii) * fI + (Quaternion(1.0) + ii) * fIconj);
}

} // namespace qfrac
