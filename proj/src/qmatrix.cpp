#include "qfrac/qmatrix.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace qfrac {

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    QMatrix r(a.n());
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    QMatrix r(a.n());
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
    return r;
}

QMatrix operator-(const QMatrix& a) {
    QMatrix r(a.n());
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) r.at(i, j) = -a.at(i, j);
    return r;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    QMatrix r(a.n());
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) {
            Quaternion s(0.0);
            for (int k = 0; k < a.n(); ++k) s = s + a.at(i, k) * b.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

QMatrix operator*(double t, const QMatrix& a) {
    QMatrix r(a.n());
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) r.at(i, j) = t * a.at(i, j);
    return r;
}

QMatrix scalar_left(const Quaternion& a, const QMatrix& t) {
    QMatrix r(t.n());
    for (int i = 0; i < t.n(); ++i)
        for (int j = 0; j < t.n(); ++j) r.at(i, j) = a * t.at(i, j);
    return r;
}

QMatrix scalar_right(const QMatrix& t, const Quaternion& a) {
    QMatrix r(t.n());
    for (int i = 0; i < t.n(); ++i)
        for (int j = 0; j < t.n(); ++j) r.at(i, j) = t.at(i, j) * a;
    return r;
}

std::vector<Quaternion> QMatrix::apply(const std::vector<Quaternion>& v) const {
    std::vector<Quaternion> r(v.size());
    for (int i = 0; i < n_; ++i) {
        Quaternion s(0.0);
        for (int j = 0; j < n_; ++j) s = s + at(i, j) * v[static_cast<size_t>(j)];
        r[static_cast<size_t>(i)] = s;
    }
    return r;
}

double vec_norm(const std::vector<Quaternion>& v) {
    double s = 0.0;
    for (const Quaternion& q : v) s += norm2(q);
    return std::sqrt(s);
}

QMatrix mat_pow(const QMatrix& t, int k) {
    QMatrix r = QMatrix::identity(t.n());
    for (int i = 0; i < k; ++i) r = r * t;
    return r;
}

CEmbedding embed(const QMatrix& t) {
    const int n = t.n();
    CEmbedding m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Quaternion& q = t.at(i, j);
            const std::complex<double> a(q.w, q.x);
            const std::complex<double> b(q.y, q.z);
            m(2 * i, 2 * j) = a;
            m(2 * i, 2 * j + 1) = b;
            m(2 * i + 1, 2 * j) = -std::conj(b);
            m(2 * i + 1, 2 * j + 1) = std::conj(a);
        }
    return m;
}

QMatrix unembed(const CEmbedding& m) {
    const int n = static_cast<int>(m.rows()) / 2;
    QMatrix t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // averaging the two symplectic copies projects rounding noise back
            // onto a quaternionic cell; exact cells are reproduced exactly
            const std::complex<double> a =
                0.5 * (m(2 * i, 2 * j) + std::conj(m(2 * i + 1, 2 * j + 1)));
            const std::complex<double> b =
                0.5 * (m(2 * i, 2 * j + 1) - std::conj(m(2 * i + 1, 2 * j)));
            t.at(i, j) = Quaternion(a.real(), a.imag(), b.real(), b.imag());
        }
    return t;
}

double opnorm(const QMatrix& t) {
    if (t.n() == 0) return 0.0;
    Eigen::JacobiSVD<CEmbedding> svd(embed(t));
    return svd.singularValues()(0);
}

double cond(const QMatrix& t) {
    Eigen::JacobiSVD<CEmbedding> svd(embed(t));
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return svd.singularValues()(0) / smin;
}

QMatrix inverse(const QMatrix& t) {
    const CEmbedding e = embed(t);
    Eigen::PartialPivLU<CEmbedding> lu(e);
    const double rc = lu.rcond();
    const double c = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(c < 1.0 / (100.0 * std::numeric_limits<double>::epsilon())))
        throw NotInvertibleError("matrix numerically singular", c);
    const CEmbedding inv = lu.solve(CEmbedding::Identity(e.rows(), e.cols()));
    return unembed(inv);
}

double max_entry_norm(const QMatrix& t) {
    double m = 0.0;
    for (int i = 0; i < t.n(); ++i)
        for (int j = 0; j < t.n(); ++j) m = std::max(m, norm(t.at(i, j)));
    return m;
}

} // namespace qfrac
