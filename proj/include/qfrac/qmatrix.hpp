#pragma once

#include <vector>

#include <Eigen/Core>

#include "qfrac/quaternion.hpp"

namespace qfrac {

// n x n quaternionic matrix acting on column vectors v in H^n as a right-linear
// operator: (T v)_i = sum_j T_ij v_j, and (T v) a = T (v a) for a in H.
// Matrices are immutable values in practice; all free functions return copies.
class QMatrix {
public:
    QMatrix() = default;
    explicit QMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {}

    static QMatrix identity(int n) {
        QMatrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Quaternion(1.0);
        return m;
    }
    static QMatrix diag(const std::vector<Quaternion>& d) {
        QMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n_; ++i) m.at(i, i) = d[static_cast<size_t>(i)];
        return m;
    }
    static QMatrix scalar(int n, const Quaternion& q) {
        QMatrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = q;
        return m;
    }

    int n() const { return n_; }
    Quaternion& at(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
    const Quaternion& at(int i, int j) const {
        return e_[static_cast<size_t>(i) * n_ + j];
    }

    // Matrix action on a column vector of H^n.
    std::vector<Quaternion> apply(const std::vector<Quaternion>& v) const;

    bool operator==(const QMatrix& o) const { return n_ == o.n_ && e_ == o.e_; }

private:
    int n_ = 0;
    std::vector<Quaternion> e_;
};

QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator*(double t, const QMatrix& a);
inline QMatrix operator*(const QMatrix& a, double t) { return t * a; }

// The operator a I : v -> a v has matrix diag(a); these helpers implement the
// two-sided module actions (a T) v = a (T v) and (T a) v = T (a v).
QMatrix scalar_left(const Quaternion& a, const QMatrix& t);
QMatrix scalar_right(const QMatrix& t, const Quaternion& a);

double vec_norm(const std::vector<Quaternion>& v);

QMatrix mat_pow(const QMatrix& t, int k);

// Complex embedding: each entry q = (w + x i) + (y + z i) e2, with i
// identified with e1, becomes the 2x2 cell [[w+xi, y+zi], [-(y-zi), w-xi]].
// embed is an injective ring homomorphism and an isometry for the l2 operator
// norm on H^n ~ C^{2n}.
using CEmbedding = Eigen::MatrixXcd;

CEmbedding embed(const QMatrix& t);
QMatrix unembed(const CEmbedding& m);

// Largest singular value of embed(T); equals the operator 2-norm of T.
double opnorm(const QMatrix& t);

// Condition number (sigma_max / sigma_min) of embed(T); infinity if singular.
double cond(const QMatrix& t);

// Inverse through the embedding with partial-pivoting elimination.
// Throws NotInvertibleError (carrying the condition estimate) if the
// condition number exceeds 1/(100 eps).
QMatrix inverse(const QMatrix& t);

double max_entry_norm(const QMatrix& t);

} // namespace qfrac
