#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qfrac/fracpow.hpp"
#include "qfrac/random_gen.hpp"
#include "qfrac/slice_kernels.hpp"

using namespace qfrac;

namespace {
const Quaternion e1 = Quaternion::e1();
const Quaternion e2 = Quaternion::e2();

double mat_diff(const QMatrix& a, const QMatrix& b) { return opnorm(a - b); }
} // namespace

TEST_CASE("frac_power_neg: identity law") {
    for (double alpha : {0.25, 0.5, 0.75, 1.5}) {
        const FracPowResult r = frac_power_neg(QMatrix::identity(2), alpha);
        CHECK(r.converged);
        CHECK(mat_diff(r.value, QMatrix::identity(2)) <= 1e-10);
    }
}

TEST_CASE("frac_power_neg: scalar diagonal oracle") {
    const FracPowResult r = frac_power_neg(QMatrix::scalar(2, Quaternion(4.0)), 0.5);
    CHECK(mat_diff(r.value, QMatrix::scalar(2, Quaternion(0.5))) <= 1e-10);

    // T = lambda Id acts slice-wise, so T^{-alpha} = lambda^{-alpha} Id
    const Quaternion lambda = Quaternion(2.0) + e1;
    const FracPowResult rq = frac_power_neg(QMatrix::scalar(2, lambda), 0.5);
    CHECK(mat_diff(rq.value, QMatrix::scalar(2, qpow(lambda, -0.5))) <= 1e-8);
}

TEST_CASE("frac_power_neg: integer exponents use the inverse power") {
    const QMatrix t = QMatrix::diag({Quaternion(1.0), Quaternion(2.0)});
    const FracPowResult r = frac_power_neg(t, 1.0);
    CHECK(mat_diff(r.value, QMatrix::diag({Quaternion(1.0), Quaternion(0.5)})) <=
          1e-12);
    CHECK(r.evaluations == 0);

    Rng rng(113);
    const QMatrix m = rng.sectorial_matrix(4);
    CHECK(mat_diff(frac_power_neg(m, 2.0).value, mat_pow(inverse(m), 2)) <= 1e-12);
}

TEST_CASE("frac_power_neg: block eigen-oracle") {
    const Quaternion l1 = Quaternion(1.0) + 2.0 * e2;
    const Quaternion l2(3.0);
    const QMatrix t = QMatrix::diag({l1, l2});
    for (double alpha : {0.3, 1.7}) {
        const FracPowResult r = frac_power_neg(t, alpha);
        CHECK(r.converged);
        CHECK(mat_diff(r.value, QMatrix::diag({qpow(l1, -alpha), qpow(l2, -alpha)})) <=
              1e-8);
    }
}

TEST_CASE("frac_power_neg: non-sectorial input is rejected") {
    CHECK_THROWS_AS(frac_power_neg(QMatrix::scalar(2, Quaternion(-1.0)), 0.5),
                    PreconditionError);
    QMatrix t = QMatrix::diag({Quaternion(-1.0), Quaternion(2.0)});
    CHECK_THROWS_AS(frac_power_neg(t, 0.5), PreconditionError);
    CHECK_THROWS_AS(frac_power_neg(QMatrix::identity(2), -0.5), DomainError);
}

TEST_CASE("frac_power_neg_contour agrees with the ray representation") {
    Rng rng(127);
    const QMatrix t = rng.sectorial_matrix(3);
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    QuadratureConfig cfg;

    const FracPowResult ray = frac_power_neg(t, 0.5, cfg, rep, sec);
    const ContourPath g1 = default_keyhole(sec, ImaginaryUnit::e1(), 0.5, cfg);
    const FracPowResult right =
        frac_power_neg_contour(t, 0.5, g1, KernelSide::right, cfg);
    const FracPowResult left =
        frac_power_neg_contour(t, 0.5, g1, KernelSide::left, cfg);

    CHECK(right.converged);
    CHECK(mat_diff(right.value, left.value) <=
          10.0 * (right.errorEstimate + left.errorEstimate) + 1e-12);
    CHECK(mat_diff(right.value, ray.value) <=
          10.0 * (right.errorEstimate + ray.errorEstimate) + 1e-9);

    // independence of the plane
    const Quaternion mixed = (e1 + e2) / std::sqrt(2.0);
    const ContourPath g2 = default_keyhole(sec, ImaginaryUnit(mixed), 0.5, cfg);
    const FracPowResult other =
        frac_power_neg_contour(t, 0.5, g2, KernelSide::right, cfg);
    CHECK(mat_diff(right.value, other.value) <=
          10.0 * (right.errorEstimate + other.errorEstimate) + 1e-12);

    // integer exponent through the contour matches the plain inverse
    const FracPowResult one =
        frac_power_neg_contour(t, 1.0, g1, KernelSide::right, cfg);
    CHECK(mat_diff(one.value, inverse(t)) <=
          10.0 * one.errorEstimate + 1e-9);
}

TEST_CASE("frac_power_neg_contour rejects bad paths") {
    const QMatrix t = QMatrix::scalar(2, Quaternion(1.0));
    // path through the spectrum sphere at 1
    const ContourPath bad = make_keyhole(ImaginaryUnit::e1(), 0.75 * M_PI, 1.0, 1e6);
    CHECK_THROWS_AS(frac_power_neg_contour(t, 0.5, bad, KernelSide::right, {}),
                    PathInvalidError);
    // keyhole that fails to enclose the spectrum
    const ContourPath small = make_keyhole(ImaginaryUnit::e1(), 0.75 * M_PI, 2.0, 1e6);
    CHECK_THROWS_AS(frac_power_neg_contour(t, 0.5, small, KernelSide::right, {}),
                    PathInvalidError);
}

TEST_CASE("frac_power_halfplane") {
    const FracPowResult rid = frac_power_halfplane(QMatrix::identity(2), 0.5);
    CHECK(mat_diff(rid.value, QMatrix::identity(2)) <= 1e-10);

    const FracPowResult r4 = frac_power_halfplane(QMatrix::scalar(2, Quaternion(4.0)), 0.5);
    CHECK(mat_diff(r4.value, QMatrix::scalar(2, Quaternion(0.5))) <= 1e-10);

    // sphere (-1, 3) has negative real part
    CHECK_THROWS_AS(
        frac_power_halfplane(QMatrix::scalar(2, Quaternion(-1.0) + 3.0 * e1), 0.5),
        PreconditionError);

    Rng rng(131);
    const QMatrix t = rng.sectorial_matrix(3);
    const FracPowResult hp = frac_power_halfplane(t, 0.4);
    const FracPowResult ray = frac_power_neg(t, 0.4);
    CHECK(mat_diff(hp.value, ray.value) <=
          100.0 * (hp.errorEstimate + ray.errorEstimate) + 1e-9);
}

TEST_CASE("frac_power_pos") {
    CHECK(mat_diff(frac_power_pos(QMatrix::identity(2), 0.3).value,
                   QMatrix::identity(2)) <= 1e-10);
    CHECK(mat_diff(frac_power_pos(QMatrix::scalar(2, Quaternion(4.0)), 0.5).value,
                   QMatrix::scalar(2, Quaternion(2.0))) <= 1e-9);

    const QMatrix t = QMatrix::diag({Quaternion(9.0), Quaternion(4.0)});
    CHECK(mat_diff(frac_power_pos(t, 0.5).value * frac_power_neg(t, 0.5).value,
                   QMatrix::identity(2)) <= 1e-9);

    // composed power T^{2.5} against the eigen-oracle
    const Quaternion lambda = Quaternion(1.0) + e2;
    const FracPowResult r = frac_power_pos(QMatrix::scalar(2, lambda), 2.5);
    CHECK(mat_diff(r.value, QMatrix::scalar(2, qpow(lambda, 2.5))) <= 1e-7);
}

TEST_CASE("s_calculus") {
    Rng rng(137);
    const QMatrix t = QMatrix::diag({Quaternion(1.0) + e1, Quaternion(0.5)});
    const SpectralReport rep = s_spectrum(t);
    const ContourPath circle =
        make_circle(ImaginaryUnit::e1(), 1.1 * rep.maxModulus + 1.0, 0.0);

    IntrinsicFunction one{[](const Quaternion&) { return Quaternion(1.0); }, true};
    const FracPowResult r1 = s_calculus(t, one, circle);
    CHECK(r1.converged);
    CHECK(mat_diff(r1.value, QMatrix::identity(2)) <= 1e-9);

    IntrinsicFunction square{[](const Quaternion& s) { return s * s; }, true};
    const FracPowResult r2 = s_calculus(t, square, circle);
    CHECK(mat_diff(r2.value, t * t) <= 1e-8 + 10.0 * r2.errorEstimate);

    // polynomial with real coefficients equals the matrix polynomial
    IntrinsicFunction poly{
        [](const Quaternion& s) { return s * s * s - 2.0 * s + Quaternion(3.0) * 1.0; },
        true};
    const FracPowResult r3 = s_calculus(t, poly, circle);
    const QMatrix want = t * t * t - 2.0 * t + 3.0 * QMatrix::identity(2);
    CHECK(mat_diff(r3.value, want) <= 1e-8 + 10.0 * r3.errorEstimate);

    // s^{-1/2} over a keyhole is the fractional power by construction
    const QMatrix ts = rng.sectorial_matrix(3);
    const SpectralReport reps = s_spectrum(ts);
    const SectorEstimate secs = sector_estimate(ts, default_sector_grid(), 8, reps);
    const ContourPath keyhole = default_keyhole(secs, ImaginaryUnit::e1(), 0.5, {});
    IntrinsicFunction invsqrt{[](const Quaternion& s) { return qpow(s, -0.5); }, true};
    const FracPowResult r4 = s_calculus(ts, invsqrt, keyhole);
    const FracPowResult ray = frac_power_neg(ts, 0.5, {}, reps, secs);
    CHECK(mat_diff(r4.value, ray.value) <=
          10.0 * (r4.errorEstimate + ray.errorEstimate) + 1e-9);

    // a non-intrinsic map fails the conjugate-pair spot check
    IntrinsicFunction crooked{[](const Quaternion& s) { return e2 * s; }, true};
    CHECK_THROWS_AS(s_calculus(t, crooked, circle), PreconditionError);
}

TEST_CASE("kato_F examples") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        const FracPowResult r = kato_F(Quaternion(-1.0), QMatrix::identity(2), alpha);
        CHECK(r.converged);
        CHECK(mat_diff(r.value, -0.5 * QMatrix::identity(2)) <=
              1e-9 + 10.0 * r.errorEstimate);
    }
    const FracPowResult r4 =
        kato_F(Quaternion(-1.0), QMatrix::scalar(2, Quaternion(4.0)), 0.5);
    CHECK(mat_diff(r4.value, QMatrix::scalar(2, Quaternion(-1.0 / 3.0))) <=
          1e-9 + 10.0 * r4.errorEstimate);

    // angle condition: arg(p) must exceed max(alpha pi, omega)
    CHECK_THROWS_AS(kato_F(Quaternion(1.0), QMatrix::identity(2), 0.5),
                    PreconditionError);
    CHECK_THROWS_AS(kato_F(e1, QMatrix::identity(2), 0.8), PreconditionError);
}

TEST_CASE("kato_F bound |mu| ||F|| <= M") {
    Rng rng(139);
    const QMatrix t = rng.sectorial_matrix(3);
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    for (double mu : {-0.5, -1.0, -3.0, -10.0}) {
        const FracPowResult r = kato_F(Quaternion(mu), t, 0.4, {}, rep, sec);
        CHECK(std::abs(mu) * opnorm(r.value) <= sec.M * (1.0 + 1e-6));
    }
}

TEST_CASE("kato_F agrees with its keyhole contour form") {
    // F_alpha(p, T) = (1/2pi) Int S_R^{-1}(p, s^alpha) ds_I S_R^{-1}(s, T)
    // over a keyhole inside the sector, valid since 0 lies in rho_S(T)
    Rng rng(241);
    const QMatrix t = rng.sectorial_matrix(3);
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    const double alpha = 0.4;
    const Quaternion p = Quaternion(-1.0) + 0.3 * e2; // arg(p) > max(alpha pi, omega)
    REQUIRE(arg(p) > std::max(alpha * M_PI, sec.omega));

    const FracPowResult direct = kato_F(p, t, alpha, {}, rep, sec);

    const double theta = 0.5 * std::max(alpha * M_PI, sec.omega) + 0.5 * M_PI;
    const double radius = std::pow(4.0 * std::max(1.0, sec.M) / 1e-12, 1.0 / alpha);
    const ContourPath gamma =
        make_keyhole(ImaginaryUnit::e1(), theta, 0.5 * sec.a0, radius);
    const std::function<QMatrix(const Quaternion&, const Quaternion&)> f =
        [&](const Quaternion& s, const Quaternion& dsI) {
            return scalar_left(cauchy_right(p, qpow(s, alpha)) * dsI,
                               sresolvent_right(s, t, rep));
        };
    const auto contour = integrate_contour<QMatrix>(f, gamma, QuadratureConfig{});
    CHECK(contour.converged);
    CHECK(mat_diff(direct.value, contour.value) <=
          100.0 * (direct.errorEstimate + contour.errorEstimate) + 1e-10);
}

TEST_CASE("kato_F satisfies the real resolvent identity") {
    Rng rng(149);
    const QMatrix t = rng.sectorial_matrix(4);
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    const double alpha = 0.5;
    for (auto [lam, mu] : {std::pair<double, double>{-0.5, -1.0}, {-1.0, -3.0}}) {
        const FracPowResult fl = kato_F(Quaternion(lam), t, alpha, {}, rep, sec);
        const FracPowResult fm = kato_F(Quaternion(mu), t, alpha, {}, rep, sec);
        const QMatrix lhs = fm.value - fl.value;
        const QMatrix rhs = (lam - mu) * (fm.value * fl.value);
        CHECK(mat_diff(lhs, rhs) <=
              100.0 * (fl.errorEstimate + fm.errorEstimate) + 1e-10);
    }
}

TEST_CASE("kato_power") {
    const KatoPowerResult rid = kato_power(QMatrix::identity(2), 0.5, -1.0);
    CHECK(mat_diff(rid.value, QMatrix::identity(2)) <= 1e-8);

    const KatoPowerResult r4 = kato_power(QMatrix::scalar(2, Quaternion(4.0)), 0.5, -1.0);
    CHECK(mat_diff(r4.value, QMatrix::scalar(2, Quaternion(2.0))) <= 1e-7);

    const Quaternion lambda = Quaternion(2.0) + e1;
    const KatoPowerResult rq = kato_power(QMatrix::scalar(2, lambda), 0.5, -1.0);
    CHECK(mat_diff(rq.value, QMatrix::scalar(2, qpow(lambda, 0.5))) <= 1e-6);
    CHECK(rq.omega <= 0.5 * arg(lambda) + 1e-3);

    CHECK_THROWS_AS(kato_power(QMatrix::identity(2), 0.5, 1.0), DomainError);
}

TEST_CASE("verify_semigroup") {
    const SemigroupReport rid = verify_semigroup(QMatrix::identity(2), 0.3, 0.7);
    CHECK(rid.pass);
    CHECK(rid.residual <= 1e-9);

    const QMatrix t = QMatrix::diag({Quaternion(1.0), Quaternion(2.0), Quaternion(4.0)});
    const SemigroupReport r = verify_semigroup(t, 0.3, 0.7);
    CHECK(r.pass);
    const QMatrix product = frac_power_neg(t, 0.3).value * frac_power_neg(t, 0.7).value;
    CHECK(mat_diff(product,
                   QMatrix::diag({Quaternion(1.0), Quaternion(0.5), Quaternion(0.25)})) <=
          1e-9);

    Rng rng(151);
    const SemigroupReport rr = verify_semigroup(rng.sectorial_matrix(4), 0.25, 0.5);
    CHECK(rr.pass);
}

TEST_CASE("spectral mapping of the fractional power") {
    Rng rng(157);
    const QMatrix t = rng.sectorial_matrix(4);
    const double alpha = 0.5;
    const FracPowResult r = frac_power_neg(t, alpha);
    const SpectralReport repT = s_spectrum(t);
    const SpectralReport repP = s_spectrum(r.value);

    std::vector<std::pair<double, double>> mapped;
    for (const auto& sp : repT.spheres) {
        const Quaternion mu = qpow(Quaternion(sp.s0) + e1 * sp.s1, -alpha);
        mapped.emplace_back(re(mu), imag_norm(mu));
    }
    std::sort(mapped.begin(), mapped.end());
    std::vector<std::pair<double, double>> got;
    for (const auto& sp : repP.spheres) got.emplace_back(sp.s0, sp.s1);
    std::sort(got.begin(), got.end());
    REQUIRE(mapped.size() == got.size());
    for (size_t i = 0; i < mapped.size(); ++i) {
        CHECK(std::abs(mapped[i].first - got[i].first) <= 1e-6);
        CHECK(std::abs(mapped[i].second - got[i].second) <= 1e-6);
    }
}

TEST_CASE("fractional powers are uniformly bounded by the sector constant") {
    Rng rng(163);
    const QMatrix t = rng.sectorial_matrix(4);
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    for (int k = 1; k <= 20; ++k) {
        const double alpha = 2.0 * double(k) / 21.0; // in (0, 2)
        const int n = alpha < 1.0 ? 0 : static_cast<int>(std::ceil(alpha));
        const FracPowResult r = frac_power_neg(t, alpha, {}, rep, sec);
        CHECK(opnorm(r.value) <= sec.Mn[static_cast<size_t>(n)] * (1.0 + 1e-9));
    }
}

TEST_CASE("strong continuity surrogate: T^{-alpha} -> Id as alpha -> 0") {
    Rng rng(167);
    const QMatrix t = rng.sectorial_matrix(3);
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {0.2, 0.1, 0.05, 0.025}) {
        const double d = mat_diff(frac_power_neg(t, alpha, {}, rep, sec).value,
                                  QMatrix::identity(3));
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
}
