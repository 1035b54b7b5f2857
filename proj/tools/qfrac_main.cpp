#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfrac/fracpow.hpp"
#include "qfrac/json_io.hpp"
#include "qfrac/random_gen.hpp"

namespace {

using nlohmann::json;
using namespace qfrac;

constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitProperty = 5;

struct Check {
    std::string name;
    double residual;
    double tolerance;
    bool pass;
};

json checks_to_json(const std::vector<Check>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"residual", c.residual},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    return arr;
}

void push_check(std::vector<Check>& checks, const std::string& name,
                double residual, double tolerance) {
    checks.push_back({name, residual, tolerance, residual <= tolerance});
}

// ---- verify suites ---------------------------------------------------------

void resolvent_suite(const QMatrix& t, Rng& rng, std::vector<Check>& checks,
                     int draws) {
    const SpectralReport rep = s_spectrum(t);
    for (int k = 0; k < draws; ++k) {
        const Quaternion s = rng.resolvent_point(rep);
        Quaternion p = rng.resolvent_point(rep);
        while (ds_metric(s, p) < 1e-3) p = rng.resolvent_point(rep);

        const QMatrix sr = sresolvent_right(s, t, rep);
        const QMatrix sl = sresolvent_left(p, t, rep);
        const QMatrix bracket = sr - sl;
        const Quaternion cell =
            inverse(p * p - 2.0 * re(s) * p + Quaternion(norm2(s)));
        const QMatrix rhs = (scalar_right(bracket, p) - scalar_left(conj(s), bracket)) *
                            QMatrix::scalar(t.n(), cell);
        const double scale = 1.0 + opnorm(sr) * opnorm(sl);
        push_check(checks, "resolvent equation draw " + std::to_string(k),
                   opnorm(sr * sl - rhs), 1e-9 * scale);

        std::vector<Quaternion> v(static_cast<size_t>(t.n()));
        for (auto& q : v) q = rng.quaternion(1.0);
        const double vscale = (1.0 + opnorm(sl)) * vec_norm(v) * (1.0 + norm(p));
        // T S_L^{-1}(p,T) v = S_L^{-1}(p,T) p v - v
        std::vector<Quaternion> lhsv = (t * sl).apply(v);
        std::vector<Quaternion> pv = v;
        for (auto& q : pv) q = p * q;
        std::vector<Quaternion> rhsv = sl.apply(pv);
        for (size_t i = 0; i < v.size(); ++i) rhsv[i] = rhsv[i] - v[i];
        std::vector<Quaternion> diff(v.size());
        for (size_t i = 0; i < v.size(); ++i) diff[i] = lhsv[i] - rhsv[i];
        push_check(checks, "left resolvent relation draw " + std::to_string(k), vec_norm(diff),
                   1e-10 * vscale);

        // S_R^{-1}(s,T) T v = s S_R^{-1}(s,T) v - v
        lhsv = (sr * t).apply(v);
        rhsv = sr.apply(v);
        for (auto& q : rhsv) q = s * q;
        for (size_t i = 0; i < v.size(); ++i) rhsv[i] = rhsv[i] - v[i];
        for (size_t i = 0; i < v.size(); ++i) diff[i] = lhsv[i] - rhsv[i];
        const double rscale = (1.0 + opnorm(sr)) * vec_norm(v) *
                              (1.0 + norm(s)) * (1.0 + opnorm(t));
        push_check(checks, "right resolvent relation draw " + std::to_string(k), vec_norm(diff),
                   1e-10 * rscale);

        // ||Q_s^{-1}|| + ||T Q_s^{-1}|| >= 1 / d_S(s, sigma_S)
        const QMatrix qinv = pseudo_resolvent(s, t, rep);
        const double lower = 1.0 / ds_to_spectrum(s, rep);
        const double got = opnorm(qinv) + opnorm(t * qinv);
        push_check(checks, "spectral distance bound draw " + std::to_string(k),
                   lower - got, 1e-9 * lower);

        // sqrt(2 ||Q_s^{-1}||) <= ||S_L^{-1}(s,T)|| + ||S_L^{-1}(conj s,T)||
        const double lhs_q = std::sqrt(2.0 * opnorm(qinv));
        const double rhs_q = opnorm(sresolvent_left(s, t, rep)) +
                             opnorm(sresolvent_left(conj(s), t, rep));
        push_check(checks, "kernel norm bound draw " + std::to_string(k), lhs_q - rhs_q,
                   1e-9 * (1.0 + lhs_q));
    }
}

void derivatives_suite(const QMatrix& t, Rng& rng, std::vector<Check>& checks,
                       int draws) {
    const SpectralReport rep = s_spectrum(t);
    const double h = 1e-5;
    for (int k = 0; k < draws; ++k) {
        const Quaternion s = rng.resolvent_point(rep);
        const Slice sl = slice_of(s);
        const Quaternion i_s = sl.axis.q();

        auto q_at = [&](double d0, double d1) {
            return pseudo_resolvent(Quaternion(sl.s0 + d0) + i_s * (sl.s1 + d1), t,
                                    rep);
        };
        const QMatrix qinv = q_at(0.0, 0.0);
        const QMatrix qinv2 = qinv * qinv;

        const QMatrix d0_num = (1.0 / (2.0 * h)) * (q_at(h, 0.0) - q_at(-h, 0.0));
        const QMatrix d0_ref = (2.0 * t - (2.0 * sl.s0) * QMatrix::identity(t.n())) * qinv2;
        push_check(checks, "pseudo-resolvent d/ds0 draw " + std::to_string(k),
                   opnorm(d0_num - d0_ref), 1e-4 * (1.0 + opnorm(d0_ref)));

        const QMatrix d1_num = (1.0 / (2.0 * h)) * (q_at(0.0, h) - q_at(0.0, -h));
        const QMatrix d1_ref = (-2.0 * sl.s1) * qinv2;
        push_check(checks, "pseudo-resolvent d/ds1 draw " + std::to_string(k),
                   opnorm(d1_num - d1_ref), 1e-4 * (1.0 + opnorm(d1_ref)));

        const QMatrix td0_num =
            (1.0 / (2.0 * h)) * (t * q_at(h, 0.0) - t * q_at(-h, 0.0));
        const QMatrix td0_ref = (2.0 * (t * t) - (2.0 * sl.s0) * t) * qinv2;
        push_check(checks, "T pseudo-resolvent d/ds0 draw " + std::to_string(k),
                   opnorm(td0_num - td0_ref), 1e-4 * (1.0 + opnorm(td0_ref)));

        const QMatrix td1_num =
            (1.0 / (2.0 * h)) * (t * q_at(0.0, h) - t * q_at(0.0, -h));
        const QMatrix td1_ref = (-2.0 * sl.s1) * (t * qinv2);
        push_check(checks, "T pseudo-resolvent d/ds1 draw " + std::to_string(k),
                   opnorm(td1_num - td1_ref), 1e-4 * (1.0 + opnorm(td1_ref)));

        // d/ds0 S_L^{-1}(s,T) = -S_L^{-2}(s,T)
        auto sl_at = [&](double d0) {
            return sresolvent_left(Quaternion(sl.s0 + d0) + i_s * sl.s1, t, rep);
        };
        const QMatrix sd1_num = (1.0 / (2.0 * h)) * (sl_at(h) - sl_at(-h));
        const QMatrix sd1_ref = -sresolvent_left_pow(2, s, t, rep);
        push_check(checks, "slice derivative n=1 draw " + std::to_string(k),
                   opnorm(sd1_num - sd1_ref), 1e-4 * (1.0 + opnorm(sd1_ref)));

        // d^2/ds0^2 S_L^{-1}(s,T) = 2 S_L^{-3}(s,T)
        const QMatrix sd2_num =
            (1.0 / (h * h)) * (sl_at(h) - 2.0 * sl_at(0.0) + sl_at(-h));
        const QMatrix sd2_ref = 2.0 * sresolvent_left_pow(3, s, t, rep);
        push_check(checks, "slice derivative n=2 draw " + std::to_string(k),
                   opnorm(sd2_num - sd2_ref), 1e-4 * (1.0 + opnorm(sd2_ref)));
    }
}

void semigroup_suite(const QMatrix& t, std::vector<Check>& checks) {
    const SpectralReport rep = s_spectrum(t);
    if (!spectrum_clears_negative_axis(rep))
        throw PreconditionError("semigroup suite requires a sectorial operator");
    for (auto [a, b] : {std::pair<double, double>{0.3, 0.7}, {0.25, 0.5}}) {
        const SemigroupReport r = verify_semigroup(t, a, b);
        push_check(checks,
                   "semigroup alpha=" + std::to_string(a) + " beta=" + std::to_string(b),
                   r.residual, r.tolerance);
    }
}

void kato_suite(const QMatrix& t, std::vector<Check>& checks) {
    const SpectralReport rep = s_spectrum(t);
    if (!spectrum_clears_negative_axis(rep))
        throw PreconditionError("kato suite requires a sectorial operator");
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
    const double alpha = 0.4;
    for (auto [lam, mu] : {std::pair<double, double>{-0.5, -1.0}, {-1.0, -3.0}}) {
        const FracPowResult fl = kato_F(Quaternion(lam), t, alpha, {}, rep, sec);
        const FracPowResult fm = kato_F(Quaternion(mu), t, alpha, {}, rep, sec);
        const QMatrix lhs = fm.value - fl.value;
        const QMatrix rhs = (lam - mu) * (fm.value * fl.value);
        const double tol =
            100.0 * (fl.errorEstimate + fm.errorEstimate) * (1.0 + std::abs(lam - mu));
        push_check(checks,
                   "real resolvent identity lambda=" + std::to_string(lam) + " mu=" + std::to_string(mu),
                   opnorm(lhs - rhs), std::max(tol, 1e-10));
        push_check(checks, "scaled integrand bound mu=" + std::to_string(mu),
                   std::abs(mu) * opnorm(fm.value), sec.M * (1.0 + 1e-6));
    }
    const KatoPowerResult kp = kato_power(t, alpha, -1.0);
    push_check(checks, "kato_power resolvent residual", kp.resolventResidual,
               std::max(100.0 * kp.errorEstimate, 1e-7));
    push_check(checks, "kato_power inverse residual", kp.inverseResidual,
               std::max(100.0 * kp.errorEstimate, 1e-7));
    push_check(checks, "kato_power sector omega", kp.omega,
               alpha * sec.omega + 1e-3);
}

// ---- commands --------------------------------------------------------------

int cmd_spectrum(const std::string& file) {
    const QMatrix t = load_matrix(file);
    const SpectralReport rep = s_spectrum(t);
    std::cout << spectral_report_to_json(rep).dump(2) << "\n";
    return 0;
}

int cmd_fracpow(const std::string& file, double alpha, const std::string& method,
                double tol, const std::vector<double>& plane, bool crossCheck) {
    const QMatrix t = load_matrix(file);
    QuadratureConfig cfg;
    if (tol > 0.0) {
        cfg.relTol = tol;
        cfg.absTol = tol / 100.0;
    }
    ImaginaryUnit unit = ImaginaryUnit::e1();
    if (!plane.empty()) {
        Quaternion u(0.0, plane[0], plane[1], plane[2]);
        const double n = norm(u);
        if (n < 1e-12) throw PreconditionError("--plane vector must be nonzero");
        unit = ImaginaryUnit(u / n);
    }

    auto run = [&](const std::string& m) -> FracPowResult {
        if (m == "ray") return frac_power_neg(t, alpha, cfg);
        if (m == "halfplane") return frac_power_halfplane(t, alpha, cfg);
        if (m == "contour") {
            const SpectralReport rep = s_spectrum(t);
            const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);
            const ContourPath path = default_keyhole(sec, unit, alpha, cfg);
            return frac_power_neg_contour(t, alpha, path, KernelSide::right, cfg);
        }
        if (m == "kato") {
            const KatoPowerResult kp = kato_power(t, alpha, -1.0, cfg);
            FracPowResult out;
            out.value = inverse(kp.value);
            out.errorEstimate = kp.errorEstimate;
            out.evaluations = kp.evaluations;
            return out;
        }
        throw PreconditionError("unknown method " + m);
    };

    const FracPowResult r = run(method);
    if (!r.converged) {
        std::cerr << "quadrature did not converge (error estimate "
                  << r.errorEstimate << ")\n";
        return kExitConvergence;
    }
    json out{{"alpha", alpha},
             {"method", method},
             {"matrix", matrix_to_json(r.value)},
             {"report", report_meta_to_json(r.errorEstimate, r.evaluations,
                                            r.converged)}};
    if (crossCheck) {
        const std::string other = method == "ray" ? "contour" : "ray";
        const FracPowResult r2 = run(other);
        const double disc = opnorm(r.value - r2.value);
        const double bound = 10.0 * (r.errorEstimate + r2.errorEstimate);
        out["crossCheck"] = {{"method", other},
                             {"discrepancy", disc},
                             {"bound", bound},
                             {"agree", disc <= bound}};
        if (disc > bound) {
            std::cout << out.dump(2) << "\n";
            return kExitProperty;
        }
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& file, int randomDim, uint64_t seed,
               const std::string& suite) {
    std::vector<QMatrix> generic;
    std::vector<QMatrix> sectorial;
    Rng rng(seed);
    if (!file.empty()) {
        const QMatrix t = load_matrix(file);
        generic.push_back(t);
        sectorial.push_back(t);
    } else {
        const int n = randomDim > 0 ? randomDim : 4;
        for (int i = 0; i < 3; ++i) generic.push_back(rng.matrix(n));
        for (int i = 0; i < 2; ++i) sectorial.push_back(rng.sectorial_matrix(n));
    }

    std::vector<Check> checks;
    const bool all = suite == "all";
    if (all || suite == "resolvent")
        for (const auto& t : generic) resolvent_suite(t, rng, checks, 5);
    if (all || suite == "derivatives")
        for (const auto& t : generic) derivatives_suite(t, rng, checks, 3);
    if (all || suite == "semigroup")
        for (const auto& t : sectorial) semigroup_suite(t, checks);
    if (all || suite == "kato")
        for (const auto& t : sectorial) kato_suite(t, checks);

    bool pass = true;
    for (const auto& c : checks) pass = pass && c.pass;
    json out{{"suite", suite},
             {"seed", seed},
             {"checks", checks_to_json(checks)},
             {"pass", pass}};
    std::cout << out.dump(2) << "\n";
    return pass ? 0 : kExitProperty;
}

int cmd_convergence(const std::string& file, double alpha,
                    const std::vector<double>& tols) {
    const QMatrix t = load_matrix(file);
    if (tols.empty()) throw PreconditionError("--tols requires at least one value");
    const SpectralReport rep = s_spectrum(t);
    const SectorEstimate sec = sector_estimate(t, default_sector_grid(), 8, rep);

    double tight = tols.front();
    for (double x : tols) tight = std::min(tight, x);
    QuadratureConfig refCfg;
    refCfg.relTol = tight / 100.0;
    refCfg.absTol = tight / 10000.0;
    const FracPowResult ref = frac_power_neg(t, alpha, refCfg, rep, sec);

    json table = json::array();
    for (double tol : tols) {
        QuadratureConfig cfg;
        cfg.relTol = tol;
        cfg.absTol = tol / 100.0;
        const FracPowResult r = frac_power_neg(t, alpha, cfg, rep, sec);
        table.push_back({{"tol", tol},
                         {"drift", opnorm(r.value - ref.value)},
                         {"evaluations", r.evaluations}});
    }
    json out{{"alpha", alpha}, {"table", table}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternionic S-functional calculus and fractional powers"};
    app.require_subcommand(1);

    std::string file;
    double alpha = 0.5;
    std::string method = "ray";
    double tol = 0.0;
    std::vector<double> plane;
    bool crossCheck = false;
    int randomDim = 0;
    uint64_t seed = 0;
    std::string suite = "all";
    std::vector<double> tols;

    auto* spectrum = app.add_subcommand("spectrum", "print the S-spectrum report");
    spectrum->add_option("file", file)->required();

    auto* fracpow = app.add_subcommand("fracpow", "compute T^{-alpha}");
    fracpow->add_option("file", file)->required();
    fracpow->add_option("--alpha", alpha)->required();
    fracpow->add_option("--method", method)
        ->check(CLI::IsMember({"ray", "contour", "halfplane", "kato"}));
    fracpow->add_option("--tol", tol);
    fracpow->add_option("--plane", plane)->delimiter(',')->expected(3);
    fracpow->add_flag("--verify", crossCheck,
                      "cross-check against a second method");

    auto* verify = app.add_subcommand("verify", "run the invariant suites");
    verify->add_option("file", file);
    verify->add_option("--random", randomDim, "dimension of random matrices");
    verify->add_option("--seed", seed);
    verify->add_option("--suite", suite)
        ->check(CLI::IsMember({"resolvent", "semigroup", "kato", "derivatives", "all"}));

    auto* convergence = app.add_subcommand("convergence", "tolerance sweep table");
    convergence->add_option("file", file)->required();
    convergence->add_option("--alpha", alpha)->required();
    convergence->add_option("--tols", tols)->delimiter(',')->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitParse;
    }

    if (const char* env = std::getenv("QFRAC_SEED")) seed = std::strtoull(env, nullptr, 10);

    try {
        if (spectrum->parsed()) return cmd_spectrum(file);
        if (fracpow->parsed())
            return cmd_fracpow(file, alpha, method, tol, plane, crossCheck);
        if (verify->parsed()) return cmd_verify(file, randomDim, seed, suite);
        if (convergence->parsed()) return cmd_convergence(file, alpha, tols);
    } catch (const ParseError& e) {
        std::cerr << "parse error at line " << e.line << ", column " << e.column
                  << ": " << e.what() << "\n";
        return kExitParse;
    } catch (const InconsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << " (residual "
                  << e.worstResidual << ")\n";
        return kExitProperty;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const Error& e) {
        std::cerr << "precondition failure: " << e.what() << "\n";
        return kExitPrecondition;
    }
    return 0;
}
