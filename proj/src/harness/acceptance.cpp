#include "clwe/harness/acceptance.hpp"

#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"
#include "clwe/harness/experiment.hpp"
#include "clwe/harness/plot.hpp"
#include "clwe/harness/stats.hpp"
#include "clwe/lattice/discrete_gaussian.hpp"
#include "clwe/numerics/gaussian.hpp"
#include "clwe/numerics/theta.hpp"
#include "clwe/reductions/bdd.hpp"
#include "clwe/reductions/hybrid.hpp"
#include "clwe/reductions/rejection.hpp"
#include "clwe/solvers/covariance.hpp"
#include "clwe/solvers/density_test.hpp"
#include "clwe/solvers/noiseless.hpp"
#include "clwe/solvers/sq.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace clwe::harness {

namespace {

using distributions::ClweParams;
using distributions::Generator;
using distributions::HiddenDirection;
using distributions::SampleBatch;

constexpr double kPi = std::numbers::pi;
constexpr double kNullVariance = 1.0 / (2.0 * kPi);

// Pinned tolerances and sizes.
constexpr double kDirectionTolerance = 1e-6;
constexpr double kSolverSecondsPerTrial = 60.0;
constexpr double kSmokeSeconds = 1.0;
constexpr std::size_t kCampaignTrials = 20;
constexpr std::size_t kSolverSuccessesNeeded = 18;
constexpr std::size_t kCovarianceSamples = 200'000;
constexpr double kAdvantageNeeded = 0.8;
constexpr double kSeriesAgreement = 1e-10;
constexpr std::size_t kReductionSamples = 50'000;
constexpr double kKsSignificance = 1e-3;
constexpr double kPoissonResidual = 2e-12;
constexpr std::size_t kPoissonLattices = 100;
constexpr std::size_t kSqMonteCarloSamples = 200'000;
constexpr double kSqStdErrors = 3.0;
constexpr double kTvQuadratureTolerance = 1e-8;
constexpr std::size_t kHybridSuccessesNeeded = 19;
constexpr double kPeakSpacingTolerance = 0.02;

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::vector<double> unit_orthogonal_to(const HiddenDirection& w, Rng& rng) {
    const std::size_t n = w.dimension();
    std::vector<double> v(n);
    for (auto& c : v) c = rng.normal();
    double ip = 0.0;
    for (std::size_t k = 0; k < n; ++k) ip += v[k] * w[k];
    for (std::size_t k = 0; k < n; ++k) v[k] -= ip * w[k];
    double norm = 0.0;
    for (double c : v) norm += c * c;
    for (auto& c : v) c /= std::sqrt(norm);
    return v;
}

std::vector<double> residuals(const SampleBatch& b, const std::vector<double>& w, double gamma) {
    std::vector<double> out;
    const auto t = b.projection(w);
    out.reserve(t.size());
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(distributions::mod1(b.z(i) - gamma * t[i]));
    return out;
}

CriterionResult c1_noiseless(const Rng& master) {
    CriterionResult r{1, "noiseless-lll-solver", false, "", 0.0, {}};
    // Smoke case: n = 2, gamma = 4, w = (3/5, 4/5).
    Rng smoke_rng = master.split(0);
    const HiddenDirection w2(std::vector<double>{0.6, 0.8});
    const auto smoke_batch = distributions::generate_precise_clwe_batch(ClweParams(2, 0.0, 4.0), w2, 12,
                                                                        smoke_rng(), solver_precision_bits(2));
    auto t0 = std::chrono::steady_clock::now();
    const auto smoke = solvers::solve_noiseless_clwe(smoke_batch, 4.0, 2, smoke_rng);
    const double smoke_s = elapsed(t0);
    const bool smoke_ok = smoke.success && smoke_s < kSmokeSeconds &&
                          solvers::matches_up_to_sign(smoke.recovered_direction, w2.w(), kDirectionTolerance);

    const std::size_t n = 8;
    const double gamma = 10.0;
    const unsigned bits = solver_precision_bits(n);
    std::size_t ok = 0;
    double slowest = 0.0;
    for (std::size_t i = 0; i < kCampaignTrials; ++i) {
        Rng rng = master.split(1 + i);
        const auto w = HiddenDirection::random(n, rng, bits);
        t0 = std::chrono::steady_clock::now();
        bool good = false;
        try {
            const auto batch = distributions::generate_precise_clwe_batch(ClweParams(n, 0.0, gamma), w,
                                                                          2 * n * (n + 1), rng(), bits);
            const auto rep = solvers::solve_noiseless_clwe(batch, gamma, n, rng);
            good = rep.success && solvers::matches_up_to_sign(rep.recovered_direction, w.w(), kDirectionTolerance);
        } catch (const Error&) {
        }
        const double s = elapsed(t0);
        slowest = std::max(slowest, s);
        ok += good && s < kSolverSecondsPerTrial;
    }
    r.pass = smoke_ok && ok >= kSolverSuccessesNeeded;
    r.summary = "n=8 gamma=10 at " + std::to_string(bits) + " bits: " + std::to_string(ok) + "/20 recovered (need 18), slowest " +
                fmt(slowest, 3) + " s; n=2 smoke " + (smoke_ok ? "ok" : "FAILED") + " in " + fmt(smoke_s, 3) + " s";
    r.data = {{"recovered", ok}, {"slowest_seconds_bound", kSolverSecondsPerTrial}, {"smoke_ok", smoke_ok}};
    return r;
}

CriterionResult c2_covariance(const Rng& master) {
    CriterionResult r{2, "covariance-distinguisher", false, "", 0.0, {}};
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::covariance;
    cfg.n = 16;
    cfg.beta = 0.1;
    cfg.gamma = 1.5;
    cfg.samples = kCovarianceSamples;
    cfg.trials = kCampaignTrials;
    cfg.seed = master.split(2).master_seed() ^ 0x2;
    const auto rep = run_experiment(cfg);
    const double thr = solvers::covariance_threshold(cfg.beta, cfg.gamma);
    const double adv = rep.advantage.value_or(0.0);
    std::size_t yes_pos = 0, yes_null = 0;
    for (const auto& t : rep.trials) (t.label == "pos" ? yes_pos : yes_null) += t.yes;
    r.pass = adv >= kAdvantageNeeded;
    r.summary = "n=16 gamma=1.5 beta=0.1 m=2e5, threshold " + fmt(thr) + ": YES on " + std::to_string(yes_pos) +
                "/20 hCLWE and " + std::to_string(yes_null) + "/20 null, advantage " + fmt(adv) + " CI95 [" +
                fmt(rep.advantage_ci.lower) + ", " + fmt(rep.advantage_ci.upper) + "] (need >= 0.8)";
    r.data = to_json(rep);
    r.data.erase("trials");
    return r;
}

CriterionResult c3_covariance_gap() {
    CriterionResult r{3, "covariance-gap", true, "", 0.0, {}};
    std::ostringstream s;
    for (double gamma : {1.0, 1.5, 2.0}) {
        const auto series = numerics::discrete_gaussian_second_moment_series(make_real(gamma));
        const double agree = to_double(abs(series.primal - series.dual));
        const double gap = std::abs(to_double(series.dual) - kNullVariance);
        const double bound = gamma * gamma * std::exp(-kPi * gamma * gamma);
        const bool ok = agree <= kSeriesAgreement && gap >= bound;
        r.pass = r.pass && ok;
        s << "gamma=" << gamma << " gap " << fmt(gap) << " >= " << fmt(bound) << " series diff " << fmt(agree, 2)
          << (ok ? "" : " FAILED") << "; ";
        r.data[fmt(gamma)] = {{"gap", gap}, {"bound", bound}, {"series_difference", agree}};
    }
    r.summary = s.str();
    r.summary.resize(r.summary.size() - 2);
    return r;
}

CriterionResult c4_rejection(const Rng& master) {
    CriterionResult r{4, "rejection-reduction", false, "", 0.0, {}};
    const ClweParams p(2, 0.1, 2.0);
    const double delta = 0.1;
    Rng rng = master.split(4);
    const auto w = HiddenDirection::random(2, rng);
    distributions::BatchMetadata meta;
    meta.n = 2;
    meta.beta = p.beta;
    meta.gamma = p.gamma;
    meta.generator = "clwe";
    const auto out = reductions::clwe_to_hclwe_rejection([&](Rng& g) { return distributions::sample_clwe(p, w, g); },
                                                         kReductionSamples, reductions::RejectionConfig{delta, 100'000},
                                                         rng, meta);
    const auto target = reductions::rejection_output_params(p, delta);
    const auto direct = distributions::generate_batch(Generator::hclwe, target, w, kReductionSamples, rng());
    const auto orth = unit_orthogonal_to(w, rng);
    const auto ks_w = stats::ks_two_sample(out.batch.projection(w.w()), direct.projection(w.w()), kKsSignificance);
    const auto ks_o = stats::ks_two_sample(out.batch.projection(orth), direct.projection(orth), kKsSignificance);
    const auto ci = stats::wilson_interval(out.stats.accepted, out.stats.attempts, 0.99);
    r.pass = ci.lower >= delta / 4 && ks_w.pass && ks_o.pass;
    r.summary = "acceptance " + fmt(out.stats.rate()) + " (99% lower " + fmt(ci.lower) + " >= " + fmt(delta / 4) +
                "), KS hidden p=" + fmt(ks_w.p_value, 3) + ", KS orthogonal p=" + fmt(ks_o.p_value, 3) +
                " vs beta'=" + fmt(target.beta);
    r.data = {{"acceptance", to_json(out.stats)}, {"ks_hidden", to_json(ks_w)}, {"ks_orthogonal", to_json(ks_o)}};
    return r;
}

CriterionResult c5_bdd(const Rng& master) {
    CriterionResult r{5, "bdd-to-clwe", false, "", 0.0, {}};
    Rng rng = master.split(5);
    const auto lat = lattice::Lattice::scaled_integer_lattice(2, make_real(0.5));
    const reductions::BddTransformParams params{20.0, 3.0, 0.2, 1e-10};
    // Offset norm chosen so that gamma = |w| r^2 / t = 2.
    const double offset_norm = 2.0 * params.t() / (params.r * params.r);
    const auto dir = HiddenDirection::random(2, rng);
    reductions::BddInstance inst{lat, {}, {}, offset_norm};
    inst.offset = {make_real(offset_norm) * dir.precise()[0], make_real(offset_norm) * dir.precise()[1]};
    inst.target = {make_real(2.0) + inst.offset[0], make_real(-4.0) + inst.offset[1]};
    const lattice::DiscreteGaussianSampler dgs({lat, {}, make_real(params.r)});
    const auto out = reductions::bdd_to_clwe(inst, params, [&](Rng& g) { return dgs.sample(g); }, kReductionSamples, rng);
    const ClweParams cp = *out.params;
    const HiddenDirection w(out.direction);
    const auto direct = distributions::generate_batch(Generator::clwe, cp, w, kReductionSamples, rng());

    const auto t_out = out.batch.projection(w.w());
    const auto t_dir = direct.projection(w.w());
    const auto ks_t = stats::ks_two_sample(t_out, t_dir, kKsSignificance);
    // Residual z - gamma <y, w'> mod 1 within terciles of <y, w'>.
    std::vector<double> sorted = t_dir;
    std::sort(sorted.begin(), sorted.end());
    const double q1 = sorted[sorted.size() / 3], q2 = sorted[2 * sorted.size() / 3];
    const auto res_out = residuals(out.batch, w.w(), cp.gamma);
    const auto res_dir = residuals(direct, w.w(), cp.gamma);
    auto bin_of = [&](double t) { return t < q1 ? 0 : (t < q2 ? 1 : 2); };
    std::vector<std::vector<double>> bo(3), bd(3);
    for (std::size_t i = 0; i < t_out.size(); ++i) bo[static_cast<std::size_t>(bin_of(t_out[i]))].push_back(res_out[i]);
    for (std::size_t i = 0; i < t_dir.size(); ++i) bd[static_cast<std::size_t>(bin_of(t_dir[i]))].push_back(res_dir[i]);
    bool ok = ks_t.pass && out.precondition.holds;
    std::ostringstream s;
    s << "beta=" << fmt(cp.beta) << " gamma=" << fmt(cp.gamma) << " smoothing lhs " << fmt(out.precondition.lhs)
      << " >= eta " << fmt(out.precondition.eta) << "; KS <y,w'> p=" << fmt(ks_t.p_value, 3) << "; residual bins p=";
    nlohmann::json bins = nlohmann::json::array();
    for (std::size_t b = 0; b < 3; ++b) {
        const auto ks = stats::ks_two_sample(bo[b], bd[b], kKsSignificance);
        ok = ok && ks.pass;
        s << (b ? "," : "") << fmt(ks.p_value, 3);
        bins.push_back(to_json(ks));
    }
    r.pass = ok;
    r.summary = s.str();
    r.data = {{"ks_projection", to_json(ks_t)}, {"ks_residual_bins", bins}, {"beta", cp.beta}, {"gamma", cp.gamma}};
    return r;
}

lattice::Lattice random_lattice(std::size_t n, Rng& rng) {
    for (;;) {
        Matrix<double> b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = -2.0 + 4.0 * rng.uniform();
        if (std::fabs(determinant(b)) >= 0.25) return lattice::Lattice(b, kDefaultPrecisionBits);
    }
}

CriterionResult c6_poisson(const Rng& master) {
    CriterionResult r{6, "poisson-summation", false, "", 0.0, {}};
    Rng rng = master.split(6);
    double worst = 0.0;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < kPoissonLattices; ++i) {
        const auto l = random_lattice(1 + i % 3, rng);
        for (double s : {1.0, 2.0}) {
            const double res = to_double(numerics::poisson_residual(l, make_real(s), 1e-12));
            worst = std::max(worst, res);
            bad += !(res <= kPoissonResidual);
        }
    }
    r.pass = bad == 0;
    r.summary = "100 lattices (dims 1-3) at s=1,2: worst residual " + fmt(worst, 3) + " (bound 2e-12), " +
                std::to_string(bad) + " violations";
    r.data = {{"worst_residual", worst}, {"violations", bad}};
    return r;
}

CriterionResult c7_sq(const Rng& master) {
    CriterionResult r{7, "sq-correlation", true, "", 0.0, {}};
    Rng rng = master.split(7);
    std::size_t points = 0, agree = 0, bounds = 0;
    double worst_z = 0.0;
    nlohmann::json grid = nlohmann::json::array();
    for (double alpha : {0.0, 0.3, 1.0 / std::sqrt(2.0), 1.0})
        for (double gamma : {1.5, 2.0, 3.0})
            for (double beta : {0.1, 0.3}) {
                ++points;
                const auto cf = solvers::sq_corr_closed_form({alpha, beta, gamma});
                const double xi = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
                const auto mc = solvers::sq_corr_monte_carlo({1.0, 0.0}, {alpha, xi}, beta, gamma,
                                                             kSqMonteCarloSamples, rng);
                const double chi = to_double(cf.chi);
                const double z = std::abs(mc.estimate - chi) / mc.std_error;
                worst_z = std::max(worst_z, z);
                agree += z <= kSqStdErrors;
                const bool bound_ok = alpha == 1.0 ? chi + 1.0 <= cf.bound : std::abs(chi) <= cf.bound;
                bounds += bound_ok;
                grid.push_back({{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"closed_form", chi},
                                {"monte_carlo", mc.estimate}, {"std_error", mc.std_error}, {"bound", cf.bound}});
            }
    r.pass = agree == points && bounds == points;
    r.summary = std::to_string(agree) + "/" + std::to_string(points) + " grid points within 3 SE (worst " +
                fmt(worst_z, 3) + " SE), bounds hold at " + std::to_string(bounds) + "/" + std::to_string(points);
    r.data = {{"grid", grid}};
    return r;
}

CriterionResult c8_tv() {
    CriterionResult r{8, "tv-lower-bound", true, "", 0.0, {}};
    std::ostringstream s;
    for (double gamma : {1.0, 2.0, 4.0}) {
        const auto tv = solvers::hclwe_tv_lower_estimate(1.0 / 32.0, gamma, kTvQuadratureTolerance);
        const bool ok = tv.value > 0.5 && tv.last_change < kTvQuadratureTolerance;
        r.pass = r.pass && ok;
        s << "gamma=" << gamma << " TV " << fmt(tv.value, 6) << (ok ? "" : " FAILED") << "; ";
        r.data[fmt(gamma)] = to_json(tv);
    }
    r.summary = "beta=1/32: " + s.str();
    r.summary.resize(r.summary.size() - 2);
    return r;
}

CriterionResult c9_truncation() {
    CriterionResult r{9, "truncation-tv", true, "", 0.0, {}};
    std::size_t ok = 0, total = 0;
    double worst_ratio = 0.0;
    for (auto [beta, gamma] : {std::pair{0.1, 2.0}, std::pair{0.3, 3.0}})
        for (long k = 1; k <= 5; ++k) {
            ++total;
            const auto tv = solvers::truncation_tv_estimate(beta, gamma, k, kTvQuadratureTolerance);
            const double bound = 2.0 * std::exp(-kPi * static_cast<double>(k * k) / (beta * beta + gamma * gamma));
            ok += tv.value <= bound;
            worst_ratio = std::max(worst_ratio, tv.value / bound);
            r.data.push_back({{"beta", beta}, {"gamma", gamma}, {"k", k}, {"tv", tv.value}, {"bound", bound}});
        }
    r.pass = ok == total;
    r.summary = std::to_string(ok) + "/" + std::to_string(total) + " (beta,gamma,k) points below 2exp(-pi k^2/(beta^2+gamma^2)), worst TV/bound " +
                fmt(worst_ratio, 3);
    return r;
}

CriterionResult c10_hybrid(const Rng& master) {
    CriterionResult r{10, "hybrid-embedding", false, "", 0.0, {}};
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::hybrid;
    cfg.n = 8;
    cfg.beta = 0.1;
    cfg.gamma = 1.0;
    cfg.samples = kCovarianceSamples;
    cfg.trials = kCampaignTrials;
    cfg.seed = master.split(10).master_seed() ^ 0xa;
    cfg.options = {{"m", 2}};
    const auto rep = run_experiment(cfg);

    // m = 0: the rank-0 sampler is D_{R^n}.
    Rng rng = master.split(11);
    const ClweParams p(8, 0.1, 1.0);
    const distributions::HiddenSubspace none(8, 0, {});
    SampleBatch zero(distributions::BatchMetadata{8, 0.1, 1.0, 0, "hclwe-m0"}, false);
    for (std::size_t i = 0; i < kCovarianceSamples; ++i) zero.append(distributions::sample_hclwe_m(p, none, rng));
    zero.seal();
    const auto cov = solvers::covariance_distinguisher(zero, 0.1, 1.0);
    const double alpha = stats::bonferroni(kKsSignificance, 8);
    std::vector<double> gauss(kCovarianceSamples);
    bool null_ok = cov.decision == solvers::Decision::null;
    std::size_t ks_pass = 0;
    for (std::size_t j = 0; j < 8; ++j) {
        for (auto& g : gauss) g = rng.gaussian(1.0);
        ks_pass += stats::ks_two_sample(zero.coordinate(j), gauss, alpha).pass;
    }
    null_ok = null_ok && ks_pass == 8;
    r.pass = rep.successes >= kHybridSuccessesNeeded && null_ok;
    r.summary = "m=2 n=8 gamma=1 beta=0.1: exactly 2 displaced eigenvalues on " + std::to_string(rep.successes) +
                "/20 seeds (need 19); m=0: decision " + solvers::decision_name(cov.decision) + ", max deviation " +
                fmt(cov.max_deviation) + " vs threshold " + fmt(cov.threshold) + ", KS " + std::to_string(ks_pass) + "/8";
    r.data = {{"successes", rep.successes}, {"m0_decision", solvers::decision_name(cov.decision)}, {"m0_ks_pass", ks_pass}};
    return r;
}

CriterionResult c11_figures(const Rng& master, const std::filesystem::path& dir) {
    CriterionResult r{11, "figure-data", false, "", 0.0, {}};
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::figures;
    cfg.n = 2;
    cfg.beta = 0.1;
    cfg.gamma = 2.0;
    cfg.samples = 2000;
    cfg.seed = master.split(12).master_seed() ^ 0xb;
    cfg.out = dir / "figures";
    const auto rep = run_experiment(cfg);
    PlotSpec spec;
    spec.beta = cfg.beta;
    spec.gamma = cfg.gamma;
    double spacing = 0.0, expected = 0.0, stripes = 0.0;
    bool files = true;
    for (const auto& t : rep.trials) {
        files = files && std::filesystem::exists(cfg.out / t.detail.at("file").get<std::string>());
        if (t.detail.contains("peak_spacing")) {
            spacing = t.detail.at("peak_spacing");
            expected = t.detail.at("expected_spacing");
        }
        if (t.detail.contains("stripe_residual")) stripes = t.detail.at("stripe_residual");
    }
    const double rel = std::abs(spacing - expected) / expected;
    // Mean |e| of the noise D_beta is beta / pi; uniform z would give 1/4.
    const double stripe_bound = 2.0 * cfg.beta / kPi;
    r.pass = files && rel <= kPeakSpacingTolerance && stripes <= stripe_bound;
    r.summary = "fig1/fig2 CSVs in " + cfg.out.string() + "; peak spacing " + fmt(spacing, 6) + " vs gamma/(beta^2+gamma^2) = " +
                fmt(expected, 6) + " (rel " + fmt(rel, 3) + "), fig1 stripe residual " + fmt(stripes, 3) +
                " <= " + fmt(stripe_bound, 3);
    r.data = {{"peak_spacing", spacing}, {"expected", expected}, {"stripe_residual", stripes}};
    return r;
}

}  // namespace

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  C" << r.id << (r.id < 10 ? "  " : " ") << r.name << ": " << r.summary
       << " [" << fmt(r.seconds, 3) << " s]";
    return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out) {
    const Rng master(options.seed);
    std::filesystem::create_directories(options.out_dir);
    const std::vector<std::function<CriterionResult()>> criteria = {
        [&] { return c1_noiseless(master); },
        [&] { return c2_covariance(master); },
        [&] { return c3_covariance_gap(); },
        [&] { return c4_rejection(master); },
        [&] { return c5_bdd(master); },
        [&] { return c6_poisson(master); },
        [&] { return c7_sq(master); },
        [&] { return c8_tv(); },
        [&] { return c9_truncation(); },
        [&] { return c10_hybrid(master); },
        [&] { return c11_figures(master, options.out_dir); },
    };
    std::vector<CriterionResult> results;
    nlohmann::json summary = nlohmann::json::array();
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = criteria[static_cast<std::size_t>(id - 1)]();
        } catch (const std::exception& e) {
            r.id = id;
            r.name = "criterion-" + std::to_string(id);
            r.pass = false;
            r.summary = std::string("error: ") + e.what();
        }
        r.seconds = elapsed(start);
        out << format_line(r) << std::endl;
        summary.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary_data", r.data}});
        results.push_back(std::move(r));
    }
    std::ofstream(options.out_dir / "acceptance.json") << summary.dump(2) << '\n';
    return results;
}

}  // namespace clwe::harness
