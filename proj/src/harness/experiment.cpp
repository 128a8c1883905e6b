#include "clwe/harness/experiment.hpp"

#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"
#include "clwe/harness/plot.hpp"
#include "clwe/reductions/hybrid.hpp"
#include "clwe/reductions/rejection.hpp"
#include "clwe/solvers/covariance.hpp"
#include "clwe/solvers/noiseless.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace clwe::harness {

namespace {

using distributions::ClweParams;
using distributions::Generator;
using distributions::HiddenDirection;

stats::Interval difference_interval(const stats::Interval& a, const stats::Interval& b, bool a_higher) {
    if (!a_higher) return difference_interval(b, a, true);
    return {std::max(0.0, a.lower - b.upper), std::min(1.0, a.upper - b.lower)};
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << text;
}

nlohmann::json interval_json(const stats::Interval& i) { return {i.lower, i.upper}; }

double option(const nlohmann::json& o, const char* key, double fallback) {
    return o.contains(key) ? o.at(key).get<double>() : fallback;
}

TrialReport run_noiseless(const ExperimentConfig& cfg) {
    TrialReport r;
    const Rng master(cfg.seed);
    const unsigned bits = cfg.precision_bits ? cfg.precision_bits : solver_precision_bits(cfg.n);
    const std::size_t count = std::max(cfg.samples, 2 * cfg.n * (cfg.n + 1));
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        Rng rng = master.split(i);
        const auto w = HiddenDirection::random(cfg.n, rng, bits);
        const auto batch = distributions::generate_precise_clwe_batch(ClweParams(cfg.n, 0.0, cfg.gamma), w, count,
                                                                      rng(), bits);
        TrialOutcome t{i, i, "", false, false, {}};
        try {
            solvers::NoiselessSolveConfig sc;
            sc.precision_bits = bits;
            const auto rep = solvers::solve_noiseless_clwe(batch, cfg.gamma, cfg.n, rng, sc);
            t.success = rep.success && solvers::matches_up_to_sign(rep.recovered_direction, w.w(), 1e-6);
            t.detail = {{"residual", rep.sample_residual}, {"lll_runs", rep.trials}, {"escalations", rep.escalations}};
        } catch (const Error& e) {
            t.detail = {{"error", e.what()}};
        }
        r.trials.push_back(std::move(t));
    }
    summarize_successes(r);
    return r;
}

TrialReport run_covariance(const ExperimentConfig& cfg) {
    const ClweParams p(cfg.n, cfg.beta, cfg.gamma);
    auto pos = [&](Rng& rng) {
        const auto w = HiddenDirection::random(cfg.n, rng);
        return distributions::generate_batch(Generator::hclwe, p, w, cfg.samples, rng());
    };
    auto null = [&](Rng& rng) {
        return distributions::generate_batch(Generator::null_gaussian, p, HiddenDirection::basis_vector(cfg.n, 0),
                                             cfg.samples, rng());
    };
    auto dist = [&](const distributions::SampleBatch& b) {
        return solvers::covariance_distinguisher(b, cfg.beta, cfg.gamma).decision == solvers::Decision::hclwe;
    };
    return estimate_advantage(dist, pos, null, cfg.trials, Rng(cfg.seed));
}

TrialReport run_hybrid(const ExperimentConfig& cfg) {
    const auto m = static_cast<std::size_t>(option(cfg.options, "m", 2));
    const ClweParams p(cfg.n, cfg.beta, cfg.gamma);
    const ClweParams small(cfg.n - m + 1, cfg.beta, cfg.gamma);
    TrialReport r;
    const Rng master(cfg.seed);
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        Rng rng = master.split(i);
        const auto w = HiddenDirection::random(small.n, rng);
        const auto in = distributions::generate_batch(Generator::hclwe, small, w, cfg.samples, rng());
        const auto out = reductions::embed_hybrid(in, m - 1, m, p, rng);
        const auto rep = solvers::covariance_distinguisher(out.batch, cfg.beta, cfg.gamma);
        TrialOutcome t{i, i, "", rep.displaced > 0, rep.displaced == m, {}};
        t.detail = {{"displaced", rep.displaced}, {"max_deviation", rep.max_deviation}};
        r.trials.push_back(std::move(t));
    }
    summarize_successes(r);
    return r;
}

TrialReport run_rejection(const ExperimentConfig& cfg) {
    const double delta = option(cfg.options, "delta", 0.1);
    const ClweParams p(cfg.n, cfg.beta, cfg.gamma);
    const auto target = reductions::rejection_output_params(p, delta);
    TrialReport r;
    const Rng master(cfg.seed);
    const double alpha = stats::bonferroni(stats::kSignificance, 2);
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        Rng rng = master.split(i);
        const auto w = HiddenDirection::random(cfg.n, rng);
        distributions::BatchMetadata meta;
        meta.n = cfg.n;
        meta.beta = cfg.beta;
        meta.gamma = cfg.gamma;
        meta.generator = "clwe";
        const auto out = reductions::clwe_to_hclwe_rejection(
            [&](Rng& g) { return distributions::sample_clwe(p, w, g); }, cfg.samples,
            reductions::RejectionConfig{delta, 100'000}, rng, meta);
        const auto direct = distributions::generate_batch(Generator::hclwe, target, w, cfg.samples, rng());
        std::vector<double> orth(cfg.n, 0.0);
        // A unit vector orthogonal to w: Gram-Schmidt on a random Gaussian vector.
        double ip = 0.0, norm = 0.0;
        for (auto& c : orth) c = rng.normal();
        for (std::size_t k = 0; k < cfg.n; ++k) ip += orth[k] * w[k];
        for (std::size_t k = 0; k < cfg.n; ++k) orth[k] -= ip * w[k];
        for (double c : orth) norm += c * c;
        for (auto& c : orth) c /= std::sqrt(norm);
        const auto ks_w = stats::ks_two_sample(out.batch.projection(w.w()), direct.projection(w.w()), alpha);
        const auto ks_o = stats::ks_two_sample(out.batch.projection(orth), direct.projection(orth), alpha);
        TrialOutcome t{i, i, "", false, ks_w.pass && ks_o.pass, {}};
        t.detail = {{"acceptance", to_json(out.stats)}, {"ks_hidden", to_json(ks_w)}, {"ks_orthogonal", to_json(ks_o)}};
        r.trials.push_back(std::move(t));
    }
    summarize_successes(r);
    return r;
}

TrialReport run_figures(const ExperimentConfig& cfg) {
    PlotSpec spec;
    spec.beta = cfg.beta;
    spec.gamma = cfg.gamma;
    spec.count = cfg.samples;
    spec.seed = cfg.seed;
    TrialReport r;
    std::filesystem::create_directories(cfg.out);
    std::size_t i = 0;
    for (auto kind : {PlotKind::fig1_scatter, PlotKind::fig2_scatter, PlotKind::fig2_density}) {
        const std::string csv = emit_plot_data(spec, kind);
        const auto path = cfg.out / (plot_kind_name(kind) + ".csv");
        write_text(path, csv);
        TrialOutcome t{i++, 0, plot_kind_name(kind), false, true, {{"file", path.filename().string()}}};
        if (kind == PlotKind::fig2_density) {
            const auto peaks = density_peak_spacing(csv, spec.beta, spec.gamma);
            t.success = peaks.relative_error <= 0.02;
            t.detail["peak_spacing"] = peaks.measured;
            t.detail["expected_spacing"] = peaks.expected;
        }
        if (kind == PlotKind::fig1_scatter) t.detail["stripe_residual"] = stripe_residual(csv, spec);
        r.trials.push_back(std::move(t));
    }
    summarize_successes(r);
    return r;
}

}  // namespace

TrialReport estimate_advantage(const Distinguisher& distinguisher, const BatchSource& source_pos,
                               const BatchSource& source_null, std::size_t trials, const Rng& rng) {
    if (trials < 20) throw ParameterError("estimate_advantage: need at least 20 trials per hypothesis");
    TrialReport r;
    r.master_seed = rng.master_seed();
    std::size_t yes_pos = 0, yes_null = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        for (int label = 0; label < 2; ++label) {
            const std::uint64_t stream = 2 * i + static_cast<std::uint64_t>(label);
            Rng child = rng.split(stream);
            const auto batch = label == 0 ? source_pos(child) : source_null(child);
            const bool yes = distinguisher(batch);
            (label == 0 ? yes_pos : yes_null) += yes;
            r.trials.push_back({i, stream, label == 0 ? "pos" : "null", yes, label == 0 ? yes : !yes, {}});
        }
    }
    summarize_successes(r);
    const double pp = static_cast<double>(yes_pos) / static_cast<double>(trials);
    const double pn = static_cast<double>(yes_null) / static_cast<double>(trials);
    r.advantage = std::abs(pp - pn);
    r.yes_rate_pos = stats::wilson_interval(yes_pos, trials);
    r.yes_rate_null = stats::wilson_interval(yes_null, trials);
    r.advantage_ci = difference_interval(r.yes_rate_pos, r.yes_rate_null, pp >= pn);
    return r;
}

void summarize_successes(TrialReport& report) {
    report.successes = 0;
    for (const auto& t : report.trials) report.successes += t.success;
    const std::size_t total = report.trials.size();
    report.success_rate = total ? static_cast<double>(report.successes) / static_cast<double>(total) : 0.0;
    report.success_ci = total ? stats::wilson_interval(report.successes, total) : stats::Interval{};
}

std::string experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::noiseless: return "noiseless";
        case ExperimentKind::covariance: return "covariance";
        case ExperimentKind::hybrid: return "hybrid";
        case ExperimentKind::rejection: return "rejection";
        case ExperimentKind::figures: return "figures";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
    for (auto k : {ExperimentKind::noiseless, ExperimentKind::covariance, ExperimentKind::hybrid,
                   ExperimentKind::rejection, ExperimentKind::figures})
        if (experiment_kind_name(k) == s) return k;
    throw ConfigError("unknown experiment kind '" + s + "' (noiseless, covariance, hybrid, rejection, figures)");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (n == 0) fail("n must be >= 1");
    if (!(gamma > 0.0)) fail("gamma must be > 0");
    if (!(beta >= 0.0)) fail("beta must be >= 0");
    if (trials == 0) fail("trials must be >= 1");
    if (samples == 0) fail("samples must be >= 1");
    if (precision_bits != 0 && precision_bits < kMinPrecisionBits) fail("precision_bits must be 0 or >= 64");
    if (!options.is_object()) fail("options must be an object");
    switch (kind) {
        case ExperimentKind::noiseless:
            if (beta != 0.0) fail("noiseless experiment needs beta = 0");
            if (n > 10) fail("noiseless experiment supports n <= 10");
            break;
        case ExperimentKind::covariance:
            if (!(beta > 0.0)) fail("covariance experiment needs beta > 0");
            if (trials < 20) fail("covariance experiment needs trials >= 20");
            break;
        case ExperimentKind::hybrid: {
            if (!(beta > 0.0)) fail("hybrid experiment needs beta > 0");
            const double m = option(options, "m", 2);
            if (!(m >= 1.0) || m != std::floor(m) || m > static_cast<double>(n)) fail("options.m must be in [1, n]");
            break;
        }
        case ExperimentKind::rejection: {
            if (!(beta > 0.0)) fail("rejection experiment needs beta > 0");
            const double d = option(options, "delta", 0.1);
            if (!(d > 0.0 && d < 1.0)) fail("options.delta must lie in (0, 1)");
            if (samples < 100) fail("rejection experiment needs samples >= 100 for the KS test");
            break;
        }
        case ExperimentKind::figures:
            if (!(beta > 0.0)) fail("figures need beta > 0");
            if (n != 2) fail("figures are two-dimensional (n = 2)");
            if (out.empty()) fail("figures need an output directory");
            break;
    }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    ExperimentConfig c;
    try {
        if (!j.contains("kind")) throw ConfigError("config: missing 'kind'");
        c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
        if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
        if (j.contains("beta")) c.beta = j.at("beta").get<double>();
        if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
        if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
        if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<unsigned>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("options")) c.options = j.at("options");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    return {{"kind", experiment_kind_name(c.kind)},
            {"n", c.n},
            {"beta", c.beta},
            {"gamma", c.gamma},
            {"samples", c.samples},
            {"trials", c.trials},
            {"seed", c.seed},
            {"precision_bits", c.precision_bits},
            {"out", c.out.string()},
            {"options", c.options}};
}

TrialReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    TrialReport r;
    switch (cfg.kind) {
        case ExperimentKind::noiseless: r = run_noiseless(cfg); break;
        case ExperimentKind::covariance: r = run_covariance(cfg); break;
        case ExperimentKind::hybrid: r = run_hybrid(cfg); break;
        case ExperimentKind::rejection: r = run_rejection(cfg); break;
        case ExperimentKind::figures: r = run_figures(cfg); break;
    }
    r.experiment = experiment_kind_name(cfg.kind);
    r.config = to_json(cfg);
    r.master_seed = cfg.seed;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

nlohmann::json to_json(const TrialReport& r) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : r.trials)
        trials.push_back({{"index", t.index},
                          {"stream", t.stream},
                          {"label", t.label},
                          {"yes", t.yes},
                          {"success", t.success},
                          {"detail", t.detail}});
    nlohmann::json j = {{"experiment", r.experiment},
                        {"config", r.config},
                        {"master_seed", r.master_seed},
                        {"successes", r.successes},
                        {"trials_run", r.trials.size()},
                        {"success_rate", r.success_rate},
                        {"success_ci95", interval_json(r.success_ci)},
                        {"trials", trials}};
    if (r.advantage) {
        j["advantage"] = *r.advantage;
        j["advantage_ci95"] = interval_json(r.advantage_ci);
        j["yes_rate_pos_ci95"] = interval_json(r.yes_rate_pos);
        j["yes_rate_null_ci95"] = interval_json(r.yes_rate_null);
    }
    return j;
}

void write_report(const TrialReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", to_json(r).dump(2) + "\n");
    std::ostringstream csv;
    csv << "index,stream,label,yes,success\n";
    for (const auto& t : r.trials)
        csv << t.index << ',' << t.stream << ',' << t.label << ',' << t.yes << ',' << t.success << '\n';
    write_text(dir / "trials.csv", csv.str());
    const nlohmann::json timing = {{"written_utc", utc_now()}, {"wall_seconds", r.wall_seconds}};
    write_text(dir / "report.timing.json", timing.dump(2) + "\n");
}

}  // namespace clwe::harness
