#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"
#include "clwe/harness/acceptance.hpp"
#include "clwe/harness/experiment.hpp"
#include "clwe/harness/plot.hpp"
#include "clwe/lattice/discrete_gaussian.hpp"
#include "clwe/lattice/smoothing.hpp"
#include "clwe/numerics/theta.hpp"
#include "clwe/reductions/bdd.hpp"
#include "clwe/reductions/hybrid.hpp"
#include "clwe/reductions/rejection.hpp"
#include "clwe/reductions/rescale.hpp"
#include "clwe/solvers/covariance.hpp"
#include "clwe/solvers/density_test.hpp"
#include "clwe/solvers/noiseless.hpp"
#include "clwe/solvers/sq.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace clwe;
using distributions::ClweParams;
using distributions::HiddenDirection;
using distributions::SampleBatch;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Globals {
    std::uint64_t seed = 1;
    unsigned precision_bits = 0;
    std::string out;
    std::string config;
};

struct Common {
    std::size_t n = 2;
    double beta = 0.1;
    double gamma = 2.0;
    std::size_t count = 1000;
    std::string input;
};

bool is_binary(const fs::path& p) { return p.extension() == ".bin"; }

SampleBatch load(const std::string& path) {
    if (path.empty()) throw ConfigError("--input is required");
    if (!fs::exists(path)) throw ConfigError("input file not found: " + path);
    return is_binary(path) ? distributions::read_binary(path) : distributions::read_csv(path);
}

fs::path out_path(const Globals& g, const std::string& fallback) { return g.out.empty() ? fs::path(fallback) : fs::path(g.out); }

void save(const SampleBatch& b, const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    if (is_binary(p))
        distributions::write_binary(b, p);
    else
        distributions::write_csv(b, p);
}

void emit(const nlohmann::json& j, const Globals& g) {
    std::cout << j.dump(2) << '\n';
    if (!g.out.empty()) {
        const fs::path p(g.out);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream(p) << j.dump(2) << '\n';
    }
}

int run_config(const Globals& g) {
    std::ifstream f(g.config);
    if (!f) throw ConfigError("cannot read config " + g.config);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    auto cfg = harness::config_from_json(j);
    if (!g.out.empty()) cfg.out = g.out;
    if (g.precision_bits) cfg.precision_bits = g.precision_bits;
    cfg.validate();
    const auto rep = harness::run_experiment(cfg);
    if (!cfg.out.empty()) harness::write_report(rep, cfg.out);
    auto j_rep = harness::to_json(rep);
    j_rep.erase("trials");
    std::cout << j_rep.dump(2) << '\n';
    return rep.successes > 0 || rep.advantage.value_or(0.0) > 0.0 ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clwe_lab: continuous LWE samplers, reductions, attacks and analyses"};
    app.require_subcommand(0, 1);
    Globals g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--precision-bits", g.precision_bits, "working precision (0 = module default)");
    app.add_option("--out", g.out, "output file or directory");
    app.add_option("--config", g.config, "experiment config JSON; runs it when no subcommand is given");

    // sample
    Common sc;
    std::string generator = "clwe";
    auto* sample = app.add_subcommand("sample", "draw samples from a distribution into a file (.csv or .bin)");
    sample->add_option("--generator", generator, "clwe | hclwe | hclwe-noiseless | null-clwe | null-gaussian")
        ->capture_default_str();
    sample->add_option("--n", sc.n)->capture_default_str();
    sample->add_option("--beta", sc.beta)->capture_default_str();
    sample->add_option("--gamma", sc.gamma)->capture_default_str();
    sample->add_option("--count", sc.count)->capture_default_str();

    // reduce
    auto* reduce = app.add_subcommand("reduce", "apply a reduction to a sample file");
    reduce->require_subcommand(1);
    Common rc;
    double delta = 0.1;
    std::size_t hybrid_i = 0, hybrid_m = 1;
    double bdd_r = 20.0, bdd_s1 = 3.0, bdd_s2 = 0.2, bdd_offset = 0.0;
    std::string lattice_file;
    auto* r_rej = reduce->add_subcommand("rejection", "CLWE -> hCLWE by rejection sampling on z");
    r_rej->add_option("--input", rc.input)->required();
    r_rej->add_option("--delta", delta)->capture_default_str();
    auto* r_resc = reduce->add_subcommand("rescale", "noiseless hCLWE -> hCLWE by adding noise and rescaling");
    r_resc->add_option("--input", rc.input)->required();
    r_resc->add_option("--beta", rc.beta)->capture_default_str();
    auto* r_bdd = reduce->add_subcommand("bdd2clwe", "BDD instance -> CLWE samples");
    r_bdd->add_option("--lattice", lattice_file, "lattice JSON {rows: [[...]]}; default (1/2)Z^2");
    r_bdd->add_option("--r", bdd_r)->capture_default_str();
    r_bdd->add_option("--s1", bdd_s1)->capture_default_str();
    r_bdd->add_option("--s2", bdd_s2)->capture_default_str();
    r_bdd->add_option("--offset-norm", bdd_offset, "0 = the norm giving gamma = 2");
    r_bdd->add_option("--count", rc.count)->capture_default_str();
    auto* r_hyb = reduce->add_subcommand("hybrid", "embed a hCLWE file as hybrid i in dimension n");
    r_hyb->add_option("--input", rc.input)->required();
    r_hyb->add_option("--i", hybrid_i)->capture_default_str();
    r_hyb->add_option("--m", hybrid_m)->capture_default_str();
    r_hyb->add_option("--n", rc.n, "output dimension")->required();

    // attack
    auto* attack = app.add_subcommand("attack", "run an attack");
    attack->require_subcommand(1);
    Common ac;
    ac.gamma = 10.0;
    std::size_t trials = 1;
    auto* a_lll = attack->add_subcommand("lll", "noiseless CLWE direction recovery by lattice reduction");
    a_lll->add_option("--n", ac.n)->capture_default_str();
    a_lll->add_option("--gamma", ac.gamma)->capture_default_str();
    a_lll->add_option("--trials", trials)->capture_default_str();
    a_lll->add_option("--input", ac.input, "precise CLWE sample file instead of fresh samples");
    auto* a_cov = attack->add_subcommand("covariance", "sample covariance distinguisher on a file");
    a_cov->add_option("--input", ac.input)->required();
    a_cov->add_option("--beta", ac.beta)->required();
    a_cov->add_option("--gamma", ac.gamma)->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "closed-form and numerical analyses");
    analyze->require_subcommand(1);
    double alpha = 0.0, tau = 0.0, eta = 0.5, epsilon = 1e-10, s = 1.0;
    double an_beta = 0.1, an_gamma = 2.0;
    long k_trunc = 0;
    std::size_t packing = 0, mc = 0;
    auto* an_corr = analyze->add_subcommand("sq-corr", "pairwise hCLWE correlation");
    an_corr->add_option("--alpha", alpha)->capture_default_str();
    an_corr->add_option("--beta", an_beta)->capture_default_str();
    an_corr->add_option("--gamma", an_gamma)->capture_default_str();
    an_corr->add_option("--monte-carlo", mc, "also estimate with this many samples");
    auto* an_bound = analyze->add_subcommand("sq-bound", "statistical query lower bound");
    an_bound->add_option("--beta", an_beta)->capture_default_str();
    an_bound->add_option("--gamma", an_gamma)->capture_default_str();
    an_bound->add_option("--tau", tau)->required();
    an_bound->add_option("--eta", eta)->capture_default_str();
    an_bound->add_option("--packing-size", packing)->required();
    auto* an_tv = analyze->add_subcommand("tv", "TV distance of hCLWE from the Gaussian, or of a truncation");
    an_tv->add_option("--beta", an_beta)->capture_default_str();
    an_tv->add_option("--gamma", an_gamma)->capture_default_str();
    an_tv->add_option("--k", k_trunc, "truncation order; 0 = against the Gaussian");
    auto* an_smooth = analyze->add_subcommand("smoothing", "smoothing parameter and its bounds");
    an_smooth->add_option("--lattice", lattice_file)->required();
    an_smooth->add_option("--epsilon", epsilon)->capture_default_str();
    auto* an_poisson = analyze->add_subcommand("poisson", "Poisson summation residual");
    an_poisson->add_option("--lattice", lattice_file)->required();
    an_poisson->add_option("--s", s)->capture_default_str();

    // verify
    std::vector<int> only;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--only", only, "criterion ids")->check(CLI::Range(1, harness::kCriterionCount));

    // plot-data
    std::string plot_kind;
    harness::PlotSpec ps;
    auto* plot = app.add_subcommand("plot-data", "figure CSVs; all kinds into --out directory unless --kind");
    plot->add_option("--kind", plot_kind, "fig1-scatter | fig2-scatter | fig2-density");
    plot->add_option("--beta", ps.beta)->capture_default_str();
    plot->add_option("--gamma", ps.gamma)->capture_default_str();
    plot->add_option("--count", ps.count)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        Rng rng(g.seed);
        if (app.got_subcommand(sample)) {
            const auto gen = distributions::parse_generator(generator);
            const ClweParams p(sc.n, gen == distributions::Generator::hclwe_noiseless ? 0.0 : sc.beta, sc.gamma);
            const auto w = HiddenDirection::random(sc.n, rng, g.precision_bits ? g.precision_bits : kDefaultPrecisionBits);
            const bool precise = g.precision_bits > 0 && gen == distributions::Generator::clwe;
            const auto b = precise ? distributions::generate_precise_clwe_batch(p, w, sc.count, rng(), g.precision_bits)
                                   : distributions::generate_batch(gen, p, w, sc.count, rng());
            const auto path = out_path(g, "samples.csv");
            save(b, path);
            // The secret direction goes to a sidecar so attacks can be scored.
            std::ofstream(path.string() + ".secret.json") << nlohmann::json{{"direction", w.w()}}.dump(2) << '\n';
            std::cout << "wrote " << b.size() << " samples to " << path.string() << '\n';
            return kExitPass;
        }
        if (app.got_subcommand(reduce)) {
            std::optional<SampleBatch> out;
            nlohmann::json info;
            if (r_rej->parsed()) {
                auto res = reductions::clwe_to_hclwe_rejection(load(rc.input), reductions::RejectionConfig{delta, 100'000}, rng);
                info = {{"acceptance", reductions::to_json(res.stats)}};
                out = std::move(res.batch);
            } else if (r_resc->parsed()) {
                auto res = reductions::add_noise_rescale(load(rc.input), rc.beta, rng);
                info = {{"beta", res.beta_tilde}, {"gamma", res.gamma_tilde}};
                out = std::move(res.batch);
            } else if (r_bdd->parsed()) {
                const auto lat = lattice_file.empty() ? lattice::Lattice::scaled_integer_lattice(2, make_real(0.5))
                                                      : lattice::lattice_from_json(nlohmann::json::parse(std::ifstream(lattice_file)));
                const reductions::BddTransformParams bp{bdd_r, bdd_s1, bdd_s2, 1e-10};
                const double norm = bdd_offset > 0.0 ? bdd_offset : 2.0 * bp.t() / (bp.r * bp.r);
                const auto dir = HiddenDirection::random(lat.dimension(), rng);
                reductions::BddInstance inst{lat, {}, {}, norm};
                const Vector<Real> zero(lat.dimension(), make_real(0.0));
                inst.offset = zero;
                inst.target = zero;
                for (std::size_t i = 0; i < lat.dimension(); ++i) {
                    inst.offset[i] = make_real(norm) * dir.precise()[i];
                    inst.target[i] = inst.offset[i];
                }
                const lattice::DiscreteGaussianSampler dgs({lat, {}, make_real(bp.r)});
                auto res = reductions::bdd_to_clwe(inst, bp, [&](Rng& r) { return dgs.sample(r); }, rc.count, rng);
                info = {{"precondition", reductions::to_json(res.precondition)}, {"direction", res.direction}};
                if (res.params) info["params"] = distributions::to_json(*res.params);
                out = std::move(res.batch);
            } else {
                const auto in = load(rc.input);
                const auto& m = in.metadata();
                auto res = reductions::embed_hybrid(in, hybrid_i, hybrid_m, ClweParams(rc.n, m.beta, m.gamma), rng);
                out = std::move(res.batch);
                info = {{"i", hybrid_i}, {"m", hybrid_m}, {"n", rc.n}};
            }
            const auto path = out_path(g, "reduced.csv");
            save(*out, path);
            info["wrote"] = path.string();
            info["samples"] = out->size();
            std::cout << info.dump(2) << '\n';
            return kExitPass;
        }
        if (app.got_subcommand(attack)) {
            if (a_cov->parsed()) {
                const auto rep = solvers::covariance_distinguisher(load(ac.input), ac.beta, ac.gamma);
                emit(solvers::to_json(rep), g);
                return kExitPass;
            }
            if (!ac.input.empty()) {
                const auto b = is_binary(ac.input) ? distributions::read_binary(ac.input)
                                                   : distributions::read_csv(ac.input, g.precision_bits ? g.precision_bits
                                                                                                         : solver_precision_bits(0));
                solvers::NoiselessSolveConfig cfg;
                cfg.precision_bits = g.precision_bits;
                const auto rep = solvers::solve_noiseless_clwe(b, b.metadata().gamma, b.dimension(), rng, cfg);
                emit(solvers::to_json(rep), g);
                return rep.success ? kExitPass : kExitFail;
            }
            harness::ExperimentConfig cfg;
            cfg.kind = harness::ExperimentKind::noiseless;
            cfg.n = ac.n;
            cfg.gamma = ac.gamma;
            cfg.beta = 0.0;
            cfg.trials = trials;
            cfg.samples = 2 * ac.n * (ac.n + 1);
            cfg.seed = g.seed;
            cfg.precision_bits = g.precision_bits;
            cfg.out = g.out;
            const auto rep = harness::run_experiment(cfg);
            if (!g.out.empty()) harness::write_report(rep, g.out);
            std::cout << harness::to_json(rep).dump(2) << '\n';
            return rep.successes == rep.trials.size() ? kExitPass : kExitFail;
        }
        if (app.got_subcommand(analyze)) {
            if (an_corr->parsed()) {
                auto j = solvers::to_json(solvers::sq_corr_closed_form({alpha, an_beta, an_gamma}));
                if (mc) {
                    const double xi = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
                    j["monte_carlo"] = solvers::to_json(
                        solvers::sq_corr_monte_carlo({1.0, 0.0}, {alpha, xi}, an_beta, an_gamma, mc, rng));
                }
                emit(j, g);
            } else if (an_bound->parsed()) {
                const auto p = solvers::SqBoundParams::for_packing(an_beta, an_gamma, tau, eta, packing);
                p.validate();
                auto j = solvers::to_json(p);
                j["queries"] = to_decimal_string(solvers::sq_query_lower_bound(p));
                emit(j, g);
            } else if (an_tv->parsed()) {
                const auto tv = k_trunc > 0 ? solvers::truncation_tv_estimate(an_beta, an_gamma, k_trunc)
                                            : solvers::hclwe_tv_estimate(an_beta, an_gamma);
                emit(solvers::to_json(tv), g);
            } else if (an_smooth->parsed()) {
                const auto lat = lattice::lattice_from_json(nlohmann::json::parse(std::ifstream(lattice_file)));
                const auto b = lattice::smoothing_bounds(lat, epsilon);
                emit({{"epsilon", epsilon},
                      {"eta", lattice::smoothing_parameter(lat, epsilon)},
                      {"lower", to_decimal_string(b.lower)},
                      {"upper_dual", to_decimal_string(b.upper_dual)},
                      {"upper_primal", to_decimal_string(b.upper_primal)},
                      {"dual_bound_applies", b.dual_bound_applies}},
                     g);
            } else {
                const auto lat = lattice::lattice_from_json(nlohmann::json::parse(std::ifstream(lattice_file)));
                const auto mass = numerics::gaussian_mass(lat, make_real(s));
                emit({{"s", s},
                      {"mass", to_decimal_string(mass.mass)},
                      {"residual", to_decimal_string(numerics::poisson_residual(lat, make_real(s)))}},
                     g);
            }
            return kExitPass;
        }
        if (app.got_subcommand(verify)) {
            harness::AcceptanceOptions opt;
            opt.seed = app.count("--seed") ? g.seed : opt.seed;
            opt.only = only;
            if (!g.out.empty()) opt.out_dir = g.out;
            const auto results = harness::run_acceptance(opt, std::cout);
            for (const auto& r : results)
                if (!r.pass) return kExitFail;
            return kExitPass;
        }
        if (app.got_subcommand(plot)) {
            ps.seed = g.seed;
            if (!plot_kind.empty()) {
                const auto text = harness::emit_plot_data(ps, harness::parse_plot_kind(plot_kind));
                if (g.out.empty()) {
                    std::cout << text;
                } else {
                    std::ofstream(g.out) << text;
                }
                return kExitPass;
            }
            const fs::path dir = out_path(g, "figures");
            fs::create_directories(dir);
            for (auto k : {harness::PlotKind::fig1_scatter, harness::PlotKind::fig2_scatter, harness::PlotKind::fig2_density}) {
                const auto file = dir / (harness::plot_kind_name(k) + ".csv");
                std::ofstream(file) << harness::emit_plot_data(ps, k);
                std::cout << "wrote " << file.string() << '\n';
            }
            return kExitPass;
        }
        if (!g.config.empty()) return run_config(g);
        std::cout << app.help();
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid JSON: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
}
