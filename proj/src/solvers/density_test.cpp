#include "clwe/solvers/density_test.hpp"

#include "clwe/error.hpp"
#include "clwe/numerics/gaussian.hpp"
#include "clwe/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace clwe::solvers {

namespace {

// Initial Simpson grid fine enough to resolve a layer of the given width.
std::size_t initial_intervals(double layer_width) {
    const double sd = numerics::width_to_stddev(layer_width);
    std::size_t m = 1024;
    while (2.0 * kTvHalfWidth / static_cast<double>(m) > 0.5 * sd) m *= 2;
    return m;
}

TvEstimate from(const numerics::QuadratureResult& q) { return {q.value, q.last_change, q.intervals}; }

}  // namespace

DensityTestResult density_equality_test(const DensityOracle& f, std::size_t n, double delta, Rng& rng) {
    if (n == 0) throw ParameterError("density test: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("density test: delta must lie in (0, 1)");
    const double band = std::sqrt(delta);
    DensityTestResult r;
    r.points = static_cast<std::size_t>(std::ceil(1.0 / (6.0 * band)));
    std::vector<double> x(n);
    for (std::size_t i = 0; i < r.points; ++i) {
        for (auto& c : x) c = rng.gaussian(1.0);
        const double dev = std::abs(f(x) / numerics::rho(std::span<const double>(x)) - 1.0);
        ++r.checked;
        r.max_deviation = std::max(r.max_deviation, dev);
        if (!(dev <= band)) {
            r.yes = false;
            break;
        }
    }
    return r;
}

TvEstimate hclwe_tv_lower_estimate(double beta, double gamma, double tol) {
    if (!(beta > 0.0 && beta <= 1.0 / 32.0)) throw ParameterError("tv estimate: beta must lie in (0, 1/32]");
    if (!(gamma >= 1.0)) throw ParameterError("tv estimate: gamma must be >= 1");
    return hclwe_tv_estimate(beta, gamma, tol);
}

TvEstimate hclwe_tv_estimate(double beta, double gamma, double tol) {
    if (!(beta > 0.0) || !(gamma > 0.0)) throw ParameterError("tv estimate: need beta, gamma > 0");
    auto f = [&](double t) {
        return 0.5 * std::abs(distributions::hclwe_marginal(t, beta, gamma) - numerics::rho(t));
    };
    const double width = beta / std::hypot(beta, gamma);
    return from(numerics::simpson(f, -kTvHalfWidth, kTvHalfWidth, tol, initial_intervals(width)));
}

TvEstimate truncation_tv_estimate(double beta, double gamma, long k, double tol) {
    if (!(beta > 0.0) || !(gamma > 0.0)) throw ParameterError("truncation tv: need beta, gamma > 0");
    if (k < 0) throw ParameterError("truncation tv: k must be >= 0");
    const auto mix = distributions::truncate_hclwe(distributions::ClweParams(1, beta, gamma), k);
    auto f = [&](double t) { return 0.5 * std::abs(distributions::hclwe_marginal(t, beta, gamma) - mix.marginal(t)); };
    return from(numerics::simpson(f, -kTvHalfWidth, kTvHalfWidth, tol, initial_intervals(mix.width)));
}

nlohmann::json to_json(const DensityTestResult& r) {
    return {{"verdict", r.yes ? "YES" : "NO"},
            {"points", r.points},
            {"checked", r.checked},
            {"max_deviation", r.max_deviation}};
}

nlohmann::json to_json(const TvEstimate& r) {
    return {{"value", r.value}, {"last_change", r.last_change}, {"intervals", r.intervals}};
}

}  // namespace clwe::solvers
