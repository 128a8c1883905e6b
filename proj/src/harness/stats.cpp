#include "clwe/harness/stats.hpp"

#include "clwe/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace clwe::stats {

namespace {

StatTestResult finish(std::string name, double statistic, double p, std::size_t n, double significance) {
    StatTestResult r;
    r.test = std::move(name);
    r.statistic = statistic;
    r.p_value = std::clamp(p, 0.0, 1.0);
    r.n = n;
    r.significance = significance;
    r.pass = r.p_value > significance;
    return r;
}

}  // namespace

nlohmann::json to_json(const StatTestResult& r) {
    return {{"test", r.test},         {"statistic", r.statistic},       {"p_value", r.p_value},
            {"n", r.n},               {"significance", r.significance}, {"pass", r.pass}};
}

double kolmogorov_survival(double x) {
    if (x < 0.18) return 1.0;  // series terms cancel; Q(0.18) = 1 - 2e-16
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

StatTestResult ks_two_sample(std::span<const double> a, std::span<const double> b, double significance) {
    if (a.size() < 100 || b.size() < 100) throw ParameterError("KS test: need at least 100 samples per side");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    const double en = std::sqrt(n * m / (n + m));
    const double p = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
    return finish("ks_two_sample", d, p, x.size() + y.size(), significance);
}

double chi_square_survival(double statistic, double dof) {
    if (!(dof > 0.0)) throw ParameterError("chi-square: degrees of freedom must be positive");
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

StatTestResult chi_square_uniform(std::span<const double> values, std::size_t bins, double significance) {
    if (bins < 2) throw ParameterError("chi-square: need at least 2 bins");
    if (values.empty()) throw ParameterError("chi-square: no values");
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        if (!(v >= 0.0 && v < 1.0)) throw ParameterError("chi-square uniform: value outside [0, 1)");
        ++counts[std::min(bins - 1, static_cast<std::size_t>(v * static_cast<double>(bins)))];
    }
    const double expected = static_cast<double>(values.size()) / static_cast<double>(bins);
    double stat = 0.0;
    for (std::size_t c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
    return finish("chi_square_uniform", stat, chi_square_survival(stat, static_cast<double>(bins - 1)), values.size(),
                  significance);
}

StatTestResult chi_square_pmf(std::span<const std::size_t> counts, std::span<const double> probabilities,
                              double significance, double min_expected) {
    if (counts.size() != probabilities.size()) throw ParameterError("chi-square: counts and probabilities differ in size");
    std::size_t total = 0;
    double psum = 0.0;
    for (std::size_t c : counts) total += c;
    for (double p : probabilities) psum += p;
    if (total == 0) throw ParameterError("chi-square: no observations");
    const double nn = static_cast<double>(total);
    std::vector<double> obs, exp;
    double o = 0.0, e = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        o += static_cast<double>(counts[i]);
        e += probabilities[i] * nn;
        if (e >= min_expected) {
            obs.push_back(o);
            exp.push_back(e);
            o = e = 0.0;
        }
    }
    e += std::max(0.0, 1.0 - psum) * nn;
    if (!exp.empty() && (o > 0.0 || e > 0.0)) {
        obs.back() += o;
        exp.back() += e;
    } else if (exp.empty()) {
        obs.push_back(o);
        exp.push_back(e);
    }
    if (exp.size() < 2) throw ParameterError("chi-square: fewer than two cells after pooling");
    double stat = 0.0;
    for (std::size_t i = 0; i < exp.size(); ++i) stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
    return finish("chi_square_pmf", stat, chi_square_survival(stat, static_cast<double>(exp.size() - 1)), total,
                  significance);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence) {
    if (trials == 0) throw ParameterError("Wilson interval: no trials");
    if (successes > trials) throw ParameterError("Wilson interval: more successes than trials");
    if (!(confidence > 0.0 && confidence < 1.0)) throw ParameterError("Wilson interval: confidence must lie in (0, 1)");
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double bonferroni(double significance, std::size_t tests) {
    if (tests == 0) throw ParameterError("Bonferroni: zero tests");
    return significance / static_cast<double>(tests);
}

MeanEstimate mean_and_std_error(std::span<const double> xs) {
    if (xs.size() < 2) throw ParameterError("mean estimate: need at least two values");
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace clwe::stats
