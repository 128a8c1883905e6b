#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace clwe::stats {

inline constexpr double kSignificance = 1e-3;

struct StatTestResult {
    std::string test;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    double significance = kSignificance;
    bool pass = true;  // p_value > significance
};

nlohmann::json to_json(const StatTestResult& r);

// Two-sided two-sample Kolmogorov-Smirnov test with the asymptotic p-value
// (effective size sqrt(nm/(n+m)) with Stephens' small-sample correction).
StatTestResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                             double significance = kSignificance);

// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_survival(double x);

// Pearson chi-square of values in [0, 1) against the uniform law on `bins` bins.
StatTestResult chi_square_uniform(std::span<const double> values, std::size_t bins,
                                  double significance = kSignificance);

// Pearson chi-square of observed counts against probabilities (which should
// sum to ~1; the remainder is treated as one extra cell with zero count).
// Cells with expected count below min_expected are pooled in order.
StatTestResult chi_square_pmf(std::span<const std::size_t> counts, std::span<const double> probabilities,
                              double significance = kSignificance, double min_expected = 5.0);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_survival(double statistic, double dof);

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
    bool contains(double x) const { return lower <= x && x <= upper; }
};

// Wilson score interval for a binomial proportion at two-sided confidence.
Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence = 0.95);

double bonferroni(double significance, std::size_t tests);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

MeanEstimate mean_and_std_error(std::span<const double> xs);

}  // namespace clwe::stats
