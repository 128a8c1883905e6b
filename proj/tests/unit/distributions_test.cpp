#include "clwe/distributions/batch.hpp"
#include "clwe/distributions/density.hpp"
#include "clwe/distributions/params.hpp"
#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/harness/stats.hpp"
#include "clwe/numerics/gaussian.hpp"
#include "clwe/numerics/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <numbers>

using namespace clwe;
using namespace clwe::distributions;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVar = 1.0 / (2.0 * kPi);

// Standard error of the empirical variance of N(0, var) from N draws.
double variance_se(double var, std::size_t n) { return var * std::sqrt(2.0 / static_cast<double>(n)); }

double mean_square(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x * x;
    return s / static_cast<double>(xs.size());
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("clwe_dist_test_" + name);
}

}  // namespace

TEST(ClweParams, ValidatesAndFlagsHardnessRegime) {
    EXPECT_THROW(ClweParams(0, 0.1, 1.0), ParameterError);
    EXPECT_THROW(ClweParams(2, -0.1, 1.0), ParameterError);
    EXPECT_THROW(ClweParams(2, 0.1, 0.0), ParameterError);
    EXPECT_FALSE(ClweParams(16, 0.1, 1.5).hardness_regime);
    EXPECT_TRUE(ClweParams(16, 0.1, 8.0).hardness_regime);
    EXPECT_FALSE(ClweParams(16, 0.1, 8.0, 10.0).hardness_regime);
    EXPECT_FALSE(ClweParams(16, 0.0, 8.0).hardness_regime);
    const ClweParams p(4, 0.3, 2.0);
    EXPECT_NEAR(p.layer_spacing(), 2.0 / 4.09, 1e-15);
    EXPECT_NEAR(p.layer_width(), 0.3 / std::sqrt(4.09), 1e-15);
    const auto q = params_from_json(to_json(p));
    EXPECT_EQ(q.n, 4u);
    EXPECT_EQ(q.beta, 0.3);
    EXPECT_EQ(q.gamma, 2.0);
}

TEST(HiddenDirection, RequiresUnitNorm) {
    EXPECT_THROW(HiddenDirection(std::vector<double>{1.0, 1.0}), ParameterError);
    EXPECT_THROW(HiddenDirection(std::vector<double>{}), ParameterError);
    const HiddenDirection w(std::vector<double>{0.6, 0.8});
    EXPECT_NEAR(to_double(abs(norm_squared(w.precise()) - 1)), 0.0, 1e-70);
    Rng rng(1);
    const auto r = HiddenDirection::random(5, rng);
    double n2 = 0.0;
    for (double x : r.w()) n2 += x * x;
    EXPECT_NEAR(n2, 1.0, 1e-15);
}

TEST(HiddenSubspace, RequiresOrthonormalColumns) {
    EXPECT_THROW(HiddenSubspace::from_columns({{1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}}, 3), ParameterError);
    EXPECT_THROW(HiddenSubspace::leading_axes(2, 3), ParameterError);
    Rng rng(2);
    const auto w = HiddenSubspace::random(6, 3, rng);
    EXPECT_EQ(w.rank(), 3u);
    EXPECT_EQ(HiddenSubspace::leading_axes(4, 0).rank(), 0u);
}

TEST(SampleClwe, NoiselessRelationIsExactAtPrecision) {
    const ClweParams p(3, 0.0, 7.0);
    Rng rng(3);
    const auto w = HiddenDirection::random(3, rng, 512);
    PrecisionScope scope(512);
    for (int i = 0; i < 200; ++i) {
        const auto s = sample_clwe_precise(p, w, rng, 512);
        Real x = make_real(0.0, 512);
        for (std::size_t j = 0; j < 3; ++j) x += s.y[j] * w.precise()[j];
        const Real diff = s.z - 7 * x;
        EXPECT_LT(to_double(abs(diff - round(diff))), 1e-140);
        EXPECT_TRUE(s.z >= 0 && s.z < 1);
    }
}

TEST(SampleClwe, MarginalOfYHasCovarianceOverTwoPi) {
    const ClweParams p(3, 0.1, 2.0);
    const auto batch = generate_batch(Generator::clwe, p, HiddenDirection::basis_vector(3, 0), 100'000, 4);
    for (std::size_t j = 0; j < 3; ++j)
        EXPECT_NEAR(mean_square(batch.coordinate(j)), kVar, 4.0 * variance_se(kVar, batch.size()));
}

TEST(SampleClwe, ZIsUniformAtLargeGamma) {
    for (double beta : {0.0, 0.1}) {
        const ClweParams p(4, beta, 3.0);
        Rng rng(5);
        const auto w = HiddenDirection::random(4, rng);
        const auto batch = generate_batch(Generator::clwe, p, w, 100'000, 6);
        EXPECT_TRUE(stats::chi_square_uniform(batch.z_data(), 64).pass);
    }
}

TEST(SampleClwe, ZIsVisiblyLayeredAtSmallGamma) {
    const ClweParams p(2, 0.0, 0.2);
    const auto batch = generate_batch(Generator::clwe, p, HiddenDirection::basis_vector(2, 0), 100'000, 7);
    EXPECT_FALSE(stats::chi_square_uniform(batch.z_data(), 64).pass);
}

TEST(SampleHclwe, LayersAreSpacedByGammaOverScaleSquared) {
    const ClweParams p(3, 0.05, 2.0);
    Rng rng(8);
    const auto w = HiddenDirection::random(3, rng);
    const auto batch = generate_batch(Generator::hclwe, p, w, 100'000, 9);
    const auto t = batch.projection(w.w());
    const double spacing = p.layer_spacing();
    const double sd = numerics::width_to_stddev(p.layer_width());
    std::size_t near = 0;
    for (double x : t) {
        const double r = x / spacing;
        if (std::abs(r - std::round(r)) * spacing < 4.0 * sd) ++near;
    }
    EXPECT_GT(static_cast<double>(near) / static_cast<double>(t.size()), 0.999);
    EXPECT_LT(4.0 * sd, 0.25 * spacing);
}

TEST(SampleHclwe, OrthogonalComplementIsStandard) {
    const ClweParams p(3, 0.1, 2.0);
    const auto w = HiddenDirection::basis_vector(3, 0);
    const auto batch = generate_batch(Generator::hclwe, p, w, 100'000, 10);
    for (std::size_t j = 1; j < 3; ++j)
        EXPECT_NEAR(mean_square(batch.coordinate(j)), kVar, 4.0 * variance_se(kVar, batch.size()));
}

TEST(SampleHclwe, RejectsZeroBeta) {
    Rng rng(11);
    EXPECT_THROW(sample_hclwe(ClweParams(2, 0.0, 2.0), HiddenDirection::basis_vector(2, 0), rng), ParameterError);
}

TEST(SampleHclwe, EmpiricalMarginalMatchesDensity) {
    const ClweParams p(2, 0.2, 1.5);
    const auto w = HiddenDirection::basis_vector(2, 1);
    const auto batch = generate_batch(Generator::hclwe, p, w, 100'000, 12);
    const double lo = -2.0, hi = 2.0, width = 0.05;
    const std::size_t bins = static_cast<std::size_t>((hi - lo) / width);
    std::vector<std::size_t> counts(bins, 0);
    for (double t : batch.projection(w.w())) {
        if (t < lo || t >= hi) continue;
        counts[std::min(bins - 1, static_cast<std::size_t>((t - lo) / width))]++;
    }
    std::vector<double> probs(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double a = lo + width * static_cast<double>(b);
        probs[b] = numerics::simpson([&](double t) { return hclwe_marginal(t, p.beta, p.gamma); }, a, a + width,
                                     1e-12, 16)
                       .value;
    }
    std::vector<std::size_t> all(counts);
    all.push_back(batch.size() - std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    double inside = std::accumulate(probs.begin(), probs.end(), 0.0);
    probs.push_back(1.0 - inside);
    EXPECT_TRUE(stats::chi_square_pmf(all, probs).pass);
}

TEST(SampleHclwe, DensityAverageMatchesNormalizer) {
    // Under y ~ D_{R^n}, unnormalized density / rho(y) has mean Z.
    const ClweParams p(2, 0.3, 2.0);
    const auto w = HiddenDirection::basis_vector(2, 0);
    const Real z = hclwe_normalizer(p.beta, p.gamma);
    Rng rng(13);
    std::vector<double> ratios;
    for (int i = 0; i < 20'000; ++i) {
        const auto y = sample_null_gaussian(2, rng).y;
        const Real d = hclwe_density(y, p, w);
        ratios.push_back(to_double(d * z / exp(-real_pi() * make_real(y[0] * y[0] + y[1] * y[1]))));
    }
    const auto est = stats::mean_and_std_error(ratios);
    EXPECT_NEAR(est.mean, to_double(z), 3.0 * est.std_error);
}

TEST(SampleHclweNoiseless, SupportIsOnTheScaledIntegers) {
    Rng rng(14);
    const auto w = HiddenDirection::random(3, rng);
    for (int i = 0; i < 1000; ++i) {
        long k = 0;
        const auto s = sample_hclwe_noiseless(2.5, w, rng, &k);
        EXPECT_NEAR(w.project(s.y) * 2.5, static_cast<double>(k), 1e-12);
    }
}

TEST(SampleHclweNoiseless, SecondMomentMatchesThetaOracle) {
    const double gamma = 1.5;
    const auto w = HiddenDirection::basis_vector(2, 0);
    Rng rng(15);
    const std::size_t n = 1'000'000;
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = w.project(sample_hclwe_noiseless(gamma, w, rng).y);
        s2 += t * t;
        s4 += t * t * t * t;
    }
    const double m2 = s2 / n;
    const double se = std::sqrt((s4 / n - m2 * m2) / n);
    const double oracle = to_double(numerics::discrete_gaussian_second_moment(make_real(gamma)));
    EXPECT_NEAR(oracle, 0.155329983973522361620760, 1e-12);
    EXPECT_NEAR(m2, oracle, 4.0 * se);
}

TEST(SampleHclweNoiseless, MassAtZeroForUnitGamma) {
    Rng rng(16);
    const auto w = HiddenDirection::basis_vector(2, 0);
    const std::size_t n = 100'000;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
        long k = 0;
        sample_hclwe_noiseless(1.0, w, rng, &k);
        zeros += k == 0;
    }
    const double p0 = 1.0 / 1.08643481121330801457;
    EXPECT_NEAR(static_cast<double>(zeros) / n, p0, 3.0 * std::sqrt(p0 * (1 - p0) / n));
}

TEST(SampleHclweNoiseless, SmallBetaAgreesOnCoarseBins) {
    const double gamma = 1.5;
    const ClweParams p(2, 1e-6, gamma);
    const auto w = HiddenDirection::basis_vector(2, 0);
    const auto batch = generate_batch(Generator::hclwe, p, w, 100'000, 17);
    // Bins of width 1/(4 gamma) centred on the layers; all mass falls on
    // layer-centred bins, weighted like D_{Z, gamma}.
    const long kmax = 8;
    std::vector<std::size_t> counts(2 * kmax + 1, 0);
    std::size_t off_layer = 0;
    for (double t : batch.projection(w.w())) {
        const double r = t * gamma;
        const long k = std::lround(r);
        if (std::abs(r - static_cast<double>(k)) > 0.125 || std::abs(k) > kmax) {
            ++off_layer;
            continue;
        }
        counts[static_cast<std::size_t>(k + kmax)]++;
    }
    EXPECT_EQ(off_layer, 0u);
    const double theta = numerics::periodic_gaussian(0.0, gamma);
    std::vector<double> probs;
    for (long k = -kmax; k <= kmax; ++k) probs.push_back(numerics::rho(static_cast<double>(k), gamma) / theta);
    EXPECT_TRUE(stats::chi_square_pmf(counts, probs).pass);
}

TEST(SampleHclweM, RankZeroIsTheGaussianSampler) {
    const ClweParams p(4, 0.1, 2.0);
    const auto w = HiddenSubspace::leading_axes(4, 0);
    Rng a(18), b(18);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_hclwe_m(p, w, a).y, sample_null_gaussian(4, b).y);
}

TEST(SampleHclweM, RankOneMatchesSingleDirectionSampler) {
    const ClweParams p(3, 0.1, 2.0);
    Rng rng(19);
    const auto sub = HiddenSubspace::random(3, 1, rng);
    const HiddenDirection w(sub.column(0));
    std::vector<double> a, b;
    for (int i = 0; i < 20'000; ++i) {
        a.push_back(w.project(sample_hclwe_m(p, sub, rng).y));
        b.push_back(w.project(sample_hclwe(p, w, rng).y));
    }
    EXPECT_TRUE(stats::ks_two_sample(a, b).pass);
}

TEST(SampleHclweM, TwoHiddenCoordinatesAreLayeredAndUncorrelated) {
    const ClweParams p(4, 0.05, 2.0);
    Rng rng(20);
    const auto sub = HiddenSubspace::random(4, 2, rng);
    const auto c0 = sub.column(0), c1 = sub.column(1);
    const double spacing = p.layer_spacing();
    const double sd = numerics::width_to_stddev(p.layer_width());
    const std::size_t n = 100'000;
    double cross = 0.0;
    std::size_t near0 = 0, near1 = 0;
    auto on_layer = [&](double t) { return std::abs(t / spacing - std::round(t / spacing)) * spacing < 4.0 * sd; };
    for (std::size_t i = 0; i < n; ++i) {
        const auto y = sample_hclwe_m(p, sub, rng).y;
        double t0 = 0.0, t1 = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            t0 += y[j] * c0[j];
            t1 += y[j] * c1[j];
        }
        cross += t0 * t1;
        near0 += on_layer(t0);
        near1 += on_layer(t1);
    }
    EXPECT_GT(static_cast<double>(near0) / n, 0.999);
    EXPECT_GT(static_cast<double>(near1) / n, 0.999);
    // Hidden coordinates have variance below 1/(2 pi) + 0.01 at these params.
    const double sigma_cross = (kVar + 0.01) / std::sqrt(static_cast<double>(n));
    EXPECT_NEAR(cross / n, 0.0, 4.0 * sigma_cross);
}

TEST(HclweDensity, MarginalIntegratesToOne) {
    for (auto [beta, gamma] : {std::pair{0.1, 2.0}, std::pair{0.3, 1.5}, std::pair{1.0 / 32, 4.0}}) {
        const auto r =
            numerics::simpson([&](double t) { return hclwe_marginal(t, beta, gamma); }, -8.0, 8.0, 1e-9, 1024);
        EXPECT_NEAR(r.value, 1.0, 1e-6) << beta << " " << gamma;
    }
}

TEST(HclweDensity, IsEvenAndHasRatioA) {
    const ClweParams p(3, 0.2, 2.0);
    Rng rng(21);
    const auto w = HiddenDirection::random(3, rng);
    for (int i = 0; i < 50; ++i) {
        auto y = sample_null_gaussian(3, rng).y;
        std::vector<double> neg(y);
        for (auto& x : neg) x = -x;
        const Real d = hclwe_density(y, p, w);
        EXPECT_LT(to_double(abs(d - hclwe_density(neg, p, w)) / d), 1e-30);
        const double gauss = std::exp(-kPi * (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]));
        EXPECT_NEAR(to_double(d) / gauss / hclwe_density_ratio(w.project(y), p.beta, p.gamma), 1.0, 1e-12);
    }
}

TEST(HclweDensity, DetectsInsufficientTruncation) {
    const ClweParams p(2, 0.2, 2.0);
    const auto w = HiddenDirection::basis_vector(2, 0);
    const std::vector<double> y{1.3, 0.0};
    const long k = hclwe_layer_cutoff(1.3, p.beta, p.gamma);
    EXPECT_NO_THROW(hclwe_density(y, p, w, k));
    EXPECT_THROW(hclwe_density(y, p, w, 1), ToleranceError);
    EXPECT_THROW(hclwe_density(y, p, w, -1), ToleranceError);
}

TEST(HclweDensity, NormalizerMatchesPoissonDualForm) {
    // Z = beta / sqrt(beta^2+gamma^2) rho_{sqrt(beta^2+gamma^2)}(Z)
    //   = beta rho_{1/sqrt(beta^2+gamma^2)}(Z).
    const double beta = 0.3, gamma = 2.0;
    const double s = std::hypot(beta, gamma);
    const double dual = beta * numerics::periodic_gaussian(0.0, 1.0 / s);
    EXPECT_NEAR(to_double(hclwe_normalizer(beta, gamma)), dual, 1e-15);
}

TEST(NullSamplers, UniformZAndIsotropicY) {
    Rng rng(22);
    std::vector<double> z;
    const std::size_t n = 100'000;
    double c01 = 0.0, c12 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = sample_null_clwe(3, rng);
        z.push_back(s.z);
        c01 += s.y[0] * s.y[1];
        c12 += s.y[1] * s.y[2];
    }
    EXPECT_TRUE(stats::chi_square_uniform(z, 64).pass);
    const double sigma = kVar / std::sqrt(static_cast<double>(n));
    EXPECT_NEAR(c01 / n, 0.0, 4.0 * sigma);
    EXPECT_NEAR(c12 / n, 0.0, 4.0 * sigma);
}

TEST(TruncateHclwe, CentralComponentOnlyAtZero) {
    const auto m = truncate_hclwe(ClweParams(2, 0.1, 2.0), 0);
    ASSERT_EQ(m.weights.size(), 1u);
    EXPECT_EQ(m.weights[0], 1.0);
    EXPECT_EQ(m.means[0], 0.0);
    EXPECT_EQ(m.tv_bound, 2.0);
}

TEST(TruncateHclwe, WeightsAreTheRestrictedDiscreteGaussian) {
    const ClweParams p(2, 0.3, 3.0);
    const auto m = truncate_hclwe(p, 4);
    ASSERT_EQ(m.weights.size(), 9u);
    double total = 0.0;
    for (long j = -4; j <= 4; ++j) total += numerics::rho(static_cast<double>(j), p.layer_scale());
    for (long j = -4; j <= 4; ++j)
        EXPECT_NEAR(m.weights[j + 4], numerics::rho(static_cast<double>(j), p.layer_scale()) / total, 1e-15);
    EXPECT_NEAR(std::accumulate(m.weights.begin(), m.weights.end(), 0.0), 1.0, 1e-15);
    EXPECT_NEAR(m.means[5], 3.0 / 9.09, 1e-15);
}

TEST(TruncateHclwe, TotalVariationWithinBound) {
    for (auto [beta, gamma] : {std::pair{0.1, 2.0}, std::pair{0.3, 3.0}}) {
        const ClweParams p(2, beta, gamma);
        for (long k = 1; k <= 5; ++k) {
            const auto m = truncate_hclwe(p, k);
            const auto tv = numerics::simpson(
                [&](double t) { return 0.5 * std::abs(hclwe_marginal(t, beta, gamma) - m.marginal(t)); }, -8.0, 8.0,
                1e-10, 4096);
            EXPECT_LE(tv.value, m.tv_bound) << beta << " " << gamma << " " << k;
        }
    }
}

TEST(SampleBatch, SealedBatchRejectsAppends) {
    BatchMetadata meta;
    meta.n = 2;
    SampleBatch b(meta, false);
    b.append(std::vector<double>{1.0, 2.0});
    b.seal();
    EXPECT_THROW(b.append(std::vector<double>{1.0, 2.0}), ConsistencyError);
    EXPECT_THROW(b.mutable_metadata(), ConsistencyError);
    SampleBatch c(meta, true);
    EXPECT_THROW(c.append(std::vector<double>{1.0, 2.0}, 1.0), ParameterError);
    EXPECT_THROW(c.append(std::vector<double>{1.0}, 0.5), ParameterError);
}

TEST(SampleBatch, CsvAndBinaryRoundTrip) {
    const ClweParams p(3, 0.1, 2.0);
    const auto w = HiddenDirection::basis_vector(3, 2);
    for (auto g : {Generator::clwe, Generator::hclwe}) {
        const auto batch = generate_batch(g, p, w, 500, 23);
        const auto csv = temp_file("rt.csv"), bin = temp_file("rt.bin");
        write_csv(batch, csv);
        write_binary(batch, bin);
        for (const auto& back : {read_csv(csv), read_binary(bin)}) {
            EXPECT_EQ(back.size(), batch.size());
            EXPECT_EQ(back.has_z(), batch.has_z());
            EXPECT_EQ(back.y_data(), batch.y_data());
            EXPECT_EQ(back.z_data(), batch.z_data());
            EXPECT_EQ(back.metadata().generator, batch.metadata().generator);
            EXPECT_EQ(back.metadata().seed, 23u);
            EXPECT_EQ(back.metadata().gamma, 2.0);
        }
        std::filesystem::remove(csv);
        std::filesystem::remove(bin);
    }
}

TEST(SampleBatch, DecimalCsvKeepsSolverPrecision) {
    const ClweParams p(2, 0.0, 4.0);
    const HiddenDirection w(std::vector<double>{0.6, 0.8});
    const auto batch = generate_precise_clwe_batch(p, w, 20, 24, 320);
    const auto csv = temp_file("dec.csv");
    write_csv(batch, csv);
    const auto back = read_csv(csv, 320);
    ASSERT_EQ(back.size(), 20u);
    for (std::size_t i = 0; i < 20; ++i) {
        const auto a = batch.precise(i), b = back.precise(i);
        EXPECT_LT(to_double(abs(a.z - b.z)), 1e-90);
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a.y[j], b.y[j]);
    }
    std::filesystem::remove(csv);
}

TEST(SampleBatch, RejectsMalformedFiles) {
    const auto path = temp_file("bad.csv");
    {
        std::ofstream out(path);
        out << "n,beta,gamma,seed,generator\n2,0.1,1,0,clwe\ny1,y2,z\n0.1,zz,0.5\n";
    }
    EXPECT_THROW(read_csv(path), ConfigError);
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOTABATCH";
    }
    EXPECT_THROW(read_binary(path), ConfigError);
    std::filesystem::remove(path);
}

TEST(Generators, NamesRoundTrip) {
    for (auto g : {Generator::clwe, Generator::hclwe, Generator::hclwe_noiseless, Generator::null_clwe,
                   Generator::null_gaussian})
        EXPECT_EQ(parse_generator(generator_name(g)), g);
    EXPECT_THROW(parse_generator("pancakes"), ConfigError);
}

TEST(Generators, SeededBatchesAreReproducible) {
    const ClweParams p(3, 0.1, 2.0);
    const auto w = HiddenDirection::basis_vector(3, 0);
    EXPECT_EQ(generate_batch(Generator::hclwe, p, w, 100, 25).y_data(),
              generate_batch(Generator::hclwe, p, w, 100, 25).y_data());
    EXPECT_NE(generate_batch(Generator::hclwe, p, w, 100, 25).y_data(),
              generate_batch(Generator::hclwe, p, w, 100, 26).y_data());
}
