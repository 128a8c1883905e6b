#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/harness/stats.hpp"
#include "clwe/lattice/discrete_gaussian.hpp"
#include "clwe/numerics/gaussian.hpp"
#include "clwe/reductions/bdd.hpp"
#include "clwe/reductions/hybrid.hpp"
#include "clwe/reductions/provenance.hpp"
#include "clwe/reductions/rejection.hpp"
#include "clwe/reductions/rescale.hpp"
#include "clwe/reductions/rotation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace clwe;
using namespace clwe::distributions;
using namespace clwe::reductions;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVar = 1.0 / (2.0 * kPi);

double mean_square(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x * x;
    return s / static_cast<double>(xs.size());
}

std::vector<double> residuals(const SampleBatch& b, const std::vector<double>& w, double gamma) {
    std::vector<double> out;
    const auto t = b.projection(w);
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(mod1(b.z(i) - gamma * t[i]));
    return out;
}

}  // namespace

TEST(RandomRotation, DimensionOneIsAFairSign) {
    Rng rng(1);
    const std::size_t n = 10'000;
    std::size_t plus = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = random_rotation(1, rng);
        ASSERT_EQ(std::abs(r(0, 0)), 1.0);
        plus += r(0, 0) > 0;
    }
    EXPECT_NEAR(static_cast<double>(plus) / n, 0.5, 4.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST(RandomRotation, IsOrthogonal) {
    Rng rng(2);
    for (std::size_t n : {2u, 5u, 16u}) EXPECT_LT(orthogonality_defect(random_rotation(n, rng)), 1e-14);
}

TEST(RandomRotation, ImageOfFirstAxisIsCentred) {
    Rng rng(3);
    const std::size_t n = 4, trials = 10'000;
    std::vector<double> sum(n, 0.0);
    for (std::size_t k = 0; k < trials; ++k) {
        const auto r = random_rotation(n, rng);
        for (std::size_t i = 0; i < n; ++i) sum[i] += r(i, 0);
    }
    // Each coordinate of a uniform unit vector has variance 1/n.
    const double sigma = std::sqrt(1.0 / n / trials);
    for (double s : sum) EXPECT_NEAR(s / trials, 0.0, 4.0 * sigma);
}

TEST(WorstToAverage, IdentityLeavesBatchUnchanged) {
    const ClweParams p(3, 0.1, 2.0);
    const auto batch = generate_batch(Generator::clwe, p, HiddenDirection::basis_vector(3, 0), 200, 4);
    const auto out = worst_to_average(batch, Matrix<double>::identity(3));
    EXPECT_EQ(out.batch.y_data(), batch.y_data());
    EXPECT_EQ(out.batch.z_data(), batch.z_data());
}

TEST(WorstToAverage, PreservesNormsAndRejectsNonOrthogonal) {
    const ClweParams p(4, 0.1, 2.0);
    const auto batch = generate_batch(Generator::clwe, p, HiddenDirection::basis_vector(4, 1), 500, 5);
    Rng rng(6);
    const auto out = worst_to_average(batch, rng);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double a = 0.0, b = 0.0;
        for (double x : batch.y(i)) a += x * x;
        for (double x : out.batch.y(i)) b += x * x;
        EXPECT_NEAR(a, b, 1e-13 * (1 + a));
    }
    Matrix<double> bad = Matrix<double>::identity(4);
    bad(0, 1) = 0.5;
    EXPECT_THROW(worst_to_average(batch, bad), ParameterError);
}

TEST(WorstToAverage, RotatedSamplesFollowRotatedDirection) {
    const ClweParams p(3, 0.1, 2.0);
    Rng rng(7);
    const auto w = HiddenDirection::random(3, rng);
    const auto r = random_rotation(3, rng);
    const HiddenDirection rw(rotate(r, w.w()));
    const auto rotated = worst_to_average(generate_batch(Generator::clwe, p, w, 50'000, 8), r);
    const auto direct = generate_batch(Generator::clwe, p, rw, 50'000, 9);
    const double alpha = stats::bonferroni(stats::kSignificance, 3);
    EXPECT_TRUE(stats::ks_two_sample(rotated.batch.projection(rw.w()), direct.projection(rw.w()), alpha).pass);
    EXPECT_TRUE(stats::ks_two_sample(rotated.batch.z_data(), direct.z_data(), alpha).pass);
    EXPECT_TRUE(stats::ks_two_sample(residuals(rotated.batch, rw.w(), 2.0), residuals(direct, rw.w(), 2.0), alpha).pass);
    // Mapping back through R^T recovers w.
    const auto back = rotate(r.transpose(), rw.w());
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], w[i], 1e-14);
}

TEST(WorstToAverage, HclweIsRotationEquivariant) {
    const ClweParams p(3, 0.1, 2.0);
    Rng rng(10);
    const auto w = HiddenDirection::random(3, rng);
    const auto r = random_rotation(3, rng);
    const HiddenDirection rw(rotate(r, w.w()));
    const auto rotated = worst_to_average(generate_batch(Generator::hclwe, p, w, 30'000, 11), r);
    const auto direct = generate_batch(Generator::hclwe, p, rw, 30'000, 12);
    const std::vector<double> e0{1.0, 0.0, 0.0};
    const double alpha = stats::bonferroni(stats::kSignificance, 2);
    EXPECT_TRUE(stats::ks_two_sample(rotated.batch.projection(rw.w()), direct.projection(rw.w()), alpha).pass);
    EXPECT_TRUE(stats::ks_two_sample(rotated.batch.projection(e0), direct.projection(e0), alpha).pass);
}

TEST(Rejection, WindowMassPeaksAtZero) {
    for (double delta : {0.05, 0.1, 0.5, 0.99}) {
        const double m = window_mass(0.0, delta);
        EXPECT_LT(m, 4.0);
        for (double z = 0.01; z < 1.0; z += 0.01) EXPECT_LE(window_mass(z, delta), m);
        EXPECT_NEAR(window_mass(0.3, delta), window_mass(0.7, delta), 1e-15);
        EXPECT_NEAR(m, numerics::periodic_gaussian(0.0, delta), 1e-14);
    }
    EXPECT_THROW(RejectionSampler(RejectionConfig{1.0, 10}), ParameterError);
    EXPECT_THROW(RejectionSampler(RejectionConfig{0.0, 10}), ParameterError);
}

TEST(Rejection, NullInputGivesStandardGaussian) {
    Rng rng(13);
    BatchMetadata meta;
    meta.n = 2;
    meta.generator = "null-clwe";
    const auto out = clwe_to_hclwe_rejection([](Rng& g) { return sample_null_clwe(2, g); }, 20'000,
                                             RejectionConfig{0.1, 100'000}, rng, meta);
    ASSERT_EQ(out.batch.size(), 20'000u);
    Rng ref(14);
    std::vector<double> gauss;
    for (int i = 0; i < 20'000; ++i) gauss.push_back(ref.gaussian(1.0));
    const double alpha = stats::bonferroni(stats::kSignificance, 2);
    EXPECT_TRUE(stats::ks_two_sample(out.batch.coordinate(0), gauss, alpha).pass);
    EXPECT_TRUE(stats::ks_two_sample(out.batch.coordinate(1), gauss, alpha).pass);
}

TEST(Rejection, OutputMatchesDirectSamplerAndRateBound) {
    const ClweParams p(2, 0.1, 2.0);
    const double delta = 0.1;
    Rng rng(15);
    const auto w = HiddenDirection::random(2, rng);
    BatchMetadata meta;
    meta.n = 2;
    meta.beta = p.beta;
    meta.gamma = p.gamma;
    meta.generator = "clwe";
    const auto out = clwe_to_hclwe_rejection([&](Rng& g) { return sample_clwe(p, w, g); }, 50'000,
                                             RejectionConfig{delta, 100'000}, rng, meta);
    const auto target = rejection_output_params(p, delta);
    EXPECT_NEAR(target.beta, std::sqrt(0.02), 1e-15);
    const auto direct = generate_batch(Generator::hclwe, target, w, 50'000, 16);
    const std::vector<double> orth{-w[1], w[0]};
    const double alpha = stats::bonferroni(stats::kSignificance, 2);
    EXPECT_TRUE(stats::ks_two_sample(out.batch.projection(w.w()), direct.projection(w.w()), alpha).pass);
    EXPECT_TRUE(stats::ks_two_sample(out.batch.projection(orth), direct.projection(orth), alpha).pass);

    const auto ci = stats::wilson_interval(out.stats.accepted, out.stats.attempts, 0.99);
    EXPECT_GE(ci.lower, delta / 4);
    // Exact rate delta rho_{1/sqrt(beta^2+delta^2+gamma^2)}(Z) / M.
    const double scale = std::sqrt(p.beta * p.beta + delta * delta + p.gamma * p.gamma);
    const double exact = delta * numerics::periodic_gaussian(0.0, 1.0 / scale) / window_mass(0.0, delta);
    EXPECT_TRUE(ci.contains(exact)) << exact << " not in [" << ci.lower << ", " << ci.upper << "]";
}

TEST(Rejection, StarvationIsReported) {
    Rng rng(17);
    BatchMetadata meta;
    meta.n = 1;
    auto stuck = [](Rng&) { return ClweSample{{0.0}, 0.5}; };
    EXPECT_THROW(clwe_to_hclwe_rejection(stuck, 1, RejectionConfig{0.01, 1000}, rng, meta), BudgetError);
}

TEST(Rejection, BatchOverloadKeepsAcceptedRows) {
    const ClweParams p(2, 0.1, 2.0);
    const auto in = generate_batch(Generator::clwe, p, HiddenDirection::basis_vector(2, 0), 10'000, 18);
    Rng rng(19);
    const auto out = clwe_to_hclwe_rejection(in, RejectionConfig{0.1, 100'000}, rng);
    EXPECT_EQ(out.stats.attempts, 10'000u);
    EXPECT_EQ(out.batch.size(), out.stats.accepted);
    EXPECT_FALSE(out.batch.has_z());
    EXPECT_NEAR(out.batch.metadata().beta, std::sqrt(0.02), 1e-15);
}

TEST(AddNoiseRescale, ParameterIdentities) {
    for (auto [beta, gamma] : {std::pair{0.2, 2.0}, std::pair{0.5, 1.0}, std::pair{1e-3, 10.0}}) {
        const auto [bt, gt] = rescaled_params(beta, gamma);
        EXPECT_NEAR(gt * gt * (1 + (beta / gamma) * (beta / gamma)), gamma * gamma, 1e-12 * gamma * gamma);
        EXPECT_NEAR(bt / gt, beta / gamma, 1e-15);
        // Layer spacing and width in the mixture form.
        EXPECT_NEAR(gt / (bt * bt + gt * gt), 1.0 / std::hypot(gamma, beta), 1e-14);
        EXPECT_NEAR(bt / std::hypot(bt, gt), beta / std::hypot(gamma, beta), 1e-14);
    }
}

TEST(AddNoiseRescale, TinyBetaIsIdentity) {
    const ClweParams p(3, 0.0, 2.0);
    const auto in = generate_batch(Generator::hclwe_noiseless, p, HiddenDirection::basis_vector(3, 0), 500, 20);
    Rng rng(21);
    const auto out = add_noise_rescale(in, 1e-13, rng);
    for (std::size_t i = 0; i < in.y_data().size(); ++i) EXPECT_NEAR(out.batch.y_data()[i], in.y_data()[i], 1e-11);
}

TEST(AddNoiseRescale, MatchesDirectSampler) {
    const ClweParams p(2, 0.0, 2.0);
    Rng rng(22);
    const auto w = HiddenDirection::random(2, rng);
    const auto in = generate_batch(Generator::hclwe_noiseless, p, w, 50'000, 23);
    const auto out = add_noise_rescale(in, 0.2, rng);
    const ClweParams target(2, out.beta_tilde, out.gamma_tilde);
    const auto direct = generate_batch(Generator::hclwe, target, w, 50'000, 24);
    const std::vector<double> orth{-w[1], w[0]};
    const double alpha = stats::bonferroni(stats::kSignificance, 2);
    EXPECT_TRUE(stats::ks_two_sample(out.batch.projection(w.w()), direct.projection(w.w()), alpha).pass);
    EXPECT_TRUE(stats::ks_two_sample(out.batch.projection(orth), direct.projection(orth), alpha).pass);
    EXPECT_THROW(add_noise_rescale(direct, 0.2, rng), ParameterError);
}

namespace {

// (1/2) Z^2 with a dual point u = (2, -4) and an offset of norm |w| along a
// random direction; r, s1, s2 give gamma = 2 and beta ~ 0.36.
struct BddFixture {
    lattice::Lattice lat = lattice::Lattice::scaled_integer_lattice(2, make_real(0.5));
    BddTransformParams params{20.0, 3.0, 0.2, 1e-10};
    std::vector<double> dir;
    BddInstance instance;

    explicit BddFixture(Rng& rng, double offset_norm = -1.0) : instance{lat, {}, {}, 0.0} {
        if (offset_norm < 0) offset_norm = 2.0 * params.t() / (params.r * params.r);
        const auto w = HiddenDirection::random(2, rng);
        dir = w.w();
        const Real u0 = make_real(2.0), u1 = make_real(-4.0);
        instance.offset = {make_real(offset_norm) * w.precise()[0], make_real(offset_norm) * w.precise()[1]};
        instance.target = {u0 + instance.offset[0], u1 + instance.offset[1]};
        instance.distance_bound = offset_norm;
    }
};

}  // namespace

TEST(BddToClwe, ParameterIdentitiesAreExact) {
    const BddTransformParams p{20.0, 3.0, 0.2};
    const double wn = 0.1;
    const auto out = bdd_output_params(p, wn, 2);
    const double t = std::sqrt(409.0);
    EXPECT_DOUBLE_EQ(p.t(), t);
    EXPECT_DOUBLE_EQ(out.gamma, wn * 400.0 / t);
    EXPECT_DOUBLE_EQ(out.beta, wn * std::sqrt((60.0 / t) * (60.0 / t) + (0.2 / wn) * (0.2 / wn)));
    EXPECT_DOUBLE_EQ(p.r_prime(), 400.0 / t);
    EXPECT_DOUBLE_EQ(p.s1_prime(), 60.0 / t);
}

TEST(BddToClwe, RefusesWhenSmoothingFails) {
    Rng rng(25);
    BddFixture f(rng);
    f.params.s2 = 0.01;
    const lattice::DiscreteGaussianSampler dgs({f.lat, {}, make_real(f.params.r)});
    auto source = [&](Rng& g) { return dgs.sample(g); };
    EXPECT_THROW(bdd_to_clwe(f.instance, f.params, source, 10, rng), PreconditionError);
    const auto pre = bdd_precondition(f.lat, f.params, 0.1);
    EXPECT_FALSE(pre.holds);
}

TEST(BddToClwe, ZeroOffsetGivesNoiseModOne) {
    Rng rng(26);
    BddFixture f(rng, 0.0);
    const lattice::DiscreteGaussianSampler dgs({f.lat, {}, make_real(f.params.r)});
    f.params.s2 = 0.3;
    const auto out = bdd_to_clwe(f.instance, f.params, [&](Rng& g) { return dgs.sample(g); }, 20'000, rng);
    EXPECT_FALSE(out.params.has_value());
    std::vector<double> direct;
    Rng ref(27);
    for (int i = 0; i < 20'000; ++i) direct.push_back(mod1(ref.gaussian(0.3)));
    EXPECT_TRUE(stats::ks_two_sample(out.batch.z_data(), direct).pass);
}

TEST(BddToClwe, MatchesDirectClweSampler) {
    Rng rng(28);
    BddFixture f(rng);
    const lattice::DiscreteGaussianSampler dgs({f.lat, {}, make_real(f.params.r)});
    const auto out = bdd_to_clwe(f.instance, f.params, [&](Rng& g) { return dgs.sample(g); }, 50'000, rng);
    ASSERT_TRUE(out.params.has_value());
    EXPECT_TRUE(out.precondition.holds);
    EXPECT_NEAR(out.params->gamma, 2.0, 1e-12);
    const HiddenDirection w(out.direction);
    const auto direct = generate_batch(Generator::clwe, *out.params, w, 50'000, 29);
    const double alpha = stats::bonferroni(stats::kSignificance, 2);
    EXPECT_TRUE(stats::ks_two_sample(out.batch.projection(w.w()), direct.projection(w.w()), alpha).pass);
    EXPECT_TRUE(stats::ks_two_sample(residuals(out.batch, w.w(), out.params->gamma),
                                     residuals(direct, w.w(), out.params->gamma), alpha)
                    .pass);
    const double se = kVar * std::sqrt(2.0 / 50'000);
    EXPECT_NEAR(mean_square(out.batch.coordinate(0)), kVar, 4.0 * se);
    EXPECT_NEAR(mean_square(out.batch.coordinate(1)), kVar, 4.0 * se);
}

TEST(ConditionalCoset, ClosedFormCases) {
    const Vector<Real> y{make_real(1.0), make_real(-3.0)};
    const auto a = conditional_coset_params(make_real(1.0), make_real(1.0), y);
    EXPECT_NEAR(to_double(a.center[0]), 0.5, 1e-70);
    EXPECT_NEAR(to_double(a.center[1]), -1.5, 1e-70);
    EXPECT_NEAR(to_double(a.width), 1.0 / std::sqrt(2.0), 1e-15);
    const auto b = conditional_coset_params(make_real(2.0), make_real(1e8), y);
    EXPECT_NEAR(to_double(b.center[0]), 0.0, 1e-15);
    EXPECT_NEAR(to_double(b.width), 2.0, 1e-15);
    EXPECT_THROW(conditional_coset_params(make_real(0.0), make_real(1.0), y), ParameterError);
}

TEST(ConditionalCoset, MatchesSimulationOnIntegers) {
    const double r = 2.0, s = 1.0, ybar = 1.3;
    const auto c = conditional_coset_params(make_real(r), make_real(s), {make_real(ybar)});
    const double centre = to_double(c.center[0]), width = to_double(c.width);
    Rng rng(30);
    const long lo = -4, hi = 6;
    std::vector<std::size_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
    std::size_t kept = 0;
    while (kept < 10'000) {
        const long x = lattice::sample_integer_gaussian(0.0, r, rng);
        const double v = rng.gaussian(s);
        if (std::abs(static_cast<double>(x) + v - ybar) >= 0.01) continue;
        ++kept;
        if (x >= lo && x <= hi) counts[static_cast<std::size_t>(x - lo)]++;
    }
    double total = 0.0;
    for (long k = -50; k <= 50; ++k) total += numerics::rho(static_cast<double>(k) - centre, width);
    std::vector<double> probs;
    for (long k = lo; k <= hi; ++k) probs.push_back(numerics::rho(static_cast<double>(k) - centre, width) / total);
    EXPECT_TRUE(stats::chi_square_pmf(counts, probs).pass);
}

TEST(EmbedHybrid, NullInputAtIndexZeroIsGaussian) {
    const std::size_t m = 3, n = 6;
    const ClweParams p(n, 0.1, 2.0);
    const ClweParams small(n - m + 1, 0.1, 2.0);
    const auto in = generate_batch(Generator::null_gaussian, small, HiddenDirection::basis_vector(4, 0), 50'000, 31);
    Rng rng(32);
    const auto out = embed_hybrid(in, 0, m, p, rng);
    ASSERT_EQ(out.batch.dimension(), n);
    const double se = kVar * std::sqrt(2.0 / 50'000);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(mean_square(out.batch.coordinate(j)), kVar, 4.0 * se);
}

TEST(EmbedHybrid, UnrotatingRecoversBlockStructure) {
    const std::size_t m = 3, n = 6;
    const ClweParams p(n, 0.05, 2.0);
    const ClweParams small(n - m + 1, 0.05, 2.0);
    const auto w = HiddenDirection::basis_vector(4, 0);
    const auto in = generate_batch(Generator::hclwe, small, w, 2000, 33);
    Rng rng(34);
    const auto out = embed_hybrid(in, m - 1, m, p, rng);
    const auto rt = out.rotation.transpose();
    const double spacing = p.layer_spacing();
    const double sd = numerics::width_to_stddev(p.layer_width());
    std::size_t layered = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const auto back = rotate(rt, out.batch.y(i));
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(back[j], in.y(i)[j], 1e-12);
        for (std::size_t j = 4; j < 6; ++j) {
            const double q = back[j] / spacing;
            layered += std::abs(q - std::round(q)) * spacing < 5.0 * sd;
        }
    }
    EXPECT_EQ(layered, 2 * in.size());
}

TEST(EmbedHybrid, ValidatesArguments) {
    const ClweParams p(6, 0.1, 2.0);
    const ClweParams small(4, 0.1, 2.0);
    const auto in = generate_batch(Generator::null_gaussian, small, HiddenDirection::basis_vector(4, 0), 10, 35);
    Rng rng(36);
    EXPECT_THROW(embed_hybrid(in, 0, 2, p, rng), ParameterError);
    EXPECT_THROW(embed_hybrid(in, 3, 3, p, rng), ParameterError);
    const auto with_z = generate_batch(Generator::null_clwe, small, HiddenDirection::basis_vector(4, 0), 10, 37);
    EXPECT_THROW(embed_hybrid(with_z, 0, 3, p, rng), ParameterError);
}

TEST(Provenance, BatchIdsAreContentHashes) {
    const ClweParams p(2, 0.1, 2.0);
    const auto w = HiddenDirection::basis_vector(2, 0);
    const auto a = generate_batch(Generator::clwe, p, w, 100, 38);
    const auto b = generate_batch(Generator::clwe, p, w, 100, 38);
    const auto c = generate_batch(Generator::clwe, p, w, 100, 39);
    EXPECT_EQ(batch_id(a), batch_id(b));
    EXPECT_NE(batch_id(a), batch_id(c));
    EXPECT_EQ(batch_id(a).size(), 16u);
    Rng rng(40);
    const auto r = clwe_to_hclwe_rejection(a, RejectionConfig{0.1, 1000}, rng);
    const auto j = to_json(make_provenance(a, "rejection", {{"delta", 0.1}}, r.batch, to_json(r.stats)));
    EXPECT_EQ(j.at("input_batch"), batch_id(a));
    EXPECT_EQ(j.at("output_batch"), batch_id(r.batch));
    EXPECT_EQ(j.at("acceptance").at("attempts"), 100);
}
