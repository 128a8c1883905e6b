#include "clwe/solvers/sq.hpp"

#include "clwe/distributions/density.hpp"
#include "clwe/error.hpp"
#include "clwe/numerics/theta.hpp"

#include <cmath>
#include <numbers>

namespace clwe::solvers {

namespace {
constexpr double kPi = std::numbers::pi;
}

void SqCorrParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("sq corr: alpha must lie in [0, 1]");
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("sq corr: beta must lie in (0, 1)");
    if (!(gamma >= 1.0)) throw ParameterError("sq corr: gamma must be >= 1");
}

Real SqCorrParams::zeta(unsigned bits) const {
    const Real b = make_real(beta, bits), g = make_real(gamma, bits), a = make_real(alpha, bits);
    const Real s2 = b * b + g * g;
    return sqrt(s2 - a * a * g * g * g * g / s2);
}

lattice::Lattice SqCorrParams::l1(unsigned bits) const {
    const Real b = make_real(beta, bits), g = make_real(gamma, bits);
    const Real inv = 1 / sqrt(b * b + g * g);
    Matrix<Real> basis(2, 2, make_real(0.0, bits));
    basis(0, 0) = inv;
    basis(1, 1) = inv;
    return lattice::Lattice(std::move(basis));
}

lattice::Lattice SqCorrParams::l2(unsigned bits) const {
    const Real b = make_real(beta, bits), g = make_real(gamma, bits), a = make_real(alpha, bits);
    const Real s = sqrt(b * b + g * g);
    const Real z = zeta(bits);
    Matrix<Real> basis(2, 2, make_real(0.0, bits));
    basis(0, 0) = 1 / s;
    basis(1, 0) = -a * g * g / (z * s) / s;
    basis(1, 1) = s / z / s;
    return lattice::Lattice(std::move(basis));
}

SqCorrResult sq_corr_closed_form(const SqCorrParams& p, double tol) {
    p.validate();
    const unsigned bits = kDefaultPrecisionBits;
    const auto l1d = lattice::dual(p.l1(bits));
    const auto l2d = lattice::dual(p.l2(bits));
    const Real one = make_real(1.0, bits);
    const auto m1 = numerics::gaussian_mass(l1d, one, tol);
    const auto m2 = numerics::gaussian_mass(l2d, one, tol);
    SqCorrResult r;
    r.chi = m2.mass / m1.mass - 1;
    // |a/b - A/B| <= (|a - A| + (A/B)|b - B|) / b, masses >= 1.
    r.tail_bound = (m2.tail_bound + to_double(m2.mass / m1.mass) * m1.tail_bound) / to_double(m1.mass);
    r.same_direction = p.alpha == 1.0;
    if (r.same_direction) {
        const double ratio = p.gamma / p.beta;
        r.bound = 2.0 * ratio * ratio;
        const auto scaled = numerics::gaussian_mass(l2d.scaled(make_real(ratio, bits)), one, tol);
        r.same_direction_bound = ratio * ratio * to_double(scaled.mass / m1.mass);
    } else {
        r.bound = 8.0 * std::exp(-kPi * p.gamma * p.gamma * (1.0 - p.alpha * p.alpha));
    }
    return r;
}

MonteCarloEstimate sq_corr_monte_carlo(const std::vector<double>& v, const std::vector<double>& w, double beta,
                                       double gamma, std::size_t samples, Rng& rng) {
    if (v.size() != w.size() || v.empty()) throw ParameterError("sq corr mc: directions must share a dimension");
    if (samples < 10'000) throw ParameterError("sq corr mc: need at least 1e4 samples");
    if (!(beta > 0.0) || !(gamma > 0.0)) throw ParameterError("sq corr mc: need beta, gamma > 0");
    const std::size_t n = v.size();
    std::vector<double> x(n);
    // Welford running mean and variance.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        double tv = 0.0, tw = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = rng.gaussian(1.0);
            tv += x[k] * v[k];
            tw += x[k] * w[k];
        }
        const double f = distributions::hclwe_density_ratio(tw, beta, gamma) *
                             distributions::hclwe_density_ratio(tv, beta, gamma) -
                         1.0;
        const double d = f - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (f - mean);
    }
    const double var = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

Packing generate_packing(std::size_t n, double alpha_max, std::size_t target_size, Rng& rng,
                         std::size_t max_attempts) {
    if (n < 2) throw ParameterError("packing: n must be >= 2");
    if (!(alpha_max > 0.0 && alpha_max < 1.0)) throw ParameterError("packing: alpha_max must lie in (0, 1)");
    Packing out;
    std::vector<double> u(n);
    while (out.vectors.size() < target_size && out.attempts < max_attempts) {
        ++out.attempts;
        double norm = 0.0;
        for (auto& c : u) {
            c = rng.normal();
            norm += c * c;
        }
        norm = std::sqrt(norm);
        for (auto& c : u) c /= norm;
        bool ok = true;
        for (const auto& k : out.vectors) {
            double ip = 0.0;
            for (std::size_t i = 0; i < n; ++i) ip += u[i] * k[i];
            if (std::abs(ip) > alpha_max) {
                ok = false;
                break;
            }
        }
        if (ok) out.vectors.push_back(u);
    }
    out.complete = out.vectors.size() >= target_size;
    return out;
}

double max_pairwise_inner_product(const std::vector<std::vector<double>>& vectors) {
    double best = 0.0;
    for (std::size_t a = 0; a < vectors.size(); ++a)
        for (std::size_t b = a + 1; b < vectors.size(); ++b) {
            double ip = 0.0;
            for (std::size_t i = 0; i < vectors[a].size(); ++i) ip += vectors[a][i] * vectors[b][i];
            best = std::max(best, std::abs(ip));
        }
    return best;
}

SqBoundParams SqBoundParams::for_packing(double beta, double gamma, double tau, double eta,
                                         std::size_t packing_size) {
    if (!(beta > 0.0) || !(gamma > 0.0)) throw ParameterError("sq bound: need beta, gamma > 0");
    SqBoundParams p;
    p.tau = tau;
    p.eta = eta;
    p.packing_size = packing_size;
    p.delta_corr = 2.0 * (gamma / beta) * (gamma / beta);
    p.eps_corr = 8.0 * std::exp(-kPi * gamma * gamma / 2.0);
    return p;
}

void SqBoundParams::validate() const {
    if (!(eta >= 0.5 && eta <= 1.0)) throw ParameterError("sq bound: eta must lie in [1/2, 1]");
    if (!(delta_corr > 0.0)) throw ParameterError("sq bound: delta_corr must be > 0");
    if (!(eps_corr >= 0.0)) throw ParameterError("sq bound: eps_corr must be >= 0");
    const double need = std::sqrt(2.0 * eps_corr);
    if (!(tau >= need * (1.0 - 1e-12)))
        throw PreconditionError("sq bound: tau = " + std::to_string(tau) + " is below sqrt(2 eps) = " +
                                std::to_string(need));
}

Real sq_query_lower_bound(const SqBoundParams& p) {
    p.validate();
    const Real tau = make_real(p.tau);
    return (2 * make_real(p.eta) - 1) * static_cast<double>(p.packing_size) * tau * tau / (2 * make_real(p.delta_corr));
}

nlohmann::json to_json(const SqCorrResult& r) {
    nlohmann::json j = {{"chi", to_decimal_string(r.chi)},
                        {"tail_bound", r.tail_bound},
                        {"bound", r.bound},
                        {"same_direction", r.same_direction}};
    if (r.same_direction) j["same_direction_bound"] = r.same_direction_bound;
    return j;
}

nlohmann::json to_json(const MonteCarloEstimate& r) {
    return {{"estimate", r.estimate}, {"std_error", r.std_error}, {"samples", r.samples}};
}

nlohmann::json to_json(const SqBoundParams& p) {
    return {{"tau", p.tau},
            {"eta", p.eta},
            {"packing_size", p.packing_size},
            {"delta_corr", p.delta_corr},
            {"eps_corr", p.eps_corr}};
}

}  // namespace clwe::solvers
