#pragma once

#include "clwe/harness/rng.hpp"
#include "clwe/numerics/matrix.hpp"
#include "clwe/numerics/real.hpp"

#include "json.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace clwe::distributions {

// CLWE_{beta, gamma} in dimension n. beta = 0 is the noiseless problem.
struct ClweParams {
    std::size_t n = 0;
    double beta = 0.0;
    double gamma = 1.0;
    // gamma / beta must stay below this for the hardness regime; the default
    // n^2 stands in for "polynomially bounded".
    double ratio_bound = 0.0;
    bool hardness_regime = false;

    ClweParams() = default;
    ClweParams(std::size_t n, double beta, double gamma, double ratio_bound = 0.0);

    // sqrt(beta^2 + gamma^2)
    double layer_scale() const;
    // Spacing gamma / (beta^2 + gamma^2) of the hCLWE layers along w.
    double layer_spacing() const;
    // Width beta / sqrt(beta^2 + gamma^2) of each layer.
    double layer_width() const;
};

nlohmann::json to_json(const ClweParams& p);
ClweParams params_from_json(const nlohmann::json& j);

// Secret unit direction w. The double copy drives the statistics paths; the
// Real copy drives solver-precision samples.
class HiddenDirection {
public:
    explicit HiddenDirection(std::vector<double> w);
    explicit HiddenDirection(Vector<Real> w);

    static HiddenDirection random(std::size_t n, Rng& rng, unsigned bits = kDefaultPrecisionBits);
    static HiddenDirection basis_vector(std::size_t n, std::size_t i);

    std::size_t dimension() const { return w_.size(); }
    const std::vector<double>& w() const { return w_; }
    const Vector<Real>& precise() const { return precise_; }
    double operator[](std::size_t i) const { return w_[i]; }

    double project(std::span<const double> y) const;

private:
    std::vector<double> w_;
    Vector<Real> precise_;
};

// n x m matrix W with orthonormal columns spanning the hidden subspace.
class HiddenSubspace {
public:
    HiddenSubspace(std::size_t n, std::size_t m, std::vector<double> columns_row_major);
    static HiddenSubspace from_columns(const std::vector<std::vector<double>>& columns, std::size_t n);
    static HiddenSubspace random(std::size_t n, std::size_t m, Rng& rng);
    static HiddenSubspace leading_axes(std::size_t n, std::size_t m);

    std::size_t dimension() const { return n_; }
    std::size_t rank() const { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return w_[i * m_ + j]; }
    std::vector<double> column(std::size_t j) const;

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<double> w_;
};

inline constexpr double kOrthonormalTolerance = 1e-10;

}  // namespace clwe::distributions
