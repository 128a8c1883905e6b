#include "clwe/distributions/params.hpp"

#include "clwe/error.hpp"

#include <cmath>
#include <string>

namespace clwe::distributions {

ClweParams::ClweParams(std::size_t n_, double beta_, double gamma_, double ratio_bound_)
    : n(n_), beta(beta_), gamma(gamma_), ratio_bound(ratio_bound_) {
    if (n == 0) throw ParameterError("CLWE: dimension must be positive");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("CLWE: beta must be finite and >= 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("CLWE: gamma must be finite and > 0");
    if (ratio_bound <= 0.0) ratio_bound = static_cast<double>(n) * static_cast<double>(n);
    hardness_regime = beta > 0.0 && beta < 1.0 && gamma >= 2.0 * std::sqrt(static_cast<double>(n)) &&
                      gamma / beta <= ratio_bound;
}

double ClweParams::layer_scale() const { return std::hypot(beta, gamma); }
double ClweParams::layer_spacing() const { return gamma / (beta * beta + gamma * gamma); }
double ClweParams::layer_width() const { return beta / layer_scale(); }

nlohmann::json to_json(const ClweParams& p) {
    return {{"n", p.n},
            {"beta", p.beta},
            {"gamma", p.gamma},
            {"ratio_bound", p.ratio_bound},
            {"hardness_regime", p.hardness_regime}};
}

ClweParams params_from_json(const nlohmann::json& j) {
    return ClweParams(j.at("n").get<std::size_t>(), j.at("beta").get<double>(), j.at("gamma").get<double>(),
                      j.value("ratio_bound", 0.0));
}

namespace {

Vector<Real> normalized(Vector<Real> v) {
    if (v.empty()) throw ParameterError("hidden direction must be nonempty");
    const Real norm = sqrt(norm_squared(v));
    if (!(norm > 0)) throw ParameterError("hidden direction must be nonzero");
    for (auto& x : v) x /= norm;
    return v;
}

std::vector<double> to_doubles(const Vector<Real>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

}  // namespace

HiddenDirection::HiddenDirection(std::vector<double> w) {
    double n2 = 0.0;
    for (double x : w) n2 += x * x;
    if (w.empty() || std::abs(std::sqrt(n2) - 1.0) > kOrthonormalTolerance)
        throw ParameterError("hidden direction must be a unit vector");
    Vector<Real> p(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) p[i] = make_real(w[i]);
    precise_ = normalized(std::move(p));
    w_ = to_doubles(precise_);
}

HiddenDirection::HiddenDirection(Vector<Real> w) {
    if (w.empty()) throw ParameterError("hidden direction must be nonempty");
    PrecisionScope scope(precision_bits(w.front()));
    const Real n2 = norm_squared(w);
    if (abs(sqrt(n2) - 1) > kOrthonormalTolerance) throw ParameterError("hidden direction must be a unit vector");
    precise_ = normalized(std::move(w));
    w_ = to_doubles(precise_);
}

HiddenDirection HiddenDirection::random(std::size_t n, Rng& rng, unsigned bits) {
    PrecisionScope scope(bits);
    Vector<Real> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = make_real(rng.normal(), bits);
    return HiddenDirection(normalized(std::move(g)));
}

HiddenDirection HiddenDirection::basis_vector(std::size_t n, std::size_t i) {
    if (i >= n) throw ParameterError("basis vector index out of range");
    std::vector<double> w(n, 0.0);
    w[i] = 1.0;
    return HiddenDirection(std::move(w));
}

double HiddenDirection::project(std::span<const double> y) const {
    if (y.size() != w_.size()) throw ParameterError("projection: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * w_[i];
    return s;
}

HiddenSubspace::HiddenSubspace(std::size_t n, std::size_t m, std::vector<double> w)
    : n_(n), m_(m), w_(std::move(w)) {
    if (m > n) throw ParameterError("hidden subspace: rank exceeds dimension");
    if (w_.size() != n * m) throw ParameterError("hidden subspace: matrix has wrong size");
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) {
            double g = 0.0;
            for (std::size_t i = 0; i < n; ++i) g += w_[i * m + a] * w_[i * m + b];
            if (std::abs(g - (a == b ? 1.0 : 0.0)) > kOrthonormalTolerance)
                throw ParameterError("hidden subspace: columns are not orthonormal (entry " + std::to_string(a) +
                                     "," + std::to_string(b) + ")");
        }
}

HiddenSubspace HiddenSubspace::from_columns(const std::vector<std::vector<double>>& columns, std::size_t n) {
    const std::size_t m = columns.size();
    std::vector<double> w(n * m);
    for (std::size_t j = 0; j < m; ++j) {
        if (columns[j].size() != n) throw ParameterError("hidden subspace: column has wrong length");
        for (std::size_t i = 0; i < n; ++i) w[i * m + j] = columns[j][i];
    }
    return HiddenSubspace(n, m, std::move(w));
}

HiddenSubspace HiddenSubspace::random(std::size_t n, std::size_t m, Rng& rng) {
    if (m > n) throw ParameterError("hidden subspace: rank exceeds dimension");
    // Gram-Schmidt run twice per column keeps orthogonality at 1e-15.
    std::vector<std::vector<double>> cols;
    while (cols.size() < m) {
        std::vector<double> v(n);
        for (auto& x : v) x = rng.normal();
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& c : cols) {
                double d = 0.0;
                for (std::size_t i = 0; i < n; ++i) d += v[i] * c[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= d * c[i];
            }
        double n2 = 0.0;
        for (double x : v) n2 += x * x;
        if (n2 < 1e-20) continue;
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& x : v) x *= inv;
        cols.push_back(std::move(v));
    }
    return from_columns(cols, n);
}

HiddenSubspace HiddenSubspace::leading_axes(std::size_t n, std::size_t m) {
    if (m > n) throw ParameterError("hidden subspace: rank exceeds dimension");
    std::vector<double> w(n * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) w[j * m + j] = 1.0;
    return HiddenSubspace(n, m, std::move(w));
}

std::vector<double> HiddenSubspace::column(std::size_t j) const {
    if (j >= m_) throw ParameterError("hidden subspace: column index out of range");
    std::vector<double> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = w_[i * m_ + j];
    return c;
}

}  // namespace clwe::distributions
