#include "clwe/reductions/bdd.hpp"

#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"
#include "clwe/lattice/smoothing.hpp"

#include <cmath>
#include <sstream>

namespace clwe::reductions {

double BddTransformParams::t() const { return std::hypot(r, s1); }
double BddTransformParams::r_prime() const { return r * r / t(); }
double BddTransformParams::s1_prime() const { return r * s1 / t(); }

void BddTransformParams::validate() const {
    if (!(r > 0.0 && s1 > 0.0 && s2 > 0.0)) throw ParameterError("bdd2clwe: r, s1, s2 must be > 0");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("bdd2clwe: epsilon must lie in (0, 1/2)");
}

void BddInstance::validate() const {
    const std::size_t n = lattice.dimension();
    if (target.size() != n || offset.size() != n) throw ParameterError("bdd2clwe: instance dimension mismatch");
    if (distance_bound > 0.0 && to_double(sqrt(norm_squared(offset))) > distance_bound * (1 + 1e-12))
        throw ParameterError("bdd2clwe: offset exceeds the instance distance bound");
}

distributions::ClweParams bdd_output_params(const BddTransformParams& p, double offset_norm, std::size_t n) {
    p.validate();
    if (!(offset_norm > 0.0)) throw ParameterError("bdd2clwe: offset must be nonzero for CLWE output");
    const double a = p.s1_prime();
    const double b = p.s2 / offset_norm;
    const double beta = offset_norm * std::sqrt(a * a + b * b);
    const double gamma = offset_norm * p.r_prime();
    return distributions::ClweParams(n, beta, gamma);
}

BddPrecondition bdd_precondition(const lattice::Lattice& lattice, const BddTransformParams& p, double offset_norm) {
    p.validate();
    if (lattice.dimension() > 4) throw ParameterError("bdd2clwe: smoothing check supports dimension <= 4");
    BddPrecondition c;
    const double rs = p.r * p.s1;
    const double q = offset_norm * rs / p.s2;
    const double t = p.t();
    c.lhs = rs / std::sqrt(q * q + t * t);
    c.eta = lattice::smoothing_parameter(lattice, p.epsilon);
    c.holds = c.lhs >= c.eta;
    return c;
}

BddTransformResult bdd_to_clwe(const BddInstance& instance, const BddTransformParams& p, const LatticeSource& source,
                               std::size_t count, Rng& rng) {
    instance.validate();
    p.validate();
    const std::size_t n = instance.lattice.dimension();
    const unsigned bits = instance.lattice.precision();
    PrecisionScope scope(bits);
    const Real offset_norm = sqrt(norm_squared(instance.offset));
    const double wn = to_double(offset_norm);

    BddPrecondition pre = bdd_precondition(instance.lattice, p, wn);
    if (!pre.holds) {
        std::ostringstream msg;
        msg << "bdd2clwe: smoothing precondition fails (r s1 / sqrt(|w|^2 (r s1/s2)^2 + t^2) = " << pre.lhs
            << " < eta_eps(L) = " << pre.eta << "); refusing to emit samples";
        throw PreconditionError(msg.str());
    }

    std::optional<distributions::ClweParams> params;
    std::vector<double> direction;
    if (wn > 0.0) {
        params = bdd_output_params(p, wn, n);
        for (std::size_t i = 0; i < n; ++i) direction.push_back(to_double(instance.offset[i] / offset_norm));
    }

    distributions::BatchMetadata meta;
    meta.n = n;
    meta.beta = params ? params->beta : p.s2;
    meta.gamma = params ? params->gamma : 0.0;
    meta.seed = rng.master_seed();
    meta.generator = "bdd2clwe";
    meta.extra = {{"transform", to_json(p)}, {"precondition", to_json(pre)}};
    distributions::SampleBatch out(std::move(meta), true);
    out.reserve(count);

    const Real t = make_real(p.t(), bits);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < count; ++k) {
        const Vector<Real> x = source(rng);
        if (x.size() != n) throw ParameterError("bdd2clwe: lattice sample has wrong dimension");
        Real inner = make_real(0.0, bits);
        for (std::size_t i = 0; i < n; ++i) {
            inner += x[i] * instance.target[i];
            y[i] = to_double((x[i] + make_real(rng.gaussian(p.s1), bits)) / t);
        }
        double z = to_double(distributions::mod1(inner + make_real(rng.gaussian(p.s2), bits)));
        if (z >= 1.0) z = 0.0;
        out.append(y, z);
    }
    out.seal();
    return {std::move(out), params, std::move(direction), pre};
}

CosetParams conditional_coset_params(const Real& r, const Real& s, const Vector<Real>& y_bar) {
    if (!(r > 0) || !(s > 0)) throw ParameterError("conditional coset: widths must be > 0");
    const unsigned bits = std::max(precision_bits(r), precision_bits(s));
    PrecisionScope scope(bits);
    const Real t2 = r * r + s * s;
    const Real factor = r * r / t2;
    CosetParams c;
    c.center.reserve(y_bar.size());
    for (const auto& v : y_bar) c.center.push_back(factor * v);
    c.width = r * s / sqrt(t2);
    return c;
}

nlohmann::json to_json(const BddTransformParams& p) {
    return {{"r", p.r}, {"s1", p.s1}, {"s2", p.s2}, {"epsilon", p.epsilon}, {"t", p.t()}};
}

nlohmann::json to_json(const BddPrecondition& p) {
    return {{"lhs", p.lhs}, {"eta", p.eta}, {"holds", p.holds}};
}

}  // namespace clwe::reductions
