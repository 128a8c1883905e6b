#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/distributions/params.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/lattice/lattice.hpp"

#include "json.hpp"

#include <functional>
#include <optional>

namespace clwe::reductions {

// Widths of the BDD -> CLWE sample transformation.
struct BddTransformParams {
    double r = 0.0;   // width of the discrete Gaussian samples on L
    double s1 = 0.0;  // smoothing noise added to x
    double s2 = 0.0;  // noise added to the inner product
    double epsilon = 1e-10;

    double t() const;        // sqrt(r^2 + s1^2)
    double r_prime() const;  // r^2 / t
    double s1_prime() const; // r s1 / t
    void validate() const;
};

// Target u + w with u in L*; the offset w is known to the generator only
// for reporting the output parameters.
struct BddInstance {
    lattice::Lattice lattice;
    Vector<Real> target;
    Vector<Real> offset;
    double distance_bound = 0.0;  // d with |offset| <= d

    void validate() const;
};

// beta = |w| sqrt((r s1/t)^2 + (s2/|w|)^2), gamma = |w| r^2 / t.
distributions::ClweParams bdd_output_params(const BddTransformParams& p, double offset_norm, std::size_t n);

struct BddPrecondition {
    double lhs = 0.0;  // r s1 / sqrt(|w|^2 (r s1/s2)^2 + t^2)
    double eta = 0.0;  // eta_eps(L) by theta bisection; dimension <= 4
    bool holds = false;
};

BddPrecondition bdd_precondition(const lattice::Lattice& lattice, const BddTransformParams& p, double offset_norm);

using LatticeSource = std::function<Vector<Real>(Rng&)>;

struct BddTransformResult {
    distributions::SampleBatch batch;
    // Absent for a zero offset, where z is pure noise e mod 1.
    std::optional<distributions::ClweParams> params;
    std::vector<double> direction;  // w / |w|, empty for a zero offset
    BddPrecondition precondition;
};

// For each x ~ D_{L, r}: y = (x + v)/t, z = (<x, u + w> + e) mod 1 with
// v ~ D_{R^n, s1}, e ~ D_{s2}, all at the lattice's precision. Throws
// PreconditionError instead of emitting samples when the smoothing
// condition fails.
BddTransformResult bdd_to_clwe(const BddInstance& instance, const BddTransformParams& p, const LatticeSource& source,
                               std::size_t count, Rng& rng);

struct CosetParams {
    Vector<Real> center;  // (r/t)^2 y_bar
    Real width;           // r s / t
};

// Law of x given x + v = y_bar for x ~ D_{L, r}, v ~ D_{R^n, s}: centre +
// D_{L - centre, width}.
CosetParams conditional_coset_params(const Real& r, const Real& s, const Vector<Real>& y_bar);

nlohmann::json to_json(const BddTransformParams& p);
nlohmann::json to_json(const BddPrecondition& p);

}  // namespace clwe::reductions
