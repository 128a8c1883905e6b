#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/numerics/matrix.hpp"

#include <span>
#include <vector>

namespace clwe::reductions {

// Haar-distributed orthogonal matrix: Q from the QR factorization of a
// Gaussian matrix, with column signs fixed so that diag(R) > 0.
Matrix<double> random_rotation(std::size_t n, Rng& rng);

std::vector<double> rotate(const Matrix<double>& r, std::span<const double> y);

// Max |(R^T R - I)_{ij}|.
double orthogonality_defect(const Matrix<double>& r);

struct RotatedBatch {
    distributions::SampleBatch batch;
    Matrix<double> rotation;
};

// y -> R y with z kept. Samples from A_{w} become samples from A_{R w};
// a direction u recovered from the output maps back to the input as R^T u.
RotatedBatch worst_to_average(const distributions::SampleBatch& batch, Rng& rng);
RotatedBatch worst_to_average(const distributions::SampleBatch& batch, const Matrix<double>& rotation);

}  // namespace clwe::reductions
