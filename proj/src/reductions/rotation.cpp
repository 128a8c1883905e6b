#include "clwe/reductions/rotation.hpp"

#include "clwe/error.hpp"

#include <cmath>

namespace clwe::reductions {

Matrix<double> random_rotation(std::size_t n, Rng& rng) {
    if (n == 0) throw ParameterError("random_rotation: n must be >= 1");
    // Modified Gram-Schmidt over the columns of a Gaussian matrix, applied
    // twice; the positive projections make this the QR factor with diag(R) > 0.
    for (;;) {
        Matrix<double> q(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) q(i, j) = rng.normal();
        bool degenerate = false;
        for (std::size_t j = 0; j < n && !degenerate; ++j) {
            double r_jj = 0.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < j; ++k) {
                    double d = 0.0;
                    for (std::size_t i = 0; i < n; ++i) d += q(i, k) * q(i, j);
                    for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
                }
                double n2 = 0.0;
                for (std::size_t i = 0; i < n; ++i) n2 += q(i, j) * q(i, j);
                r_jj = std::sqrt(n2);
                if (r_jj < 1e-10) {
                    degenerate = true;
                    break;
                }
                for (std::size_t i = 0; i < n; ++i) q(i, j) /= r_jj;
            }
        }
        if (!degenerate) return q;
    }
}

std::vector<double> rotate(const Matrix<double>& r, std::span<const double> y) {
    if (r.cols() != y.size()) throw ParameterError("rotate: dimension mismatch");
    std::vector<double> out(r.rows(), 0.0);
    for (std::size_t i = 0; i < r.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < r.cols(); ++j) s += r(i, j) * y[j];
        out[i] = s;
    }
    return out;
}

double orthogonality_defect(const Matrix<double>& r) {
    double worst = 0.0;
    for (std::size_t a = 0; a < r.cols(); ++a)
        for (std::size_t b = 0; b < r.cols(); ++b) {
            double g = 0.0;
            for (std::size_t i = 0; i < r.rows(); ++i) g += r(i, a) * r(i, b);
            worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

RotatedBatch worst_to_average(const distributions::SampleBatch& batch, const Matrix<double>& rotation) {
    const std::size_t n = batch.dimension();
    if (!rotation.square() || rotation.rows() != n) throw ParameterError("worst_to_average: rotation has wrong size");
    if (orthogonality_defect(rotation) > 1e-10) throw ParameterError("worst_to_average: matrix is not orthogonal");
    auto meta = batch.metadata();
    meta.fidelity = distributions::Fidelity::float64;
    meta.generator += "+rotated";
    distributions::SampleBatch out(std::move(meta), batch.has_z());
    out.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto y = rotate(rotation, batch.y(i));
        if (batch.has_z())
            out.append(y, batch.z(i));
        else
            out.append(y);
    }
    out.seal();
    return {std::move(out), rotation};
}

RotatedBatch worst_to_average(const distributions::SampleBatch& batch, Rng& rng) {
    return worst_to_average(batch, random_rotation(batch.dimension(), rng));
}

}  // namespace clwe::reductions
