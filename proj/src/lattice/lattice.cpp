#include "clwe/lattice/lattice.hpp"

#include "clwe/error.hpp"

#include <algorithm>

namespace clwe::lattice {

namespace {

unsigned max_bits(const Matrix<Real>& m) {
    unsigned bits = kDefaultPrecisionBits;
    for (const auto& v : m.data()) bits = std::max(bits, precision_bits(v));
    return bits;
}

Matrix<Real> at_precision(const Matrix<double>& m, unsigned bits) {
    Matrix<Real> out(m.rows(), m.cols(), make_real(0.0, bits));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = make_real(m(i, j), bits);
    return out;
}

}  // namespace

Lattice::Lattice(Matrix<Real> basis) : bits_(max_bits(basis)), basis_(std::move(basis)) {
    if (!basis_.square() || basis_.rows() == 0) throw ParameterError("lattice basis must be square and nonempty");
    PrecisionScope scope(bits_);
    PivotedLu<Real> lu(basis_);
    if (lu.singular()) throw SingularMatrixError("lattice basis is singular");
    det_ = abs(lu.determinant());
    if (!(det_ > 0)) throw SingularMatrixError("lattice basis is singular");
    dual_basis_ = lu.inverse().transpose();
    gs_ = clwe::gram_schmidt(basis_);
    reduced_ = lll_reduce(basis_).reduced;
    reduced_gs_ = clwe::gram_schmidt(reduced_);
}

Lattice::Lattice(const Matrix<double>& basis, unsigned bits) : Lattice(at_precision(basis, bits)) {}

Lattice Lattice::integer_lattice(std::size_t n, unsigned bits) {
    return Lattice(Matrix<double>::identity(n), bits);
}

Lattice Lattice::scaled_integer_lattice(std::size_t n, const Real& scale) {
    const unsigned bits = std::max(precision_bits(scale), kDefaultPrecisionBits);
    PrecisionScope scope(bits);
    Matrix<Real> b(n, n, make_real(0.0, bits));
    for (std::size_t i = 0; i < n; ++i) b(i, i) = scale;
    return Lattice(std::move(b));
}

Vector<Real> Lattice::point(const Vector<Integer>& coefficients) const {
    if (coefficients.size() != dimension()) throw ParameterError("coefficient vector has wrong length");
    PrecisionScope scope(bits_);
    Vector<Real> v(dimension(), make_real(0.0, bits_));
    for (std::size_t j = 0; j < dimension(); ++j) {
        if (coefficients[j] == 0) continue;
        const Real c = make_real(0.0, bits_) + Real(coefficients[j]);
        for (std::size_t i = 0; i < dimension(); ++i) v[i] += c * basis_(i, j);
    }
    return v;
}

Lattice Lattice::scaled(const Real& c) const {
    PrecisionScope scope(bits_);
    Matrix<Real> b = basis_;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) *= c;
    return Lattice(std::move(b));
}

Lattice dual(const Lattice& lattice) { return Lattice(lattice.dual_basis()); }

nlohmann::json lattice_to_json(const Lattice& lattice) {
    nlohmann::json rows = nlohmann::json::array();
    const auto& b = lattice.basis();
    for (std::size_t i = 0; i < b.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < b.cols(); ++j) row.push_back(to_decimal_string(b(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"precision_bits", lattice.precision()}, {"rows", std::move(rows)}};
}

Lattice lattice_from_json(const nlohmann::json& j) {
    const unsigned bits = j.value("precision_bits", kDefaultPrecisionBits);
    const auto& rows = j.at("rows");
    const std::size_t n = rows.size();
    Matrix<Real> b(n, n, make_real(0.0, bits));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw ParameterError("lattice JSON: basis must be square");
        for (std::size_t k = 0; k < n; ++k) {
            const auto& e = rows[i][k];
            b(i, k) = e.is_string() ? make_real(e.get<std::string>(), bits) : make_real(e.get<double>(), bits);
        }
    }
    return Lattice(std::move(b));
}

}  // namespace clwe::lattice
