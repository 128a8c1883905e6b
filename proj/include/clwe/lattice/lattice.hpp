#pragma once

#include "clwe/lattice/lll.hpp"
#include "clwe/numerics/matrix.hpp"
#include "clwe/numerics/real.hpp"

#include "json.hpp"

namespace clwe::lattice {

// Full-rank lattice L = B Z^n, basis vectors as the columns of B. All derived
// data (dual basis, Gram-Schmidt of the given basis, determinant, and an
// LLL-reduced basis with its Gram-Schmidt data) is computed at construction.
class Lattice {
public:
    explicit Lattice(Matrix<Real> basis);
    Lattice(const Matrix<double>& basis, unsigned bits);

    static Lattice integer_lattice(std::size_t n, unsigned bits = kDefaultPrecisionBits);
    static Lattice scaled_integer_lattice(std::size_t n, const Real& scale);

    std::size_t dimension() const { return basis_.cols(); }
    unsigned precision() const { return bits_; }

    const Matrix<Real>& basis() const { return basis_; }
    const Matrix<Real>& dual_basis() const { return dual_basis_; }
    const GramSchmidt<Real>& gram_schmidt_data() const { return gs_; }
    const Real& determinant() const { return det_; }

    const Matrix<Real>& reduced_basis() const { return reduced_; }
    const GramSchmidt<Real>& reduced_gram_schmidt() const { return reduced_gs_; }

    Vector<Real> point(const Vector<Integer>& coefficients) const;
    Lattice scaled(const Real& c) const;

private:
    unsigned bits_;
    Matrix<Real> basis_;
    Matrix<Real> dual_basis_;
    GramSchmidt<Real> gs_;
    Real det_;
    Matrix<Real> reduced_;
    GramSchmidt<Real> reduced_gs_;
};

// Basis (B^T)^{-1} of the dual lattice.
Lattice dual(const Lattice& lattice);

// JSON form: {"precision_bits": b, "rows": [["1.0", "0.5"], ...]} with the
// basis vectors as columns of the row array and entries as decimal strings.
nlohmann::json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const nlohmann::json& j);

}  // namespace clwe::lattice
