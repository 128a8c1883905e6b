#include "clwe/lattice/lll.hpp"

#include "clwe/error.hpp"

#include <algorithm>
#include <string>

namespace clwe::lattice {

namespace {

unsigned working_bits(const Matrix<Real>& m) {
    unsigned bits = kMinPrecisionBits;
    for (const auto& v : m.data()) bits = std::max(bits, precision_bits(v));
    return bits;
}

Integer round_to_integer(const Real& x) {
    Integer z;
    mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDN);
    return z;
}

class LllState {
public:
    LllState(const Matrix<Real>& basis, double delta, unsigned bits)
        : n_(basis.cols()), dim_(basis.rows()), delta_(make_real(delta, bits)), bits_(bits),
          transform_(IntegerMatrix::identity(basis.cols())) {
        b_.reserve(n_);
        for (std::size_t j = 0; j < n_; ++j) b_.push_back(basis.column(j));
        recompute_gram_schmidt();
    }

    void run() {
        std::size_t k = 1;
        std::size_t iterations = 0;
        const std::size_t max_iterations = 50'000'000;
        while (k < n_) {
            if (++iterations > max_iterations) throw PrecisionError("LLL: iteration budget exhausted");
            size_reduce(k, k - 1);
            const Real m = mu_(k, k - 1);
            if (bnorm_[k] < (delta_ - m * m) * bnorm_[k - 1]) {
                swap(k);
                ++swaps_;
                k = std::max<std::size_t>(1, k - 1);
            } else {
                for (std::size_t l = k - 1; l-- > 0;) size_reduce(k, l);
                ++k;
            }
        }
    }

    void recompute_gram_schmidt() {
        mu_ = Matrix<Real>(n_, n_);
        bnorm_.assign(n_, make_real(0.0, bits_));
        std::vector<Vector<Real>> bstar;
        bstar.reserve(n_);
        Real scale = make_real(0.0, bits_);
        for (const auto& v : b_) scale = std::max(scale, norm_squared(v));
        const Real floor = scale * pow(make_real(2.0, bits_), -static_cast<int>(bits_) + 16);
        for (std::size_t i = 0; i < n_; ++i) {
            Vector<Real> s = b_[i];
            for (std::size_t j = 0; j < i; ++j) {
                const Real m = dot(b_[i], bstar[j]) / bnorm_[j];
                mu_(i, j) = m;
                for (std::size_t t = 0; t < dim_; ++t) s[t] -= m * bstar[j][t];
            }
            bnorm_[i] = norm_squared(s);
            if (!(bnorm_[i] > floor)) {
                throw ParameterError("LLL: basis is rank deficient at working precision (vector " +
                                     std::to_string(i) + ")");
            }
            bstar.push_back(std::move(s));
        }
    }

    Matrix<Real> basis() const { return Matrix<Real>::from_columns(b_); }
    const IntegerMatrix& transform() const { return transform_; }
    std::size_t swaps() const { return swaps_; }

private:
    void size_reduce(std::size_t k, std::size_t l) {
        const Real& m = mu_(k, l);
        if (abs(m) <= Real(0.5)) return;
        const Integer q = round_to_integer(m);
        const Real qr = make_real(0.0, bits_) + Real(q);
        for (std::size_t t = 0; t < dim_; ++t) b_[k][t] -= qr * b_[l][t];
        for (std::size_t t = 0; t < n_; ++t) transform_(t, k) -= q * transform_(t, l);
        mu_(k, l) -= qr;
        for (std::size_t i = 0; i < l; ++i) mu_(k, i) -= qr * mu_(l, i);
    }

    void swap(std::size_t k) {
        std::swap(b_[k], b_[k - 1]);
        transform_.swap_columns(k, k - 1);
        for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu_(k, j), mu_(k - 1, j));
        const Real m = mu_(k, k - 1);
        const Real bk = bnorm_[k] + m * m * bnorm_[k - 1];
        if (!(bk > 0)) throw PrecisionError("LLL: Gram-Schmidt norm collapsed");
        mu_(k, k - 1) = m * bnorm_[k - 1] / bk;
        bnorm_[k] = bnorm_[k - 1] * bnorm_[k] / bk;
        bnorm_[k - 1] = bk;
        if (!(bnorm_[k] > 0)) throw PrecisionError("LLL: Gram-Schmidt norm collapsed");
        for (std::size_t i = k + 1; i < n_; ++i) {
            const Real t = mu_(i, k);
            mu_(i, k) = mu_(i, k - 1) - m * t;
            mu_(i, k - 1) = t + mu_(k, k - 1) * mu_(i, k);
        }
    }

    std::size_t n_;
    std::size_t dim_;
    Real delta_;
    unsigned bits_;
    std::vector<Vector<Real>> b_;
    Matrix<Real> mu_;
    Vector<Real> bnorm_;
    IntegerMatrix transform_;
    std::size_t swaps_ = 0;
};

}  // namespace

Matrix<Real> to_real(const IntegerMatrix& m, unsigned bits) {
    PrecisionScope scope(bits);
    Matrix<Real> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = make_real(0.0, bits) + Real(m(i, j));
    return out;
}

LllResult lll_reduce(const Matrix<Real>& basis, double delta) {
    if (!(delta > 0.25 && delta < 1.0)) throw ParameterError("LLL: delta must lie in (1/4, 1)");
    if (basis.cols() == 0 || basis.rows() < basis.cols()) {
        throw ParameterError("LLL: need at least as many rows as basis vectors");
    }
    const unsigned bits = working_bits(basis);
    PrecisionScope scope(bits);

    LllState state(basis, delta, bits);
    IntegerMatrix transform = IntegerMatrix::identity(basis.cols());
    std::size_t swaps = 0;
    // Floating Gram-Schmidt drifts on hard instances; re-run from freshly
    // recomputed data until the exact recombination verifies.
    for (int pass = 0; pass < 4; ++pass) {
        state.run();
        transform = transform * state.transform();
        swaps += state.swaps();
        Matrix<Real> exact = basis * to_real(transform, bits);
        if (is_lll_reduced(exact, delta)) return {std::move(exact), std::move(transform), swaps};
        state = LllState(exact, delta, bits);
    }
    throw PrecisionError("LLL: reduction does not verify at " + std::to_string(bits) + " bits");
}

bool is_lll_reduced(const Matrix<Real>& basis, double delta, double slack) {
    const unsigned bits = working_bits(basis);
    PrecisionScope scope(bits);
    const auto gs = gram_schmidt(basis);
    const std::size_t n = basis.cols();
    const Real half = make_real(0.5 + slack, bits);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(gs.mu(i, j)) > half) return false;
    for (std::size_t k = 1; k < n; ++k) {
        const Real m = gs.mu(k, k - 1);
        const Real lhs = gs.bstar_norm2[k] * (1 + make_real(slack, bits));
        if (lhs < (make_real(delta, bits) - m * m) * gs.bstar_norm2[k - 1]) return false;
    }
    return true;
}

Integer integer_determinant(const IntegerMatrix& m) {
    if (!m.square()) throw ParameterError("determinant of a non-square matrix");
    // Bareiss fraction-free elimination.
    IntegerMatrix a = m;
    const std::size_t n = a.rows();
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return n == 0 ? Integer(1) : Integer(sign * a(n - 1, n - 1));
}

}  // namespace clwe::lattice
