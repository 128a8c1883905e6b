#include "clwe/numerics/real.hpp"

#include "clwe/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clwe {

namespace {

unsigned checked_bits(unsigned bits) {
    if (bits < kMinPrecisionBits) {
        throw ParameterError("precision must be at least 64 bits, got " + std::to_string(bits));
    }
    return bits;
}

unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

unsigned precision_bits(const Real& x) {
    return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

unsigned solver_precision_bits(std::size_t n) {
    return std::max<unsigned>(kDefaultPrecisionBits, static_cast<unsigned>(8 * n * n));
}

Real make_real(double value, unsigned bits) {
    Real r(0, bits_to_digits10(checked_bits(bits)));
    mpfr_set_prec(r.backend().data(), bits);
    mpfr_set_d(r.backend().data(), value, MPFR_RNDN);
    return r;
}

Real from_long_double(long double value, unsigned bits) {
    Real r(0, bits_to_digits10(checked_bits(bits)));
    mpfr_set_prec(r.backend().data(), bits);
    mpfr_set_ld(r.backend().data(), value, MPFR_RNDN);
    return r;
}

Real make_real(std::string_view decimal, unsigned bits) {
    Real r(0, bits_to_digits10(checked_bits(bits)));
    mpfr_set_prec(r.backend().data(), bits);
    std::string s(decimal);
    if (mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0) {
        throw ParameterError("not a decimal number: '" + s + "'");
    }
    return r;
}

Real make_real(const Real& value, unsigned bits) {
    Real r(0, bits_to_digits10(checked_bits(bits)));
    mpfr_set_prec(r.backend().data(), bits);
    mpfr_set(r.backend().data(), value.backend().data(), MPFR_RNDN);
    return r;
}

Real real_pi(unsigned bits) {
    Real r(0, bits_to_digits10(checked_bits(bits)));
    mpfr_set_prec(r.backend().data(), bits);
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

double to_double(const Real& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDN); }

std::string to_decimal_string(const Real& x) {
    // Enough digits to round-trip at the value's precision.
    const auto digits = static_cast<int>(std::ceil(precision_bits(x) * 0.30102999566398120)) + 2;
    return x.str(digits, std::ios_base::scientific);
}

PrecisionScope::PrecisionScope(unsigned bits)
    : bits_(checked_bits(bits)), saved_digits10_(Real::default_precision()) {
    Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

}  // namespace clwe
