#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cstddef>
#include <string>
#include <string_view>

namespace clwe {

// Arbitrary-precision real. Each value carries its own precision; binary
// operations promote to the larger operand precision.
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 64;

unsigned precision_bits(const Real& x);

// Working precision for the lattice-reduction solver in dimension n.
unsigned solver_precision_bits(std::size_t n);

Real make_real(double value, unsigned bits = kDefaultPrecisionBits);
Real make_real(std::string_view decimal, unsigned bits = kDefaultPrecisionBits);
Real make_real(const Real& value, unsigned bits);
Real from_long_double(long double value, unsigned bits = kDefaultPrecisionBits);
Real real_pi(unsigned bits = kDefaultPrecisionBits);

double to_double(const Real& x);
std::string to_decimal_string(const Real& x);

// Sets the thread's default precision (used for temporaries and literals)
// for the lifetime of the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

    unsigned bits() const { return bits_; }

private:
    unsigned bits_;
    unsigned saved_digits10_;
};

}  // namespace clwe
