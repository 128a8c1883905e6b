#include "clwe/numerics/gaussian.hpp"

#include "clwe/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace clwe::numerics {

namespace {

void require_positive_width(double s, const char* what) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw ParameterError(std::string(what) + " must be a positive finite width");
    }
}

// Smallest K >= k_min with 2 * sum_{k>K} exp(-a2 k^2) <= bound, using the
// geometric domination (K+1+m)^2 >= (K+1)^2 + m(2K+3).
long tail_cutoff(double a2, double bound, long k_min) {
    for (long k = std::max<long>(k_min, 0);; ++k) {
        const double kp = static_cast<double>(k + 1);
        const double head = std::exp(-a2 * kp * kp);
        const double ratio = std::exp(-a2 * (2.0 * kp + 1.0));
        if (2.0 * head / (1.0 - ratio) <= bound) return k;
        if (k > 100000000) throw ToleranceError("series truncation does not converge");
    }
}

}  // namespace

Real rho(const Vector<Real>& x, const Real& s) {
    if (!(s > 0)) throw ParameterError("rho: width must be positive");
    const unsigned bits = std::max(precision_bits(s), kDefaultPrecisionBits);
    PrecisionScope scope(bits);
    Real n2 = make_real(0.0, bits);
    for (const auto& v : x) n2 += v * v;
    return exp(-real_pi(bits) * n2 / (s * s));
}

double rho(std::span<const double> x, double s) {
    require_positive_width(s, "rho");
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return std::exp(-std::numbers::pi * n2 / (s * s));
}

double rho(double x, double s) {
    require_positive_width(s, "rho");
    return std::exp(-std::numbers::pi * x * x / (s * s));
}

double width_to_stddev(double s) {
    require_positive_width(s, "width_to_stddev");
    return s / std::sqrt(2.0 * std::numbers::pi);
}

double periodic_gaussian(double x, double s) {
    require_positive_width(s, "periodic_gaussian");
    const double frac = x - std::round(x);
    if (s <= 1.0) {
        // Terms beyond |x + k| > 6.5 s are below exp(-132) relative to the peak.
        const long kmax = static_cast<long>(std::ceil(6.5 * s)) + 1;
        double sum = 0.0;
        for (long k = -kmax; k <= kmax; ++k) sum += rho(frac + static_cast<double>(k), s);
        return sum;
    }
    // Poisson dual: s * sum_m rho_{1/s}(m) cos(2 pi m x).
    const long mmax = static_cast<long>(std::ceil(6.5 / s)) + 1;
    double sum = 1.0;
    for (long m = 1; m <= mmax; ++m) {
        const double md = static_cast<double>(m);
        sum += 2.0 * std::exp(-std::numbers::pi * s * s * md * md) * std::cos(2.0 * std::numbers::pi * md * frac);
    }
    return s * sum;
}

CompletedSquare complete_squares(const Real& r1, const Real& r2, const Vector<Real>& c1,
                                 const Vector<Real>& c2) {
    if (!(r1 > 0) || !(r2 > 0)) throw ParameterError("complete_squares: widths must be positive");
    if (c1.size() != c2.size()) throw ParameterError("complete_squares: centre dimensions differ");
    const unsigned bits = std::max({precision_bits(r1), precision_bits(r2), kDefaultPrecisionBits});
    PrecisionScope scope(bits);
    CompletedSquare out;
    out.r0 = sqrt(r1 * r1 + r2 * r2);
    out.r3 = r1 * r2 / out.r0;
    const Real w1 = (out.r3 / r1) * (out.r3 / r1);
    const Real w2 = (out.r3 / r2) * (out.r3 / r2);
    out.c3.resize(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) out.c3[i] = w1 * c1[i] + w2 * c2[i];
    return out;
}

Real gaussian_tv_bound(const Real& mu1, const Real& sigma1, const Real& mu2, const Real& sigma2) {
    if (!(sigma1 > 0) || !(sigma2 > 0)) throw ParameterError("gaussian_tv_bound: sigma must be positive");
    PrecisionScope scope(std::max({precision_bits(sigma1), precision_bits(sigma2), kDefaultPrecisionBits}));
    const Real v1 = sigma1 * sigma1;
    const Real v2 = sigma2 * sigma2;
    const Real vmax = v1 > v2 ? v1 : v2;
    const Real smax = sigma1 > sigma2 ? sigma1 : sigma2;
    return 3 * abs(v1 - v2) / (2 * vmax) + abs(mu1 - mu2) / (2 * smax);
}

SecondMomentSeries discrete_gaussian_second_moment_series(const Real& gamma, double tol) {
    if (!(gamma >= 1)) throw ParameterError("second moment: gamma must be at least 1");
    if (!(tol > 0.0)) throw ParameterError("second moment: tolerance must be positive");
    const unsigned bits = std::max(precision_bits(gamma), kDefaultPrecisionBits);
    PrecisionScope scope(bits);
    const Real pi = real_pi(bits);
    const double g = to_double(gamma);

    // x^2 e^{-pi x^2} <= e^{-(pi-1) x^2} for |x| >= 1; the denominators are >= 1.
    const double budget = tol * 1e-3;
    const long kp = tail_cutoff((std::numbers::pi - 1.0) / (g * g), budget, static_cast<long>(std::ceil(g)));
    Real num = make_real(0.0, bits), den = make_real(1.0, bits);
    for (long k = 1; k <= kp; ++k) {
        const Real x = Real(k) / gamma;
        const Real e = exp(-pi * x * x);
        num += 2 * x * x * e;
        den += 2 * e;
    }

    // Dual side over gamma Z: (1/(2 pi) - y^2) rho(y) with |1/(2pi) - y^2| <= 2 e^{y^2}.
    const long kd = tail_cutoff((std::numbers::pi - 1.0) * g * g, budget / 2.0, 1);
    const Real inv2pi = 1 / (2 * pi);
    Real dnum = inv2pi, dden = make_real(1.0, bits);
    for (long k = 1; k <= kd; ++k) {
        const Real y = gamma * k;
        const Real e = exp(-pi * y * y);
        dnum += 2 * (inv2pi - y * y) * e;
        dden += 2 * e;
    }
    return {num / den, dnum / dden};
}

Real discrete_gaussian_second_moment(const Real& gamma, double tol) {
    const SecondMomentSeries s = discrete_gaussian_second_moment_series(gamma, tol);
    if (abs(s.primal - s.dual) > 4 * tol) {
        throw ConsistencyError("second moment: primal and dual series disagree beyond 4*tol");
    }
    return s.dual;
}

}  // namespace clwe::numerics
