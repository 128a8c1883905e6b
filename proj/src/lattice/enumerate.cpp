#include "clwe/lattice/enumerate.hpp"

#include <limits>
#include <numbers>

namespace clwe::lattice {

namespace {

EnumerationFrame make_frame(const Matrix<Real>& basis, const GramSchmidt<Real>& gs) {
    EnumerationFrame f;
    f.n = basis.cols();
    f.basis = Matrix<long double>(basis.rows(), basis.cols());
    for (std::size_t i = 0; i < basis.rows(); ++i)
        for (std::size_t j = 0; j < basis.cols(); ++j) f.basis(i, j) = basis(i, j).convert_to<long double>();
    f.mu = Matrix<long double>(f.n, f.n);
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t j = 0; j < f.n; ++j) f.mu(i, j) = gs.mu(i, j).convert_to<long double>();
    f.bstar_norm2.resize(f.n);
    for (std::size_t j = 0; j < f.n; ++j) f.bstar_norm2[j] = gs.bstar_norm2[j].convert_to<long double>();
    return f;
}

long double level_tail(long double a2, long double k) {
    const long double pi = std::numbers::pi_v<long double>;
    return 2.0L * std::exp(-pi * a2 * k * k) / (1.0L - std::exp(-pi * a2 * (2.0L * k + 1.0L)));
}

// Smallest K (to ~1e-20 absolute) with level_tail(a2, K) <= target.
long double level_radius(long double a2, long double target) {
    if (level_tail(a2, 0.0L) <= target) return 0.0L;
    long double lo = 0.0L, hi = 1.0L;
    while (level_tail(a2, hi) > target) {
        hi *= 2.0L;
        if (hi > 1e9L) throw ToleranceError("certified box: level radius diverges");
    }
    for (int it = 0; it < 80; ++it) {
        const long double mid = 0.5L * (lo + hi);
        (level_tail(a2, mid) > target ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

MassBox certified_box(const EnumerationFrame& f, long double s, long double tol) {
    if (!(s > 0.0L)) throw ParameterError("certified box: width must be positive");
    if (!(tol > 0.0L)) throw ParameterError("certified box: tolerance must be positive");
    const long double pi = std::numbers::pi_v<long double>;
    const std::size_t n = f.n;
    std::vector<long double> a2(n), level_sum(n);
    long double total = 1.0L;
    for (std::size_t j = 0; j < n; ++j) {
        a2[j] = f.bstar_norm2[j] / (s * s);
        const long double q = std::exp(-pi * a2[j]);
        if (!(q < 1.0L)) throw ToleranceError("certified box: width too large for enumeration");
        level_sum[j] = 1.0L + 2.0L * q / (1.0L - q);
        total *= level_sum[j];
    }
    const long double target = tol / (2.0L * static_cast<long double>(n) * total);
    MassBox box;
    box.radius.resize(n);
    box.box_points = 1.0L;
    box.truncation_radius = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        box.radius[j] = level_radius(a2[j], target);
        box.box_points *= 2.0L * box.radius[j] + 1.0L;
        box.truncation_radius =
            std::min(box.truncation_radius, static_cast<double>(box.radius[j] * std::sqrt(f.bstar_norm2[j])));
        box.tail += level_tail(a2[j], box.radius[j]) * total / level_sum[j];
    }
    return box;
}

EnumerationFrame reduced_frame(const Lattice& lattice) {
    return make_frame(lattice.reduced_basis(), lattice.reduced_gram_schmidt());
}

EnumerationFrame given_frame(const Lattice& lattice) {
    return make_frame(lattice.basis(), lattice.gram_schmidt_data());
}

std::vector<long double> gram_schmidt_coordinates(const EnumerationFrame& f, const Vector<Real>& x) {
    if (x.size() != f.basis.rows()) throw ParameterError("point has wrong dimension");
    // Solve x = B u by back substitution through mu, then t_j = u_j + sum_{i>j} mu(i, j) u_i.
    std::vector<long double> xd(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xd[i] = x[i].convert_to<long double>();
    const Matrix<long double> binv = inverse(f.basis);
    std::vector<long double> u = binv * xd;
    std::vector<long double> t(f.n);
    for (std::size_t j = 0; j < f.n; ++j) {
        long double s = u[j];
        for (std::size_t i = j + 1; i < f.n; ++i) s += f.mu(i, j) * u[i];
        t[j] = s;
    }
    return t;
}

std::vector<long double> frame_point(const EnumerationFrame& f, const std::vector<long>& k) {
    std::vector<long double> p(f.basis.rows(), 0.0L);
    for (std::size_t j = 0; j < f.n; ++j) {
        if (k[j] == 0) continue;
        const long double c = static_cast<long double>(k[j]);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += c * f.basis(i, j);
    }
    return p;
}

}  // namespace clwe::lattice
