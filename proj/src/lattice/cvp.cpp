#include "clwe/lattice/cvp.hpp"

#include "clwe/error.hpp"
#include "clwe/lattice/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clwe::lattice {

namespace {

void require_small(const Lattice& lattice, long coeff_radius) {
    if (lattice.dimension() > 4) throw ParameterError("brute force: dimension must be at most 4");
    if (coeff_radius < 1) throw ParameterError("brute force: coefficient radius must be positive");
    const double box = std::pow(2.0 * static_cast<double>(coeff_radius) + 1.0, static_cast<double>(lattice.dimension()));
    if (box > kBruteForceBoxLimit) throw BudgetError("brute force: coefficient box exceeds 1e7 points");
}

// Calls visit(k) for every k in [-r, r]^n.
template <class Visit>
void for_each_in_box(std::size_t n, long r, Visit&& visit) {
    std::vector<long> k(n, -r);
    for (;;) {
        visit(static_cast<const std::vector<long>&>(k));
        std::size_t i = 0;
        while (i < n && k[i] == r) k[i++] = -r;
        if (i == n) return;
        ++k[i];
    }
}

Vector<Real> combination(const Lattice& lattice, const std::vector<long>& k) {
    Vector<Integer> c(k.begin(), k.end());
    return lattice.point(c);
}

}  // namespace

NearestPlaneResult babai_nearest_plane(const Lattice& lattice, const Vector<Real>& target) {
    const std::size_t n = lattice.dimension();
    if (target.size() != n) throw ParameterError("nearest plane: target has wrong dimension");
    const unsigned bits = lattice.precision();
    PrecisionScope scope(bits);
    const auto& b = lattice.reduced_basis();
    const auto& gs = lattice.reduced_gram_schmidt();
    Vector<Real> residual(n);
    for (std::size_t i = 0; i < n; ++i) residual[i] = make_real(target[i], bits);
    Vector<Integer> coeff(n);
    for (std::size_t j = n; j-- > 0;) {
        const Vector<Real> bs = gs.bstar.column(j);
        const Real c = dot(residual, bs) / gs.bstar_norm2[j];
        Integer q;
        mpfr_get_z(q.backend().data(), c.backend().data(), MPFR_RNDN);
        coeff[j] = q;
        if (q == 0) continue;
        const Real qr = make_real(0.0, bits) + Real(q);
        for (std::size_t i = 0; i < n; ++i) residual[i] -= qr * b(i, j);
    }
    NearestPlaneResult out;
    out.point.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.point[i] = target[i] - residual[i];
    out.offset = std::move(residual);
    out.coefficients = std::move(coeff);
    return out;
}

Vector<Real> shortest_vector_bruteforce(const Lattice& lattice, long coeff_radius) {
    require_small(lattice, coeff_radius);
    const auto f = given_frame(lattice);
    long double best = std::numeric_limits<long double>::infinity();
    std::vector<long> arg;
    for_each_in_box(f.n, coeff_radius, [&](const std::vector<long>& k) {
        if (std::all_of(k.begin(), k.end(), [](long v) { return v == 0; })) return;
        const auto p = frame_point(f, k);
        long double r2 = 0.0L;
        for (long double v : p) r2 += v * v;
        if (r2 < best) {
            best = r2;
            arg = k;
        }
    });
    return combination(lattice, arg);
}

Vector<Real> closest_vector_bruteforce(const Lattice& lattice, const Vector<Real>& target, long coeff_radius) {
    require_small(lattice, coeff_radius);
    if (target.size() != lattice.dimension()) throw ParameterError("closest vector: target has wrong dimension");
    const auto f = given_frame(lattice);
    std::vector<long double> t(target.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = target[i].convert_to<long double>();
    long double best = std::numeric_limits<long double>::infinity();
    std::vector<long> arg;
    for_each_in_box(f.n, coeff_radius, [&](const std::vector<long>& k) {
        const auto p = frame_point(f, k);
        long double r2 = 0.0L;
        for (std::size_t i = 0; i < p.size(); ++i) r2 += (p[i] - t[i]) * (p[i] - t[i]);
        if (r2 < best) {
            best = r2;
            arg = k;
        }
    });
    return combination(lattice, arg);
}

std::vector<double> successive_minima(const Lattice& lattice) {
    const auto f = reduced_frame(lattice);
    const std::size_t n = f.n;
    long double r2 = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < f.basis.rows(); ++i) s += f.basis(i, j) * f.basis(i, j);
        r2 = std::max(r2, s);
    }
    struct Candidate {
        long double norm2;
        std::vector<long double> v;
    };
    std::vector<Candidate> cand;
    enumerate_ball(f, std::vector<long double>(n, 0.0L), r2, 5'000'000, [&](const std::vector<long>& k, long double q) {
        if (std::all_of(k.begin(), k.end(), [](long v) { return v == 0; })) return;
        cand.push_back({q, frame_point(f, k)});
    });
    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.norm2 < b.norm2; });

    // Greedy: keep a vector if its component orthogonal to the kept span is
    // not negligible.
    std::vector<std::vector<long double>> ortho;
    std::vector<double> minima;
    for (const auto& c : cand) {
        if (minima.size() == n) break;
        std::vector<long double> r = c.v;
        for (const auto& q : ortho) {
            long double d = 0.0L, qq = 0.0L;
            for (std::size_t i = 0; i < r.size(); ++i) {
                d += r[i] * q[i];
                qq += q[i] * q[i];
            }
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= d / qq * q[i];
        }
        long double rr = 0.0L;
        for (long double v : r) rr += v * v;
        if (rr > c.norm2 * 1e-12L) {
            ortho.push_back(std::move(r));
            minima.push_back(static_cast<double>(std::sqrt(c.norm2)));
        }
    }
    if (minima.size() != n) throw ConsistencyError("successive minima: enumeration found too few independent vectors");
    return minima;
}

}  // namespace clwe::lattice
