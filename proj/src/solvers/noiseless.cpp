#include "clwe/solvers/noiseless.hpp"

#include "clwe/error.hpp"
#include "clwe/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace clwe::solvers {

namespace {

using lattice::Integer;

struct Group {
    std::vector<Vector<Real>> y;  // n + 1 vectors
    std::vector<Real> z;
};

// Representative of x mod 1 in (-1/2, 1/2].
Real centred_mod1(const Real& x) {
    const Real half = make_real(0.5, precision_bits(x));
    return x - ceil(x - half);
}

Real raise(const Real& x, unsigned bits) { return make_real(x, std::max(bits, precision_bits(x))); }

// Dependence test on the y-block: relative pivot below 2^{-bits/2}.
bool numerically_singular(const Matrix<Real>& m, unsigned bits) {
    PivotedLu<Real> lu(m);
    if (lu.singular()) return true;
    const Real floor = pow(make_real(2.0, bits), -static_cast<int>(bits / 2));
    return lu.pivot_ratio() < floor;
}

std::optional<HarvestedEquation> harvest(const Group& g, std::size_t n, unsigned bits,
                                         const NoiselessSolveConfig& cfg, std::size_t& escalations) {
    Matrix<Real> block(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) block(i, j) = raise(g.y[j][i], bits);
    if (numerically_singular(block, bits)) return std::nullopt;

    const double bound = std::sqrt(static_cast<double>(n)) * std::ldexp(1.0, -static_cast<int>(n - 1));
    for (unsigned attempt = 0; attempt <= cfg.max_escalations; ++attempt) {
        const unsigned b = bits << attempt;
        const Real delta = pow(make_real(2.0, b), -static_cast<int>(3 * n * n));
        Matrix<Real> basis(n + 1, n + 1, make_real(0.0, b));
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i < n; ++i) basis(i, j) = raise(g.y[j][i], b);
        basis(n, n) = delta;
        const auto red = lattice::lll_reduce(basis);
        const double norm = to_double(sqrt(norm_squared(red.reduced.column(0))));
        if (attempt > 0) ++escalations;
        if (!(norm <= bound)) continue;

        HarvestedEquation eq;
        eq.short_norm = norm;
        eq.coefficients.resize(n + 1);
        eq.y.assign(n, make_real(0.0, b));
        Real z = make_real(0.0, b);
        for (std::size_t i = 0; i <= n; ++i) {
            const Integer& c = red.transform(i, 0);
            eq.coefficients[i] = c;
            if (c == 0) continue;
            const Real cr = make_real(0.0, b) + Real(c);
            for (std::size_t k = 0; k < n; ++k) eq.y[k] += cr * g.y[i][k];
            z += cr * g.z[i];
        }
        eq.z = centred_mod1(z);
        return eq;
    }
    throw PrecisionError("noiseless solver: short vector exceeds sqrt(n) 2^{-(n-1)/2} after " +
                         std::to_string(cfg.max_escalations) + " precision escalations");
}

}  // namespace

NoiselessSolveReport solve_noiseless_clwe(const distributions::SampleBatch& samples, double gamma, std::size_t n,
                                          Rng& rng, const NoiselessSolveConfig& cfg) {
    if (n == 0 || samples.dimension() != n) throw ParameterError("noiseless solver: batch dimension must equal n");
    if (!samples.has_z()) throw ParameterError("noiseless solver: batch has no z column");
    if (!(gamma > 0.0)) throw ParameterError("noiseless solver: gamma must be > 0");
    if (samples.metadata().beta != 0.0) throw ParameterError("noiseless solver: batch must be noiseless (beta = 0)");
    if (samples.size() < n * (n + 1))
        throw ParameterError("noiseless solver: need at least n(n+1) = " + std::to_string(n * (n + 1)) +
                             " samples, got " + std::to_string(samples.size()));
    if (!(cfg.tolerance > 0.0)) throw ParameterError("noiseless solver: tolerance must be > 0");

    const auto& meta = samples.metadata();
    unsigned bits = cfg.precision_bits;
    if (bits == 0) {
        bits = solver_precision_bits(n);
        if (meta.fidelity == distributions::Fidelity::decimal) bits = std::max(bits, meta.precision_bits);
    }
    PrecisionScope scope(bits);

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng.engine());

    NoiselessSolveReport report;
    report.precision_bits = bits;
    std::vector<std::size_t> consumed;
    std::size_t next = 0;
    bool precision_failure = false;
    const Real g = make_real(gamma, bits);

    auto take_group = [&]() -> std::optional<Group> {
        if (next + n + 1 > order.size()) return std::nullopt;
        Group grp;
        for (std::size_t i = 0; i <= n; ++i) {
            const auto s = samples.precise(order[next]);
            consumed.push_back(order[next++]);
            grp.y.push_back(s.y);
            grp.z.push_back(s.z);
        }
        return grp;
    };

    auto harvest_one = [&]() -> bool {
        while (auto grp = take_group()) {
            ++report.trials;
            try {
                auto eq = harvest(*grp, n, bits, cfg, report.escalations);
                if (!eq) continue;
                report.equations_used.push_back(std::move(*eq));
                return true;
            } catch (const PrecisionError&) {
                precision_failure = true;
            }
        }
        return false;
    };

    auto exhausted = [&](const std::string& what) {
        const std::string msg = "noiseless solver: samples exhausted after " + std::to_string(report.trials) +
                                " LLL runs (" + what + ")";
        if (precision_failure) throw PrecisionError(msg);
        throw SingularMatrixError(msg);
    };

    Vector<Real> w;
    while (true) {
        while (report.equations_used.size() < n)
            if (!harvest_one()) exhausted("fewer than n independent equations");
        Matrix<Real> a(n, n);
        Vector<Real> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a(i, j) = g * report.equations_used[i].y[j];
            rhs[i] = report.equations_used[i].z;
        }
        if (!numerically_singular(a, bits)) {
            w = PivotedLu<Real>(a).solve(rhs);
            break;
        }
        report.equations_used.pop_back();
    }

    const Real norm = sqrt(norm_squared(w));
    report.norm_before_normalization = to_double(norm);
    report.recovered_precise = w;
    for (auto& v : report.recovered_precise) v /= norm;
    for (const auto& v : report.recovered_precise) report.recovered_direction.push_back(to_double(v));

    for (const auto& eq : report.equations_used) {
        const Real r = g * dot(eq.y, report.recovered_precise) - eq.z;
        report.residual = std::max(report.residual, std::abs(to_double(r)));
    }
    for (std::size_t idx : consumed) {
        const auto s = samples.precise(idx);
        Vector<Real> y(n);
        for (std::size_t k = 0; k < n; ++k) y[k] = raise(s.y[k], bits);
        const Real r = centred_mod1(g * dot(y, report.recovered_precise) - s.z);
        report.sample_residual = std::max(report.sample_residual, std::abs(to_double(r)));
    }
    report.samples_consumed = consumed.size();
    report.success = report.residual <= cfg.tolerance && report.sample_residual <= cfg.tolerance &&
                     std::abs(report.norm_before_normalization - 1.0) <= cfg.tolerance;
    return report;
}

bool matches_up_to_sign(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (double s : {1.0, -1.0}) {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) ok = std::abs(a[i] - s * b[i]) <= tol;
        if (ok) return true;
    }
    return false;
}

nlohmann::json to_json(const NoiselessSolveReport& r) {
    nlohmann::json eqs = nlohmann::json::array();
    for (const auto& e : r.equations_used) {
        nlohmann::json y = nlohmann::json::array();
        for (const auto& v : e.y) y.push_back(to_decimal_string(v));
        nlohmann::json c = nlohmann::json::array();
        for (const auto& v : e.coefficients) c.push_back(v.str());
        eqs.push_back({{"y", y}, {"z", to_decimal_string(e.z)}, {"coefficients", c}, {"short_norm", e.short_norm}});
    }
    return {{"recovered_direction", r.recovered_direction},
            {"equations_used", eqs},
            {"residual", r.residual},
            {"sample_residual", r.sample_residual},
            {"norm_before_normalization", r.norm_before_normalization},
            {"trials", r.trials},
            {"samples_consumed", r.samples_consumed},
            {"escalations", r.escalations},
            {"precision_bits", r.precision_bits},
            {"success", r.success}};
}

}  // namespace clwe::solvers
