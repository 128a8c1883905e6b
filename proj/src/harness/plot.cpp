#include "clwe/harness/plot.hpp"

#include "clwe/distributions/density.hpp"
#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"
#include "clwe/numerics/gaussian.hpp"

#include <cmath>
#include <sstream>

namespace clwe::harness {

namespace {

distributions::HiddenDirection direction(const PlotSpec& s) {
    return distributions::HiddenDirection(std::vector<double>{std::cos(s.angle), std::sin(s.angle)});
}

std::vector<std::vector<double>> parse_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string plot_kind_name(PlotKind k) {
    switch (k) {
        case PlotKind::fig1_scatter: return "fig1-scatter";
        case PlotKind::fig2_scatter: return "fig2-scatter";
        case PlotKind::fig2_density: return "fig2-density";
    }
    return "unknown";
}

PlotKind parse_plot_kind(const std::string& s) {
    for (auto k : {PlotKind::fig1_scatter, PlotKind::fig2_scatter, PlotKind::fig2_density})
        if (plot_kind_name(k) == s) return k;
    throw ConfigError("unknown plot kind '" + s + "' (fig1-scatter, fig2-scatter, fig2-density)");
}

std::string emit_plot_data(const PlotSpec& spec, PlotKind kind) {
    if (!(spec.gamma > 0.0) || !(spec.beta > 0.0)) throw ConfigError("plot data: need beta, gamma > 0");
    std::ostringstream os;
    os.precision(17);
    const distributions::ClweParams params(2, spec.beta, spec.gamma);
    const auto w = direction(spec);
    switch (kind) {
        case PlotKind::fig1_scatter: {
            if (spec.count == 0) throw ConfigError("plot data: count must be > 0");
            const auto b = distributions::generate_batch(distributions::Generator::clwe, params, w, spec.count, spec.seed);
            os << "y1,y2,z\n";
            for (std::size_t i = 0; i < b.size(); ++i) os << b.y(i)[0] << ',' << b.y(i)[1] << ',' << b.z(i) << '\n';
            break;
        }
        case PlotKind::fig2_scatter: {
            if (spec.count == 0) throw ConfigError("plot data: count must be > 0");
            const auto b = distributions::generate_batch(distributions::Generator::hclwe, params, w, spec.count, spec.seed);
            os << "y1,y2\n";
            for (std::size_t i = 0; i < b.size(); ++i) os << b.y(i)[0] << ',' << b.y(i)[1] << '\n';
            break;
        }
        case PlotKind::fig2_density: {
            if (!(spec.t_step > 0.0) || !(spec.t_max > 0.0)) throw ConfigError("plot data: bad density grid");
            const auto steps = static_cast<long>(std::llround(spec.t_max / spec.t_step));
            os << "t,hclwe,gaussian,hclwe_unnormalized\n";
            for (long i = -steps; i <= steps; ++i) {
                const double t = static_cast<double>(i) * spec.t_step;
                const double rho = numerics::rho(t);
                const double layers = numerics::periodic_gaussian(spec.gamma * t, spec.beta);
                os << t << ',' << distributions::hclwe_marginal(t, spec.beta, spec.gamma) << ',' << rho << ','
                   << rho * layers << '\n';
            }
            break;
        }
    }
    return os.str();
}

PeakSpacing density_peak_spacing(const std::string& density_csv, double beta, double gamma) {
    const auto rows = parse_rows(density_csv);
    PeakSpacing out;
    out.expected = gamma / (beta * beta + gamma * gamma);
    double top = 0.0;
    for (const auto& r : rows) top = std::max(top, r.at(1));
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double v = rows[i][1];
        if (v > rows[i - 1][1] && v >= rows[i + 1][1] && v > 1e-3 * top) out.peaks.push_back(rows[i][0]);
    }
    if (out.peaks.size() < 2) throw ConsistencyError("density csv: fewer than two peaks");
    // Slope of position against index.
    const double k = static_cast<double>(out.peaks.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < out.peaks.size(); ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += out.peaks[i];
        sxx += x * x;
        sxy += x * out.peaks[i];
    }
    out.measured = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    out.relative_error = std::abs(out.measured - out.expected) / out.expected;
    return out;
}

double stripe_residual(const std::string& scatter_csv, const PlotSpec& spec) {
    const auto rows = parse_rows(scatter_csv);
    if (rows.empty()) throw ConsistencyError("scatter csv: no rows");
    const auto w = direction(spec);
    double sum = 0.0;
    for (const auto& r : rows) {
        const double t = r.at(0) * w[0] + r.at(1) * w[1];
        const double e = r.at(2) - spec.gamma * t;
        sum += std::abs(e - std::round(e));
    }
    return sum / static_cast<double>(rows.size());
}

}  // namespace clwe::harness
