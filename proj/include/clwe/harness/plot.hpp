#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace clwe::harness {

enum class PlotKind {
    fig1_scatter,  // 2-D CLWE samples: y1,y2,z
    fig2_scatter,  // 2-D hCLWE samples: y1,y2
    fig2_density,  // along w: t,hclwe,gaussian,hclwe_unnormalized
};

std::string plot_kind_name(PlotKind k);
PlotKind parse_plot_kind(const std::string& s);

struct PlotSpec {
    double beta = 0.1;
    double gamma = 2.0;
    std::size_t count = 2000;
    std::uint64_t seed = 1;
    double angle = 0.5235987755982988;  // hidden direction (cos, sin) of this angle
    double t_max = 3.0;                 // density grid [-t_max, t_max]
    double t_step = 1e-3;
};

// CSV text, header line first; deterministic in `spec`.
std::string emit_plot_data(const PlotSpec& spec, PlotKind kind);

struct PeakSpacing {
    std::vector<double> peaks;
    double measured = 0.0;  // least-squares slope of peak position against index
    double expected = 0.0;  // gamma / (beta^2 + gamma^2)
    double relative_error = 0.0;
};

// Local maxima of the hclwe column of a fig2_density CSV above 1e-3 of the
// largest value.
PeakSpacing density_peak_spacing(const std::string& density_csv, double beta, double gamma);

// Mean |(z - gamma <y, w>) centred mod 1| over a fig1_scatter CSV.
double stripe_residual(const std::string& scatter_csv, const PlotSpec& spec);

}  // namespace clwe::harness
