#include "clwe/solvers/covariance.hpp"

#include "clwe/error.hpp"
#include "clwe/numerics/gaussian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace clwe::solvers {

namespace {
constexpr double kNullVariance = 1.0 / (2.0 * std::numbers::pi);
}

Matrix<double> sample_covariance(const distributions::SampleBatch& batch) {
    const std::size_t m = batch.size(), n = batch.dimension();
    if (m == 0) throw ParameterError("sample covariance: empty batch");
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        batch.y_data().data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    c.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    c /= static_cast<double>(m);
    Matrix<double> out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            out(i, j) = v;
            out(j, i) = v;
        }
    return out;
}

SymmetricEigen symmetric_eigen(const Matrix<double>& m, double tol) {
    if (!m.square() || m.rows() == 0) throw ParameterError("eigen: need a nonempty square matrix");
    const std::size_t n = m.rows();
    double scale = 1.0, asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            scale = std::max(scale, std::abs(m(i, j)));
            asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
        }
    if (asym > tol * scale) throw ParameterError("eigen: matrix is not symmetric within tolerance");
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5 * (m(i, j) + m(j, i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw ConsistencyError("eigen: solver did not converge");
    SymmetricEigen out;
    out.vectors = Matrix<double>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values.push_back(es.eigenvalues()(static_cast<Eigen::Index>(j)));
        for (std::size_t i = 0; i < n; ++i)
            out.vectors(i, j) = es.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix<double>& m, double tol) {
    return symmetric_eigen(m, tol).values;
}

double covariance_threshold(double beta, double gamma) {
    if (!(beta >= 0.0) || !(gamma > 0.0)) throw ParameterError("covariance threshold: need beta >= 0, gamma > 0");
    return 0.5 * gamma * gamma * std::exp(-std::numbers::pi * (beta * beta + gamma * gamma));
}

double hclwe_hidden_second_moment(double beta, double gamma) {
    if (!(beta >= 0.0) || !(gamma > 0.0)) throw ParameterError("second moment: need beta >= 0, gamma > 0");
    const double g = std::hypot(beta, gamma);
    const double m0 = to_double(numerics::discrete_gaussian_second_moment(make_real(g)));
    const double r2 = (beta / gamma) * (beta / gamma);
    return (m0 + r2 * kNullVariance) / (1.0 + r2);
}

std::string decision_name(Decision d) { return d == Decision::hclwe ? "hclwe" : "null"; }

CovarianceReport covariance_distinguisher(const distributions::SampleBatch& batch, double beta, double gamma) {
    CovarianceReport r;
    r.threshold = covariance_threshold(beta, gamma);
    r.samples = batch.size();
    r.beta = beta;
    r.gamma = gamma;
    const auto eig = symmetric_eigen(sample_covariance(batch), 1e-10);
    r.eigenvalues = eig.values;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
        const double dev = std::abs(eig.values[i] - kNullVariance);
        if (dev > r.threshold) ++r.displaced;
        if (dev > r.max_deviation) {
            r.max_deviation = dev;
            arg = i;
        }
    }
    r.extremal_vector = eig.vectors.column(arg);
    r.decision = r.displaced > 0 ? Decision::hclwe : Decision::null;
    return r;
}

nlohmann::json to_json(const CovarianceReport& r) {
    return {{"eigenvalues", r.eigenvalues},        {"threshold", r.threshold},
            {"decision", decision_name(r.decision)}, {"displaced", r.displaced},
            {"max_deviation", r.max_deviation},    {"extremal_vector", r.extremal_vector},
            {"samples", r.samples},                {"beta", r.beta},
            {"gamma", r.gamma}};
}

std::string csv_header_covariance() { return "samples,beta,gamma,threshold,max_deviation,displaced,decision"; }

std::string csv_row(const CovarianceReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << r.samples << ',' << r.beta << ',' << r.gamma << ',' << r.threshold << ',' << r.max_deviation << ','
       << r.displaced << ',' << decision_name(r.decision);
    return os.str();
}

}  // namespace clwe::solvers
