#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/numerics/matrix.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace clwe::solvers {

// (1/m) A^T A with the samples as the rows of A. Not mean-centred.
Matrix<double> sample_covariance(const distributions::SampleBatch& batch);

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix<double> vectors;      // column j belongs to values[j]
};

// Throws ParameterError when max |M - M^T| > tol * max(1, max |M|).
SymmetricEigen symmetric_eigen(const Matrix<double>& m, double tol = 1e-12);
std::vector<double> symmetric_eigenvalues(const Matrix<double>& m, double tol = 1e-12);

// 1/2 gamma^2 exp(-pi (beta^2 + gamma^2)).
double covariance_threshold(double beta, double gamma);

// Exact E[<y, w>^2] under H_{w, beta, gamma}:
//   (M(g) + (beta/gamma)^2 / (2 pi)) / (1 + (beta/gamma)^2),  g = sqrt(beta^2 + gamma^2),
// with M(g) the second moment of D_{(1/g)Z}. beta = 0 gives M(gamma).
double hclwe_hidden_second_moment(double beta, double gamma);

enum class Decision { null, hclwe };
std::string decision_name(Decision d);

struct CovarianceReport {
    std::vector<double> eigenvalues;  // ascending
    double threshold = 0.0;
    Decision decision = Decision::null;
    // Eigenvalues with |mu - 1/(2 pi)| > threshold; ties go to null.
    std::size_t displaced = 0;
    double max_deviation = 0.0;
    std::vector<double> extremal_vector;  // eigenvector of the most deviating eigenvalue
    std::size_t samples = 0;
    double beta = 0.0;
    double gamma = 0.0;
};

CovarianceReport covariance_distinguisher(const distributions::SampleBatch& batch, double beta, double gamma);

nlohmann::json to_json(const CovarianceReport& r);
// CSV row: samples,beta,gamma,threshold,max_deviation,displaced,decision.
std::string csv_header_covariance();
std::string csv_row(const CovarianceReport& r);

}  // namespace clwe::solvers
