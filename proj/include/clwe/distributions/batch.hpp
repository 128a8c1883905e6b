#pragma once

#include "clwe/distributions/params.hpp"
#include "clwe/numerics/real.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace clwe::distributions {

struct ClweSample {
    std::vector<double> y;
    double z = 0.0;  // in [0, 1)
};

struct HClweSample {
    std::vector<double> y;
};

// Solver-precision CLWE sample; z is reduced mod 1 at the precision of y.
struct PreciseClweSample {
    Vector<Real> y;
    Real z;
};

enum class Fidelity { float64, decimal };

struct BatchMetadata {
    std::size_t n = 0;
    double beta = 0.0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::string generator;
    Fidelity fidelity = Fidelity::float64;
    unsigned precision_bits = 0;  // decimal fidelity only
    nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const BatchMetadata& m);
BatchMetadata metadata_from_json(const nlohmann::json& j);

// Structure-of-arrays sample store: y row-major (rows x n), z parallel. A
// decimal-fidelity batch also keeps full-precision copies. Appending to a
// sealed batch throws.
class SampleBatch {
public:
    SampleBatch(BatchMetadata meta, bool has_z);

    void append(std::span<const double> y);
    void append(std::span<const double> y, double z);
    void append(const ClweSample& s) { append(s.y, s.z); }
    void append(const HClweSample& s) { append(s.y); }
    void append(const PreciseClweSample& s);
    void reserve(std::size_t rows);
    void seal() { sealed_ = true; }

    bool sealed() const { return sealed_; }
    bool has_z() const { return has_z_; }
    std::size_t size() const { return meta_.n == 0 ? 0 : y_.size() / meta_.n; }
    std::size_t dimension() const { return meta_.n; }
    const BatchMetadata& metadata() const { return meta_; }
    BatchMetadata& mutable_metadata();

    std::span<const double> y(std::size_t i) const { return {y_.data() + i * meta_.n, meta_.n}; }
    double z(std::size_t i) const { return z_.at(i); }
    const std::vector<double>& y_data() const { return y_; }
    const std::vector<double>& z_data() const { return z_; }

    PreciseClweSample precise(std::size_t i) const;

    // <y_i, v> for every row.
    std::vector<double> projection(std::span<const double> v) const;
    std::vector<double> coordinate(std::size_t j) const;

private:
    void check_open() const;

    BatchMetadata meta_;
    bool has_z_;
    bool sealed_ = false;
    std::vector<double> y_;
    std::vector<double> z_;
    std::vector<Real> y_precise_;
    std::vector<Real> z_precise_;
};

// CSV: line 1 "n,beta,gamma,seed,generator", line 2 their values, line 3 the
// column names y1..yn[,z], then one row per sample. Decimal-fidelity batches
// write full decimal expansions; reading with precision_bits > 0 restores one.
void write_csv(const SampleBatch& batch, const std::filesystem::path& path);
SampleBatch read_csv(const std::filesystem::path& path, unsigned precision_bits = 0);

// Binary: "CLWEBAT\0", u32 version, u32 metadata length, metadata JSON,
// u64 rows, u32 n, u8 has_z, then rows x (n [+1]) little-endian float64.
void write_binary(const SampleBatch& batch, const std::filesystem::path& path);
SampleBatch read_binary(const std::filesystem::path& path);

inline constexpr std::uint32_t kBinaryVersion = 1;

}  // namespace clwe::distributions
