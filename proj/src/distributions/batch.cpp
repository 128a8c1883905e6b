#include "clwe/distributions/batch.hpp"

#include "clwe/error.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace clwe::distributions {

static_assert(std::endian::native == std::endian::little, "binary batch format assumes a little-endian host");

nlohmann::json to_json(const BatchMetadata& m) {
    return {{"n", m.n},
            {"beta", m.beta},
            {"gamma", m.gamma},
            {"seed", m.seed},
            {"generator", m.generator},
            {"fidelity", m.fidelity == Fidelity::decimal ? "decimal" : "float64"},
            {"precision_bits", m.precision_bits},
            {"extra", m.extra}};
}

BatchMetadata metadata_from_json(const nlohmann::json& j) {
    BatchMetadata m;
    m.n = j.at("n").get<std::size_t>();
    m.beta = j.value("beta", 0.0);
    m.gamma = j.value("gamma", 0.0);
    m.seed = j.value("seed", std::uint64_t{0});
    m.generator = j.value("generator", std::string{});
    m.fidelity = j.value("fidelity", std::string{"float64"}) == "decimal" ? Fidelity::decimal : Fidelity::float64;
    m.precision_bits = j.value("precision_bits", 0u);
    m.extra = j.value("extra", nlohmann::json::object());
    return m;
}

SampleBatch::SampleBatch(BatchMetadata meta, bool has_z) : meta_(std::move(meta)), has_z_(has_z) {
    if (meta_.n == 0) throw ParameterError("sample batch: dimension must be positive");
    if (meta_.fidelity == Fidelity::decimal && meta_.precision_bits == 0) meta_.precision_bits = kDefaultPrecisionBits;
}

void SampleBatch::check_open() const {
    if (sealed_) throw ConsistencyError("sample batch is sealed");
}

BatchMetadata& SampleBatch::mutable_metadata() {
    check_open();
    return meta_;
}

void SampleBatch::reserve(std::size_t rows) {
    y_.reserve(rows * meta_.n);
    if (has_z_) z_.reserve(rows);
}

void SampleBatch::append(std::span<const double> y) {
    check_open();
    if (has_z_) throw ParameterError("sample batch: this batch carries z");
    if (meta_.fidelity == Fidelity::decimal) throw ParameterError("sample batch: decimal batch needs precise samples");
    if (y.size() != meta_.n) throw ParameterError("sample batch: dimension mismatch");
    y_.insert(y_.end(), y.begin(), y.end());
}

void SampleBatch::append(std::span<const double> y, double z) {
    check_open();
    if (!has_z_) throw ParameterError("sample batch: this batch has no z column");
    if (meta_.fidelity == Fidelity::decimal) throw ParameterError("sample batch: decimal batch needs precise samples");
    if (y.size() != meta_.n) throw ParameterError("sample batch: dimension mismatch");
    if (!(z >= 0.0 && z < 1.0)) throw ParameterError("sample batch: z must lie in [0, 1)");
    y_.insert(y_.end(), y.begin(), y.end());
    z_.push_back(z);
}

void SampleBatch::append(const PreciseClweSample& s) {
    check_open();
    if (!has_z_) throw ParameterError("sample batch: this batch has no z column");
    if (meta_.fidelity != Fidelity::decimal) throw ParameterError("sample batch: float64 batch takes double samples");
    if (s.y.size() != meta_.n) throw ParameterError("sample batch: dimension mismatch");
    if (!(s.z >= 0 && s.z < 1)) throw ParameterError("sample batch: z must lie in [0, 1)");
    for (const auto& v : s.y) {
        y_.push_back(to_double(v));
        y_precise_.push_back(v);
    }
    z_.push_back(to_double(s.z));
    if (z_.back() >= 1.0) z_.back() = std::nextafter(1.0, 0.0);
    z_precise_.push_back(s.z);
}

PreciseClweSample SampleBatch::precise(std::size_t i) const {
    if (i >= size()) throw ParameterError("sample batch: row out of range");
    if (!has_z_) throw ParameterError("sample batch: no z column");
    const unsigned bits = meta_.fidelity == Fidelity::decimal ? meta_.precision_bits : kDefaultPrecisionBits;
    PreciseClweSample s;
    s.y.resize(meta_.n);
    if (meta_.fidelity == Fidelity::decimal) {
        for (std::size_t j = 0; j < meta_.n; ++j) s.y[j] = y_precise_[i * meta_.n + j];
        s.z = z_precise_[i];
    } else {
        for (std::size_t j = 0; j < meta_.n; ++j) s.y[j] = make_real(y_[i * meta_.n + j], bits);
        s.z = make_real(z_[i], bits);
    }
    return s;
}

std::vector<double> SampleBatch::projection(std::span<const double> v) const {
    if (v.size() != meta_.n) throw ParameterError("projection: dimension mismatch");
    const std::size_t rows = size();
    std::vector<double> out(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = y_.data() + i * meta_.n;
        double s = 0.0;
        for (std::size_t j = 0; j < meta_.n; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

std::vector<double> SampleBatch::coordinate(std::size_t j) const {
    if (j >= meta_.n) throw ParameterError("coordinate index out of range");
    const std::size_t rows = size();
    std::vector<double> out(rows);
    for (std::size_t i = 0; i < rows; ++i) out[i] = y_[i * meta_.n + j];
    return out;
}

namespace {

std::string format_double(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw ConsistencyError("cannot format value");
    return std::string(buf, end);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

}  // namespace

void write_csv(const SampleBatch& batch, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    const auto& m = batch.metadata();
    const bool decimal = m.fidelity == Fidelity::decimal;
    out << "n,beta,gamma,seed,generator\n";
    out << m.n << ',' << format_double(m.beta) << ',' << format_double(m.gamma) << ',' << m.seed << ','
        << m.generator << '\n';
    for (std::size_t j = 0; j < m.n; ++j) out << (j ? "," : "") << 'y' << (j + 1);
    if (batch.has_z()) out << ",z";
    out << '\n';
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (decimal) {
            const auto s = batch.precise(i);
            for (std::size_t j = 0; j < m.n; ++j) out << (j ? "," : "") << to_decimal_string(s.y[j]);
            out << ',' << to_decimal_string(s.z) << '\n';
            continue;
        }
        const auto y = batch.y(i);
        for (std::size_t j = 0; j < m.n; ++j) out << (j ? "," : "") << format_double(y[j]);
        if (batch.has_z()) out << ',' << format_double(batch.z(i));
        out << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path.string());
}

SampleBatch read_csv(const std::filesystem::path& path, unsigned precision_bits) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "n,beta,gamma,seed,generator")
        throw ConfigError(path.string() + ": missing CSV metadata header");
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing metadata values");
    const auto meta_cells = split_csv(line);
    if (meta_cells.size() != 5) throw ConfigError(path.string() + ": metadata row needs 5 fields");
    BatchMetadata m;
    m.n = static_cast<std::size_t>(parse_double(meta_cells[0], path, 2));
    m.beta = parse_double(meta_cells[1], path, 2);
    m.gamma = parse_double(meta_cells[2], path, 2);
    m.seed = std::stoull(meta_cells[3]);
    m.generator = meta_cells[4];
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing column header");
    const auto columns = split_csv(line);
    if (columns.size() != m.n && columns.size() != m.n + 1)
        throw ConfigError(path.string() + ": column header does not match n");
    const bool has_z = columns.size() == m.n + 1;

    std::vector<std::vector<std::string>> rows;
    const bool decimal = precision_bits > 0;
    std::size_t lineno = 3;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != columns.size())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": wrong number of fields");
        rows.push_back(std::move(cells));
    }
    if (decimal && !has_z) throw ConfigError(path.string() + ": decimal batches need a z column");
    if (decimal) {
        m.fidelity = Fidelity::decimal;
        m.precision_bits = precision_bits;
    }
    SampleBatch batch(m, has_z);
    batch.reserve(rows.size());
    std::vector<double> y(m.n);
    lineno = 3;
    for (const auto& cells : rows) {
        ++lineno;
        if (decimal) {
            PreciseClweSample s;
            s.y.resize(m.n);
            for (std::size_t j = 0; j < m.n; ++j) s.y[j] = make_real(cells[j], precision_bits);
            s.z = make_real(cells[m.n], precision_bits);
            batch.append(s);
            continue;
        }
        for (std::size_t j = 0; j < m.n; ++j) y[j] = parse_double(cells[j], path, lineno);
        if (has_z)
            batch.append(y, parse_double(cells[m.n], path, lineno));
        else
            batch.append(y);
    }
    batch.seal();
    return batch;
}

namespace {

constexpr char kMagic[8] = {'C', 'L', 'W', 'E', 'B', 'A', 'T', '\0'};

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ConfigError(path.string() + ": truncated batch file");
    return v;
}

}  // namespace

void write_binary(const SampleBatch& batch, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    const std::string meta = to_json(batch.metadata()).dump();
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kBinaryVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    put<std::uint64_t>(out, batch.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(batch.dimension()));
    put<std::uint8_t>(out, batch.has_z() ? 1 : 0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto y = batch.y(i);
        out.write(reinterpret_cast<const char*>(y.data()), static_cast<std::streamsize>(y.size() * sizeof(double)));
        if (batch.has_z()) put<double>(out, batch.z(i));
    }
    if (!out) throw ConfigError("write failed: " + path.string());
}

SampleBatch read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw ConfigError(path.string() + ": not a CLWE batch file");
    const auto version = get<std::uint32_t>(in, path);
    if (version != kBinaryVersion) throw ConfigError(path.string() + ": unsupported batch version");
    const auto meta_len = get<std::uint32_t>(in, path);
    std::string meta(meta_len, '\0');
    if (!in.read(meta.data(), meta_len)) throw ConfigError(path.string() + ": truncated metadata");
    BatchMetadata m = metadata_from_json(nlohmann::json::parse(meta));
    m.fidelity = Fidelity::float64;
    const auto rows = get<std::uint64_t>(in, path);
    const auto n = get<std::uint32_t>(in, path);
    const bool has_z = get<std::uint8_t>(in, path) != 0;
    if (n != m.n) throw ConfigError(path.string() + ": metadata dimension disagrees with payload");
    SampleBatch batch(m, has_z);
    batch.reserve(rows);
    std::vector<double> y(n);
    for (std::uint64_t i = 0; i < rows; ++i) {
        if (!in.read(reinterpret_cast<char*>(y.data()), static_cast<std::streamsize>(n * sizeof(double))))
            throw ConfigError(path.string() + ": truncated payload");
        if (has_z)
            batch.append(y, get<double>(in, path));
        else
            batch.append(y);
    }
    batch.seal();
    return batch;
}

}  // namespace clwe::distributions
