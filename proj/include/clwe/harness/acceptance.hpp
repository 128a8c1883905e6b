#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace clwe::harness {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;
    double seconds = 0.0;
    nlohmann::json data = nlohmann::json::object();
};

struct AcceptanceOptions {
    std::uint64_t seed = 20'240'601;
    std::vector<int> only;  // empty = all criteria
    std::filesystem::path out_dir = "acceptance_out";
};

inline constexpr int kCriterionCount = 11;

// Runs the criteria in order, printing one PASS/FAIL line per criterion to
// `out` as each completes. Writes <out_dir>/acceptance.json (timing-free)
// and the figure CSVs.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

std::string format_line(const CriterionResult& r);

}  // namespace clwe::harness
