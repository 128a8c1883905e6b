#pragma once

#include "clwe/distributions/batch.hpp"

#include "json.hpp"

#include <string>

namespace clwe::reductions {

// 16 hex digits of FNV-1a over the batch metadata and payload bytes.
std::string batch_id(const distributions::SampleBatch& batch);

struct ReductionProvenance {
    std::string input_batch;
    std::string operation;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json acceptance = nlohmann::json::object();
    std::string output_batch;
};

nlohmann::json to_json(const ReductionProvenance& p);

ReductionProvenance make_provenance(const distributions::SampleBatch& input, std::string operation,
                                    nlohmann::json parameters, const distributions::SampleBatch& output,
                                    nlohmann::json acceptance = nlohmann::json::object());

}  // namespace clwe::reductions
