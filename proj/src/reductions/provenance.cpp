#include "clwe/reductions/provenance.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>

namespace clwe::reductions {

namespace {

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void add(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    }
};

}  // namespace

std::string batch_id(const distributions::SampleBatch& batch) {
    Fnv1a f;
    auto meta = distributions::to_json(batch.metadata());
    const std::string m = meta.dump();
    f.add(m.data(), m.size());
    f.add(batch.y_data().data(), batch.y_data().size() * sizeof(double));
    f.add(batch.z_data().data(), batch.z_data().size() * sizeof(double));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
    return buf;
}

nlohmann::json to_json(const ReductionProvenance& p) {
    return {{"input_batch", p.input_batch},
            {"operation", p.operation},
            {"parameters", p.parameters},
            {"acceptance", p.acceptance},
            {"output_batch", p.output_batch}};
}

ReductionProvenance make_provenance(const distributions::SampleBatch& input, std::string operation,
                                    nlohmann::json parameters, const distributions::SampleBatch& output,
                                    nlohmann::json acceptance) {
    return {batch_id(input), std::move(operation), std::move(parameters), std::move(acceptance), batch_id(output)};
}

}  // namespace clwe::reductions
