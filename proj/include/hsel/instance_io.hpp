#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsel/distribution.hpp"

namespace hsel {

// {"domain_size": d, "hypotheses": [[...], ...], "true_distribution": [...]}
// with the last key optional.
struct InstanceData {
    std::size_t domain_size = 0;
    std::vector<DiscreteDistribution> hypotheses;
    std::optional<DiscreteDistribution> truth;
};

nlohmann::json instance_to_json(const InstanceData& inst);
InstanceData instance_from_json(const nlohmann::json& j);

InstanceData load_instance(const std::string& path);
void save_instance(const InstanceData& inst, const std::string& path);

}  // namespace hsel
