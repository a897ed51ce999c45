#include "hsel/instance_io.hpp"

#include <fstream>

#include "hsel/error.hpp"

namespace hsel {

namespace {

DiscreteDistribution read_dist(const nlohmann::json& j, std::size_t d, const std::string& what) {
    if (!j.is_array()) fail(ErrorKind::InvalidDistribution, what + " is not an array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) fail(ErrorKind::InvalidDistribution, what + " has a non-numeric entry");
        v.push_back(e.get<double>());
    }
    if (v.size() != d)
        fail(ErrorKind::DomainMismatch, what + " has " + std::to_string(v.size()) +
                                            " entries, expected " + std::to_string(d));
    try {
        return DiscreteDistribution(std::move(v));
    } catch (const Error& e) {
        fail(e.kind(), what + ": " + e.what());
    }
}

}  // namespace

nlohmann::json instance_to_json(const InstanceData& inst) {
    nlohmann::json j;
    j["domain_size"] = inst.domain_size;
    j["hypotheses"] = nlohmann::json::array();
    for (const auto& h : inst.hypotheses) j["hypotheses"].push_back(h.probs());
    if (inst.truth) j["true_distribution"] = inst.truth->probs();
    return j;
}

InstanceData instance_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("domain_size") || !j.contains("hypotheses"))
        fail(ErrorKind::Config, "instance needs domain_size and hypotheses");
    if (!j["domain_size"].is_number_integer() || j["domain_size"].get<long long>() <= 0)
        fail(ErrorKind::Config, "domain_size must be a positive integer");
    InstanceData inst;
    inst.domain_size = j["domain_size"].get<std::size_t>();
    const auto& hs = j["hypotheses"];
    if (!hs.is_array() || hs.empty()) fail(ErrorKind::Config, "hypotheses must be a nonempty array");
    for (std::size_t i = 0; i < hs.size(); ++i)
        inst.hypotheses.push_back(read_dist(hs[i], inst.domain_size, "hypothesis " + std::to_string(i)));
    if (j.contains("true_distribution") && !j["true_distribution"].is_null())
        inst.truth = read_dist(j["true_distribution"], inst.domain_size, "true_distribution");
    return inst;
}

InstanceData load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, path + ": " + e.what());
    }
    return instance_from_json(j);
}

void save_instance(const InstanceData& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << instance_to_json(inst).dump() << '\n';
}

}  // namespace hsel
