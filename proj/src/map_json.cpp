#include "grnf/map_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grnf/errors.hpp"
#include "grnf/partition.hpp"

namespace grnf {

namespace {

using nlohmann::json;

json config_to_json(const DistributionConfig& config) {
    return json{{"lambda", config.lambda},
                {"k_max", config.k_max},
                {"sigma", config.sigma},
                {"activation_e", config.activation_e},
                {"activation_i", config.activation_i},
                {"normalization", config.normalization == Normalization::mean ? "mean" : "sum"},
                {"channels", config.channels}};
}

DistributionConfig config_from_json(const json& j) {
    DistributionConfig config;
    config.lambda = j.at("lambda").get<double>();
    config.k_max = j.at("k_max").get<int>();
    config.sigma = j.at("sigma").get<double>();
    config.activation_e = j.at("activation_e").get<std::string>();
    config.activation_i = j.at("activation_i").get<std::string>();
    const auto norm = j.at("normalization").get<std::string>();
    if (norm == "mean") {
        config.normalization = Normalization::mean;
    } else if (norm == "sum") {
        config.normalization = Normalization::sum;
    } else {
        throw ValidationError("map json: normalization must be \"mean\" or \"sum\"");
    }
    config.channels = j.at("channels").get<int>();
    validate_config(config);
    return config;
}

}  // namespace

std::string map_to_json(const GrnfMap& map) {
    json j;
    j["version"] = map.version;
    j["M"] = map.M;
    j["seed"] = map.seed;
    j["config"] = config_to_json(map.config);
    if (map.proposal) j["proposal"] = config_to_json(*map.proposal);
    json params = json::array();
    for (const auto& w : map.params) {
        json theta_f = json::array();
        for (double v : w.theta_F.theta_lin) theta_f.push_back(v);
        for (double v : w.theta_F.theta_bias) theta_f.push_back(v);
        json theta_h = json::array();
        for (double v : w.theta_H.theta) theta_h.push_back(v);
        theta_h.push_back(w.theta_H.bias);
        params.push_back(json{{"k", w.k}, {"theta_F", std::move(theta_f)}, {"theta_H", std::move(theta_h)}});
    }
    j["params"] = std::move(params);
    j["weights"] = map.weights;
    return j.dump(2) + "\n";
}

GrnfMap map_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("map json: parse failure: ") + e.what());
    }
    try {
        GrnfMap map;
        map.version = j.at("version").get<int>();
        if (map.version != 1) throw ValidationError("map json: unsupported version");
        map.M = j.at("M").get<int>();
        map.seed = j.at("seed").get<std::uint64_t>();
        map.config = config_from_json(j.at("config"));
        if (j.contains("proposal")) map.proposal = config_from_json(j.at("proposal"));
        const std::size_t d = static_cast<std::size_t>(map.config.channels);

        const auto& params = j.at("params");
        if (!params.is_array() || params.size() != static_cast<std::size_t>(map.M)) {
            throw ValidationError("map json: params must be an array of M entries");
        }
        map.params.reserve(params.size());
        for (const auto& p : params) {
            FeatureParams w;
            w.k = p.at("k").get<int>();
            if (w.k < 1 || w.k > kMaxFeatureOrder) {
                throw ValidationError("map json: feature order out of range");
            }
            const std::size_t lin = bell(w.k + 2) * d;
            const std::size_t bias = bell(w.k);
            const auto theta_f = p.at("theta_F").get<std::vector<double>>();
            if (theta_f.size() != lin + bias) {
                throw ValidationError("map json: theta_F has the wrong length");
            }
            const auto theta_h = p.at("theta_H").get<std::vector<double>>();
            if (theta_h.size() != bias + 1) {
                throw ValidationError("map json: theta_H has the wrong length");
            }
            w.theta_F.k = w.k;
            w.theta_F.theta_lin.assign(theta_f.begin(), theta_f.begin() + static_cast<std::ptrdiff_t>(lin));
            w.theta_F.theta_bias.assign(theta_f.begin() + static_cast<std::ptrdiff_t>(lin), theta_f.end());
            w.theta_H.k = w.k;
            w.theta_H.theta.assign(theta_h.begin(), theta_h.end() - 1);
            w.theta_H.bias = theta_h.back();
            map.params.push_back(std::move(w));
        }
        map.weights = j.at("weights").get<std::vector<double>>();
        if (map.weights.size() != static_cast<std::size_t>(map.M)) {
            throw ValidationError("map json: weights must have M entries");
        }
        return map;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("map json: schema violation: ") + e.what());
    }
}

void save_map(const GrnfMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("save_map: cannot open " + path + " for writing");
    out << map_to_json(map);
    if (!out) throw ValidationError("save_map: write failure on " + path);
}

GrnfMap load_map(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("load_map: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return map_from_json(buffer.str());
}

}  // namespace grnf
