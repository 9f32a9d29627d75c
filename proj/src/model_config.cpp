#include "nhtop/model_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nhtop::netmodel {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw SpecificationError("unknown key '" + key + "' in " + where);
    }
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw SpecificationError(where + "." + key + " must be a number");
    return v.get<double>();
}

NetworkSpec parse_custom(const json& obj) {
    if (!obj.is_object()) throw SpecificationError("'custom' must be an object");
    reject_unknown(obj, {"sites", "edges"}, "custom");
    NetworkSpec spec;
    if (!obj.contains("sites") || !obj["sites"].is_array()) {
        throw SpecificationError("custom.sites must be an array");
    }
    for (const auto& s : obj["sites"]) {
        if (!s.is_object()) throw SpecificationError("custom.sites entries must be objects");
        reject_unknown(s, {"kind", "detuning", "gamma"}, "custom.sites[]");
        SiteSpec site;
        const std::string kind = s.value("kind", std::string("cavity"));
        if (kind == "qubit") site.kind = SiteKind::qubit;
        else if (kind == "cavity") site.kind = SiteKind::cavity;
        else throw SpecificationError("site kind must be 'qubit' or 'cavity', got '" + kind + "'");
        if (s.contains("detuning")) site.detuning = number_at(s, "detuning", "site");
        if (s.contains("gamma")) site.loss_rate = number_at(s, "gamma", "site");
        spec.sites.push_back(site);
    }
    if (obj.contains("edges")) {
        if (!obj["edges"].is_array()) throw SpecificationError("custom.edges must be an array");
        for (const auto& e : obj["edges"]) {
            if (!e.is_object()) throw SpecificationError("custom.edges entries must be objects");
            reject_unknown(e, {"i", "j", "J"}, "custom.edges[]");
            if (!e.contains("i") || !e.contains("j") || !e["i"].is_number_integer() ||
                !e["j"].is_number_integer()) {
                throw SpecificationError("edge needs integer 'i' and 'j'");
            }
            spec.edges.push_back({e["i"].get<int>(), e["j"].get<int>(),
                                  e.contains("J") ? number_at(e, "J", "edge") : 0.0});
        }
    }
    spec.validate();
    return spec;
}

} // namespace

const std::map<std::string, double>& default_params(ModelKind kind) {
    static const std::map<std::string, double> impurity{{"J", 1.0}, {"kappa", 0.5}, {"gamma", 4.0}};
    static const std::map<std::string, double> ssh{{"J1", 1.0}, {"J2", 1.8}, {"gamma", 0.5}};
    static const std::map<std::string, double> three{{"J1", 1.0}, {"J2", 0.3}, {"J3", 2.0},
                                                     {"J", 0.7},  {"eps1", 0.0}, {"eps2", 0.0},
                                                     {"gamma", 0.5}};
    static const std::map<std::string, double> none;
    switch (kind) {
    case ModelKind::impurity: return impurity;
    case ModelKind::ssh: return ssh;
    case ModelKind::three_site: return three;
    case ModelKind::custom: return none;
    }
    return none;
}

int default_size(ModelKind kind) {
    switch (kind) {
    case ModelKind::impurity: return 4;
    case ModelKind::ssh: return 8;
    case ModelKind::three_site: return 8;
    case ModelKind::custom: return 0;
    }
    return 0;
}

ModelConfig parse_model_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecificationError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SpecificationError("model config must be a JSON object");
    reject_unknown(doc, {"model", "N", "params", "custom"}, "model config");
    ModelConfig cfg;
    try {
        if (!doc.contains("model") || !doc["model"].is_string()) {
            throw SpecificationError("'model' must be a string");
        }
        cfg.model = model_kind_from_string(doc["model"].get<std::string>());
        if (doc.contains("N")) {
            if (!doc["N"].is_number_integer()) throw SpecificationError("'N' must be an integer");
            cfg.N = doc["N"].get<int>();
        }
        if (doc.contains("params")) {
            const auto& p = doc["params"];
            if (!p.is_object()) throw SpecificationError("'params' must be an object");
            for (const auto& [key, value] : p.items()) {
                if (!value.is_number()) throw SpecificationError("params." + key + " must be a number");
                cfg.params[key] = value.get<double>();
            }
        }
        if (doc.contains("custom")) cfg.custom = parse_custom(doc["custom"]);
    } catch (const json::exception& e) {
        throw SpecificationError(std::string("bad model config: ") + e.what());
    }
    if (cfg.model == ModelKind::custom && !cfg.custom) {
        throw SpecificationError("model 'custom' requires a 'custom' section");
    }
    const auto& allowed = default_params(cfg.model);
    for (const auto& [key, value] : cfg.params) {
        if (!allowed.contains(key)) {
            throw SpecificationError("unknown parameter '" + key + "' for model " + to_string(cfg.model));
        }
    }
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecificationError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str());
}

double param_or_default(const ModelConfig& cfg, const std::string& name) {
    if (auto it = cfg.params.find(name); it != cfg.params.end()) return it->second;
    const auto& defaults = default_params(cfg.model);
    if (auto it = defaults.find(name); it != defaults.end()) return it->second;
    throw SpecificationError("model " + to_string(cfg.model) + " has no parameter '" + name + "'");
}

EffectiveHamiltonian build_model(const ModelConfig& cfg) {
    const auto& allowed = default_params(cfg.model);
    for (const auto& [key, value] : cfg.params) {
        if (!allowed.contains(key)) {
            throw SpecificationError("unknown parameter '" + key + "' for model " + to_string(cfg.model));
        }
    }
    const int n = cfg.N > 0 ? cfg.N : default_size(cfg.model);
    auto p = [&](const std::string& name) { return param_or_default(cfg, name); };
    switch (cfg.model) {
    case ModelKind::impurity:
        return build_impurity_model(n, p("J"), p("kappa"), p("gamma"));
    case ModelKind::ssh:
        return build_ssh_model(n, p("J1"), p("J2"), p("gamma"));
    case ModelKind::three_site:
        return build_three_site_model(
            n, {p("J1"), p("J2"), p("J3"), p("J"), p("eps1"), p("eps2"), p("gamma")});
    case ModelKind::custom:
        if (!cfg.custom) throw SpecificationError("model 'custom' requires a 'custom' section");
        if (cfg.N > 0 && cfg.N != static_cast<int>(cfg.custom->sites.size())) {
            throw SpecificationError("N does not match the number of custom sites");
        }
        return build_effective_hamiltonian(*cfg.custom);
    }
    throw SpecificationError("unsupported model");
}

} // namespace nhtop::netmodel
