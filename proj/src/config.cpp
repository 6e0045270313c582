// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qll/error.hpp"
#include "qll/experiments.hpp"

namespace qll {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::config, "config: " + what); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) config_error(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) config_error("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw std::runtime_error("");
        } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_integer()) throw std::runtime_error("");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw std::runtime_error("");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw std::runtime_error("");
        }
        out = v.get<T>();
    } catch (const std::exception&) {
        config_error("wrong type for '" + std::string(key) + "' in " + where);
    }
}

json to_json(const ExperimentConfig& c) {
    const QSParams& p = c.params;
    json j;
    j["version"] = 1;
    j["grid"] = {{"dim", c.grid.dim}, {"n", c.grid.n}, {"box_length", c.grid.box_length}};
    j["t_final"] = c.t_final;
    j["eps_list"] = c.eps_list;
    j["eps"] = p.eps;
    j["m"] = c.m;
    j["dt"] = {{"rule", c.dt.rule}, {"value", c.dt.value}, {"max", c.dt.max}};
    j["sample_interval"] = c.sample_interval;
    j["remainder_order"] = c.remainder_order;
    j["e0"] = c.e0;
    j["scenario"] = {{"name", c.scenario.name},
                     {"amplitude", c.scenario.amplitude},
                     {"mode", c.scenario.mode},
                     {"shear_amplitude", c.scenario.shear_amplitude}};
    j["params"] = {{"a", p.bulk.a},       {"b", p.bulk.b},       {"c", p.bulk.c},       {"L1", p.elastic.L1},
                   {"L2", p.elastic.L2},  {"L3", p.elastic.L3},  {"beta1", p.beta1},    {"beta4", p.beta4},
                   {"beta5", p.beta5},    {"beta6", p.beta6},    {"beta7", p.beta7},    {"mu1", p.mu1},
                   {"mu2", p.mu2},        {"J", p.J}};
    j["model"] = c.model;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["force_inadmissible"] = c.force_inadmissible;
    return j;
}

}  // namespace

ExperimentConfig default_config() {
    ExperimentConfig c;
    c.params.eps = 0.1;
    c.params.m = c.m;
    return c;
}

void ExperimentConfig::validate() const {
    if (grid.dim != 2 && grid.dim != 3) config_error("grid.dim must be 2 or 3");
    if (grid.n < 8 || grid.n % 2 != 0) config_error("grid.n must be even and >= 8");
    if (!(grid.box_length > 0.0)) config_error("grid.box_length must be positive");
    if (!(t_final > 0.0)) config_error("t_final must be positive");
    if (eps_list.empty()) config_error("eps_list must not be empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) config_error("eps_list entries must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) config_error("eps_list must be strictly decreasing");
    }
    if (!(params.eps > 0.0)) config_error("eps must be positive");
    if (m < 0) config_error("m must be nonnegative");
    if (dt.rule != "auto" && dt.rule != "fixed") config_error("dt.rule must be 'auto' or 'fixed'");
    if (!(dt.value > 0.0) || !(dt.max > 0.0)) config_error("dt.value and dt.max must be positive");
    if (!(sample_interval > 0.0) || sample_interval > t_final * (1.0 + 1e-12))
        config_error("sample_interval must be in (0, t_final]");
    if (remainder_order < 1 || remainder_order > 3) config_error("remainder_order must be 1, 2 or 3");
    if (!(e0 > 0.0)) config_error("e0 must be positive");
    if (scenario.name != "equilibrium" && scenario.name != "director-wave" && scenario.name != "shear")
        config_error("scenario.name must be equilibrium, director-wave or shear");
    if (scenario.mode < 1) config_error("scenario.mode must be >= 1");
    if (model != "qs" && model != "el") config_error("model must be 'qs' or 'el'");
    if (threads < 1) config_error("threads must be >= 1");
    params.bulk.validate();
    params.elastic.validate();
    if (!(params.J > 0.0)) fail(ErrorCode::invariant, "Qian-Sheng parameters: J must be positive");
    if (!force_inadmissible) {
        const BetaReport r = beta_admissible(params);
        if (!r.admissible) fail(ErrorCode::invariant, r.violations.front());
    }
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    check_keys(j,
               {"version", "grid", "t_final", "eps_list", "eps", "m", "dt", "sample_interval", "remainder_order", "e0",
                "scenario", "params", "model", "seed", "threads", "force_inadmissible"},
               "config");
    ExperimentConfig c = default_config();
    int version = 1;
    read(j, "version", version, "config");
    if (version != 1) config_error("unsupported version " + std::to_string(version));
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, {"dim", "n", "box_length"}, "grid");
        read(g, "dim", c.grid.dim, "grid");
        read(g, "n", c.grid.n, "grid");
        read(g, "box_length", c.grid.box_length, "grid");
    }
    read(j, "t_final", c.t_final, "config");
    if (j.contains("eps_list")) {
        const json& e = j["eps_list"];
        if (!e.is_array()) config_error("eps_list must be an array");
        c.eps_list.clear();
        for (const json& x : e) {
            if (!x.is_number()) config_error("eps_list entries must be numbers");
            c.eps_list.push_back(x.get<double>());
        }
    }
    read(j, "eps", c.params.eps, "config");
    read(j, "m", c.m, "config");
    if (j.contains("dt")) {
        const json& d = j["dt"];
        check_keys(d, {"rule", "value", "max"}, "dt");
        read(d, "rule", c.dt.rule, "dt");
        read(d, "value", c.dt.value, "dt");
        read(d, "max", c.dt.max, "dt");
    }
    read(j, "sample_interval", c.sample_interval, "config");
    read(j, "remainder_order", c.remainder_order, "config");
    read(j, "e0", c.e0, "config");
    if (j.contains("scenario")) {
        const json& s = j["scenario"];
        check_keys(s, {"name", "amplitude", "mode", "shear_amplitude"}, "scenario");
        read(s, "name", c.scenario.name, "scenario");
        read(s, "amplitude", c.scenario.amplitude, "scenario");
        read(s, "mode", c.scenario.mode, "scenario");
        read(s, "shear_amplitude", c.scenario.shear_amplitude, "scenario");
    }
    if (j.contains("params")) {
        const json& p = j["params"];
        check_keys(p, {"a", "b", "c", "L1", "L2", "L3", "beta1", "beta4", "beta5", "beta6", "beta7", "mu1", "mu2", "J"},
                   "params");
        QSParams& q = c.params;
        read(p, "a", q.bulk.a, "params");
        read(p, "b", q.bulk.b, "params");
        read(p, "c", q.bulk.c, "params");
        read(p, "L1", q.elastic.L1, "params");
        read(p, "L2", q.elastic.L2, "params");
        read(p, "L3", q.elastic.L3, "params");
        read(p, "beta1", q.beta1, "params");
        read(p, "beta4", q.beta4, "params");
        read(p, "beta5", q.beta5, "params");
        read(p, "beta6", q.beta6, "params");
        read(p, "beta7", q.beta7, "params");
        read(p, "mu1", q.mu1, "params");
        read(p, "mu2", q.mu2, "params");
        read(p, "J", q.J, "params");
    }
    read(j, "model", c.model, "config");
    read(j, "seed", c.seed, "config");
    read(j, "threads", c.threads, "config");
    read(j, "force_inadmissible", c.force_inadmissible, "config");
    c.params.m = c.m;
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) config_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

std::string config_hash(const ExperimentConfig& cfg) {
    // thread count does not change results
    json j = to_json(cfg);
    j.erase("threads");
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void apply_thread_env(ExperimentConfig& cfg) {
    const char* e = std::getenv("QLL_THREADS");
    if (!e || !*e) return;
    char* end = nullptr;
    const long v = std::strtol(e, &end, 10);
    if (*end != '\0' || v < 1) config_error("QLL_THREADS must be a positive integer");
    cfg.threads = static_cast<int>(v);
}

}  // namespace qll
