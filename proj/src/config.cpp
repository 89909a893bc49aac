#include "ob2d/config.hpp"

#include "ob2d/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ob2d {
namespace {

using json = nlohmann::json;

void check_keys(const json& obj, const char* section, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string("config: '") + section + "' must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : obj.items())
        if (!ok.count(item.key()))
            throw ConfigError(std::string("config: unknown key '") + item.key() + "' in '" + section + "'");
}

template <class T>
void read(const json& obj, const char* section, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: '") + section + "." + key + "' has the wrong type");
    }
}

void read_number(const json& obj, const char* section, const char* key, double& out) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_number()) throw ConfigError(std::string("config: '") + section + "." + key + "' must be a number");
    out = obj.at(key).get<double>();
}

void read_integer(const json& obj, const char* section, const char* key, long& out) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_number_integer())
        throw ConfigError(std::string("config: '") + section + "." + key + "' must be an integer");
    out = obj.at(key).get<long>();
}

void read_numbers(const json& obj, const char* section, const char* key, std::vector<double>& out) {
    if (!obj.contains(key)) return;
    const json& a = obj.at(key);
    if (!a.is_array()) throw ConfigError(std::string("config: '") + section + "." + key + "' must be an array");
    out.clear();
    for (const json& v : a) {
        if (!v.is_number()) throw ConfigError(std::string("config: '") + section + "." + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
}

InitialKind parse_kind(const std::string& s) {
    if (s == "taylor_green") return InitialKind::taylor_green;
    if (s == "random_bandlimited") return InitialKind::random_bandlimited;
    if (s == "shear_layer") return InitialKind::shear_layer;
    throw ConfigError("config: unknown initial_condition.kind '" + s + "'");
}

TauKind parse_tau_kind(const std::string& s) {
    if (s == "zero") return TauKind::zero;
    if (s == "random_symmetric") return TauKind::random_symmetric;
    if (s == "from_Du") return TauKind::from_Du;
    throw ConfigError("config: unknown initial_condition.tau_kind '" + s + "'");
}

} // namespace

const char* to_string(InitialKind k) {
    switch (k) {
    case InitialKind::taylor_green: return "taylor_green";
    case InitialKind::random_bandlimited: return "random_bandlimited";
    case InitialKind::shear_layer: return "shear_layer";
    }
    return "unknown";
}

const char* to_string(TauKind k) {
    switch (k) {
    case TauKind::zero: return "zero";
    case TauKind::random_symmetric: return "random_symmetric";
    case TauKind::from_Du: return "from_Du";
    }
    return "unknown";
}

void RunConfig::validate() const {
    if (grid.n < 8 || grid.n % 2 != 0) throw ConfigError("config: grid.n must be even and >= 8");
    if (!(grid.length > 0.0)) throw ConfigError("config: grid.length must be > 0");
    params.validate();
    stepper.validate();
    diagnostics.validate();
    if (!(initial.amplitude >= 0.0)) throw ConfigError("config: initial_condition.amplitude must be >= 0");
    if (!(initial.kmin >= 1.0) || !(initial.kmax >= initial.kmin))
        throw ConfigError("config: initial_condition.band needs 1 <= kmin <= kmax");
    if (output.snapshot_every < 0 || output.checkpoint_every < 0)
        throw ConfigError("config: output cadences must be >= 0");
}

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(doc, "<root>", {"grid", "params", "stepper", "initial_condition", "diagnostics", "output"});
    RunConfig cfg;

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        check_keys(g, "grid", {"n", "length"});
        long n = cfg.grid.n;
        read_integer(g, "grid", "n", n);
        cfg.grid.n = static_cast<int>(n);
        read_number(g, "grid", "length", cfg.grid.length);
    }
    if (doc.contains("params")) {
        const json& p = doc["params"];
        check_keys(p, "params", {"nu", "gamma_u", "mu", "alpha", "beta", "kappa", "gamma_f", "eta", "b"});
        ModelParams& m = cfg.params;
        read_number(p, "params", "nu", m.nu);
        read_number(p, "params", "gamma_u", m.gamma_u);
        read_number(p, "params", "mu", m.mu);
        read_number(p, "params", "alpha", m.alpha);
        read_number(p, "params", "beta", m.beta);
        read_number(p, "params", "kappa", m.kappa);
        read_number(p, "params", "gamma_f", m.gamma_f);
        read_number(p, "params", "eta", m.eta);
        read_number(p, "params", "b", m.b);
    }
    if (doc.contains("stepper")) {
        const json& s = doc["stepper"];
        check_keys(s, "stepper", {"dt", "t_end", "cfl_target", "max_steps", "blowup_threshold"});
        read_number(s, "stepper", "dt", cfg.stepper.dt);
        read_number(s, "stepper", "t_end", cfg.stepper.t_end);
        read_number(s, "stepper", "cfl_target", cfg.stepper.cfl_target);
        read_integer(s, "stepper", "max_steps", cfg.stepper.max_steps);
        read_number(s, "stepper", "blowup_threshold", cfg.stepper.blowup_threshold);
    }
    if (doc.contains("initial_condition")) {
        const json& ic = doc["initial_condition"];
        check_keys(ic, "initial_condition", {"kind", "seed", "amplitude", "band", "tau_kind"});
        std::string kind = to_string(cfg.initial.kind);
        std::string tau_kind = to_string(cfg.initial.tau_kind);
        read(ic, "initial_condition", "kind", kind);
        read(ic, "initial_condition", "tau_kind", tau_kind);
        cfg.initial.kind = parse_kind(kind);
        cfg.initial.tau_kind = parse_tau_kind(tau_kind);
        if (ic.contains("seed")) {
            if (!ic["seed"].is_number_unsigned()) throw ConfigError("config: 'initial_condition.seed' must be a non-negative integer");
            cfg.initial.seed = ic["seed"].get<std::uint64_t>();
        }
        read_number(ic, "initial_condition", "amplitude", cfg.initial.amplitude);
        if (ic.contains("band")) {
            std::vector<double> band;
            read_numbers(ic, "initial_condition", "band", band);
            if (band.size() != 2) throw ConfigError("config: 'initial_condition.band' must be [kmin, kmax]");
            cfg.initial.kmin = band[0];
            cfg.initial.kmax = band[1];
        }
    }
    if (doc.contains("diagnostics")) {
        const json& d = doc["diagnostics"];
        check_keys(d, "diagnostics", {"r_list", "s_list", "pq_list", "cadence"});
        read_numbers(d, "diagnostics", "r_list", cfg.diagnostics.r_list);
        read_numbers(d, "diagnostics", "s_list", cfg.diagnostics.s_list);
        if (d.contains("pq_list")) {
            const json& a = d["pq_list"];
            if (!a.is_array()) throw ConfigError("config: 'diagnostics.pq_list' must be an array of [p, q] pairs");
            cfg.diagnostics.pq_list.clear();
            for (const json& pair : a) {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
                    throw ConfigError("config: 'diagnostics.pq_list' entries must be [p, q]");
                cfg.diagnostics.pq_list.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
        }
        read_integer(d, "diagnostics", "cadence", cfg.diagnostics.cadence);
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        check_keys(o, "output", {"dir", "snapshot_every", "checkpoint_every"});
        read(o, "output", "dir", cfg.output.dir);
        read_integer(o, "output", "snapshot_every", cfg.output.snapshot_every);
        read_integer(o, "output", "checkpoint_every", cfg.output.checkpoint_every);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json pq = json::array();
    for (const auto& [p, q] : cfg.diagnostics.pq_list) pq.push_back({p, q});
    const json doc = {
        {"grid", {{"n", cfg.grid.n}, {"length", cfg.grid.length}}},
        {"params",
         {{"nu", cfg.params.nu},
          {"gamma_u", cfg.params.gamma_u},
          {"mu", cfg.params.mu},
          {"alpha", cfg.params.alpha},
          {"beta", cfg.params.beta},
          {"kappa", cfg.params.kappa},
          {"gamma_f", cfg.params.gamma_f},
          {"eta", cfg.params.eta},
          {"b", cfg.params.b}}},
        {"stepper",
         {{"dt", cfg.stepper.dt},
          {"t_end", cfg.stepper.t_end},
          {"cfl_target", cfg.stepper.cfl_target},
          {"max_steps", cfg.stepper.max_steps},
          {"blowup_threshold", cfg.stepper.blowup_threshold}}},
        {"initial_condition",
         {{"kind", to_string(cfg.initial.kind)},
          {"seed", cfg.initial.seed},
          {"amplitude", cfg.initial.amplitude},
          {"band", {cfg.initial.kmin, cfg.initial.kmax}},
          {"tau_kind", to_string(cfg.initial.tau_kind)}}},
        {"diagnostics",
         {{"r_list", cfg.diagnostics.r_list},
          {"s_list", cfg.diagnostics.s_list},
          {"pq_list", pq},
          {"cadence", cfg.diagnostics.cadence}}},
        {"output",
         {{"dir", cfg.output.dir},
          {"snapshot_every", cfg.output.snapshot_every},
          {"checkpoint_every", cfg.output.checkpoint_every}}},
    };
    return doc.dump(2) + "\n";
}

} // namespace ob2d
