#include "decohere/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace decohere {

using nlohmann::json;

namespace {

struct ScenarioInfo {
    Scenario scenario;
    const char* name;
    const char* description;
};

constexpr ScenarioInfo kScenarios[] = {
    {Scenario::Kernels, "kernels",
     "decoherence kernels f(t), phi(t): closed sums vs quadrature, short-time exponents"},
    {Scenario::SingleBathCat, "single_bath_cat",
     "two-point cat under the single-bath map; visibility against exp(-delta^2 f)"},
    {Scenario::DoubleBath, "double_bath",
     "Gaussian state under the double-bath map; diagonal broadening against the smoothing prediction"},
    {Scenario::GoldenRuleCompare, "golden_rule_compare",
     "Ohmic bath: f(t)/t against the asymptotic rate and the golden-rule rate"},
    {Scenario::AccelerationSweep, "acceleration_sweep",
     "tau_dec/tau_diss over a separation sweep; log-log slope against -2"},
    {Scenario::SymmetryProtection, "symmetry_protection",
     "S = Sigma^2 coupling: protected degenerate coherences, damped nondegenerate ones"},
    {Scenario::OracleValidate, "oracle_validate",
     "truncated-Fock oracle against the analytic single-bath map"},
    {Scenario::McValidate, "mc_validate",
     "Monte-Carlo average of the reduced generator against the analytic factor"},
};

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key, const std::vector<std::string>& valid) {
    std::string best;
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (const auto& v : valid) {
        const std::size_t d = levenshtein(key, v);
        if (d < best_dist) {
            best_dist = d;
            best = v;
        }
    }
    return best_dist <= std::max<std::size_t>(3, key.size() / 2) ? best : std::string();
}

class Validator {
  public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& message) {
        errors.push_back(path + ": " + message);
    }

    void check_keys(const json& obj, const std::string& path, const std::vector<std::string>& valid) {
        for (const auto& [key, value] : obj.items()) {
            if (std::find(valid.begin(), valid.end(), key) == valid.end()) {
                std::string msg = "unknown key";
                const std::string suggestion = nearest_key(key, valid);
                if (!suggestion.empty()) msg += ", did you mean \"" + suggestion + "\"?";
                fail(path.empty() ? key : path + "." + key, msg);
            }
        }
    }

    bool get_number(const json& obj, const std::string& path, const std::string& key, double& out) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_number()) {
            fail(path + key, "expected a number");
            return false;
        }
        out = obj[key].get<double>();
        return true;
    }

    bool get_integer(const json& obj, const std::string& path, const std::string& key, std::int64_t& out) {
        if (!obj.contains(key)) return false;
        if (!obj[key].is_number_integer()) {
            fail(path + key, "expected an integer");
            return false;
        }
        out = obj[key].get<std::int64_t>();
        return true;
    }

    void require_positive(double value, const std::string& path) {
        if (!(value > 0)) fail(path, "must be positive");
    }
};

void parse_bath(Validator& v, const json& obj, const std::string& path, BathSpec& spec) {
    v.check_keys(obj, path, {"type", "mass", "modes", "eta", "omega_c", "n_modes", "omega_max"});
    if (obj.contains("type")) {
        const std::string type = obj["type"].is_string() ? obj["type"].get<std::string>() : "";
        if (type == "discrete") {
            spec.type = BathSpec::Type::Discrete;
        } else if (type == "ohmic") {
            spec.type = BathSpec::Type::Ohmic;
        } else {
            v.fail(path + ".type", "must be \"discrete\" or \"ohmic\"");
        }
    }
    double x;
    if (v.get_number(obj, path + ".", "mass", x)) {
        spec.mass = x;
        v.require_positive(x, path + ".mass");
    }
    if (obj.contains("modes")) {
        if (!obj["modes"].is_array() || obj["modes"].empty()) {
            v.fail(path + ".modes", "expected a nonempty array of modes");
        } else {
            spec.modes.clear();
            int i = 0;
            for (const auto& m : obj["modes"]) {
                const std::string mp = path + ".modes[" + std::to_string(i) + "]";
                BathMode mode{spec.mass, 1.0, 0.0};
                if (!m.is_object()) {
                    v.fail(mp, "expected an object with omega and coupling");
                } else {
                    v.check_keys(m, mp, {"omega", "coupling"});
                    if (v.get_number(m, mp + ".", "omega", x)) {
                        mode.omega = x;
                        v.require_positive(x, mp + ".omega");
                    }
                    if (v.get_number(m, mp + ".", "coupling", x)) mode.coupling = x;
                }
                spec.modes.push_back(mode);
                ++i;
            }
        }
    }
    if (v.get_number(obj, path + ".", "eta", x)) {
        spec.eta = x;
        if (!(x >= 0)) v.fail(path + ".eta", "must be >= 0");
    }
    if (v.get_number(obj, path + ".", "omega_c", x)) {
        spec.omega_c = x;
        v.require_positive(x, path + ".omega_c");
    }
    std::int64_t n;
    if (v.get_integer(obj, path + ".", "n_modes", n)) {
        spec.n_modes = static_cast<int>(n);
        if (n < 2) v.fail(path + ".n_modes", "must be >= 2");
    }
    if (v.get_number(obj, path + ".", "omega_max", x)) {
        spec.omega_max = x;
        v.require_positive(x, path + ".omega_max");
    }
}

void parse_fock(Validator& v, const json& obj, const std::string& path, FockSpec& spec) {
    v.check_keys(obj, path, {"n_max", "thermal_cutoff"});
    std::int64_t n;
    if (v.get_integer(obj, path + ".", "n_max", n)) {
        spec.n_max = static_cast<int>(n);
        if (n < 1) v.fail(path + ".n_max", "must be >= 1");
    }
    if (v.get_integer(obj, path + ".", "thermal_cutoff", n)) {
        spec.thermal_cutoff = static_cast<int>(n);
        if (n < 0) v.fail(path + ".thermal_cutoff", "must be >= 0");
    }
    if (spec.n_max < spec.thermal_cutoff + 4)
        v.fail(path + ".n_max", "must exceed thermal_cutoff by a margin of >= 4");
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

const char* scenario_name(Scenario s) {
    for (const auto& info : kScenarios)
        if (info.scenario == s) return info.name;
    throw std::logic_error("unknown scenario");
}

const char* scenario_description(Scenario s) {
    for (const auto& info : kScenarios)
        if (info.scenario == s) return info.description;
    throw std::logic_error("unknown scenario");
}

Scenario scenario_from_name(const std::string& name) {
    for (const auto& info : kScenarios)
        if (name == info.name) return info.scenario;
    std::vector<std::string> names;
    for (const auto& info : kScenarios) names.push_back(info.name);
    std::string msg = "scenario: unknown scenario \"" + name + "\"";
    const std::string suggestion = nearest_key(name, names);
    if (!suggestion.empty()) msg += ", did you mean \"" + suggestion + "\"?";
    throw ConfigError({msg});
}

std::vector<Scenario> all_scenarios() {
    std::vector<Scenario> out;
    for (const auto& info : kScenarios) out.push_back(info.scenario);
    return out;
}

OhmicSpectralDensity BathSpec::spectral_density() const {
    if (!is_ohmic()) throw std::logic_error("BathSpec: not an Ohmic bath");
    return OhmicSpectralDensity{eta, omega_c};
}

DiscreteBath BathSpec::make_bath() const {
    if (is_ohmic()) return discretize_spectral_density(spectral_density(), n_modes, omega_max, mass);
    DiscreteBath bath;
    for (const auto& m : modes) bath.modes.push_back(BathMode{mass, m.omega, m.coupling});
    return bath;
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&errors] {
          std::string joined = "config error";
          for (const auto& e : errors) joined += "\n  " + e;
          return joined;
      }()),
      errors_(std::move(errors)) {}

ExperimentConfig scenario_defaults(Scenario scenario) {
    ExperimentConfig cfg;
    cfg.scenario = scenario;
    cfg.bath_r.modes = {BathMode{1.0, 1.0, 0.3}};
    switch (scenario) {
        case Scenario::Kernels:
            cfg.time = {10.0, 2001};
            break;
        case Scenario::SingleBathCat:
            cfg.grid = SGrid{0.0, 1.0, 2};
            cfg.time = {5.0, 101};
            break;
        case Scenario::DoubleBath:
            cfg.grid = SGrid::centered(16.0, 128);
            cfg.time = {1.0, 21};
            cfg.state_width = 0.5;
            break;
        case Scenario::GoldenRuleCompare:
            cfg.bath.type = BathSpec::Type::Ohmic;
            cfg.bath.eta = 1.0;
            cfg.bath.omega_c = 5.0;
            cfg.bath.n_modes = 400;
            cfg.bath.omega_max = 30.0;
            cfg.thermal.beta = 1.0;
            cfg.time = {8.0, 2001};
            cfg.omega_system = 1.0;
            break;
        case Scenario::AccelerationSweep:
            cfg.bath.type = BathSpec::Type::Ohmic;
            cfg.bath.eta = 7.5e-6;
            cfg.bath.omega_c = 5.0;
            cfg.bath.n_modes = 25000;
            cfg.bath.omega_max = 25.0;
            cfg.thermal.beta = 0.01;
            cfg.time = {1500.0, 3001};
            cfg.gamma_diss = 1.0;
            break;
        case Scenario::SymmetryProtection:
            cfg.grid = SGrid{-1.0, 1.0, 3};
            cfg.time = {3.0, 61};
            break;
        case Scenario::OracleValidate:
            cfg.grid = SGrid{0.0, 2.0, 2};
            cfg.time = {6.0, 25};
            cfg.fock = FockSpec{30, 0};
            break;
        case Scenario::McValidate:
            cfg.thermal.beta = 1.0;
            cfg.time = {5.0, 26};
            cfg.n_samples = 100000;
            break;
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("parse error: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"top level: expected a JSON object"});
    if (!doc.contains("scenario") || !doc["scenario"].is_string())
        throw ConfigError({"scenario: required string key"});

    ExperimentConfig cfg = scenario_defaults(scenario_from_name(doc["scenario"].get<std::string>()));
    Validator v;
    v.check_keys(doc, "", {"scenario", "seed", "output_dir", "units", "thermal", "bath", "bath_r",
                           "grid", "time", "delta", "deltas", "gamma_diss", "omega_system",
                           "n_samples", "fock", "fock_r", "state_width", "tolerances"});

    std::int64_t n;
    double x;
    if (v.get_integer(doc, "", "seed", n)) cfg.seed = static_cast<std::uint64_t>(n);
    if (doc.contains("output_dir")) {
        if (doc["output_dir"].is_string())
            cfg.output_dir = doc["output_dir"].get<std::string>();
        else
            v.fail("output_dir", "expected a string");
    }
    if (doc.contains("units") && doc["units"].is_object()) {
        v.check_keys(doc["units"], "units", {"hbar"});
        if (v.get_number(doc["units"], "units.", "hbar", x)) {
            cfg.units.hbar = x;
            v.require_positive(x, "units.hbar");
        }
    }
    if (doc.contains("thermal") && doc["thermal"].is_object()) {
        v.check_keys(doc["thermal"], "thermal", {"beta"});
        const auto& th = doc["thermal"];
        if (th.contains("beta")) {
            if (th["beta"].is_string()) {
                const std::string s = th["beta"].get<std::string>();
                if (s == "inf" || s == "+inf")
                    cfg.thermal.beta = std::numeric_limits<double>::infinity();
                else
                    v.fail("thermal.beta", "expected a positive number or \"inf\"");
            } else if (th["beta"].is_number()) {
                cfg.thermal.beta = th["beta"].get<double>();
                v.require_positive(cfg.thermal.beta, "thermal.beta");
            } else {
                v.fail("thermal.beta", "expected a positive number or \"inf\"");
            }
        }
    }
    if (doc.contains("bath") && doc["bath"].is_object()) parse_bath(v, doc["bath"], "bath", cfg.bath);
    if (doc.contains("bath_r") && doc["bath_r"].is_object()) parse_bath(v, doc["bath_r"], "bath_r", cfg.bath_r);
    if (doc.contains("grid") && doc["grid"].is_object()) {
        const auto& g = doc["grid"];
        v.check_keys(g, "grid", {"s_min", "ds", "n"});
        if (v.get_number(g, "grid.", "s_min", x)) cfg.grid.s_min = x;
        if (v.get_number(g, "grid.", "ds", x)) {
            cfg.grid.ds = x;
            v.require_positive(x, "grid.ds");
        }
        if (v.get_integer(g, "grid.", "n", n)) {
            cfg.grid.n = n;
            if (n < 2) v.fail("grid.n", "must be >= 2");
        }
    }
    if (doc.contains("time") && doc["time"].is_object()) {
        const auto& t = doc["time"];
        v.check_keys(t, "time", {"t_max", "n_points"});
        if (v.get_number(t, "time.", "t_max", x)) {
            cfg.time.t_max = x;
            v.require_positive(x, "time.t_max");
        }
        if (v.get_integer(t, "time.", "n_points", n)) {
            cfg.time.n_points = n;
            if (n < 2) v.fail("time.n_points", "must be >= 2");
        }
    }
    if (v.get_number(doc, "", "delta", x)) {
        cfg.delta = x;
        v.require_positive(x, "delta");
    }
    if (doc.contains("deltas")) {
        if (!doc["deltas"].is_array() || doc["deltas"].size() < 2) {
            v.fail("deltas", "expected an array of >= 2 separations");
        } else {
            cfg.deltas.clear();
            int i = 0;
            for (const auto& d : doc["deltas"]) {
                if (!d.is_number() || !(d.get<double>() > 0))
                    v.fail("deltas[" + std::to_string(i) + "]", "must be a positive number");
                else
                    cfg.deltas.push_back(d.get<double>());
                ++i;
            }
        }
    }
    if (v.get_number(doc, "", "gamma_diss", x)) {
        cfg.gamma_diss = x;
        v.require_positive(x, "gamma_diss");
    }
    if (v.get_number(doc, "", "omega_system", x)) {
        cfg.omega_system = x;
        v.require_positive(x, "omega_system");
    }
    if (v.get_integer(doc, "", "n_samples", n)) {
        cfg.n_samples = n;
        if (n < 1000) v.fail("n_samples", "must be >= 1000");
    }
    if (doc.contains("fock") && doc["fock"].is_object()) parse_fock(v, doc["fock"], "fock", cfg.fock);
    if (doc.contains("fock_r") && doc["fock_r"].is_object()) parse_fock(v, doc["fock_r"], "fock_r", cfg.fock_r);
    if (v.get_number(doc, "", "state_width", x)) {
        cfg.state_width = x;
        v.require_positive(x, "state_width");
    }
    if (doc.contains("tolerances") && doc["tolerances"].is_object()) {
        const auto& t = doc["tolerances"];
        v.check_keys(t, "tolerances", {"quadrature", "oracle", "convergence", "visibility",
                                       "width", "trace", "protection", "damping"});
        auto tol = [&](const char* key, double& slot) {
            if (v.get_number(t, "tolerances.", key, x)) {
                slot = x;
                v.require_positive(x, std::string("tolerances.") + key);
            }
        };
        tol("quadrature", cfg.tol.quadrature);
        tol("oracle", cfg.tol.oracle);
        tol("convergence", cfg.tol.convergence);
        tol("visibility", cfg.tol.visibility);
        tol("width", cfg.tol.width);
        tol("trace", cfg.tol.trace);
        tol("protection", cfg.tol.protection);
        tol("damping", cfg.tol.damping);
    }

    if (!v.errors.empty()) throw ConfigError(std::move(v.errors));
    cfg.config_hash = fnv1a_hex(doc.dump());
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError({"cannot open config file: " + path});
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

}  // namespace decohere
