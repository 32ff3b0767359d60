// config.hpp — experiment configuration: schema-validated ingestion of the
// JSON run description, per-scenario defaults, and config hashing

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "decohere/bath.hpp"
#include "decohere/density_matrix.hpp"
#include "decohere/units.hpp"

namespace decohere {

enum class Scenario {
    Kernels,
    SingleBathCat,
    DoubleBath,
    GoldenRuleCompare,
    AccelerationSweep,
    SymmetryProtection,
    OracleValidate,
    McValidate,
};

const char* scenario_name(Scenario s);
const char* scenario_description(Scenario s);
Scenario scenario_from_name(const std::string& name);
std::vector<Scenario> all_scenarios();

struct BathSpec {
    enum class Type { Discrete, Ohmic };
    Type type{Type::Discrete};
    double mass{1.0};
    std::vector<BathMode> modes{BathMode{1.0, 1.0, 1.0}};
    double eta{1.0};
    double omega_c{5.0};
    int n_modes{400};
    double omega_max{30.0};

    bool is_ohmic() const { return type == Type::Ohmic; }
    OhmicSpectralDensity spectral_density() const;
    DiscreteBath make_bath() const;
};

struct TimeSpec {
    double t_max{10.0};
    Eigen::Index n_points{2001};
};

struct FockSpec {
    int n_max{30};
    int thermal_cutoff{0};
};

struct Tolerances {
    double quadrature{1e-7};
    double oracle{1e-6};
    double convergence{1e-8};
    double visibility{1e-12};
    double width{1e-6};
    double trace{1e-10};
    double protection{1e-14};
    double damping{1e-10};
};

struct ExperimentConfig {
    Scenario scenario{Scenario::Kernels};
    std::uint64_t seed{20240817};
    std::string output_dir{"out"};
    UnitsContext units;
    ThermalParameters thermal;
    BathSpec bath;
    BathSpec bath_r;
    SGrid grid{-1.0, 2.0, 2};
    TimeSpec time;
    double delta{1.0};
    std::vector<double> deltas{1.0, 2.0, 4.0, 8.0};
    double gamma_diss{1.0};
    double omega_system{1.0};
    std::int64_t n_samples{100000};
    FockSpec fock{30, 0};
    FockSpec fock_r{7, 0};
    double state_width{0.5};
    Tolerances tol;
    std::string config_hash;  // FNV-1a of the canonicalized document, hex
};

// All validation problems found in one pass, each naming its key path.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

ExperimentConfig scenario_defaults(Scenario scenario);
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace decohere
