// scenarios.hpp — named experiment scenarios: each run executes one scenario,
// writes plot-ready tables, and reports its checks

#pragma once

#include <string>
#include <vector>

#include "decohere/config.hpp"

namespace decohere {

struct CheckResult {
    std::string name;
    bool pass{false};
    double measured{0};   // compared against threshold; pass iff measured <= threshold
    double threshold{0};
};

struct RunReport {
    std::string scenario;
    std::string config_hash;
    std::vector<CheckResult> checks;
    double wall_time{0};  // seconds

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Executes the configured scenario, writes its data files under
// cfg.output_dir, and returns the per-check report.
RunReport run_scenario(const ExperimentConfig& cfg);

}  // namespace decohere
