#pragma once

#include <string>
#include <vector>

namespace filtercast {

/// Result of one config-driven experiment run. Exit codes follow the CLI
/// contract: 0 = success, 2 = completed with partial failures (fatal errors
/// surface as exceptions and map to 1).
struct ExperimentOutcome {
    int exit_code = 0;
    int failures = 0;
    std::vector<std::string> outputs;  // files written, relative to output_dir
    std::string output_dir;
};

/// Runs an experiment described by a JSON config document:
///
/// {
///   "input": "events.csv",            // path to input file
///   "kind": "events" | "counts",
///   "scheme": {"type": "binomial", "p_values": [...], "trials": 50}
///           | {"type": "threshold", "thresholds": [...]}
///           | {"type": "category", "ks": [...]},
///   "protocol": { ... protocol overrides ... },
///   "models": ["arima", "rnn"],
///   "external": {"variants": ["Without","Prediction","Full"], "trials": 3},
///   "seed": 7,
///   "output_dir": "out",
///   "traces": "first" | "all" | "none"
/// }
///
/// Without "external" the scheme drives a predictability sweep (report.csv /
/// report.json plus per-day traces); with it, the external-signal experiment
/// (external_report.csv / external_report.json).
ExperimentOutcome run_experiment(const std::string& config_json_text);

/// Convenience: reads the config file, then runs it.
ExperimentOutcome run_experiment_file(const std::string& config_path);

}  // namespace filtercast
