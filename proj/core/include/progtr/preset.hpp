#pragma once

#include <string>
#include <vector>

#include "progtr/config.hpp"
#include "progtr/trainer.hpp"

namespace progtr {

/// A fully resolved experiment: scenario preset, overrides applied, eval
/// grid and output location decided.
struct Experiment {
    TrainConfig train;
    std::vector<double> eval_snr;
    long eval_samples = 100000;
    int eval_user = 0;
    std::vector<std::string> eval_metrics; // subset of ber,mse,mi,bmi,power
    std::string output_dir; // empty: caller decides (env var or cwd)
};

/// All scenario names, "custom" last.
const std::vector<std::string>& preset_names();

/// Pinned hyperparameters for a scenario; "custom" returns the plain
/// defaults (the config file must then supply [model] / [channel]).
TrainConfig preset_train_config(const std::string& scenario);

/// Resolve a parsed config: preset defaults, then [train]/[eval]/[experiment]
/// overrides; [model] and [channel] sections are only legal for "custom".
/// Any key left unread is an error naming its line.
Experiment load_experiment(const ConfigFile& cfg);
Experiment load_experiment_file(const std::string& path);

} // namespace progtr
