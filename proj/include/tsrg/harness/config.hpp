#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tsrg/harness/experiment.hpp"

namespace tsrg::harness {

/// `key = value` lines; '#' starts a comment. Later keys overwrite earlier.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

/// Recognized keys: source, target, source_name, target_name, kernel,
/// bandwidth, lambda, mu, kappa0, rho, kappa_max, epsilon, max_iters,
/// penalty_c, label_map, standardize, train_on_regenerated, seed, plus the
/// grid keys lambda_grid, mu_grid and expect_counts (read elsewhere).
/// Unknown keys throw ConfigError. Relative dataset paths resolve against
/// `base_dir`.
ExperimentConfig experiment_config_from(const KeyValues& kv,
                                        const std::filesystem::path& base_dir = {});

/// The config as key-value text, loadable by experiment_config_from.
std::string to_key_values(const ExperimentConfig& config);

/// "0.001,0.01,0.1".
std::vector<double> parse_double_list(std::string_view text);
/// "Negative=91,Positive=32" or the preset "casme2".
std::map<std::string, std::size_t> parse_counts(std::string_view text);
bool parse_bool(std::string_view text);

}  // namespace tsrg::harness
