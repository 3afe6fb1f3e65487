#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "actitrait/analysis.hpp"
#include "actitrait/evaluation.hpp"
#include "actitrait/features.hpp"
#include "actitrait/synthgen.hpp"

namespace actitrait {

struct RunConfig {
  std::filesystem::path roster = "roster.csv";
  std::filesystem::path accel = "accel.csv";
  std::filesystem::path comm = "comm.csv";
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;

  FeatureConfig features;
  EvalOptions eval;
  CompareRequest request;
  std::size_t top_k = 3;

  GenConfig synth;
  // "standard" uses standard_effects(synth_strength); otherwise the list in synth.effects.
  bool synth_standard_effects = true;
  double synth_strength = 0.8;

  // Throws ValidationError when a numeric field is out of range.
  void validate() const;
  // The generator configuration with effects resolved.
  GenConfig synth_config() const;
};

struct ConfigKeyInfo {
  std::string key;
  std::string default_value;  // JSON text
  std::string help;
};

// Every recognised key with its default, in documentation order.
const std::vector<ConfigKeyInfo>& config_keys();

// `value` is JSON text; bare words that are not valid JSON are taken as strings.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
// Applies a JSON object of flat dotted keys. Unknown keys are rejected.
void apply_config_text(RunConfig& cfg, std::string_view json_text, std::string_view source = "<config>");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

// Flat dotted-key JSON echo of the effective configuration.
std::string config_json(const RunConfig& cfg);

}  // namespace actitrait
