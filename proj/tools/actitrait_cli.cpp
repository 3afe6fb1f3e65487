#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "actitrait/analysis.hpp"
#include "actitrait/error.hpp"
#include "actitrait/evaluation.hpp"
#include "actitrait/features.hpp"
#include "actitrait/reports.hpp"
#include "actitrait/run_config.hpp"
#include "actitrait/synthgen.hpp"

namespace fs = std::filesystem;
using namespace actitrait;

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> sets;
  std::string out_dir, roster, accel, comm;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  bool print_config = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw Error("cannot write " + path.string());
}

RunConfig resolve(const CLI::App& app, const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (app.count("--out-dir")) cfg.out_dir = f.out_dir;
  if (app.count("--roster")) cfg.roster = f.roster;
  if (app.count("--accel")) cfg.accel = f.accel;
  if (app.count("--comm")) cfg.comm = f.comm;
  if (app.count("--threads")) cfg.threads = f.threads;
  if (app.count("--seed")) cfg.synth.seed = f.seed;
  cfg.eval.threads = cfg.threads;
  cfg.validate();
  return cfg;
}

Cohort load(const RunConfig& cfg) {
  for (const auto& p : {cfg.roster, cfg.accel, cfg.comm})
    if (!fs::exists(p)) throw Error("input file not found: " + p.string());
  return load_cohort(cfg.roster, cfg.accel, cfg.comm);
}

FeatureMatrix features_of(const Cohort& cohort, const RunConfig& cfg) {
  const auto profiles = cohort_profiles(cohort, cfg.features, cfg.threads);
  return build_feature_matrix(cohort, profiles, cfg.features, cfg.threads);
}

int cmd_validate(const RunConfig& cfg) {
  const auto cohort = load(cfg);
  std::cout << cohort_summary(cohort);
  return 0;
}

int cmd_features(const RunConfig& cfg) {
  const auto cohort = load(cfg);
  const auto m = features_of(cohort, cfg);
  fs::create_directories(cfg.out_dir);
  write_text(cfg.out_dir / "features.csv", m.to_csv());
  write_text(cfg.out_dir / "features.json", m.to_json());
  std::cout << "wrote " << m.rows() << " x " << m.cols() << " feature matrix to " << cfg.out_dir.string()
            << "\n";
  return 0;
}

int cmd_correlate(const RunConfig& cfg) {
  const auto cohort = load(cfg);
  const auto m = log_transform(features_of(cohort, cfg));
  const auto table = correlate_all(m, cohort, cfg.top_k, cfg.threads);
  const auto stats = descriptive_stats(cohort);
  fs::create_directories(cfg.out_dir);
  write_text(cfg.out_dir / "correlations.csv", correlations_csv(table));
  write_text(cfg.out_dir / "top_features.csv", top_features_csv(table));
  write_text(cfg.out_dir / "top_features.txt", top_features_text(table));
  write_text(cfg.out_dir / "descriptive.csv", descriptive_csv(stats));
  write_text(cfg.out_dir / "descriptive.txt", descriptive_text(stats));
  std::cout << descriptive_text(stats) << "\n" << top_features_text(table);
  return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
  const auto cohort = load(cfg);
  const auto m = log_transform(features_of(cohort, cfg));
  const auto report = compare(cohort, m, cfg.eval, cfg.request);
  fs::create_directories(cfg.out_dir);
  write_text(cfg.out_dir / "evaluation.csv", report.to_csv());
  write_text(cfg.out_dir / "evaluation.json", report.to_json());
  write_text(cfg.out_dir / "evaluation.txt", report.to_text());
  std::cout << report.to_text();
  return 0;
}

int cmd_synth(const RunConfig& cfg) {
  const auto w = write_synthetic_cohort(cfg.synth_config(), cfg.out_dir, cfg.threads);
  std::cout << "wrote " << w.roster.string() << ", " << w.accel.string() << ", " << w.comm.string() << ", "
            << w.manifest.string() << "\n";
  return 0;
}

std::string defaults_footer() {
  std::ostringstream os;
  os << "Config file: a JSON object of flat dotted keys. Precedence: defaults < --config < --set < flags.\n"
     << "SIMD backend: ACTITRAIT_SIMD=scalar|avx2 overrides the runtime choice.\n\nKeys and defaults:\n";
  for (const auto& k : config_keys()) os << "  " << k.key << " = " << k.default_value << "\n      " << k.help << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personality-trait features and prediction from accelerometer and phone logs"};
  app.footer(defaults_footer());
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON run-config file");
  app.add_option("--set", f.sets, "override one config key, key=value (repeatable)")
      ->allow_extra_args(false);
  app.add_option("--out-dir", f.out_dir, "output directory (output.dir, default \"out\")");
  app.add_option("--threads", f.threads, "worker thread cap (threads, default 1)")->check(CLI::Range(1, 1024));
  app.add_option("--seed", f.seed, "synthetic cohort seed (synth.seed, default 1)");
  app.add_option("--roster", f.roster, "roster CSV (input.roster, default \"roster.csv\")");
  app.add_option("--accel", f.accel, "accelerometer CSV (input.accel, default \"accel.csv\")");
  app.add_option("--comm", f.comm, "call/message CSV (input.comm, default \"comm.csv\")");
  app.add_flag("--print-config", f.print_config, "print the effective configuration before running");

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Cmd cmds[] = {
      {"validate", "load and check the cohort, printing counts per participant", cmd_validate},
      {"features", "write the feature matrix (features.csv, features.json)", cmd_features},
      {"correlate", "write correlations, top-feature and score-overview reports", cmd_correlate},
      {"evaluate", "nested leave-one-out comparison of phone-only and phone+physical features", cmd_evaluate},
      {"synth", "write a seeded synthetic cohort and manifest", cmd_synth},
  };
  for (const auto& c : cmds) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto cfg = resolve(app, f);
    if (f.print_config) std::cout << config_json(cfg);
    for (const auto& c : cmds)
      if (app.got_subcommand(c.name)) return c.run(cfg);
  } catch (const ParseError& e) {
    std::cerr << "actitrait: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "actitrait: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
