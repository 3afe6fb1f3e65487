#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actitrait/analysis.hpp"
#include "actitrait/cohort.hpp"
#include "actitrait/features.hpp"
#include "actitrait/svr.hpp"

namespace actitrait {

double mae(std::span<const double> y_true, std::span<const double> y_pred);
double mse(std::span<const double> y_true, std::span<const double> y_pred);

// gamma values are gamma_scale / d for a d-column feature set.
struct HyperGrid {
  std::vector<double> C{0.1, 1.0, 10.0, 100.0};
  std::vector<double> epsilon{0.01, 0.1, 0.5};
  std::vector<double> gamma_scale{0.1, 1.0, 10.0};

  // Sorted by (C, gamma, epsilon): the tie-break order of model selection.
  std::vector<SvrParams> expand(std::size_t feature_count) const;
  void validate() const;
};

struct EvalOptions {
  HyperGrid grid;
  SolverOptions solver;
  unsigned threads = 1;
};

inline constexpr std::size_t kMinLoocvRows = 4;

struct FoldResult {
  std::size_t held_out = 0;
  SvrParams chosen;
  double inner_mae = 0.0;
  SvrModel model;
  double prediction = 0.0;
};

// One outer fold: everything fitted (imputation medians, scaler,
// hyperparameters, model) sees only the rows other than `held_out`.
// Absent cells are NaN.
FoldResult run_fold(const Rows& raw, std::span<const double> y, std::size_t held_out,
                    const EvalOptions& opts);

struct LoocvResult {
  std::vector<double> y_true;
  std::vector<double> y_pred;
  std::vector<SvrParams> chosen;
};

// Leave-one-out over every row of `matrix` after projecting it to `set`.
// Throws PreconditionError below kMinLoocvRows rows.
LoocvResult loocv(const FeatureMatrix& matrix, std::span<const double> targets, FeatureSet set,
                  const EvalOptions& opts);

struct EvalCell {
  Group group = Group::Total;
  Trait trait = Trait::Extraversion;
  FeatureSet set = FeatureSet::PhoneOnly;
  std::size_t n = 0;
  double mae = 0.0;
  double mse = 0.0;
  // "C=..;epsilon=..;gamma=.." -> number of folds that chose it
  std::map<std::string, std::size_t> chosen_histogram;
  std::vector<std::string> ids;
  std::vector<double> y_true;
  std::vector<double> y_pred;
};

struct EvaluationReport {
  std::vector<EvalCell> cells;  // group, trait, set order

  const EvalCell* find(Group g, Trait t, FeatureSet s) const;
  std::string to_csv() const;
  std::string to_json() const;
  // Fixed-width text table, one row per group and trait.
  std::string to_text() const;
};

struct CompareRequest {
  std::vector<Group> groups{kAllGroups.begin(), kAllGroups.end()};
  std::vector<Trait> traits{kAllTraits.begin(), kAllTraits.end()};
  std::vector<FeatureSet> sets{FeatureSet::PhoneOnly, FeatureSet::PhonePlusPhysical};
};

// Runs LOOCV per group x trait x feature set. Group models only see the
// group's own rows. `matrix` rows are matched to participants by id.
EvaluationReport compare(const Cohort& cohort, const FeatureMatrix& matrix,
                         const EvalOptions& opts, const CompareRequest& request = {});

std::string params_key(const SvrParams& p);

}  // namespace actitrait
