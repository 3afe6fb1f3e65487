#include "actitrait/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "actitrait/csv.hpp"
#include "actitrait/error.hpp"
#include "actitrait/parallel.hpp"

namespace actitrait {
namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("error metric: length mismatch");
  if (a.empty()) throw PreconditionError("error metric: empty input");
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
  std::vector<std::size_t> out;
  out.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (i != skip) out.push_back(i);
  return out;
}

// Inner leave-one-out MAE of one hyperparameter point, every inner model
// sharing the outer fold's kernel.
double inner_mae(const KernelMatrix& K, std::span<const double> y, const SvrParams& params,
                 const SolverOptions& solver) {
  const std::size_t n = y.size();
  double err = 0.0;
  std::vector<double> ysub(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto idx = all_but(n, j);
    for (std::size_t a = 0; a < idx.size(); ++a) ysub[a] = y[idx[a]];
    const auto sol = solve_dual(K.submatrix(idx), ysub, params, solver);
    double f = sol.bias;
    for (std::size_t a = 0; a < idx.size(); ++a) f += sol.beta[a] * K(idx[a], j);
    err += std::fabs(y[j] - clamp_score(f));
  }
  return err / static_cast<double>(n);
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

double mae(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred);
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) s += std::fabs(y_true[i] - y_pred[i]);
  return s / static_cast<double>(y_true.size());
}

double mse(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred);
  double s = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double d = y_true[i] - y_pred[i];
    s += d * d;
  }
  return s / static_cast<double>(y_true.size());
}

void HyperGrid::validate() const {
  if (C.empty() || epsilon.empty() || gamma_scale.empty())
    throw ValidationError("hyperparameter grid must be non-empty in every axis");
  for (double c : C)
    if (!(c > 0)) throw ValidationError("grid: C must be positive");
  for (double e : epsilon)
    if (!(e >= 0)) throw ValidationError("grid: epsilon must be non-negative");
  for (double g : gamma_scale)
    if (!(g > 0)) throw ValidationError("grid: gamma scale must be positive");
}

std::vector<SvrParams> HyperGrid::expand(std::size_t feature_count) const {
  validate();
  const double d = static_cast<double>(std::max<std::size_t>(feature_count, 1));
  std::vector<SvrParams> out;
  for (double c : C)
    for (double g : gamma_scale)
      for (double e : epsilon) out.push_back({c, e, g / d});
  std::sort(out.begin(), out.end(), [](const SvrParams& a, const SvrParams& b) {
    return std::tie(a.C, a.gamma, a.epsilon) < std::tie(b.C, b.gamma, b.epsilon);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string params_key(const SvrParams& p) {
  return "C=" + csv::format_double(p.C) + ";epsilon=" + csv::format_double(p.epsilon) +
         ";gamma=" + csv::format_double(p.gamma);
}

FoldResult run_fold(const Rows& raw, std::span<const double> y, std::size_t held_out,
                    const EvalOptions& opts) {
  const std::size_t n = raw.size();
  if (n < kMinLoocvRows)
    throw PreconditionError("LOOCV needs at least " + std::to_string(kMinLoocvRows) + " rows, got " +
                            std::to_string(n));
  if (y.size() != n || held_out >= n) throw PreconditionError("run_fold: bad arguments");

  const auto train_idx = all_but(n, held_out);
  Rows train_raw;
  std::vector<double> y_train;
  for (auto i : train_idx) {
    train_raw.push_back(raw[i]);
    y_train.push_back(y[i]);
  }
  auto scaler = Scaler::fit(train_raw);
  const Rows Z = scaler.apply(train_raw);
  const auto d2 = KernelMatrix::squared_distances(Z);
  const std::size_t d = raw.front().size();
  const auto grid = opts.grid.expand(d);

  // Kernels are shared by every point with the same gamma.
  std::map<double, KernelMatrix> kernels;
  for (const auto& p : grid)
    if (!kernels.count(p.gamma)) kernels.emplace(p.gamma, KernelMatrix::rbf_from_distances(d2, p.gamma));

  const double inf = std::numeric_limits<double>::infinity();
  std::size_t best = grid.size();
  double best_mae = inf;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double m = inf;
    try {
      m = inner_mae(kernels.at(grid[g].gamma), y_train, grid[g], opts.solver);
    } catch (const ConvergenceError&) {
      // a point the solver cannot finish is never selected
    }
    if (m < best_mae) {
      best_mae = m;
      best = g;
    }
  }
  if (best == grid.size()) throw ConvergenceError("no hyperparameter point converged", inf);

  FoldResult r;
  r.held_out = held_out;
  r.chosen = grid[best];
  r.inner_mae = best_mae;
  r.model = train(Z, kernels.at(r.chosen.gamma), y_train, r.chosen, opts.solver, std::move(scaler));
  r.prediction = r.model.predict(raw[held_out]);
  return r;
}

namespace {

Rows dense_rows(const FeatureMatrix& m) {
  Rows out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
  return out;
}

}  // namespace

LoocvResult loocv(const FeatureMatrix& matrix, std::span<const double> targets, FeatureSet set,
                  const EvalOptions& opts) {
  if (matrix.rows() != targets.size()) throw PreconditionError("loocv: target count mismatch");
  if (matrix.rows() < kMinLoocvRows)
    throw PreconditionError("LOOCV needs at least " + std::to_string(kMinLoocvRows) +
                            " participants, got " + std::to_string(matrix.rows()));
  const auto raw = dense_rows(matrix.project(set));
  LoocvResult out;
  out.y_true.assign(targets.begin(), targets.end());
  out.y_pred.resize(raw.size());
  out.chosen.resize(raw.size());
  parallel_for(raw.size(), opts.threads, [&](std::size_t k) {
    auto fold = run_fold(raw, targets, k, opts);
    out.y_pred[k] = fold.prediction;
    out.chosen[k] = fold.chosen;
  });
  return out;
}

const EvalCell* EvaluationReport::find(Group g, Trait t, FeatureSet s) const {
  for (const auto& c : cells)
    if (c.group == g && c.trait == t && c.set == s) return &c;
  return nullptr;
}

EvaluationReport compare(const Cohort& cohort, const FeatureMatrix& matrix,
                         const EvalOptions& opts, const CompareRequest& request) {
  struct CellInput {
    EvalCell cell;
    Rows raw;
  };
  std::vector<CellInput> inputs;
  for (auto g : request.groups) {
    const auto members = group_members(cohort, g);
    if (members.size() < kMinLoocvRows)
      throw PreconditionError("group " + std::string(group_name(g)) + " has " +
                              std::to_string(members.size()) + " participants; LOOCV needs at least " +
                              std::to_string(kMinLoocvRows));
    std::vector<std::size_t> rows;
    for (auto i : members) {
      const auto r = matrix.row_index(cohort.participants()[i].id);
      if (!r) throw PreconditionError("feature matrix has no row for '" + cohort.participants()[i].id + "'");
      rows.push_back(*r);
    }
    const auto group_matrix = matrix.select_rows(rows);
    for (auto t : request.traits)
      for (auto s : request.sets) {
        CellInput in;
        in.cell.group = g;
        in.cell.trait = t;
        in.cell.set = s;
        in.cell.n = members.size();
        for (auto i : members) {
          in.cell.ids.push_back(cohort.participants()[i].id);
          in.cell.y_true.push_back(cohort.participants()[i].big5.get(t));
        }
        in.raw = dense_rows(group_matrix.project(s));
        inputs.push_back(std::move(in));
      }
  }

  struct Task {
    std::size_t cell, fold;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < inputs.size(); ++c)
    for (std::size_t k = 0; k < inputs[c].cell.n; ++k) tasks.push_back({c, k});
  std::vector<FoldResult> results(tasks.size());
  parallel_for(tasks.size(), opts.threads, [&](std::size_t i) {
    const auto& in = inputs[tasks[i].cell];
    results[i] = run_fold(in.raw, in.cell.y_true, tasks[i].fold, opts);
  });

  EvaluationReport report;
  std::size_t i = 0;
  for (auto& in : inputs) {
    auto& cell = in.cell;
    cell.y_pred.resize(cell.n);
    for (std::size_t k = 0; k < cell.n; ++k, ++i) {
      cell.y_pred[k] = results[i].prediction;
      ++cell.chosen_histogram[params_key(results[i].chosen)];
    }
    cell.mae = mae(cell.y_true, cell.y_pred);
    cell.mse = mse(cell.y_true, cell.y_pred);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

namespace {

struct Row4 {
  Group g;
  Trait t;
  std::size_t n = 0;
  const EvalCell* base = nullptr;
  const EvalCell* prop = nullptr;
};

std::vector<Row4> table_rows(const EvaluationReport& r) {
  std::vector<Row4> out;
  for (const auto& c : r.cells) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Row4& x) { return x.g == c.group && x.t == c.trait; });
    if (it == out.end()) {
      out.push_back({c.group, c.trait, c.n, nullptr, nullptr});
      it = out.end() - 1;
    }
    (c.set == FeatureSet::PhoneOnly ? it->base : it->prop) = &c;
  }
  return out;
}

std::optional<double> reduction_pct(double base, double prop) {
  if (base == 0.0) return std::nullopt;
  return 100.0 * (base - prop) / base;
}

}  // namespace

std::string EvaluationReport::to_csv() const {
  std::ostringstream os;
  os << "group,trait,n,mae_baseline,mae_proposed,mse_baseline,mse_proposed,mae_delta,"
        "mae_reduction_pct,mse_delta,mse_reduction_pct\n";
  auto opt = [](const EvalCell* c, double EvalCell::*f) {
    return c ? csv::format_double(c->*f) : std::string();
  };
  for (const auto& row : table_rows(*this)) {
    os << group_name(row.g) << ',' << trait_name(row.t) << ',' << row.n << ','
       << opt(row.base, &EvalCell::mae) << ',' << opt(row.prop, &EvalCell::mae) << ','
       << opt(row.base, &EvalCell::mse) << ',' << opt(row.prop, &EvalCell::mse) << ',';
    if (row.base && row.prop) {
      os << csv::format_double(row.base->mae - row.prop->mae) << ','
         << csv::format_optional(reduction_pct(row.base->mae, row.prop->mae)) << ','
         << csv::format_double(row.base->mse - row.prop->mse) << ','
         << csv::format_optional(reduction_pct(row.base->mse, row.prop->mse));
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

std::string EvaluationReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.chosen_histogram) hist[k] = v;
    nlohmann::ordered_json preds = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.n; ++i)
      preds.push_back({{"id", c.ids[i]}, {"y_true", c.y_true[i]}, {"y_pred", c.y_pred[i]}});
    j.push_back({{"group", group_name(c.group)},
                 {"trait", trait_name(c.trait)},
                 {"feature_set", feature_set_name(c.set)},
                 {"n", c.n},
                 {"mae", c.mae},
                 {"mse", c.mse},
                 {"chosen_hyperparameters", std::move(hist)},
                 {"predictions", std::move(preds)}});
  }
  return j.dump(1) + "\n";
}

std::string EvaluationReport::to_text() const {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %-18s %4s  %9s %9s  %9s %9s  %s\n", "Group", "Big-5 Trait",
                "n", "MAE base", "MAE prop", "MSE base", "MSE prop", "MAE change");
  os << line;
  for (const auto& row : table_rows(*this)) {
    auto v = [](const EvalCell* c, double EvalCell::*f) { return c ? fmt3(c->*f) : std::string("-"); };
    std::string change = "-";
    if (row.base && row.prop) {
      const auto pct = reduction_pct(row.base->mae, row.prop->mae);
      change = fmt3(row.base->mae - row.prop->mae) + " (" +
               (pct ? fmt3(*pct) : std::string("n/a")) + "%)";
    }
    std::snprintf(line, sizeof(line), "%-8s %-18s %4zu  %9s %9s  %9s %9s  %s\n",
                  std::string(group_name(row.g)).c_str(), std::string(trait_name(row.t)).c_str(),
                  row.n, v(row.base, &EvalCell::mae).c_str(), v(row.prop, &EvalCell::mae).c_str(),
                  v(row.base, &EvalCell::mse).c_str(), v(row.prop, &EvalCell::mse).c_str(),
                  change.c_str());
    os << line;
  }
  return os.str();
}

}  // namespace actitrait
