#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace actitrait {

using Row = std::vector<double>;
using Rows = std::vector<Row>;

struct SvrParams {
  double C = 1.0;
  double epsilon = 0.1;
  double gamma = 1.0;

  // Throws ValidationError unless C > 0, epsilon >= 0, gamma > 0.
  void validate() const;
  friend bool operator==(const SvrParams&, const SvrParams&) = default;
};

struct SolverOptions {
  double tol = 1e-3;
  std::size_t max_iterations = 100000;
};

// Per-column training-fold median (imputation), mean and population SD.
// A default-constructed scaler is the identity.
struct Scaler {
  std::vector<double> median;
  std::vector<double> mean;
  std::vector<double> sd;

  // Rows may contain NaN for absent cells. Requires at least one row.
  static Scaler fit(const Rows& rows);
  bool identity() const noexcept { return mean.empty(); }
  std::size_t dim() const noexcept { return mean.size(); }
  // Imputes NaN with the median, then standardizes. Constant columns map to 0.
  Row apply(std::span<const double> row) const;
  Rows apply(const Rows& rows) const;

  friend bool operator==(const Scaler&, const Scaler&) = default;
};

double rbf(std::span<const double> u, std::span<const double> v, double gamma);

// Dense symmetric kernel (or squared-distance) matrix.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  explicit KernelMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static KernelMatrix squared_distances(const Rows& rows);
  // exp(-gamma * d2) elementwise
  static KernelMatrix rbf_from_distances(const KernelMatrix& d2, double gamma);
  static KernelMatrix rbf(const Rows& rows, double gamma);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  KernelMatrix submatrix(std::span<const std::size_t> idx) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct DualSolution {
  std::vector<double> beta;  // alpha_i - alpha_i*
  double bias = 0.0;
  double objective = 0.0;  // dual objective, maximization form
  double violation = 0.0;  // maximal KKT violation at exit
  std::size_t iterations = 0;
};

// epsilon-SVR dual objective -1/2 b'Kb - eps*sum|b| + y'b.
double dual_objective(const KernelMatrix& K, std::span<const double> y,
                      std::span<const double> beta, double epsilon);

// SMO on the box-constrained dual. Each step takes the maximal violating
// pair (lowest index on ties) and solves the two-variable problem exactly.
// If `trace` is set, the dual objective after every update is appended.
// Throws ConvergenceError past max_iterations.
DualSolution solve_dual(const KernelMatrix& K, std::span<const double> y, const SvrParams& params,
                        const SolverOptions& opts = {}, std::vector<double>* trace = nullptr);

struct SvrModel {
  SvrParams params;
  Scaler scaler;
  Rows support_vectors;  // standardized
  std::vector<double> dual_coefs;
  double bias = 0.0;

  std::size_t dim() const noexcept;
  // f(x) for an already standardized row.
  double decision(std::span<const double> standardized) const;
  // Imputes and standardizes through the stored scaler; no clamping.
  double predict_raw(std::span<const double> raw_row) const;
  // predict_raw clamped to the score range [1, 5].
  double predict(std::span<const double> raw_row) const;

  std::string to_json() const;
  static SvrModel from_json(std::string_view text);

  friend bool operator==(const SvrModel&, const SvrModel&) = default;
};

inline constexpr double kScoreMin = 1.0;
inline constexpr double kScoreMax = 5.0;
double clamp_score(double v) noexcept;

// `X` rows are already standardized; `scaler` is stored for later raw-row
// prediction. Requires at least two rows and finite targets.
SvrModel train(const Rows& X, std::span<const double> y, const SvrParams& params,
               const SolverOptions& opts = {}, Scaler scaler = {});
// Same with a precomputed kernel over the rows of X.
SvrModel train(const Rows& X, const KernelMatrix& K, std::span<const double> y,
               const SvrParams& params, const SolverOptions& opts = {}, Scaler scaler = {});

// Scaler fit on raw rows, then train.
SvrModel fit(const Rows& raw, std::span<const double> y, const SvrParams& params,
             const SolverOptions& opts = {});

}  // namespace actitrait
