#include "actitrait/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "actitrait/error.hpp"
#include "actitrait/simd/kernels.hpp"

namespace actitrait {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

void SvrParams::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw ValidationError("SVR: C must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("SVR: epsilon must be non-negative");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("SVR: gamma must be positive");
}

Scaler Scaler::fit(const Rows& rows) {
  if (rows.empty()) throw PreconditionError("Scaler::fit needs at least one row");
  const std::size_t d = rows.front().size();
  Scaler s;
  s.median.resize(d);
  s.mean.resize(d);
  s.sd.resize(d);
  std::vector<double> col;
  for (std::size_t c = 0; c < d; ++c) {
    col.clear();
    for (const auto& r : rows) {
      if (r.size() != d) throw PreconditionError("Scaler::fit: ragged rows");
      if (!std::isnan(r[c])) col.push_back(r[c]);
    }
    s.median[c] = median_of(col);
    double sum = 0.0;
    for (const auto& r : rows) sum += std::isnan(r[c]) ? s.median[c] : r[c];
    const double n = static_cast<double>(rows.size());
    s.mean[c] = sum / n;
    double ss = 0.0;
    for (const auto& r : rows) {
      const double v = (std::isnan(r[c]) ? s.median[c] : r[c]) - s.mean[c];
      ss += v * v;
    }
    s.sd[c] = std::sqrt(ss / n);
  }
  return s;
}

Row Scaler::apply(std::span<const double> row) const {
  if (identity()) return Row(row.begin(), row.end());
  if (row.size() != dim()) throw PreconditionError("Scaler::apply: dimension mismatch");
  Row out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double v = std::isnan(row[c]) ? median[c] : row[c];
    // relative guard: a column that is constant up to rounding is constant
    out[c] = sd[c] > 1e-12 * std::max(1.0, std::fabs(mean[c])) ? (v - mean[c]) / sd[c] : 0.0;
  }
  return out;
}

Rows Scaler::apply(const Rows& rows) const {
  Rows out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(apply(r));
  return out;
}

double rbf(std::span<const double> u, std::span<const double> v, double gamma) {
  if (u.size() != v.size()) throw PreconditionError("rbf: dimension mismatch");
  return std::exp(-gamma * simd::squared_distance(u, v));
}

KernelMatrix KernelMatrix::squared_distances(const Rows& rows) {
  KernelMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[i].size() != rows[j].size()) throw PreconditionError("kernel: dimension mismatch");
      const double d = simd::squared_distance(rows[i], rows[j]);
      m(i, j) = d;
      m(j, i) = d;
    }
  return m;
}

KernelMatrix KernelMatrix::rbf_from_distances(const KernelMatrix& d2, double gamma) {
  KernelMatrix m(d2.size());
  for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] = std::exp(-gamma * d2.data_[i]);
  return m;
}

KernelMatrix KernelMatrix::rbf(const Rows& rows, double gamma) {
  return rbf_from_distances(squared_distances(rows), gamma);
}

KernelMatrix KernelMatrix::submatrix(std::span<const std::size_t> idx) const {
  KernelMatrix m(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) m(a, b) = (*this)(idx[a], idx[b]);
  return m;
}

double dual_objective(const KernelMatrix& K, std::span<const double> y,
                      std::span<const double> beta, double epsilon) {
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) row += K(i, j) * beta[j];
    quad += beta[i] * row;
    lin += y[i] * beta[i] - epsilon * std::fabs(beta[i]);
  }
  return -0.5 * quad + lin;
}

DualSolution solve_dual(const KernelMatrix& K, std::span<const double> y, const SvrParams& params,
                        const SolverOptions& opts, std::vector<double>* trace) {
  params.validate();
  const std::size_t l = y.size();
  if (K.size() != l) throw PreconditionError("solve_dual: kernel size mismatch");
  const std::size_t n2 = 2 * l;
  const double C = params.C;

  // Variables t < l are alpha_t (sign +1), t >= l are alpha*_{t-l} (sign -1).
  // Minimize 1/2 a'Qa + p'a with Q_ts = s_t s_s K, sum s_t a_t = 0.
  std::vector<double> a(n2, 0.0), G(n2), p(n2);
  std::vector<signed char> s(n2);
  for (std::size_t t = 0; t < l; ++t) {
    s[t] = 1;
    s[t + l] = -1;
    p[t] = params.epsilon - y[t];
    p[t + l] = params.epsilon + y[t];
  }
  G = p;
  auto kidx = [l](std::size_t t) { return t < l ? t : t - l; };
  auto Q = [&](std::size_t t, std::size_t u) {
    return static_cast<double>(s[t] * s[u]) * K(kidx(t), kidx(u));
  };
  auto min_objective = [&] {
    double v = 0.0;
    for (std::size_t t = 0; t < n2; ++t) v += a[t] * (G[t] + p[t]);
    return 0.5 * v;
  };
  auto in_up = [&](std::size_t t) { return s[t] > 0 ? a[t] < C : a[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return s[t] > 0 ? a[t] > 0.0 : a[t] < C; };

  DualSolution sol;
  std::size_t iter = 0;
  while (true) {
    double gmax = -kInf, gmin = kInf;
    std::size_t i = n2, j = n2;
    for (std::size_t t = 0; t < n2; ++t) {
      const double v = -static_cast<double>(s[t]) * G[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    sol.violation = (i == n2 || j == n2) ? 0.0 : std::max(0.0, gmax - gmin);
    if (i == n2 || j == n2 || gmax - gmin < opts.tol) break;
    if (iter >= opts.max_iterations)
      throw ConvergenceError("SMO did not converge within " + std::to_string(opts.max_iterations) +
                                 " pair updates (violation " + std::to_string(gmax - gmin) + ")",
                             gmax - gmin);
    ++iter;

    const double ai_old = a[i], aj_old = a[j];
    const double Qij = Q(i, j);
    if (s[i] != s[j]) {
      double quad = Q(i, i) + Q(j, j) + 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = C - diff;
        }
      } else if (a[j] > C) {
        a[j] = C;
        a[i] = C + diff;
      }
    } else {
      double quad = Q(i, i) + Q(j, j) - 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > C) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = sum - C;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > C) {
        if (a[j] > C) {
          a[j] = C;
          a[i] = sum - C;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }

    const double di = a[i] - ai_old, dj = a[j] - aj_old;
    for (std::size_t t = 0; t < n2; ++t) G[t] += Q(t, i) * di + Q(t, j) * dj;
    if (trace) trace->push_back(-min_objective());
  }
  sol.iterations = iter;

  // Bias from free variables, else the midpoint of the feasible interval.
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n2; ++t) {
    const double yG = static_cast<double>(s[t]) * G[t];
    if (a[t] >= C) {
      if (s[t] < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (a[t] <= 0.0) {
      if (s[t] > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++n_free;
      sum_free += yG;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  sol.bias = -rho;

  sol.beta.resize(l);
  for (std::size_t t = 0; t < l; ++t) sol.beta[t] = a[t] - a[t + l];
  sol.objective = -min_objective();
  return sol;
}

double clamp_score(double v) noexcept { return std::clamp(v, kScoreMin, kScoreMax); }

std::size_t SvrModel::dim() const noexcept {
  if (!scaler.identity()) return scaler.dim();
  return support_vectors.empty() ? 0 : support_vectors.front().size();
}

double SvrModel::decision(std::span<const double> z) const {
  double f = bias;
  for (std::size_t k = 0; k < support_vectors.size(); ++k)
    f += dual_coefs[k] * rbf(support_vectors[k], z, params.gamma);
  return f;
}

double SvrModel::predict_raw(std::span<const double> raw_row) const {
  const std::size_t d = dim();
  if (d != 0 && raw_row.size() != d) throw PreconditionError("predict: dimension mismatch");
  return decision(scaler.apply(raw_row));
}

double SvrModel::predict(std::span<const double> raw_row) const {
  return clamp_score(predict_raw(raw_row));
}

std::string SvrModel::to_json() const {
  nlohmann::ordered_json j;
  j["params"] = {{"C", params.C}, {"epsilon", params.epsilon}, {"gamma", params.gamma}};
  j["scaler"] = {{"median", scaler.median}, {"mean", scaler.mean}, {"sd", scaler.sd}};
  j["bias"] = bias;
  j["dual_coefs"] = dual_coefs;
  j["support_vectors"] = support_vectors;
  return j.dump(1) + "\n";
}

SvrModel SvrModel::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  SvrModel m;
  m.params.C = j.at("params").at("C").get<double>();
  m.params.epsilon = j.at("params").at("epsilon").get<double>();
  m.params.gamma = j.at("params").at("gamma").get<double>();
  m.params.validate();
  m.scaler.median = j.at("scaler").at("median").get<std::vector<double>>();
  m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
  m.scaler.sd = j.at("scaler").at("sd").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
  m.support_vectors = j.at("support_vectors").get<Rows>();
  if (m.dual_coefs.size() != m.support_vectors.size())
    throw ValidationError("SVR model: coefficient/support-vector count mismatch");
  return m;
}

SvrModel train(const Rows& X, const KernelMatrix& K, std::span<const double> y,
               const SvrParams& params, const SolverOptions& opts, Scaler scaler) {
  if (X.size() < 2) throw PreconditionError("train: at least two rows required");
  if (X.size() != y.size()) throw PreconditionError("train: X/y length mismatch");
  for (double v : y)
    if (!std::isfinite(v)) throw ValidationError("train: non-finite target");
  const auto sol = solve_dual(K, y, params, opts);
  SvrModel m;
  m.params = params;
  m.scaler = std::move(scaler);
  m.bias = sol.bias;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (sol.beta[i] == 0.0) continue;
    m.support_vectors.push_back(X[i]);
    m.dual_coefs.push_back(sol.beta[i]);
  }
  return m;
}

SvrModel train(const Rows& X, std::span<const double> y, const SvrParams& params,
               const SolverOptions& opts, Scaler scaler) {
  if (X.size() < 2) throw PreconditionError("train: at least two rows required");
  params.validate();
  return train(X, KernelMatrix::rbf(X, params.gamma), y, params, opts, std::move(scaler));
}

SvrModel fit(const Rows& raw, std::span<const double> y, const SvrParams& params,
             const SolverOptions& opts) {
  if (raw.size() < 2) throw PreconditionError("train: at least two rows required");
  auto scaler = Scaler::fit(raw);
  const auto X = scaler.apply(raw);
  return train(X, y, params, opts, std::move(scaler));
}

}  // namespace actitrait
