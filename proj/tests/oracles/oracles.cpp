#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oracle {

double rbf(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
  return std::exp(-gamma * d2);
}

Matrix rbf_matrix(const Matrix& X, double gamma) {
  Matrix K(X.size(), std::vector<double>(X.size()));
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X.size(); ++j) K[i][j] = rbf(X[i], X[j], gamma);
  return K;
}

double svr_dual_value(const Matrix& K, const std::vector<double>& y, const std::vector<double>& beta,
                      double epsilon) {
  double v = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    for (std::size_t j = 0; j < beta.size(); ++j) v -= 0.5 * beta[i] * K[i][j] * beta[j];
    v += y[i] * beta[i] - epsilon * std::fabs(beta[i]);
  }
  return v;
}

namespace {

// Euclidean projection onto {z in [0,C]^{2l} : sum(z[:l]) - sum(z[l:]) = 0}.
std::vector<double> project(const std::vector<double>& v, std::size_t l, double C) {
  auto at = [&](double lambda, std::vector<double>& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < 2 * l; ++i) {
      const double sign = i < l ? 1.0 : -1.0;
      z[i] = std::min(C, std::max(0.0, v[i] - lambda * sign));
      s += sign * z[i];
    }
    return s;
  };
  double big = C;
  for (double x : v) big = std::max(big, std::fabs(x) + C);
  double lo = -big, hi = big;
  std::vector<double> z(2 * l);
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (at(mid, z) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  at(0.5 * (lo + hi), z);
  return z;
}

}  // namespace

QpResult svr_dual_qp(const Matrix& K, const std::vector<double>& y, double C, double epsilon,
                     std::size_t max_iterations) {
  const std::size_t l = y.size();
  double lip = 0.0;
  for (const auto& row : K) {
    double s = 0.0;
    for (double k : row) s += std::fabs(k);
    lip = std::max(lip, s);
  }
  const double step = 1.0 / (2.0 * lip);

  auto beta_of = [&](const std::vector<double>& z) {
    std::vector<double> b(l);
    for (std::size_t i = 0; i < l; ++i) b[i] = z[i] - z[l + i];
    return b;
  };
  auto gradient = [&](const std::vector<double>& z) {
    const auto b = beta_of(z);
    std::vector<double> g(2 * l);
    for (std::size_t i = 0; i < l; ++i) {
      double kb = 0.0;
      for (std::size_t j = 0; j < l; ++j) kb += K[i][j] * b[j];
      g[i] = kb + epsilon - y[i];
      g[l + i] = -kb + epsilon + y[i];
    }
    return g;
  };

  std::vector<double> x(2 * l, 0.0), x_prev = x, w = x;
  double t = 1.0;
  std::size_t it = 0, quiet = 0;
  for (; it < max_iterations; ++it) {
    const auto g = gradient(w);
    std::vector<double> v(2 * l);
    for (std::size_t i = 0; i < 2 * l; ++i) v[i] = w[i] - step * g[i];
    auto x_next = project(v, l, C);

    double restart = 0.0, change = 0.0;
    for (std::size_t i = 0; i < 2 * l; ++i) {
      restart += (w[i] - x_next[i]) * (x_next[i] - x[i]);
      change = std::max(change, std::fabs(x_next[i] - x[i]));
    }
    x_prev = x;
    x = std::move(x_next);
    if (restart > 0.0) {
      t = 1.0;
      w = x;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      for (std::size_t i = 0; i < 2 * l; ++i) w[i] = x[i] + (t - 1.0) / t_next * (x[i] - x_prev[i]);
      t = t_next;
    }
    quiet = change < 1e-15 * std::max(1.0, C) ? quiet + 1 : 0;
    if (quiet >= 20) break;
  }

  QpResult r;
  r.iterations = it;
  r.beta = beta_of(x);
  r.objective = svr_dual_value(K, y, r.beta, epsilon);

  // Bias from the optimality conditions of the final iterate.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity(), upper = std::numeric_limits<double>::infinity();
  const double slack = 1e-10 * std::max(1.0, C);
  for (std::size_t i = 0; i < l; ++i) {
    double kb = 0.0;
    for (std::size_t j = 0; j < l; ++j) kb += K[i][j] * r.beta[j];
    const double base = y[i] - kb;
    const double a = x[i], s = x[l + i];
    if (a > slack && a < C - slack) {
      free_sum += base - epsilon;
      ++free_count;
    } else if (a <= slack) {
      lower = std::max(lower, base - epsilon);
    } else {
      upper = std::min(upper, base - epsilon);
    }
    if (s > slack && s < C - slack) {
      free_sum += base + epsilon;
      ++free_count;
    } else if (s <= slack) {
      upper = std::min(upper, base + epsilon);
    } else {
      lower = std::max(lower, base + epsilon);
    }
  }
  r.bias = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (lower + upper);
  return r;
}

// ---- raw logs -------------------------------------------------------------------

namespace {

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) {
    while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
    out.push_back(cur);
  }
  return out;
}

std::int64_t day_of(std::int64_t t) { return t >= 0 ? t / 86400 : -((-t + 86399) / 86400); }
int hour_of(std::int64_t t) { return static_cast<int>((t - day_of(t) * 86400) / 3600); }
bool weekend(std::int64_t day) {
  const auto w = ((day % 7) + 7 + 4) % 7;  // 0 = Sunday
  return w == 0 || w == 6;
}

struct Range {
  int begin, end;
};
constexpr Range kDaytime{9, 18}, kEvening{18, 24}, kNight{0, 9}, kWhole{0, 24};

double pop_sd(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double pop_var(const std::vector<double>& v) {
  const double sd = pop_sd(v);
  return sd * sd;
}

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

double entropy(const std::vector<RawEvent>& events) {
  std::map<std::string, double> counts;
  for (const auto& e : events) counts[e.contact] += 1.0;
  double s = 0.0;
  const double n = static_cast<double>(events.size());
  for (const auto& [c, k] : counts) s -= (k / n) * std::log(k / n);
  return s;
}

// day -> 24 slots, NaN = absent
using Grid = std::map<std::int64_t, std::vector<double>>;

Grid rescale(const Grid& g) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& [d, row] : g)
    for (double v : row)
      if (!std::isnan(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  Grid out = g;
  for (auto& [d, row] : out)
    for (double& v : row)
      if (!std::isnan(v)) v = hi > lo ? 2.0 * (v - lo) / (hi - lo) - 1.0 : 0.0;
  return out;
}

std::vector<double> pair_ris(const Grid& g, const std::vector<std::int64_t>& days, Range r) {
  std::vector<double> out;
  for (std::size_t i = 0; i < days.size(); ++i)
    for (std::size_t j = i + 1; j < days.size(); ++j) {
      const auto a = g.find(days[i]), b = g.find(days[j]);
      if (a == g.end() || b == g.end()) continue;
      double s = 0.0;
      int n = 0;
      for (int h = r.begin; h < r.end; ++h) {
        const double x = a->second[static_cast<std::size_t>(h)], y = b->second[static_cast<std::size_t>(h)];
        if (std::isnan(x) || std::isnan(y)) continue;
        s += x * y;
        ++n;
      }
      if (n > 0) out.push_back(s / n);
    }
  return out;
}

void comm_block(std::map<std::string, double>& f, const std::string& k, const std::vector<RawEvent>& ev,
                const std::vector<std::int64_t>& days, bool response, bool night, std::int64_t window) {
  std::vector<double> daily(days.size(), 0.0);
  Grid counts;
  for (auto d : days) counts[d] = std::vector<double>(24, 0.0);
  for (const auto& e : ev) {
    const auto d = day_of(e.t);
    for (std::size_t i = 0; i < days.size(); ++i)
      if (days[i] == d) daily[i] += 1.0;
    if (counts.count(d)) counts[d][static_cast<std::size_t>(hour_of(e.t))] += 1.0;
  }
  if (days.size() >= 2) f[k + ".sd_daily_interactions"] = pop_sd(daily);

  std::vector<RawEvent> wd, sent, sent_wd;
  for (const auto& e : ev) {
    const bool is_wd = !weekend(day_of(e.t));
    if (is_wd) wd.push_back(e);
    if (e.direction == "outgoing") sent.push_back(e);
    if (is_wd && e.direction == "outgoing") sent_wd.push_back(e);
  }
  if (!ev.empty()) f[k + ".entropy_total_all_days"] = entropy(ev);
  if (!wd.empty()) f[k + ".entropy_total_weekdays"] = entropy(wd);
  if (!sent.empty()) f[k + ".entropy_sent_all_days"] = entropy(sent);
  if (!sent_wd.empty()) f[k + ".entropy_sent_weekdays"] = entropy(sent_wd);

  if (!days.empty()) {
    const auto x = rescale(counts);
    const auto all = pair_ris(x, days, kWhole);
    if (!all.empty()) f[k + ".ri_interactions_all_days"] = mean_of(all);
    const std::pair<const char*, Range> segs[] = {{"daytime", kDaytime}, {"evening", kEvening}, {"night", kNight}};
    for (const auto& [name, r] : segs) {
      const auto ris = pair_ris(x, days, r);
      if (ris.size() >= 2) f[k + ".ri_var_interactions_" + name] = pop_var(ris);
    }
  }

  f[k + ".count_all_days"] = static_cast<double>(ev.size());
  f[k + ".count_weekdays"] = static_cast<double>(wd.size());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < ev.size(); ++i) gaps.push_back(static_cast<double>(ev[i].t - ev[i - 1].t));
  if (!gaps.empty()) f[k + ".inter_event_mean"] = mean_of(gaps);
  if (gaps.size() >= 2) f[k + ".inter_event_sd"] = pop_sd(gaps);

  if (!ev.empty()) {
    std::set<std::string> contacts;
    double out = 0, nights = 0;
    for (const auto& e : ev) {
      contacts.insert(e.contact);
      out += e.direction == "outgoing";
      nights += hour_of(e.t) < 9;
    }
    const double n = static_cast<double>(ev.size());
    f[k + ".contacts_to_interactions"] = static_cast<double>(contacts.size()) / n;
    f[k + ".percent_initiated"] = out / n;
    if (night) f[k + ".percent_night"] = nights / n;
  }

  if (response) {
    double asked = 0, answered = 0, latency = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
      if (ev[i].direction == "outgoing") continue;
      asked += 1;
      std::optional<std::int64_t> best;
      for (std::size_t j = 0; j < ev.size(); ++j) {
        if (j == i || ev[j].direction != "outgoing" || ev[j].contact != ev[i].contact) continue;
        const auto dt = ev[j].t - ev[i].t;
        if (dt < 0 || dt > window) continue;
        if (!best || dt < *best) best = dt;
      }
      if (best) answered += 1, latency += static_cast<double>(*best);
    }
    if (asked > 0) f[k + ".response_rate"] = answered / asked;
    if (answered > 0) f[k + ".response_latency"] = latency / answered;
  }
}

}  // namespace

std::vector<RawSample> read_accel_csv(const std::string& text, const std::string& participant) {
  std::vector<RawSample> out;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    const auto f = fields(line);
    if (f.size() != 5 || f[0] != participant) continue;
    out.push_back({std::stoll(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4])});
  }
  return out;
}

std::vector<RawEvent> read_comm_csv(const std::string& text, const std::string& participant) {
  std::vector<RawEvent> out;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    const auto f = fields(line);
    if (f.size() != 6 || f[0] != participant) continue;
    out.push_back({std::stoll(f[1]), f[2], f[3], f[4], std::stoll(f[5])});
  }
  return out;
}

std::map<std::pair<std::int64_t, int>, double> hourly_mad(const std::vector<RawSample>& samples,
                                                          std::size_t min_samples) {
  std::map<std::pair<std::int64_t, int>, std::vector<double>> groups;
  for (const auto& s : samples)
    groups[{day_of(s.t), hour_of(s.t)}].push_back(std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z));
  std::map<std::pair<std::int64_t, int>, double> out;
  for (const auto& [key, r] : groups) {
    if (r.size() < min_samples || r.empty()) continue;
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(r.size());
    double dev = 0.0;
    for (double v : r) dev += std::fabs(v - mean);
    out[key] = dev / static_cast<double>(r.size());
  }
  return out;
}

std::map<std::string, double> features(const std::vector<RawSample>& samples, std::vector<RawEvent> events,
                                       std::int64_t first_day, std::int64_t last_day,
                                       std::size_t min_samples, std::int64_t response_window) {
  std::map<std::string, double> f;
  std::vector<std::int64_t> days;
  for (auto d = first_day; d <= last_day; ++d) days.push_back(d);

  std::stable_sort(events.begin(), events.end(), [](const RawEvent& a, const RawEvent& b) { return a.t < b.t; });
  if (!events.empty()) {
    std::vector<RawEvent> calls, msgs;
    for (const auto& e : events) (e.channel == "call" ? calls : msgs).push_back(e);
    comm_block(f, "call", calls, days, true, true, response_window);
    comm_block(f, "message", msgs, days, true, false, response_window);
    comm_block(f, "cm", events, days, false, false, response_window);
  }

  if (samples.empty()) return f;
  const auto mad = hourly_mad(samples, min_samples);
  const std::pair<const char*, int> scopes[] = {{"all_days", -1}, {"weekdays", 0}, {"weekends", 1}};
  const std::pair<const char*, Range> segs[] = {{"daytime", kDaytime}, {"evening", kEvening}, {"night", kNight}};
  for (const auto& [sname, which] : scopes)
    for (const auto& [gname, r] : segs) {
      std::vector<double> v;
      for (const auto& [key, m] : mad) {
        if (which >= 0 && weekend(key.first) != (which == 1)) continue;
        if (key.second >= r.begin && key.second < r.end) v.push_back(m);
      }
      const std::string tail = std::string(sname) + "_" + gname;
      if (!v.empty()) f["accel.intensity_mean_" + tail] = mean_of(v);
      if (v.size() >= 2) f["accel.intensity_sd_" + tail] = pop_sd(v);
    }
  std::vector<double> res;
  for (const auto& s : samples) res.push_back(std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z));
  if (res.size() >= 2) f["accel.magnitude_sd_all_days"] = pop_sd(res);

  if (mad.empty()) return f;
  Grid g;
  for (const auto& [key, m] : mad) {
    auto& row = g[key.first];
    if (row.empty()) row.assign(24, std::numeric_limits<double>::quiet_NaN());
    row[static_cast<std::size_t>(key.second)] = m;
  }
  const auto x = rescale(g);
  std::vector<std::int64_t> wd, we;
  for (auto d : days) (weekend(d) ? we : wd).push_back(d);
  const struct {
    const char* name;
    const std::vector<std::int64_t>* days;
    Range r;
  } sets[] = {{"all_days", &days, kWhole},         {"weekdays", &wd, kWhole},
              {"weekends", &we, kWhole},           {"weekday_daytime", &wd, kDaytime},
              {"weekday_evening", &wd, kEvening},  {"weekday_night", &wd, kNight},
              {"weekend_daytime", &we, kDaytime},  {"weekend_evening", &we, kEvening},
              {"weekend_night", &we, kNight}};
  for (const auto& s : sets) {
    const auto ris = pair_ris(x, *s.days, s.r);
    if (!ris.empty()) f[std::string("accel.ri_") + s.name] = mean_of(ris);
  }
  for (const auto& [gname, r] : segs) {
    const auto ris = pair_ris(x, days, r);
    if (ris.size() >= 2) f[std::string("accel.ri_var_") + gname] = pop_var(ris);
  }
  return f;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
