#include "actitrait/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "actitrait/csv.hpp"
#include "actitrait/error.hpp"
#include "actitrait/parallel.hpp"

namespace actitrait {

std::string_view group_name(Group g) noexcept {
  switch (g) {
    case Group::Total: return "Total";
    case Group::Female: return "Female";
    case Group::Male: return "Male";
  }
  return "?";
}

std::optional<Group> parse_group(std::string_view s) {
  const auto l = csv::to_lower(s);
  if (l == "total" || l == "all") return Group::Total;
  if (l == "female") return Group::Female;
  if (l == "male") return Group::Male;
  return std::nullopt;
}

bool in_group(const Participant& p, Group g) noexcept {
  switch (g) {
    case Group::Total: return true;
    case Group::Female: return p.gender == Gender::Female;
    case Group::Male: return p.gender == Gender::Male;
  }
  return false;
}

std::vector<std::size_t> group_members(const Cohort& cohort, Group g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cohort.size(); ++i)
    if (in_group(cohort.participants()[i], g)) out.push_back(i);
  return out;
}

FeatureMatrix log_transform(const FeatureMatrix& matrix) {
  FeatureMatrix out = matrix;
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    if (matrix.columns()[c].log_policy == LogPolicy::PassThrough) continue;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      const auto v = matrix.at(r, c);
      if (!v) continue;
      if (*v < 0.0)
        throw ValidationError("log_transform: negative value in column '" +
                              matrix.columns()[c].name + "'");
      out.set(r, c, std::log1p(*v));
    }
  }
  return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("pearson: length mismatch");
  double sx = 0, sy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    sx += x[i];
    sy += y[i];
    ++n;
  }
  if (n < 3) return std::nullopt;
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

const CorrelationEntry& CorrelationTable::entry(Trait t, Group g, std::size_t feature) const {
  const std::size_t per_trait = kAllGroups.size() * columns.size();
  return entries.at(static_cast<std::size_t>(t) * per_trait +
                    static_cast<std::size_t>(g) * columns.size() + feature);
}

CorrelationTable correlate_all(const FeatureMatrix& matrix, const Cohort& cohort, std::size_t k,
                               unsigned threads) {
  // cohort index -> matrix row
  std::vector<std::optional<std::size_t>> row_of(cohort.size());
  for (std::size_t i = 0; i < cohort.size(); ++i)
    row_of[i] = matrix.row_index(cohort.participants()[i].id);

  CorrelationTable table;
  table.columns = matrix.columns();
  const std::size_t cols = matrix.cols();
  table.entries.resize(kAllTraits.size() * kAllGroups.size() * cols);

  const std::size_t cells = kAllTraits.size() * kAllGroups.size();
  parallel_for(cells, threads, [&](std::size_t cell) {
    const Trait trait = kAllTraits[cell / kAllGroups.size()];
    const Group group = kAllGroups[cell % kAllGroups.size()];
    std::vector<std::size_t> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      if (!row_of[i] || !in_group(cohort.participants()[i], group)) continue;
      rows.push_back(*row_of[i]);
      y.push_back(cohort.participants()[i].big5.get(trait));
    }
    std::vector<double> x(rows.size());
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t n = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        x[r] = matrix.raw(rows[r], c);
        if (!std::isnan(x[r])) ++n;
      }
      auto& e = table.entries[cell * cols + c];
      e = CorrelationEntry{trait, group, c, pearson(x, y), n};
    }
  });

  for (std::size_t cell = 0; cell < cells; ++cell) {
    const Trait trait = kAllTraits[cell / kAllGroups.size()];
    const Group group = kAllGroups[cell % kAllGroups.size()];
    std::vector<TopFeature> ranked;
    for (std::size_t c = 0; c < cols; ++c)
      if (const auto& e = table.entries[cell * cols + c]; e.pcc) ranked.push_back({c, *e.pcc});
    // columns are name-sorted, so index order is the name tie-break
    std::stable_sort(ranked.begin(), ranked.end(), [](const TopFeature& a, const TopFeature& b) {
      return std::fabs(a.pcc) > std::fabs(b.pcc);
    });
    if (ranked.size() > k) ranked.resize(k);
    table.top[{trait, group}] = std::move(ranked);
  }
  return table;
}

TraitStats summarize(std::span<const double> values) {
  TraitStats s;
  s.n = values.size();
  if (values.empty()) return s;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / n;
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(ss / n);
  const std::size_t mid = v.size() / 2;
  s.median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  s.min = v.front();
  s.max = v.back();
  return s;
}

std::optional<WelchResult> welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  auto moments = [](std::span<const double> v) {
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair{m, ss / static_cast<double>(v.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double se2 = va / na + vb / nb;
  WelchResult r;
  if (se2 <= 0.0) {
    r.t = 0.0;
    r.df = na + nb - 2.0;
    r.p_value = (ma == mb) ? 1.0 : 0.0;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  const double qa = va / na, qb = vb / nb;
  r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  const boost::math::students_t dist(r.df);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))));
  return r;
}

DescriptiveStats descriptive_stats(const Cohort& cohort) {
  DescriptiveStats out;
  for (auto trait : kAllTraits) {
    std::array<std::vector<double>, 3> by_group;
    for (const auto& p : cohort.participants())
      for (auto g : kAllGroups)
        if (in_group(p, g)) by_group[static_cast<std::size_t>(g)].push_back(p.big5.get(trait));
    for (auto g : kAllGroups) {
      const auto& v = by_group[static_cast<std::size_t>(g)];
      out.stats[{trait, g}] = v.empty() ? std::nullopt : std::optional(summarize(v));
    }
    out.gender_test[trait] = welch_t_test(by_group[static_cast<std::size_t>(Group::Female)],
                                          by_group[static_cast<std::size_t>(Group::Male)]);
  }
  return out;
}

}  // namespace actitrait
