#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actitrait/cohort.hpp"
#include "actitrait/features.hpp"

namespace actitrait {

enum class Group { Total, Female, Male };
inline constexpr std::array<Group, 3> kAllGroups = {Group::Total, Group::Female, Group::Male};

std::string_view group_name(Group g) noexcept;
std::optional<Group> parse_group(std::string_view s);
bool in_group(const Participant& p, Group g) noexcept;
// Cohort indices belonging to the group, in cohort order.
std::vector<std::size_t> group_members(const Cohort& cohort, Group g);

// ln(1 + x) on every Log1p column; PassThrough columns (entropy, average
// RI) are copied. Throws ValidationError for a negative cell in a
// transformed column.
FeatureMatrix log_transform(const FeatureMatrix& matrix);

// Pearson correlation over the pairs where both values are present (NaN =
// absent). Absent with fewer than three pairs or a zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationEntry {
  Trait trait;
  Group group;
  std::size_t feature;  // column index into the correlated matrix
  std::optional<double> pcc;
  std::size_t n = 0;
};

struct TopFeature {
  std::size_t feature;
  double pcc;
};

struct CorrelationTable {
  std::vector<FeatureId> columns;
  // trait-major, then group, then column
  std::vector<CorrelationEntry> entries;
  // k features of largest |PCC| per (trait, group); ties by column name
  std::map<std::pair<Trait, Group>, std::vector<TopFeature>> top;

  const CorrelationEntry& entry(Trait t, Group g, std::size_t feature) const;
};

// `matrix` rows are matched to cohort participants by id.
CorrelationTable correlate_all(const FeatureMatrix& matrix, const Cohort& cohort,
                               std::size_t k = 3, unsigned threads = 1);

struct TraitStats {
  std::size_t n = 0;
  double mean = 0, sd = 0, median = 0, min = 0, max = 0;
};

struct WelchResult {
  double t = 0;
  double df = 0;
  double p_value = 1;
};

// Two-sided Welch unequal-variance t-test. Absent when either sample has
// fewer than two values.
std::optional<WelchResult> welch_t_test(std::span<const double> a, std::span<const double> b);

// Population SD; median is the midpoint of the two central values for even n.
TraitStats summarize(std::span<const double> values);

struct DescriptiveStats {
  // absent for an empty group
  std::map<std::pair<Trait, Group>, std::optional<TraitStats>> stats;
  // female vs male
  std::map<Trait, std::optional<WelchResult>> gender_test;
};

DescriptiveStats descriptive_stats(const Cohort& cohort);

}  // namespace actitrait
