#pragma once

#include <string>

#include "actitrait/analysis.hpp"
#include "actitrait/cohort.hpp"

namespace actitrait {

// Per-participant counts printed by `validate`.
std::string cohort_summary(const Cohort& cohort);

// Score overview per group and trait (mean, SD, median, min, max) with the
// female-vs-male Welch test.
std::string descriptive_text(const DescriptiveStats& stats);
std::string descriptive_csv(const DescriptiveStats& stats);

// Every (trait, group, feature) coefficient.
std::string correlations_csv(const CorrelationTable& table);

// "(+0.55) label" lists per trait and group.
std::string top_features_text(const CorrelationTable& table);
std::string top_features_csv(const CorrelationTable& table);

// Signed two-decimal coefficient, e.g. "+0.55" or "-0.07".
std::string signed_pcc(double pcc);

}  // namespace actitrait
