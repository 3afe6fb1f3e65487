#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actitrait/cohort.hpp"

namespace actitrait {

enum class FeatureFamily { ContactEntropy, WeekdayEveningRI, EveningIntensity, NightRI, CallVolume };
inline constexpr std::array<FeatureFamily, 5> kAllFamilies = {
    FeatureFamily::ContactEntropy, FeatureFamily::WeekdayEveningRI, FeatureFamily::EveningIntensity,
    FeatureFamily::NightRI, FeatureFamily::CallVolume};

std::string_view family_name(FeatureFamily f) noexcept;
std::optional<FeatureFamily> parse_family(std::string_view s);
// True for families expressed through the accelerometer stream.
bool is_physical(FeatureFamily f) noexcept;
// The catalog column a planted family is expected to move.
std::string_view family_probe_feature(FeatureFamily f) noexcept;

struct EffectSpec {
  Trait trait = Trait::Extraversion;
  FeatureFamily family = FeatureFamily::ContactEntropy;
  int sign = +1;  // +1 or -1
  double strength = 0.0;  // [0, 1]
};

struct TraitMoments {
  double mean = 3.0;
  double sd = 0.7;
};

// Reference per-gender score moments, [gender][trait].
std::array<std::array<TraitMoments, 5>, 2> default_trait_moments();

// One standard set of five effects, one family per trait.
std::vector<EffectSpec> standard_effects(double strength);

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t n_participants = 52;
  std::size_t n_days = 14;
  // Local midnight of the first day; default 2010-03-01, a Monday.
  std::int64_t start_epoch = 1267401600;
  // 5 Hz bursts: `burst_samples` samples every `burst_period_seconds`.
  int burst_samples = 75;
  int burst_period_seconds = 120;
  int sample_rate_hz = 5;
  double female_fraction = 27.0 / 52.0;
  std::size_t contacts_per_participant = 12;
  std::vector<EffectSpec> effects;
  std::array<std::array<TraitMoments, 5>, 2> moments = default_trait_moments();

  // Throws ValidationError.
  void validate() const;
};

struct SyntheticParticipant {
  Participant participant;
  AccelStream accel;
  CommStream comm;
};

std::string synthetic_id(std::size_t index);

// Participant `index` depends only on (config, index): each participant
// draws from its own stream derived from (seed, index).
SyntheticParticipant generate_participant(const GenConfig& cfg, std::size_t index);

Cohort generate(const GenConfig& cfg, unsigned threads = 1);

struct WrittenCohort {
  std::filesystem::path roster, accel, comm, manifest;
};

// Writes roster.csv, accel.csv, comm.csv and manifest.json into `dir`,
// generating in batches so the whole cohort is never held in memory.
WrittenCohort write_synthetic_cohort(const GenConfig& cfg, const std::filesystem::path& dir,
                                     unsigned threads = 1);

std::string manifest_json(const GenConfig& cfg);

}  // namespace actitrait
