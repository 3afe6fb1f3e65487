#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "actitrait/cohort.hpp"
#include "actitrait/synthgen.hpp"

namespace test_support {

// 2010-03-01 00:00, a Monday.
inline constexpr std::int64_t kMonday = 1267401600;

inline actitrait::CommEvent event(std::int64_t t, actitrait::Direction d, std::string contact,
                                  actitrait::Channel ch = actitrait::Channel::Call,
                                  std::int64_t duration = 0) {
  actitrait::CommEvent e;
  e.t = actitrait::Timestamp{t};
  e.channel = ch;
  e.direction = d;
  e.contact = std::move(contact);
  e.duration_seconds = duration;
  return e;
}

inline actitrait::AccelSample sample(std::int64_t t, double x, double y, double z) {
  return actitrait::AccelSample{actitrait::Timestamp{t}, x, y, z};
}

inline actitrait::Participant person(std::string id, actitrait::Gender g, double score = 3.0) {
  actitrait::Participant p;
  p.id = std::move(id);
  p.gender = g;
  for (auto t : actitrait::kAllTraits) p.big5.set(t, score);
  return p;
}

// A light accelerometer schedule keeps test cohorts small.
inline actitrait::GenConfig light_config(std::size_t n, std::size_t days, std::uint64_t seed,
                                         double strength) {
  actitrait::GenConfig cfg;
  cfg.seed = seed;
  cfg.n_participants = n;
  cfg.n_days = days;
  cfg.burst_period_seconds = 1200;
  cfg.effects = actitrait::standard_effects(strength);
  return cfg;
}

inline bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace test_support
