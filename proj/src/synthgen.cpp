#include "actitrait/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

#include "actitrait/csv.hpp"
#include "actitrait/error.hpp"
#include "actitrait/parallel.hpp"

namespace actitrait {
namespace {

constexpr double kGravity = 9.80665;
constexpr int kEveningStart = 18;
constexpr int kNightEnd = 9;  // night hours 0..8

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent stream for (seed, participant, purpose).
std::mt19937_64 stream_for(std::uint64_t seed, std::size_t index, std::uint64_t purpose) {
  const std::uint64_t k = splitmix64(splitmix64(seed) ^ splitmix64(index + 1) ^
                                     splitmix64(0xA5A5A5A5ull * (purpose + 1)));
  return std::mt19937_64(k);
}

enum Purpose : std::uint64_t { kTraits = 1, kLatent = 2, kAccel = 3, kComm = 4, kTemplate = 5 };

// Division by the integral scale yields the double nearest the decimal value.
double round_to(double v, double scale) { return std::round(v * scale) / scale; }

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

struct Latents {
  std::array<double, 5> family{};  // by FeatureFamily
  double message_rate = 0.0;
};

Latents draw_latents(const GenConfig& cfg, const Participant& p, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Latents out;
  std::array<double, 5> noise{};
  for (auto& v : noise) v = n01(rng);
  out.message_rate = n01(rng);
  const auto& m = cfg.moments[p.gender == Gender::Female ? 0 : 1];
  for (std::size_t f = 0; f < kAllFamilies.size(); ++f) {
    double signal = 0.0, s2 = 0.0;
    for (const auto& e : cfg.effects) {
      if (static_cast<std::size_t>(e.family) != f) continue;
      const auto ti = static_cast<std::size_t>(e.trait);
      const double z = (p.big5.get(e.trait) - m[ti].mean) / m[ti].sd;
      signal += e.sign * e.strength * z;
      s2 += e.strength * e.strength;
    }
    out.family[f] = signal + std::sqrt(std::max(0.0, 1.0 - s2)) * noise[f];
  }
  return out;
}

double latent(const Latents& l, FeatureFamily f) { return l.family[static_cast<std::size_t>(f)]; }

// Hourly activity level (the per-axis noise amplitude of each burst).
std::vector<std::array<double, 24>> activity_levels(const GenConfig& cfg, const Latents& lat,
                                                    std::mt19937_64& tmpl_rng,
                                                    std::mt19937_64& rng) {
  static constexpr std::array<double, 24> kBase = {
      0.04, 0.04, 0.04, 0.04, 0.04, 0.04, 0.08, 0.3, 0.4,  // 0-8
      0.5,  0.5,  0.45, 0.5,  0.5,  0.45, 0.45, 0.5, 0.55,  // 9-17
      0.6,  0.6,  0.55, 0.5,  0.4,  0.25};                  // 18-23
  constexpr double kActive = 0.9, kQuiet = 0.05;

  // Per-participant templates for the regularity families.
  std::bernoulli_distribution coin(0.5);
  std::array<bool, 6> eve_template{};
  {
    std::array<int, 6> order = {0, 1, 2, 3, 4, 5};
    std::shuffle(order.begin(), order.end(), tmpl_rng);
    for (int k = 0; k < 3; ++k) eve_template[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = true;
  }
  std::array<bool, kNightEnd> night_template{};
  {
    std::array<int, kNightEnd> order{};
    for (int k = 0; k < kNightEnd; ++k) order[static_cast<std::size_t>(k)] = k;
    std::shuffle(order.begin(), order.end(), tmpl_rng);
    for (int k = 0; k < 3; ++k) night_template[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = true;
  }

  // Evening intensity moves the quiet and weekend evening levels but stays
  // below the active level, so it does not stretch the rescaled range.
  const double eve_lift = logistic(1.5 * latent(lat, FeatureFamily::EveningIntensity));
  const double eve_follow = logistic(2.0 * latent(lat, FeatureFamily::WeekdayEveningRI));
  const double night_follow = logistic(2.0 * latent(lat, FeatureFamily::NightRI));

  std::normal_distribution<double> jitter(0.0, 0.15);
  std::uniform_real_distribution<double> u01;
  std::bernoulli_distribution night_coin(3.0 / kNightEnd);

  std::vector<std::array<double, 24>> out(cfg.n_days);
  for (std::size_t d = 0; d < cfg.n_days; ++d) {
    const auto wd = weekday(CivilDay{cfg.start_epoch / 86400 + static_cast<std::int64_t>(d)});
    const bool weekend = wd == Weekday::Saturday || wd == Weekday::Sunday;
    for (int h = 0; h < 24; ++h) {
      double level = kBase[static_cast<std::size_t>(h)];
      if (h < kNightEnd) {
        const bool active = u01(rng) < night_follow ? night_template[static_cast<std::size_t>(h)]
                                                    : night_coin(rng);
        level = active ? kActive : 0.03;
      } else if (h >= kEveningStart && !weekend) {
        const auto k = static_cast<std::size_t>(h - kEveningStart);
        const bool active = u01(rng) < eve_follow ? eve_template[k] : coin(rng);
        level = active ? kActive : kQuiet + 0.3 * eve_lift;
      } else if (h >= kEveningStart) {
        level *= 0.4 + eve_lift;
      }
      out[d][static_cast<std::size_t>(h)] = level * std::exp(jitter(rng));
    }
  }
  return out;
}

AccelStream make_accel(const GenConfig& cfg, const std::vector<std::array<double, 24>>& levels,
                       std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  AccelStream out;
  const int bursts_per_hour = 3600 / cfg.burst_period_seconds;
  out.reserve(cfg.n_days * 24 * static_cast<std::size_t>(bursts_per_hour * cfg.burst_samples));
  for (std::size_t d = 0; d < cfg.n_days; ++d)
    for (int h = 0; h < 24; ++h) {
      const double amp = levels[d][static_cast<std::size_t>(h)];
      for (int b = 0; b < bursts_per_hour; ++b) {
        const std::int64_t start = cfg.start_epoch + static_cast<std::int64_t>(d) * 86400 +
                                   h * 3600 + b * cfg.burst_period_seconds;
        for (int k = 0; k < cfg.burst_samples; ++k) {
          AccelSample s;
          s.t = Timestamp{start + k / cfg.sample_rate_hz};
          s.x = round_to(amp * n01(rng), 1e4);
          s.y = round_to(amp * n01(rng), 1e4);
          s.z = round_to(kGravity + amp * n01(rng), 1e4);
          out.push_back(s);
        }
      }
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string contact_hash(std::uint64_t seed, std::size_t participant, std::size_t k) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(splitmix64(splitmix64(seed) ^
                                                           splitmix64(participant * 1000003ull + k))));
  return buf;
}

CommStream make_comm(const GenConfig& cfg, std::size_t index, const Latents& lat,
                     std::mt19937_64& rng) {
  // Zipf-like contact preference; flatter with higher entropy latent.
  const double zipf = 1.6 * std::exp(-0.6 * latent(lat, FeatureFamily::ContactEntropy));
  std::vector<double> weights(cfg.contacts_per_participant);
  for (std::size_t k = 0; k < weights.size(); ++k)
    weights[k] = std::pow(static_cast<double>(k + 1), -zipf);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<std::string> contacts;
  for (std::size_t k = 0; k < weights.size(); ++k) contacts.push_back(contact_hash(cfg.seed, index, k));

  static constexpr std::array<double, 24> kHourWeight = {
      0.2, 0.1, 0.05, 0.05, 0.05, 0.1, 0.3, 0.8, 1.0, 1.2, 1.2, 1.2,
      1.3, 1.2, 1.1,  1.1,  1.2,  1.4, 1.5, 1.5, 1.4, 1.2, 0.9, 0.5};
  std::discrete_distribution<int> pick_hour(kHourWeight.begin(), kHourWeight.end());
  std::uniform_int_distribution<int> second(0, 3599);
  std::uniform_real_distribution<double> u01;
  std::exponential_distribution<double> call_len(1.0 / 120.0);
  std::uniform_int_distribution<int> reply_delay(30, 3000);

  const double call_rate = 3.0 * std::exp(0.5 * latent(lat, FeatureFamily::CallVolume));
  const double msg_rate = 5.0 * std::exp(0.3 * lat.message_rate);
  std::poisson_distribution<int> n_calls(call_rate), n_msgs(msg_rate);

  CommStream out;
  const std::int64_t end = cfg.start_epoch + static_cast<std::int64_t>(cfg.n_days) * 86400;
  auto emit = [&](Channel ch, std::int64_t t) {
    CommEvent e;
    e.t = Timestamp{t};
    e.channel = ch;
    const std::size_t who = pick(rng);
    e.contact = contacts[who];
    const double r = u01(rng);
    if (ch == Channel::Call)
      e.direction = r < 0.45 ? Direction::Outgoing : (r < 0.88 ? Direction::Incoming : Direction::Missed);
    else
      e.direction = r < 0.5 ? Direction::Outgoing : Direction::Incoming;
    if (ch == Channel::Call && e.direction != Direction::Missed)
      e.duration_seconds = 1 + static_cast<std::int64_t>(call_len(rng));
    out.push_back(e);
    if (e.direction != Direction::Outgoing && u01(rng) < 0.4) {
      CommEvent reply = e;
      reply.direction = Direction::Outgoing;
      reply.t = Timestamp{t + reply_delay(rng)};
      // Replies never leave the collection window.
      if (reply.t.epoch_seconds >= end) return;
      reply.duration_seconds = ch == Channel::Call ? 1 + static_cast<std::int64_t>(call_len(rng)) : 0;
      out.push_back(reply);
    }
  };

  for (std::size_t d = 0; d < cfg.n_days; ++d) {
    const std::int64_t midnight = cfg.start_epoch + static_cast<std::int64_t>(d) * 86400;
    const int calls = n_calls(rng);
    for (int c = 0; c < calls; ++c) emit(Channel::Call, midnight + pick_hour(rng) * 3600 + second(rng));
    const int msgs = n_msgs(rng);
    for (int c = 0; c < msgs; ++c) emit(Channel::Message, midnight + pick_hour(rng) * 3600 + second(rng));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string_view family_name(FeatureFamily f) noexcept {
  switch (f) {
    case FeatureFamily::ContactEntropy: return "contact_entropy";
    case FeatureFamily::WeekdayEveningRI: return "weekday_evening_ri";
    case FeatureFamily::EveningIntensity: return "evening_intensity";
    case FeatureFamily::NightRI: return "night_ri";
    case FeatureFamily::CallVolume: return "call_volume";
  }
  return "?";
}

std::optional<FeatureFamily> parse_family(std::string_view s) {
  const auto l = csv::to_lower(s);
  for (auto f : kAllFamilies)
    if (family_name(f) == l) return f;
  return std::nullopt;
}

bool is_physical(FeatureFamily f) noexcept {
  return f == FeatureFamily::WeekdayEveningRI || f == FeatureFamily::EveningIntensity ||
         f == FeatureFamily::NightRI;
}

std::string_view family_probe_feature(FeatureFamily f) noexcept {
  switch (f) {
    case FeatureFamily::ContactEntropy: return "cm.entropy_total_all_days";
    case FeatureFamily::WeekdayEveningRI: return "accel.ri_weekday_evening";
    case FeatureFamily::EveningIntensity: return "accel.intensity_mean_all_days_evening";
    case FeatureFamily::NightRI: return "accel.ri_weekday_night";
    case FeatureFamily::CallVolume: return "call.count_all_days";
  }
  return "";
}

std::array<std::array<TraitMoments, 5>, 2> default_trait_moments() {
  return {{
      {{{3.38, 0.87}, {3.95, 0.50}, {3.65, 0.64}, {3.00, 0.65}, {3.44, 0.72}}},  // female
      {{{3.13, 0.84}, {3.71, 0.54}, {3.62, 0.53}, {2.56, 0.77}, {3.80, 0.64}}},  // male
  }};
}

std::vector<EffectSpec> standard_effects(double strength) {
  return {
      {Trait::Extraversion, FeatureFamily::EveningIntensity, +1, strength},
      {Trait::Agreeableness, FeatureFamily::WeekdayEveningRI, -1, strength},
      {Trait::Conscientiousness, FeatureFamily::ContactEntropy, +1, strength},
      {Trait::Neuroticism, FeatureFamily::NightRI, +1, strength},
      {Trait::Openness, FeatureFamily::CallVolume, -1, strength},
  };
}

void GenConfig::validate() const {
  if (n_participants < 4) throw ValidationError("synth: n_participants must be at least 4");
  if (n_days < 7) throw ValidationError("synth: n_days must be at least 7");
  if (start_epoch < 0 || start_epoch % 86400 != 0)
    throw ValidationError("synth: start_epoch must be a non-negative local midnight");
  if (sample_rate_hz <= 0 || burst_samples <= 0 || burst_period_seconds <= 0 ||
      3600 % burst_period_seconds != 0)
    throw ValidationError("synth: burst period must divide one hour");
  if (burst_samples > sample_rate_hz * burst_period_seconds)
    throw ValidationError("synth: bursts overlap");
  if (!(female_fraction >= 0.0 && female_fraction <= 1.0))
    throw ValidationError("synth: female_fraction must be in [0,1]");
  if (contacts_per_participant < 1) throw ValidationError("synth: need at least one contact");
  for (const auto& e : effects) {
    if (!(e.strength >= 0.0 && e.strength <= 1.0))
      throw ValidationError("synth: effect strength must be in [0,1]");
    if (e.sign != 1 && e.sign != -1) throw ValidationError("synth: effect sign must be +1 or -1");
  }
  for (const auto& g : moments)
    for (const auto& m : g)
      if (!(m.sd > 0.0) || !(m.mean >= 1.0 && m.mean <= 5.0))
        throw ValidationError("synth: trait moments must have mean in [1,5] and sd > 0");
}

std::string synthetic_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%04zu", index + 1);
  return buf;
}

SyntheticParticipant generate_participant(const GenConfig& cfg, std::size_t index) {
  SyntheticParticipant out;
  auto trait_rng = stream_for(cfg.seed, index, kTraits);
  out.participant.id = synthetic_id(index);
  out.participant.gender = std::bernoulli_distribution(cfg.female_fraction)(trait_rng)
                               ? Gender::Female
                               : Gender::Male;
  const auto& m = cfg.moments[out.participant.gender == Gender::Female ? 0 : 1];
  for (std::size_t k = 0; k < kAllTraits.size(); ++k) {
    std::normal_distribution<double> dist(m[k].mean, m[k].sd);
    double v = 0.0;
    do {
      v = round_to(dist(trait_rng), 100.0);
    } while (v < 1.0 || v > 5.0);
    out.participant.big5.set(kAllTraits[k], v);
  }

  auto latent_rng = stream_for(cfg.seed, index, kLatent);
  const auto lat = draw_latents(cfg, out.participant, latent_rng);
  auto tmpl_rng = stream_for(cfg.seed, index, kTemplate);
  auto accel_rng = stream_for(cfg.seed, index, kAccel);
  const auto levels = activity_levels(cfg, lat, tmpl_rng, accel_rng);
  out.accel = make_accel(cfg, levels, accel_rng);
  auto comm_rng = stream_for(cfg.seed, index, kComm);
  out.comm = make_comm(cfg, index, lat, comm_rng);
  return out;
}

Cohort generate(const GenConfig& cfg, unsigned threads) {
  cfg.validate();
  std::vector<SyntheticParticipant> parts(cfg.n_participants);
  parallel_for(parts.size(), threads, [&](std::size_t i) { parts[i] = generate_participant(cfg, i); });
  std::vector<Participant> roster;
  AccelStreams accel;
  CommStreams comm;
  for (auto& p : parts) {
    roster.push_back(p.participant);
    accel.emplace(p.participant.id, std::move(p.accel));
    comm.emplace(p.participant.id, std::move(p.comm));
  }
  return Cohort(std::move(roster), std::move(accel), std::move(comm));
}

std::string manifest_json(const GenConfig& cfg) {
  nlohmann::ordered_json j;
  j["generator"] = "actitrait synthetic cohort";
  j["seed"] = cfg.seed;
  j["n_participants"] = cfg.n_participants;
  j["n_days"] = cfg.n_days;
  j["start_epoch"] = cfg.start_epoch;
  j["start_day"] = format_day(CivilDay{cfg.start_epoch / 86400});
  j["burst_samples"] = cfg.burst_samples;
  j["burst_period_seconds"] = cfg.burst_period_seconds;
  j["sample_rate_hz"] = cfg.sample_rate_hz;
  j["female_fraction"] = cfg.female_fraction;
  j["contacts_per_participant"] = cfg.contacts_per_participant;
  auto effects = nlohmann::ordered_json::array();
  for (const auto& e : cfg.effects)
    effects.push_back({{"trait", trait_name(e.trait)},
                       {"family", family_name(e.family)},
                       {"sign", e.sign > 0 ? "+" : "-"},
                       {"strength", e.strength}});
  j["effects"] = std::move(effects);
  auto moments = nlohmann::ordered_json::object();
  for (std::size_t g = 0; g < 2; ++g) {
    auto per = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < kAllTraits.size(); ++k)
      per[std::string(trait_name(kAllTraits[k]))] = {{"mean", cfg.moments[g][k].mean},
                                                      {"sd", cfg.moments[g][k].sd}};
    moments[g == 0 ? "female" : "male"] = std::move(per);
  }
  j["trait_moments"] = std::move(moments);
  j["files"] = {{"roster", "roster.csv"}, {"accel", "accel.csv"}, {"comm", "comm.csv"}};
  return j.dump(1) + "\n";
}

WrittenCohort write_synthetic_cohort(const GenConfig& cfg, const std::filesystem::path& dir,
                                     unsigned threads) {
  cfg.validate();
  std::filesystem::create_directories(dir);
  WrittenCohort w{dir / "roster.csv", dir / "accel.csv", dir / "comm.csv", dir / "manifest.json"};
  std::ofstream accel(w.accel, std::ios::binary), comm(w.comm, std::ios::binary);
  if (!accel || !comm) throw Error("cannot write synthetic cohort into " + dir.string());
  write_accel_header(accel);
  write_comm_header(comm);
  std::vector<Participant> roster;
  const std::size_t batch = std::max<std::size_t>(1, threads);
  for (std::size_t start = 0; start < cfg.n_participants; start += batch) {
    const std::size_t count = std::min(batch, cfg.n_participants - start);
    std::vector<SyntheticParticipant> parts(count);
    parallel_for(count, threads, [&](std::size_t k) { parts[k] = generate_participant(cfg, start + k); });
    for (const auto& p : parts) {
      roster.push_back(p.participant);
      write_accel_rows(accel, p.participant.id, p.accel);
      write_comm_rows(comm, p.participant.id, p.comm);
    }
  }
  std::ofstream ros(w.roster, std::ios::binary);
  write_roster(ros, roster);
  std::ofstream man(w.manifest, std::ios::binary);
  man << manifest_json(cfg);
  if (!accel || !comm || !ros || !man) throw Error("failed writing synthetic cohort");
  return w;
}

}  // namespace actitrait
