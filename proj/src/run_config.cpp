#include "actitrait/run_config.hpp"

#include <functional>

#include <json.hpp>

#include "actitrait/csv.hpp"
#include "actitrait/error.hpp"

namespace actitrait {
namespace {

using nlohmann::ordered_json;

struct KeyHandler {
  std::string key;
  std::string help;
  std::function<void(RunConfig&, const ordered_json&)> set;
  std::function<ordered_json(const RunConfig&)> get;
};

[[noreturn]] void bad(std::string_view key, std::string_view why) {
  throw ValidationError("config key '" + std::string(key) + "': " + std::string(why));
}

double as_number(std::string_view key, const ordered_json& v) {
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(std::string_view key, const ordered_json& v) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) bad(key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string as_string(std::string_view key, const ordered_json& v) {
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_number_list(std::string_view key, const ordered_json& v) {
  if (!v.is_array() || v.empty()) bad(key, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(key, e));
  return out;
}

// Accepts an array of names or one comma-separated string.
std::vector<std::string> as_name_list(std::string_view key, const ordered_json& v) {
  std::vector<std::string> out;
  if (v.is_string()) {
    const auto text = v.get<std::string>();
    for (auto f : csv::split(text))
      if (!f.empty()) out.emplace_back(f);
  } else if (v.is_array()) {
    for (const auto& e : v) out.push_back(as_string(key, e));
  } else {
    bad(key, "expected a list of names");
  }
  if (out.empty()) bad(key, "list must not be empty");
  return out;
}

template <class T, class Parse>
std::vector<T> parse_names(std::string_view key, const ordered_json& v, Parse parse) {
  std::vector<T> out;
  for (const auto& name : as_name_list(key, v)) {
    auto p = parse(name);
    if (!p) bad(key, "unknown name '" + name + "'");
    out.push_back(*p);
  }
  return out;
}

template <class T, class Name>
ordered_json names_json(const std::vector<T>& items, Name name) {
  auto a = ordered_json::array();
  for (const auto& i : items) a.push_back(std::string(name(i)));
  return a;
}

ordered_json effects_json(const RunConfig& c) {
  if (c.synth_standard_effects) return "standard";
  auto a = ordered_json::array();
  for (const auto& e : c.synth.effects)
    a.push_back({{"trait", trait_name(e.trait)},
                 {"family", family_name(e.family)},
                 {"sign", e.sign > 0 ? "+" : "-"},
                 {"strength", e.strength}});
  return a;
}

void set_effects(RunConfig& c, const ordered_json& v) {
  constexpr std::string_view key = "synth.effects";
  if (v.is_string()) {
    if (v.get<std::string>() != "standard") bad(key, "expected \"standard\" or a list of effects");
    c.synth_standard_effects = true;
    return;
  }
  if (!v.is_array()) bad(key, "expected \"standard\" or a list of effects");
  std::vector<EffectSpec> effects;
  for (const auto& e : v) {
    if (!e.is_object()) bad(key, "each effect is an object");
    EffectSpec s;
    auto t = parse_trait(as_string(key, e.value("trait", ordered_json())));
    auto f = parse_family(as_string(key, e.value("family", ordered_json())));
    if (!t || !f) bad(key, "unknown trait or family");
    s.trait = *t;
    s.family = *f;
    const auto sign = e.value("sign", ordered_json("+"));
    if (sign.is_string())
      s.sign = sign.get<std::string>() == "-" ? -1 : +1;
    else
      s.sign = as_integer(key, sign) < 0 ? -1 : +1;
    s.strength = as_number(key, e.value("strength", ordered_json()));
    effects.push_back(s);
  }
  c.synth.effects = std::move(effects);
  c.synth_standard_effects = false;
}

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> h = [] {
    std::vector<KeyHandler> v;
    auto path_key = [&](std::string key, std::string help, std::filesystem::path RunConfig::*m) {
      v.push_back({key, std::move(help),
                   [key, m](RunConfig& c, const ordered_json& j) { c.*m = as_string(key, j); },
                   [m](const RunConfig& c) { return ordered_json((c.*m).string()); }});
    };
    path_key("input.roster", "roster CSV (id,gender,E,A,C,N,O)", &RunConfig::roster);
    path_key("input.accel", "accelerometer CSV (participant_id,epoch_seconds,x,y,z)", &RunConfig::accel);
    path_key("input.comm",
             "call/message CSV (participant_id,epoch_seconds,channel,direction,contact,duration_seconds)",
             &RunConfig::comm);
    path_key("output.dir", "output directory", &RunConfig::out_dir);
    v.push_back({"threads", "worker thread cap; results do not depend on it",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("threads", j);
                   if (n < 1 || n > 1024) bad("threads", "must be in [1,1024]");
                   c.threads = static_cast<unsigned>(n);
                 },
                 [](const RunConfig& c) { return ordered_json(c.threads); }});

    v.push_back({"temporal.daytime_start_hour", "first hour of the daytime segment; night is [0, this)",
                 [](RunConfig& c, const ordered_json& j) {
                   c.features.temporal.daytime_start_hour =
                       static_cast<int>(as_integer("temporal.daytime_start_hour", j));
                 },
                 [](const RunConfig& c) { return ordered_json(c.features.temporal.daytime_start_hour); }});
    v.push_back({"temporal.evening_start_hour", "first hour of the evening segment, which runs to midnight",
                 [](RunConfig& c, const ordered_json& j) {
                   c.features.temporal.evening_start_hour =
                       static_cast<int>(as_integer("temporal.evening_start_hour", j));
                 },
                 [](const RunConfig& c) { return ordered_json(c.features.temporal.evening_start_hour); }});
    v.push_back({"temporal.night_attachment",
                 "\"same_date\": night hours belong to their calendar date; \"previous_evening\": to the day before",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto s = csv::to_lower(as_string("temporal.night_attachment", j));
                   if (s == "same_date")
                     c.features.temporal.night_attachment = NightAttachment::SameDate;
                   else if (s == "previous_evening")
                     c.features.temporal.night_attachment = NightAttachment::PreviousEvening;
                   else
                     bad("temporal.night_attachment", "expected same_date or previous_evening");
                 },
                 [](const RunConfig& c) {
                   return ordered_json(c.features.temporal.night_attachment == NightAttachment::SameDate
                                           ? "same_date"
                                           : "previous_evening");
                 }});
    v.push_back({"intensity.min_samples", "samples an hour needs before its intensity is defined",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("intensity.min_samples", j);
                   if (n < 2) bad("intensity.min_samples", "must be at least 2");
                   c.features.intensity.min_samples = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return ordered_json(c.features.intensity.min_samples); }});
    v.push_back({"features.response_window_seconds", "reply window for response rate and latency",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("features.response_window_seconds", j);
                   if (n < 1) bad("features.response_window_seconds", "must be positive");
                   c.features.response_window_seconds = n;
                 },
                 [](const RunConfig& c) { return ordered_json(c.features.response_window_seconds); }});

    v.push_back({"svr.C_grid", "box constraint candidates",
                 [](RunConfig& c, const ordered_json& j) { c.eval.grid.C = as_number_list("svr.C_grid", j); },
                 [](const RunConfig& c) { return ordered_json(c.eval.grid.C); }});
    v.push_back({"svr.epsilon_grid", "tube width candidates",
                 [](RunConfig& c, const ordered_json& j) {
                   c.eval.grid.epsilon = as_number_list("svr.epsilon_grid", j);
                 },
                 [](const RunConfig& c) { return ordered_json(c.eval.grid.epsilon); }});
    v.push_back({"svr.gamma_scale_grid", "RBF gamma candidates, divided by the feature count",
                 [](RunConfig& c, const ordered_json& j) {
                   c.eval.grid.gamma_scale = as_number_list("svr.gamma_scale_grid", j);
                 },
                 [](const RunConfig& c) { return ordered_json(c.eval.grid.gamma_scale); }});
    v.push_back({"svr.tol", "solver stopping tolerance on the maximal KKT violation",
                 [](RunConfig& c, const ordered_json& j) { c.eval.solver.tol = as_number("svr.tol", j); },
                 [](const RunConfig& c) { return ordered_json(c.eval.solver.tol); }});
    v.push_back({"svr.max_iterations", "solver pair-update limit",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("svr.max_iterations", j);
                   if (n < 1) bad("svr.max_iterations", "must be positive");
                   c.eval.solver.max_iterations = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return ordered_json(c.eval.solver.max_iterations); }});

    v.push_back({"eval.groups", "groups to evaluate (Total, Female, Male)",
                 [](RunConfig& c, const ordered_json& j) {
                   c.request.groups = parse_names<Group>("eval.groups", j, parse_group);
                 },
                 [](const RunConfig& c) { return names_json(c.request.groups, group_name); }});
    v.push_back({"eval.traits", "traits to evaluate",
                 [](RunConfig& c, const ordered_json& j) {
                   c.request.traits = parse_names<Trait>("eval.traits", j, parse_trait);
                 },
                 [](const RunConfig& c) { return names_json(c.request.traits, trait_name); }});
    v.push_back({"eval.feature_sets", "feature sets to compare (phone_only, phone_plus_physical)",
                 [](RunConfig& c, const ordered_json& j) {
                   c.request.sets = parse_names<FeatureSet>("eval.feature_sets", j, parse_feature_set);
                 },
                 [](const RunConfig& c) { return names_json(c.request.sets, feature_set_name); }});
    v.push_back({"analysis.top_k", "features listed per trait and group in the top-feature report",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("analysis.top_k", j);
                   if (n < 1) bad("analysis.top_k", "must be positive");
                   c.top_k = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return ordered_json(c.top_k); }});

    v.push_back({"synth.seed", "generator seed",
                 [](RunConfig& c, const ordered_json& j) {
                   if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
                     bad("synth.seed", "expected a non-negative integer");
                   c.synth.seed = j.get<std::uint64_t>();
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.seed); }});
    v.push_back({"synth.n_participants", "synthetic cohort size (>= 4)",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("synth.n_participants", j);
                   if (n < 0) bad("synth.n_participants", "must be non-negative");
                   c.synth.n_participants = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.n_participants); }});
    v.push_back({"synth.n_days", "days per participant (>= 7)",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("synth.n_days", j);
                   if (n < 0) bad("synth.n_days", "must be non-negative");
                   c.synth.n_days = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.n_days); }});
    v.push_back({"synth.start_epoch", "UTC midnight of the first day",
                 [](RunConfig& c, const ordered_json& j) { c.synth.start_epoch = as_integer("synth.start_epoch", j); },
                 [](const RunConfig& c) { return ordered_json(c.synth.start_epoch); }});
    v.push_back({"synth.burst_samples", "samples per accelerometer burst",
                 [](RunConfig& c, const ordered_json& j) {
                   c.synth.burst_samples = static_cast<int>(as_integer("synth.burst_samples", j));
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.burst_samples); }});
    v.push_back({"synth.burst_period_seconds", "seconds between burst starts; must divide 3600",
                 [](RunConfig& c, const ordered_json& j) {
                   c.synth.burst_period_seconds = static_cast<int>(as_integer("synth.burst_period_seconds", j));
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.burst_period_seconds); }});
    v.push_back({"synth.sample_rate_hz", "accelerometer sample rate within a burst",
                 [](RunConfig& c, const ordered_json& j) {
                   c.synth.sample_rate_hz = static_cast<int>(as_integer("synth.sample_rate_hz", j));
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.sample_rate_hz); }});
    v.push_back({"synth.female_fraction", "probability a participant is female",
                 [](RunConfig& c, const ordered_json& j) {
                   c.synth.female_fraction = as_number("synth.female_fraction", j);
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.female_fraction); }});
    v.push_back({"synth.contacts_per_participant", "distinct contacts per participant",
                 [](RunConfig& c, const ordered_json& j) {
                   const auto n = as_integer("synth.contacts_per_participant", j);
                   if (n < 1) bad("synth.contacts_per_participant", "must be positive");
                   c.synth.contacts_per_participant = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth.contacts_per_participant); }});
    v.push_back({"synth.effects",
                 "\"standard\" or a list of {trait, family, sign, strength}; families: contact_entropy, "
                 "weekday_evening_ri, evening_intensity, night_ri, call_volume",
                 set_effects, effects_json});
    v.push_back({"synth.effect_strength", "strength of every standard effect, in [0,1]",
                 [](RunConfig& c, const ordered_json& j) {
                   c.synth_strength = as_number("synth.effect_strength", j);
                 },
                 [](const RunConfig& c) { return ordered_json(c.synth_strength); }});
    return v;
  }();
  return h;
}

const KeyHandler& handler(std::string_view key) {
  for (const auto& h : handlers())
    if (h.key == key) return h;
  throw ValidationError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

void RunConfig::validate() const {
  features.temporal.validate();
  eval.grid.validate();
  if (!(eval.solver.tol > 0.0)) throw ValidationError("svr.tol must be positive");
  if (request.groups.empty() || request.traits.empty() || request.sets.empty())
    throw ValidationError("eval lists must not be empty");
  if (!(synth_strength >= 0.0 && synth_strength <= 1.0))
    throw ValidationError("synth.effect_strength must be in [0,1]");
}

GenConfig RunConfig::synth_config() const {
  GenConfig g = synth;
  if (synth_standard_effects) g.effects = standard_effects(synth_strength);
  return g;
}

const std::vector<ConfigKeyInfo>& config_keys() {
  static const std::vector<ConfigKeyInfo> keys = [] {
    std::vector<ConfigKeyInfo> out;
    const RunConfig defaults;
    for (const auto& h : handlers()) out.push_back({h.key, h.get(defaults).dump(), h.help});
    return out;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& h = handler(key);
  auto j = ordered_json::parse(value, nullptr, false);
  if (j.is_discarded()) j = std::string(value);
  h.set(cfg, j);
}

void apply_config_text(RunConfig& cfg, std::string_view json_text, std::string_view source) {
  auto j = ordered_json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ValidationError(std::string(source) + ": config must be a JSON object of dotted keys");
  for (const auto& [key, value] : j.items()) handler(key).set(cfg, value);
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  apply_config_text(cfg, csv::read_file(path.string()), path.string());
}

std::string config_json(const RunConfig& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& h : handlers()) j[h.key] = h.get(cfg);
  return j.dump(1) + "\n";
}

}  // namespace actitrait
