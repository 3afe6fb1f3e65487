#include <doctest.h>

#include <json.hpp>

#include "actitrait/error.hpp"
#include "actitrait/run_config.hpp"

using namespace actitrait;

TEST_CASE("defaults") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.threads == 1);
  CHECK(cfg.top_k == 3);
  CHECK(cfg.features.intensity.min_samples == 25);
  CHECK(cfg.eval.grid.expand(4).size() == 36);
  CHECK(cfg.synth_config().effects.size() == 5);
  for (const auto& k : config_keys()) {
    CHECK_FALSE(k.help.empty());
    CHECK(nlohmann::json::accept(k.default_value));
  }
}

TEST_CASE("settings by key") {
  RunConfig cfg;
  apply_setting(cfg, "threads", "4");
  apply_setting(cfg, "temporal.night_attachment", "previous_evening");
  apply_setting(cfg, "svr.C_grid", "[1, 2]");
  apply_setting(cfg, "eval.traits", "E,N");
  apply_setting(cfg, "eval.groups", "[\"female\"]");
  apply_setting(cfg, "eval.feature_sets", "phone_only");
  apply_setting(cfg, "input.roster", "data/r.csv");
  apply_setting(cfg, "synth.seed", "77");
  CHECK(cfg.threads == 4);
  CHECK(cfg.features.temporal.night_attachment == NightAttachment::PreviousEvening);
  CHECK(cfg.eval.grid.C == std::vector<double>{1, 2});
  CHECK(cfg.request.traits == std::vector<Trait>{Trait::Extraversion, Trait::Neuroticism});
  CHECK(cfg.request.groups == std::vector<Group>{Group::Female});
  CHECK(cfg.request.sets == std::vector<FeatureSet>{FeatureSet::PhoneOnly});
  CHECK(cfg.roster == "data/r.csv");
  CHECK(cfg.synth_config().seed == 77);
}

TEST_CASE("bad settings are rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_setting(cfg, "no.such.key", "1"), ValidationError);
  CHECK_THROWS_AS(apply_setting(cfg, "threads", "\"many\""), ValidationError);
  CHECK_THROWS_AS(apply_setting(cfg, "eval.traits", "E,X"), ValidationError);
  CHECK_THROWS_AS(apply_setting(cfg, "temporal.night_attachment", "sideways"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(cfg, "[1,2]"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(cfg, "{not json"), ValidationError);
  RunConfig range;
  CHECK_THROWS_AS(
      {
        apply_setting(range, "temporal.daytime_start_hour", "20");
        range.validate();
      },
      ValidationError);
}

TEST_CASE("effective config round trips") {
  RunConfig cfg;
  apply_config_text(cfg, R"({"threads": 3, "svr.tol": 1e-4, "synth.effects": [
      {"trait": "E", "family": "contact_entropy", "sign": 1, "strength": 0.5}],
      "analysis.top_k": 5, "output.dir": "o2"})");
  CHECK(cfg.threads == 3);
  CHECK(cfg.top_k == 5);
  CHECK_FALSE(cfg.synth_standard_effects);
  REQUIRE(cfg.synth_config().effects.size() == 1);
  CHECK(cfg.synth_config().effects[0].family == FeatureFamily::ContactEntropy);
  const auto text = config_json(cfg);
  RunConfig back;
  apply_config_text(back, text);
  CHECK(config_json(back) == text);
  const auto j = nlohmann::json::parse(text);
  for (const auto& k : config_keys()) CHECK(j.contains(k.key));
}
