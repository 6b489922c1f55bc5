#include <gtest/gtest.h>

#include "vcp/config.hpp"
#include "vcp/error.hpp"

using namespace vcp;

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = desk_config();
  c.seed = 42;
  c.fed.enabled = true;
  c.vehicle_head = VehicleHead::Flat;
  c.rsu_policy = RsuPolicy::Random;
  c.metrics_detail = MetricsDetail::Step;
  const auto text = config_to_json(c);
  const auto back = config_from_json(text, ExperimentConfig{});
  EXPECT_EQ(config_to_json(back), text);
}

TEST(Config, PartialOverridesBase) {
  const auto c = config_from_json(R"({"episodes": 7, "rb_count": 6})", desk_config());
  EXPECT_EQ(c.episodes, 7);
  EXPECT_EQ(c.net.rb_count, 6);
  EXPECT_EQ(c.world.n_max, desk_config().world.n_max);
}

TEST(Config, UnknownKeyAndBadTypesRejected) {
  EXPECT_THROW(config_from_json(R"({"episodez": 7})", desk_config()), ConfigError);
  EXPECT_THROW(config_from_json(R"({"episodes": "many"})", desk_config()), ConfigError);
  EXPECT_THROW(config_from_json(R"({"vehicle_head": "mlp"})", desk_config()), ConfigError);
  EXPECT_THROW(config_from_json(R"([1, 2])", desk_config()), ConfigError);
  EXPECT_THROW(config_from_json("{", desk_config()), ConfigError);
}

TEST(Config, EnumNames) {
  for (const char* s : {"bdq", "dqn"}) {
    const auto c = config_from_json(std::string(R"({"vehicle_head": ")") + s + "\"}", desk_config());
    EXPECT_NE(config_to_json(c).find(s), std::string::npos);
  }
  EXPECT_EQ(config_from_json(R"({"rsu_policy": "random"})", desk_config()).rsu_policy, RsuPolicy::Random);
  EXPECT_EQ(config_from_json(R"({"metrics_detail": "step"})", desk_config()).metrics_detail, MetricsDetail::Step);
}

TEST(Config, PresetsValidate) {
  EXPECT_NO_THROW(validate(desk_config()));
  EXPECT_NO_THROW(validate(full_config()));
  EXPECT_EQ(desk_config().candidate_width(), 31);
}

TEST(Config, InconsistenciesRejected) {
  auto c = desk_config();
  c.world.n_max = 1;
  EXPECT_THROW(validate(c), ConfigError);
  c = desk_config();
  c.net.rb_count = 1;
  EXPECT_THROW(validate(c), ConfigError);
  c = desk_config();
  c.eps_decay_fraction = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(load_config("/nonexistent/cfg.json", desk_config()), IoError);
}
