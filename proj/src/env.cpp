#include "hrlmppi/env.hpp"

#include "hrlmppi/acrobot.hpp"
#include "hrlmppi/lander.hpp"
#include "hrlmppi/racing.hpp"

namespace hrlmppi {

std::unique_ptr<Environment> make_env(const std::string& name, const EnvOptions& options) {
  if (name == "acrobot") return std::make_unique<AcrobotEnv>(options);
  if (name == "lander") return std::make_unique<LanderEnv>(options);
  if (name == "racing") return std::make_unique<RacingEnv>(options);
  throw ConfigError("unknown environment: " + name);
}

}  // namespace hrlmppi
