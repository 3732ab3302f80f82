#include "idt/log.hpp"

#include <cstdlib>
#include <spdlog/sinks/stdout_sinks.h>

namespace idt::log {
namespace {

spdlog::level::level_enum g_default = spdlog::level::warn;

spdlog::level::level_enum configured_level() {
  const char* env = std::getenv("IDT_LOG");
  if (env == nullptr || *env == '\0') return g_default;
  return spdlog::level::from_str(env);
}

}  // namespace

spdlog::logger& get() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = std::make_shared<spdlog::logger>("idt", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    l->set_level(configured_level());
    return l;
  }();
  return *logger;
}

void set_default_level(spdlog::level::level_enum level) {
  g_default = level;
  get().set_level(configured_level());
}

}  // namespace idt::log
