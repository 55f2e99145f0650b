#include "clmm/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace clmm::log {

namespace {
std::atomic<Level> g_level{Level::warn};
std::atomic<long> g_warnings{0};
std::mutex g_mutex;
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void warn(const std::string& message) {
  ++g_warnings;
  if (g_level == Level::quiet) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "warning: " << message << '\n';
}

void info(const std::string& message) {
  if (g_level != Level::info) return;
  std::lock_guard lock(g_mutex);
  std::cerr << message << '\n';
}

long warning_count() { return g_warnings; }
void reset_warning_count() { g_warnings = 0; }

}  // namespace clmm::log
