#pragma once

#include <string>

namespace clmm::log {

enum class Level { quiet, warn, info };

void set_level(Level level);
Level level();

void warn(const std::string& message);
void info(const std::string& message);

// Number of warnings emitted since start (or the last reset).
long warning_count();
void reset_warning_count();

}  // namespace clmm::log
