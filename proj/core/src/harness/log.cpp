#include "sacre/harness/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace sacre::harness {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SACRE_LOG");
    if (!env) return LogLevel::Info;
    const std::string v(env);
    if (v == "error") return LogLevel::Error;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Info;
  }();
  return level;
}

void log(LogLevel level, const std::string& message) {
  if (level > log_level()) return;
  static std::mutex mutex;
  const char* tag = level == LogLevel::Error  ? "error"
                    : level == LogLevel::Info ? "info"
                                              : "debug";
  std::lock_guard lock(mutex);
  std::cerr << "[" << tag << "] " << message << "\n";
}

}  // namespace sacre::harness
