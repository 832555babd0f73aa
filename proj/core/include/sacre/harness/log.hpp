#pragma once

#include <string>

namespace sacre::harness {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Threshold comes from SACRE_LOG (error|info|debug); default is info.
LogLevel log_level();

void log(LogLevel level, const std::string& message);

}  // namespace sacre::harness
