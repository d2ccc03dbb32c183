#pragma once

#include <spdlog/spdlog.h>

namespace uavcov::log {

// Shared logger; level taken from UAVCOV_LOG (trace, debug, info, warn,
// error, off). Defaults to warn.
spdlog::logger& get();

}  // namespace uavcov::log
