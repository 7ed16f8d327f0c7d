#pragma once

#include <spdlog/logger.h>

namespace vegout {

/// Shared stderr logger for warnings and notices.
spdlog::logger& logger();

}  // namespace vegout
