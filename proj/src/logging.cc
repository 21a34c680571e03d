#include "pocl/logging.h"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string_view>

namespace pocl {

void init_logging() {
    auto logger = spdlog::stderr_color_mt("pocl");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);

    const char *env = std::getenv("POCL_LOG");
    std::string_view level = env ? env : "";
    if (level == "off")
        spdlog::set_level(spdlog::level::off);
    else if (level == "info")
        spdlog::set_level(spdlog::level::info);
    else if (level == "trace")
        spdlog::set_level(spdlog::level::trace);
    else
        spdlog::set_level(spdlog::level::warn);
}

} // namespace pocl
