#pragma once

#include <spdlog/spdlog.h>

namespace idt::log {

/// Shared stderr logger.  The level comes from the IDT_LOG environment
/// variable (trace, debug, info, warn, error, critical, off); without it the
/// default level applies.
spdlog::logger& get();

/// Level used when IDT_LOG is unset; warn unless changed.
void set_default_level(spdlog::level::level_enum level);

}  // namespace idt::log
