#pragma once

#include <CLI11.hpp>

#include "cli_support.hpp"

namespace ilwcli {

void register_conslaw(CLI::App& root, Session& session);
void register_limits(CLI::App& root, Session& session);
void register_simulate(CLI::App& root, Session& session);
void register_measure(CLI::App& root, Session& session);
void register_statistics(CLI::App& root, Session& session);

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kRuntime = 3;

}  // namespace ilwcli
