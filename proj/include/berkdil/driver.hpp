#pragma once

#include <optional>
#include <string>

#include "berkdil/instance.hpp"

namespace berkdil {

/** Rendered output of one subcommand plus the process exit code it implies. */
struct CommandResult {
    std::string out;   // JSON (or DOT under the dot flag), newline-terminated
    int exit_code = 0; // compare reports a verdict mismatch as 1
};

struct DriverOptions {
    bool dot = false;      // emit DOT instead of JSON where a drawing exists
    std::optional<ValQ> r; // check-separated radius (default 0)
    std::optional<ValQ> d0; // hull: also read clusters back at this depth
    int pair_index = -1;   // oracle/compare normalization pair (-1 = auto)
};

CommandResult cmd_clusters(const Instance& inst, const DriverOptions& opt);
// `other` compares the two configurations' positions under the label bijection
CommandResult cmd_position(const Instance& inst, const std::optional<Instance>& other,
                           const DriverOptions& opt);
CommandResult cmd_hull(const Instance& inst, const DriverOptions& opt);
CommandResult cmd_push(const Instance& inst, const DriverOptions& opt);
CommandResult cmd_oracle(const Instance& inst, const DriverOptions& opt);
CommandResult cmd_compare(const Instance& inst, const DriverOptions& opt);
CommandResult cmd_check_separated(const Instance& inst, const DriverOptions& opt);

/** Dispatch by subcommand name; BadInput("command", ..) for an unknown one
 *  or a second instance given to anything but position. */
CommandResult run_command(const std::string& command, const Instance& inst,
                          const std::optional<Instance>& other, const DriverOptions& opt);

} // namespace berkdil
