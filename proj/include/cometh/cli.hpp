#ifndef COMETH_CLI_HPP_
#define COMETH_CLI_HPP_

#include <string>

#include "cometh/config.hpp"

namespace cometh {

/**
 * Batch subcommands. Each is a pure function of (config, seed, input
 * files) to output bytes; wall-clock fields appear only in sidecar
 * manifests and logs, never in dumps or reports. Config keys are listed
 * in the README.
 */
void cmd_generate_data(const Config& config);
void cmd_train(const Config& config);
void cmd_sample(const Config& config);
void cmd_eval(const Config& config);
void cmd_ablate_steps(const Config& config);
void cmd_demo_forward(const Config& config);

/// Maps an exception to the documented exit code (config 2, data 3,
/// numerical 4) and prints the message to stderr.
int run_subcommand(const std::string& name, const Config& config);

}  // namespace cometh

#endif  // COMETH_CLI_HPP_
