#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cometh/cli.hpp"

namespace {

// Common flags shared by every subcommand; sugar flags map onto the
// config keys they override.
struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string seed;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "Config file (key = value)");
  cmd->add_option("--set", args.overrides,
                  "Override a config key: --set section.key=value");
  cmd->add_option("--seed", args.seed, "Run seed (overrides <section>.seed)");
  cmd->add_option("--out", args.out, "Output directory");
}

cometh::Config build_config(const CommonArgs& args, const std::string& section,
                            bool seed_required) {
  cometh::Config cfg;
  if (!args.config_path.empty())
    cfg = cometh::Config::from_file(args.config_path);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw cometh::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.seed.empty()) cfg.set(section + ".seed", args.seed);
  if (!args.out.empty()) cfg.set(section + ".out", args.out);
  if (seed_required && !cfg.has(section + ".seed"))
    throw cometh::ConfigError("--seed (or " + section +
                              ".seed) is required for this subcommand");
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time discrete-state graph diffusion toolkit"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* section;
    const char* help;
    bool seed_required;
  };
  const Sub subs[] = {
      {"generate-data", "data", "Generate synthetic train/val/test splits",
       true},
      {"train", "train", "Train the denoiser", true},
      {"sample", "sample", "Sample graphs from a checkpoint", true},
      {"eval", "eval", "Evaluate samples against reference/train sets", false},
      {"ablate-steps", "ablate", "Sweep sampling step counts", true},
      {"demo-forward", "demo", "Dump a forward-noising trajectory", false},
  };

  CommonArgs args[6];
  CLI::App* cmds[6];
  for (int i = 0; i < 6; ++i) {
    cmds[i] = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmds[i], args[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 6; ++i) {
    if (cmds[i]->parsed()) {
      try {
        const cometh::Config cfg =
            build_config(args[i], subs[i].section, subs[i].seed_required);
        return cometh::run_subcommand(subs[i].name, cfg);
      } catch (const cometh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
    }
  }
  return 2;
}
