// maba <command> --config <path> [--set key=value]... [--output path]

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "maba/errors.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Modified algebraic Bethe ansatz workbench for the twisted XXX chain"};
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  bool timing = false;
  app.add_option("command", command, "verify | spectrum | solve | overlap | norm")->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--set", overrides, "dotted-key override, e.g. chain.sites=3");
  app.add_option("--output", output, "write the report here instead of stdout");
  app.add_flag("--timing", timing, "add wall_time_s to the report (breaks byte-identical output)");
  CLI11_PARSE(app, argc, argv);

  maba::cli::RunResult result;
  try {
    const auto cmd = maba::cli::parse_command(command);
    const auto cfg = maba::cli::parse_config(config_path, overrides);
    const auto start = std::chrono::steady_clock::now();
    result = maba::cli::execute(cmd, cfg);
    if (timing) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      result.report["wall_time_s"] = dt.count();
    }
  } catch (const maba::ConfigError& e) {
    std::cerr << "maba: " << e.what() << '\n';
    return 2;
  }

  const std::string text = result.report.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "maba: cannot write " << output << '\n';
      return 2;
    }
    out << text;
  }
  return result.ok ? 0 : 1;
}
