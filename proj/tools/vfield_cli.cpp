// vfield: command-line scenario runner on top of the C interface.
//
//   vfield run <scenario> [--config <path>] [--out <path>] [--format json|csv]
//              [--h <step>] [--analytic|--numeric] [--seed <u64>] [--no-timestamp]
//   vfield list
//   vfield version
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage/config/I-O error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vfield/vfield.h"

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitError = 2;

struct RunArgs {
  std::string scenario;
  std::string config;
  std::string out;
  std::string format;
  double h = 0.0;
  bool analytic = false;
  bool numeric = false;
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
};

int error(const std::string& what) {
  std::cerr << "vfield: " << what << "\n";
  return kExitError;
}

int status_error(vf_status s) {
  return error(std::string(vf_status_name(s)) + ": " + vf_last_error());
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  text = os.str();
  return static_cast<bool>(in) || in.eof();
}

int run(const RunArgs& a) {
  vf_run_options opts = vf_default_run_options();
  if (!a.format.empty()) {
    if (a.format == "json") opts.format = VF_FORMAT_JSON;
    else if (a.format == "csv") opts.format = VF_FORMAT_CSV;
    else return error("--format must be json or csv");
  }
  if (!a.out.empty()) opts.out_path = a.out.c_str();
  if (a.h != 0.0) {
    if (!(a.h > 0.0)) return error("--h must be positive");
    opts.h = a.h;
  }
  if (a.analytic) opts.mode = VF_ANALYTIC;
  if (a.numeric) opts.mode = VF_NUMERIC;
  if (a.seed) {
    opts.has_seed = 1;
    opts.seed = *a.seed;
  }
  opts.no_timestamp = a.no_timestamp ? 1 : 0;

  std::string config;
  if (!a.config.empty() && !read_file(a.config, config)) {
    return error("cannot read config '" + a.config + "'");
  }

  vf_report* report = nullptr;
  const vf_status s = vf_run_scenario(a.scenario.c_str(),
                                      a.config.empty() ? nullptr : config.c_str(), &opts, &report);
  if (s != VF_OK) return status_error(s);

  int code = vf_report_exit_code(report);
  if (vf_report_output_path(report)) {
    const vf_status w = vf_report_write(report, nullptr, VF_FORMAT_DEFAULT);
    if (w != VF_OK) code = status_error(w);
  } else {
    std::size_t len = 0;
    vf_status r = vf_report_render(report, VF_FORMAT_DEFAULT, nullptr, 0, &len);
    std::vector<char> buf(len + 1);
    if (r == VF_OK) r = vf_report_render(report, VF_FORMAT_DEFAULT, buf.data(), buf.size(), &len);
    if (r != VF_OK) {
      code = status_error(r);
    } else {
      std::fwrite(buf.data(), 1, len, stdout);
      std::fflush(stdout);
    }
  }
  if (code == kExitFailedCheck) {
    for (std::size_t i = 0; i < vf_report_check_count(report); ++i) {
      const char* name = nullptr;
      double linf = 0.0;
      int passed = 0;
      if (vf_report_check(report, i, &name, &linf, &passed) == VF_OK && !passed) {
        std::cerr << "vfield: check failed: " << name << " (linf " << linf << ")\n";
      }
    }
  }
  vf_report_destroy(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Velocity-field residual toolkit"};
  app.require_subcommand(1);
  // "-h" would collide with the step option.
  app.set_help_flag("--help", "Print this help message and exit");

  RunArgs args;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and emit its residual report");
  run_cmd->add_option("scenario", args.scenario, "Scenario name (see `list`)")->required();
  run_cmd->add_option("--config", args.config, "JSON configuration file");
  run_cmd->add_option("--out", args.out, "Report path (default: standard output)");
  run_cmd->add_option("--format", args.format, "json or csv");
  run_cmd->add_option("--h", args.h, "Finite-difference step");
  auto* analytic = run_cmd->add_flag("--analytic", args.analytic, "Closed-form derivatives");
  auto* numeric = run_cmd->add_flag("--numeric", args.numeric, "Central-difference derivatives");
  analytic->excludes(numeric);
  run_cmd->add_option("--seed", args.seed, "RNG seed for random clouds and samples");
  run_cmd->add_flag("--no-timestamp", args.no_timestamp,
                    "Omit timestamp and duration (byte-stable output)");

  app.add_subcommand("list", "List scenario names");
  app.add_subcommand("version", "Print the toolkit version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  if (app.got_subcommand("list")) {
    for (std::size_t i = 0; i < vf_scenario_count(); ++i) std::cout << vf_scenario_name(i) << "\n";
    return 0;
  }
  if (app.got_subcommand("version")) {
    std::cout << vf_version() << "\n";
    return 0;
  }
  return run(args);
}
