// Batch front-end over the musielak C API: parse a JSON run config, execute
// its tasks, and write machine-readable reports.

#include "musielak.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is.good()) throw CLI::ValidationError("--config", "cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { mo_string_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Musielak-Orlicz space toolkit: Phi-functions, Luxemburg norms, Young conjugates, "
               "structural-condition checks, and Poincare-type inequality verification"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  double tolerance = -1.0;
  unsigned seed = 0;
  bool seed_set = false, no_stamp = false, quiet = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->required();
  };

  CLI::App* run = app.add_subcommand("run", "execute the config's tasks and write reports");
  add_common(run);
  run->add_option("--out", out_dir, "report output directory");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_option("--tolerance", tolerance, "override verdict tolerances (relative)");
  run->add_option("--seed", seed, "sampling jitter seed (0 = deterministic lattice)")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_flag("--no-stamp", no_stamp, "omit generated_at timestamps from reports");
  run->add_flag("--quiet", quiet, "suppress the per-task summary lines");

  CLI::App* describe = app.add_subcommand("describe", "print the resolved setup without running tasks");
  add_common(describe);

  CLI::App* version = app.add_subcommand("version", "print the library version");

  CLI11_PARSE(app, argc, argv);

  if (version->parsed()) {
    std::cout << mo_version() << "\n";
    return 0;
  }

  std::string config;
  try {
    config = read_file(config_path);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (describe->parsed()) {
    OwnedString text;
    if (mo_describe_config(config.c_str(), &text.ptr) != MO_OK) {
      std::cerr << "error: " << mo_last_error_message() << "\n";
      return 2;
    }
    std::cout << text.ptr;
    return 0;
  }

  nlohmann::json options{{"threads", threads}, {"stamp", !no_stamp}};
  if (!out_dir.empty()) options["out_dir"] = out_dir;
  if (tolerance > 0.0) options["tolerance"] = tolerance;
  if (seed_set) options["seed"] = seed;

  int exit_code = 2;
  OwnedString summary;
  if (mo_run_config(config.c_str(), options.dump().c_str(), &exit_code, &summary.ptr) != MO_OK) {
    std::cerr << "error: " << mo_last_error_message() << "\n";
    return 2;
  }

  if (!quiet) {
    const auto parsed = nlohmann::json::parse(summary.ptr);
    if (parsed.contains("error")) std::cerr << "error: " << parsed["error"].get<std::string>() << "\n";
    for (const auto& task : parsed["tasks"]) {
      std::cout << task["status"].get<std::string>() << "  " << task["type"].get<std::string>() << "  "
                << task["name"].get<std::string>();
      if (task["status"] == "error") std::cout << "  (" << task["report"]["error"].get<std::string>() << ")";
      std::cout << "\n";
    }
    std::cout << "exit_code " << exit_code << "\n";
  }
  return exit_code;
}
