#ifndef MUSIELAK_CORE_RUNNER_HPP
#define MUSIELAK_CORE_RUNNER_HPP

#include <json.hpp>

#include <optional>
#include <string>

namespace musielak {

struct RunOptions {
  std::string out_dir;  // empty: keep reports in the summary only
  int threads = 0;      // 0: hardware concurrency
  std::optional<double> tolerance;  // overrides verdict tolerances
  std::optional<unsigned> seed;
  bool stamp = true;  // write generated_at fields
};

struct RunOutcome {
  // 0: all verdicts pass; 1: at least one theorem check (or required
  // condition check) failed; 2: configuration or evaluation error.
  int exit_code = 0;
  nlohmann::json summary;
};

/// Executes the config's tasks in order, embedding one report per task in
/// the summary and (when out_dir is set) writing the same reports plus any
/// CSV curves to disk.
RunOutcome run_config(const nlohmann::json& config, const RunOptions& options);

/// Resolved domain, Phi-functions, and the Poincare constants the tasks
/// would use, without executing anything.
std::string describe_config(const nlohmann::json& config);

}  // namespace musielak

#endif
