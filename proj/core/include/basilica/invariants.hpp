#pragma once

#include <functional>
#include <string>
#include <vector>

namespace basilica::invariants {

/// One registered structural invariant. `run` throws InvariantError (or any
/// basilica::Error) on failure and returns silently on success.
struct Check {
  std::string module;
  std::string name;
  std::function<void()> run;
};

/// The full registry, in deterministic order. Every module invariant is
/// registered here; the meta-test asserts the per-module counts so that new
/// invariants cannot be added without registering them.
const std::vector<Check>& registry();

struct Outcome {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail; // failure message when not passed
  double seconds = 0.0;
};

/// Runs every registered check, optionally on a small worker pool; results
/// come back in registry order regardless of scheduling.
std::vector<Outcome> run_all(int workers = 1);

} // namespace basilica::invariants
