#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ringel {

// Bad user input: out-of-range vertices, malformed files, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter values that cannot be used together (also raised for probability
// tables that would sum above one).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A pipeline stage was invoked before the state it depends on exists.
class PipelineOrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// None of the three tree regimes could be certified with the given thresholds.
class ClassificationFailure : public std::runtime_error {
 public:
  ClassificationFailure(std::string msg, std::size_t outside_large, std::size_t in_small,
                        std::size_t bare_paths)
      : std::runtime_error(std::move(msg)),
        outside_large(outside_large),
        in_small(in_small),
        bare_paths(bare_paths) {}
  std::size_t outside_large;  // vertices outside leaf stars of size >= Lambda
  std::size_t in_small;       // vertices inside leaf stars of size <= Lambda
  std::size_t bare_paths;     // disjoint bare paths extracted
};

// The removable part of the tree could not be chosen away from the high degree core.
class PartitionFailure : public std::runtime_error {
 public:
  PartitionFailure(std::string msg, long deficit)
      : std::runtime_error(std::move(msg)), deficit(deficit) {}
  long deficit;
};

// No perfect matching exists. `hall_violator` lists left vertices whose joint
// neighbourhood is smaller than the set itself.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string msg, std::vector<int> hall_violator = {},
                  std::vector<int> neighbourhood = {})
      : std::runtime_error(std::move(msg)),
        hall_violator(std::move(hall_violator)),
        neighbourhood(std::move(neighbourhood)) {}
  std::vector<int> hall_violator;
  std::vector<int> neighbourhood;
};

// A randomized repair or walk ran out of its move budget.
class StuckError : public std::runtime_error {
 public:
  StuckError(std::string msg, long residual) : std::runtime_error(std::move(msg)), residual(residual) {}
  long residual;
};

// An exhaustive search ran out of nodes or wall clock.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The embedding pipeline could not make a required choice.
class AbortError : public std::runtime_error {
 public:
  AbortError(std::string stage, std::string detail)
      : std::runtime_error(stage + ": " + detail), stage(std::move(stage)), detail(std::move(detail)) {}
  std::string stage;
  std::string detail;
};

}  // namespace ringel
