#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chameleon/serialize.hpp"

namespace chameleon {

/// Outcome of one CLI command. Deterministic for fixed inputs.
struct RunReport {
  std::string command;
  Json inputs = Json::object();
  Json outputs = Json::object();
  std::optional<Json> error;
  bool passed = true;
  int exit_code = 0;

  Json to_json() const;
  std::string to_text() const;
};

/// 0 for success, 1 for ParseError, 2 for any other refusal.
int exit_code_for(const Error& e);

inline constexpr const char* kPartitionSubcommands[] = {
    "validate", "sigma", "conjugator-eval", "equal-pairs", "pl-criterion", "dyadic-status"};

RunReport cmd_partition(const std::string& sub, const std::string& file,
                        std::optional<long> depth);

/// Path of the bundled golden data.
std::string default_examples_path();

/// Runs the golden checks of the listed examples (all when ids is empty).
/// Exit code 2 on any mismatch.
RunReport cmd_paper_examples(const std::vector<int>& ids,
                             const std::string& data_path = default_examples_path());

RunReport cmd_roundtrip(std::uint64_t seed, long count);

}  // namespace chameleon
