#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "extauction/experiments.hpp"
#include "extauction/valuations.hpp"

namespace extauction {

inline constexpr int kInstanceSchemaVersion = 1;

/// Malformed or unreadable input file. The message names the file and the offending field.
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A well-formed instance whose valuations break the conditions.
class ConditionError : public std::runtime_error
{
public:
  ConditionError(const std::string &what, std::vector<ConditionViolation> violations)
    : std::runtime_error(what), violations_(std::move(violations))
  {}

  const std::vector<ConditionViolation> &violations() const { return violations_; }

private:
  std::vector<ConditionViolation> violations_;
};

/// Parses an instance document. Unknown fields and other schema versions are rejected.
/// Throws InputError.
ValuationProfile parse_instance(std::string_view text);

/// Reads and parses an instance file, then (if `validate`) checks the valuation conditions:
/// exhaustively for n <= 12, by sampling otherwise, with L = declared_L when present.
/// Throws InputError or ConditionError.
ValuationProfile load_instance(const std::filesystem::path &path, bool validate = true);

/// Canonical JSON document for a profile (compact when indent < 0).
std::string instance_to_json(const ValuationProfile &profile, int indent = 2);

void save_instance(const ValuationProfile &profile, const std::filesystem::path &path);

/// 64-bit FNV-1a of the compact canonical JSON, as 16 hex digits.
std::string instance_hash(const ValuationProfile &profile);

/// Parses an experiment configuration document. Throws InputError.
ExperimentConfig parse_experiment_config(std::string_view text);

ExperimentConfig load_experiment_config(const std::filesystem::path &path);

/// Whole file as a string. Throws InputError naming the path.
std::string read_text_file(const std::filesystem::path &path);

}  // namespace extauction
