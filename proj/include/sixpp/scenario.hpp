#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sixpp/config.hpp"

namespace sixpp {

// Anything wrong with a scenario: parse failures (with line numbers),
// unknown keys, and semantic validation errors.
class ScenarioError : public std::runtime_error {
  public:
    explicit ScenarioError(const std::string& what, unsigned line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    unsigned line() const { return line_; }

  private:
    unsigned line_;
};

// Flat `key = value` text with `[section]` headers, `#` comments. Unknown
// sections and keys are rejected, never ignored.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

// Canonical form: every section and key in a fixed order. parse(serialize(c))
// reproduces c; serialize(parse(s)) is a fixed point.
std::string serialize_scenario(const ScenarioConfig& config);

// `section.key` override, same value syntax as the file.
void apply_override(ScenarioConfig& config, const std::string& dotted_key,
                    const std::string& value);

// Semantic checks beyond syntax: topology buildable, flood window fits the
// slotframe with shared slots left, channel lists usable, parameter ranges.
// Throws ScenarioError on the first violation.
void validate_scenario(const ScenarioConfig& config);

// FNV-1a over the canonical serialization.
std::uint64_t scenario_hash(const ScenarioConfig& config);

}  // namespace sixpp
