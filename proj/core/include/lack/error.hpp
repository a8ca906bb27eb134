#pragma once

#include <stdexcept>
#include <string>

namespace lack {

// Argument outside an operation's domain (negative time, probability > 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The survival probability at the requested time is below what double
// precision can represent, so conditional quantities are meaningless.
class SaturationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed scenario or experiment configuration. `key()` names the offending
// key path when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what, bool prefix_key = true)
      : std::runtime_error(key.empty() || !prefix_key ? what : key + ": " + what),
        key_(std::move(key)),
        message_(what) {}

  const std::string& key() const noexcept { return key_; }
  // The description without the key prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string key_;
  std::string message_;
};

// A scenario that parses but cannot be simulated, e.g. the LACK delay it
// requires exceeds the configured maximum.
class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lack
