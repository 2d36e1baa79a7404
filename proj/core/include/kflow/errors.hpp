#pragma once

#include <stdexcept>
#include <string>

namespace kflow {

// Density reached the vacuum floor; the augmented form degenerates there.
struct vacuum_error : std::runtime_error {
  explicit vacuum_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite value produced during time integration.
struct blowup_error : std::runtime_error {
  explicit blowup_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration file or CLI arguments.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kflow
