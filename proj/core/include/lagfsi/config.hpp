#pragma once

// Line-based `section.key = value` configuration. '#' starts a comment,
// blank lines are ignored, unknown or malformed keys are collected and
// reported together. The FNV-1a hash of the normalized content stamps
// every output artifact.

#include <string>
#include <vector>

#include "lagfsi/fixed_point.hpp"
#include "lagfsi/material.hpp"
#include "lagfsi/mesh.hpp"

namespace lagfsi {

struct SimulationConfig {
  GeometryConfig geometry;  // container_radius = 1, h = 0.1, no solids
  MaterialParams material;
  FixedPointConfig fixed_point;
  bool epsilon_set = false;  // else default 1e-4 * h^2 at finalize
  std::string forcing = "zero";
  std::string initial = "zero";
  std::string output_dir = "out";
  bool emit_snapshots = true;
  bool deterministic = true;
  std::string hash;  // FNV-1a of the normalized key/value content
};

struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(std::vector<std::string> v);
};

SimulationConfig parse_config_text(const std::string& text);
SimulationConfig parse_config(const std::string& path);

std::string fnv1a_hex(const std::string& data);

}  // namespace lagfsi
