#pragma once

#include "semloop/descriptor.hpp"
#include "semloop/graph.hpp"
#include "semloop/registration.hpp"
#include "semloop/verification.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace semloop {

// Every tunable of the pipeline, with the stock defaults. Serializes to a
// line-oriented "key = value" file; the round trip is lossless.
struct PipelineConfig {
  GraphParams graph;
  BevParams bev;
  VerificationConfig verification;
  RefineConfig refine;
  int top_n = 10;              // retrieval candidates per query
  int exclusion_window = 300;  // scan ids; recent frames are not candidates
  int keyframe_stride = 1;     // every Nth scan enters the database
  bool pick_best_graph = false;  // arbitration: best S_graph instead of first hit
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when a field is outside its documented range.
  void validate() const;
};

// Key/value view used by the file format and the CLI flag wiring.
struct ConfigField {
  std::string key;
  std::string value;
};

std::vector<ConfigField> config_to_fields(const PipelineConfig& config);
void config_set_field(PipelineConfig& config, const std::string& key, const std::string& value);

void save_config(const std::filesystem::path& path, const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace semloop
