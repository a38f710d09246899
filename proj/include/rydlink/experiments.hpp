#pragma once

#include "rydlink/config.hpp"

#include <string>
#include <vector>

namespace rydlink {

struct RunOutput {
  std::string path;
  std::uint64_t checksum; // FNV-1a 64 of the file bytes
};

struct RunResult {
  std::vector<RunOutput> outputs;
  std::string manifest_path;
  std::string summary; // one-line result for the terminal
};

// Names: spectrum, splitting-map, ldr, snr-distance, mi, ser, sensitivity.
// Writes <name>.csv plus <name>_manifest.json under out_dir. CSV content is
// a deterministic function of config + seed; the manifest carries the wall
// clock timestamp and per-file checksums.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& which,
                         const std::string& out_dir);

} // namespace rydlink
