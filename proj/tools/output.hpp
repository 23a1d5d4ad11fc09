#pragma once
// File emission for the CLI: outputs are collected per run, digested into a
// manifest, and removed again if the run fails.

#include <filesystem>
#include <string>
#include <vector>

#include "bifcc/parameter_plane.hpp"
#include "json.hpp"

namespace bifcc::cli {

using nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes);

/// Shortest decimal that reads back to the same double ("nan"/"inf" spelled out).
std::string number(double x);

class OutputSet {
 public:
  explicit OutputSet(std::string prefix) : prefix_(std::move(prefix)) {}

  /// prefix + suffix, e.g. "out/slice" + ".csv".
  std::string path(const std::string& suffix) const { return prefix_ + suffix; }
  void write(const std::string& suffix, const std::string& bytes);
  void write_json(const std::string& suffix, const ordered_json& j) { write(suffix, j.dump(2) + "\n"); }

  /// Manifest with digests of everything written so far.
  void write_manifest(const std::vector<std::string>& command_line, const ordered_json& tolerances,
                      double wall_seconds);
  /// Deletes every file written by this run.
  void remove_all();

 private:
  struct Entry {
    std::string path;
    std::string sha256;
    std::size_t bytes;
  };
  std::string prefix_;
  std::vector<Entry> written_;
};

/// 16-bit big-endian P5 graymap, top row = largest imaginary part, values
/// scaled linearly from [min, max] of the finite values; non-finite cells are 0.
struct Graymap {
  std::string pgm;
  double min = 0.0;
  double max = 0.0;
};
Graymap render_pgm(const GridField& g);

ordered_json region_json(const Region& r);

}  // namespace bifcc::cli
