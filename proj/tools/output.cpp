#include "output.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "bifcc/parallel.hpp"

namespace bifcc::cli {

namespace {
constexpr const char* kVersion = "0.1.0";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void OutputSet::write(const std::string& suffix, const std::string& bytes) {
  const std::string p = path(suffix);
  const auto parent = std::filesystem::path(p).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p);
  // registered first so a half-written file is still cleaned up
  written_.push_back({p, sha256_hex(bytes), bytes.size()});
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("cannot write " + p);
}

void OutputSet::write_manifest(const std::vector<std::string>& command_line, const ordered_json& tolerances,
                               double wall_seconds) {
  ordered_json m;
  m["tool"] = "bifcc";
  m["version"] = kVersion;
  m["command_line"] = command_line;
  m["threads"] = worker_count();
  m["tolerances"] = tolerances;
  m["wall_time_seconds"] = wall_seconds;
  ordered_json files = ordered_json::array();
  for (const Entry& e : written_) files.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  m["outputs"] = files;
  write_json(".manifest.json", m);
}

void OutputSet::remove_all() {
  for (const Entry& e : written_) {
    std::error_code ec;
    std::filesystem::remove(e.path, ec);
  }
  written_.clear();
}

Graymap render_pgm(const GridField& g) {
  Graymap out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for (double v : g.values) {
    if (!std::isfinite(v)) continue;
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  }
  if (!(out.min <= out.max)) out.min = out.max = 0.0;
  const double span = out.max - out.min;
  out.pgm = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n65535\n";
  out.pgm.reserve(out.pgm.size() + 2 * g.size());
  for (std::size_t row = 0; row < g.ny; ++row) {
    const std::size_t iy = g.ny - 1 - row;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = g.at(ix, iy);
      unsigned level = 0;
      if (std::isfinite(v) && span > 0) level = static_cast<unsigned>(std::lround((v - out.min) / span * 65535.0));
      out.pgm += static_cast<char>(level >> 8);
      out.pgm += static_cast<char>(level & 255);
    }
  }
  return out;
}

ordered_json region_json(const Region& r) {
  return {{"re_min", r.re_min}, {"re_max", r.re_max}, {"im_min", r.im_min}, {"im_max", r.im_max}};
}

}  // namespace bifcc::cli
