#include "gramlab/cache.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "gramlab/error.hpp"
#include "gramlab/gram.hpp"

namespace gramlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kManifest = "manifest.json";
constexpr const char* kFormat = "gramlab-cache v1";

// Segment ends are Gram points recomputed from scratch each time, so equal
// ends agree to the last bit; the slack only absorbs decimal round trips.
constexpr double kJoinSlack = 1e-9;

std::string segment_name(double t_lo, double t_hi) {
  return fmt::format("zeros_{:.6f}_{:.6f}.csv", t_lo, t_hi);
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw CacheError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CacheError(fmt::format("cannot rename {} to {}: {}", tmp.string(), path.string(), ec.message()));
}

std::pair<double, double> snap_to_gram(double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw ArgumentError("snap_to_gram: requires t_lo < t_hi");
  const std::int64_t below = last_gram_index_at_or_below(t_lo);
  const double lo = below < 0 ? t_lo : gram_point(below).t;
  const double hi = gram_point(first_gram_index_at_or_above(t_hi)).t;
  return {lo, hi};
}

ZeroCache::ZeroCache(fs::path dir) : dir_(std::move(dir)) {
  const fs::path manifest = dir_ / kManifest;
  if (!fs::exists(manifest)) {
    if (fs::exists(dir_) && !fs::is_directory(dir_)) throw CacheError(dir_.string() + " is not a directory");
    return;
  }
  std::ifstream in(manifest);
  if (!in) throw CacheError("cannot read " + manifest.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CacheError(fmt::format("corrupt manifest {}: {}", manifest.string(), e.what()));
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) throw CacheError("manifest: unsupported format");
    for (const auto& s : j.at("segments")) {
      Segment seg;
      seg.file = s.at("file").get<std::string>();
      seg.t_lo = s.at("t_lo").get<double>();
      seg.t_hi = s.at("t_hi").get<double>();
      seg.zero_count = s.at("zero_count").get<std::size_t>();
      seg.expected_count = s.at("expected_count").get<std::int64_t>();
      seg.audit_passed = s.at("audit_passed").get<bool>();
      if (!(seg.t_lo < seg.t_hi) || seg.file.find('/') != std::string::npos) {
        throw CacheError("manifest: bad segment entry " + seg.file);
      }
      if (!segments_.empty() && std::fabs(segments_.back().t_hi - seg.t_lo) > kJoinSlack) {
        throw CacheError("manifest: segments are not contiguous at " + seg.file);
      }
      segments_.push_back(seg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw CacheError(fmt::format("corrupt manifest {}: {}", manifest.string(), e.what()));
  }
}

std::optional<std::pair<double, double>> ZeroCache::coverage() const {
  if (segments_.empty()) return std::nullopt;
  return std::make_pair(segments_.front().t_lo, segments_.back().t_hi);
}

bool ZeroCache::covers(double t_lo, double t_hi) const {
  const auto c = coverage();
  return c && c->first <= t_lo && t_hi <= c->second;
}

int ZeroCache::ensure(double t_lo, double t_hi, const ScanOptions& options) {
  const auto [lo, hi] = snap_to_gram(t_lo, t_hi);
  std::vector<std::pair<double, double>> missing;
  if (const auto c = coverage()) {
    if (lo < c->first) missing.emplace_back(lo, c->first);
    if (hi > c->second) missing.emplace_back(c->second, hi);
  } else {
    missing.emplace_back(lo, hi);
  }
  if (missing.empty()) return 0;

  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw CacheError(fmt::format("cannot create {}: {}", dir_.string(), ec.message()));

  for (const auto& [a, b] : missing) {
    const ZeroCensus census = scan_zeros(a, b, options);
    Segment seg{segment_name(a, b), a, b, census.zeros.size(), census.expected_count, census.audit_passed};
    write_file_atomic(dir_ / seg.file, census_to_string(census));
    segments_.push_back(seg);
    std::sort(segments_.begin(), segments_.end(), [](const Segment& x, const Segment& y) { return x.t_lo < y.t_lo; });
    write_manifest();
  }
  return static_cast<int>(missing.size());
}

void ZeroCache::write_manifest() const {
  ordered_json j;
  j["format"] = kFormat;
  auto segs = ordered_json::array();
  for (const auto& s : segments_) {
    ordered_json e;
    e["file"] = s.file;
    e["t_lo"] = s.t_lo;
    e["t_hi"] = s.t_hi;
    e["zero_count"] = s.zero_count;
    e["expected_count"] = s.expected_count;
    e["audit_passed"] = s.audit_passed;
    segs.push_back(e);
  }
  j["segments"] = segs;
  write_file_atomic(dir_ / kManifest, j.dump(2) + "\n");
}

ZeroCensus ZeroCache::read_segment(const Segment& seg) const {
  const fs::path path = dir_ / seg.file;
  std::ifstream in(path);
  if (!in) throw CacheError("missing cache segment " + path.string());
  ZeroCensus census;
  try {
    census = read_census(in);
  } catch (const CacheError& e) {
    throw CacheError(fmt::format("{}: {}", path.string(), e.what()));
  }
  if (std::fabs(census.t_lo - seg.t_lo) > kJoinSlack || std::fabs(census.t_hi - seg.t_hi) > kJoinSlack ||
      census.zeros.size() != seg.zero_count) {
    throw CacheError(path.string() + " disagrees with the manifest");
  }
  return census;
}

ZeroCensus ZeroCache::load() const {
  if (segments_.empty()) throw CacheError(fmt::format("cache {} is empty; run zeros first", dir_.string()));
  ZeroCensus out;
  out.t_lo = segments_.front().t_lo;
  out.t_hi = segments_.back().t_hi;
  for (const auto& seg : segments_) {
    ZeroCensus part = read_segment(seg);
    for (const auto& z : part.zeros) {
      if (!out.zeros.empty()) {
        if (z.t <= out.zeros.back().t) {
          // A zero on a shared Gram end is reported by both neighbours.
          if (out.zeros.back().t - z.t < 1e-8) continue;
          throw CacheError(seg.file + ": ordinates overlap the previous segment");
        }
        if (z.t - out.zeros.back().t < 1e-8) continue;
      }
      out.zeros.push_back(z);
    }
  }
  audit_census(out);
  return out;
}

ZeroCensus ZeroCache::load_covering(double t_lo, double t_hi) const {
  if (!covers(t_lo, t_hi)) {
    const auto c = coverage();
    throw CacheError(c ? fmt::format("cache covers [{}, {}], not [{}, {}]; run zeros first", c->first, c->second,
                                     t_lo, t_hi)
                       : fmt::format("cache {} is empty; run zeros first", dir_.string()));
  }
  return load();
}

}  // namespace gramlab
