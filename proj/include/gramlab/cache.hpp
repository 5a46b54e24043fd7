#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gramlab/zeros.hpp"

namespace gramlab {

/// A directory of census segments plus manifest.json. Segments are
/// contiguous, end on Gram points (or on the requested bottom below g_0),
/// and are only ever added, never rewritten.
class ZeroCache {
 public:
  struct Segment {
    std::string file;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t zero_count = 0;
    std::int64_t expected_count = 0;
    bool audit_passed = false;
  };

  /// Opens the cache at dir, creating nothing until the first write.
  /// Throws CacheError for an unreadable or inconsistent manifest.
  explicit ZeroCache(std::filesystem::path dir);

  const std::vector<Segment>& segments() const { return segments_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::optional<std::pair<double, double>> coverage() const;
  bool covers(double t_lo, double t_hi) const;

  /// Scans the parts of [t_lo, t_hi] (snapped outward to Gram points) the
  /// cache does not hold yet, filling any gap to the existing coverage.
  /// Returns the number of segments written; 0 leaves every file untouched.
  int ensure(double t_lo, double t_hi, const ScanOptions& options = {});

  /// All segments joined into one census, re-audited over the whole span.
  /// Throws CacheError when the cache is empty.
  ZeroCensus load() const;

  /// load(), after checking that [t_lo, t_hi] is covered ("run zeros first").
  ZeroCensus load_covering(double t_lo, double t_hi) const;

 private:
  void write_manifest() const;
  ZeroCensus read_segment(const Segment& seg) const;

  std::filesystem::path dir_;
  std::vector<Segment> segments_;
};

/// [t_lo, t_hi] widened to the nearest enclosing Gram points. A bottom below
/// g_0 is kept as is.
std::pair<double, double> snap_to_gram(double t_lo, double t_hi);

/// Writes content to path via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gramlab
