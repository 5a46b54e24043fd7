#include "gramlab/classify.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>
#include "json.hpp"

#include "gramlab/error.hpp"

namespace gramlab {

double ClassificationReport::failure_proportion() const {
  return n_g == 0 ? 0.0 : static_cast<double>(failure_count) / static_cast<double>(n_g);
}

double ClassificationReport::f0_proportion() const {
  return n_g == 0 ? 0.0 : static_cast<double>(weak_failure_count) / static_cast<double>(n_g);
}

double ClassificationReport::weak_success_proportion() const {
  return n_g == 0 ? 0.0 : static_cast<double>(weak_success_count) / static_cast<double>(n_g);
}

Classification classify(const GramRange& range, const ZeroCensus& census) {
  if (census.t_lo > range.t_lo || census.t_hi < range.t_hi) {
    throw ArgumentError(fmt::format("classify: census [{}, {}] does not cover Gram range [{}, {}]", census.t_lo,
                                    census.t_hi, range.t_lo, range.t_hi));
  }
  Classification out;
  out.t_lo = range.t_lo;
  out.t_hi = range.t_hi;
  const auto& pts = range.points;
  if (pts.size() < 2) {
    out.zeros_below = census.zeros.size();
    return out;
  }
  out.intervals.reserve(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.intervals.push_back(GramInterval{pts[i].n, pts[i].t, pts[i + 1].t, 0, false});
  }

  // A zero within this distance above g_n belongs to (g_{n-1}, g_n].
  constexpr double kAtGramPoint = 1e-9;
  const auto by_t = [](const ZeroOrdinate& a, const ZeroOrdinate& b) { return a.t < b.t; };
  std::vector<ZeroOrdinate> sorted;
  const std::vector<ZeroOrdinate>* zeros = &census.zeros;
  if (!std::is_sorted(census.zeros.begin(), census.zeros.end(), by_t)) {
    sorted = census.zeros;
    std::sort(sorted.begin(), sorted.end(), by_t);
    zeros = &sorted;
  }
  // Both sequences are sorted; one forward merge assigns every zero.
  std::size_t i = 0;
  for (const auto& z : *zeros) {
    if (z.t <= pts.front().t + kAtGramPoint) {
      ++out.zeros_below;
      continue;
    }
    if (z.t > pts.back().t + kAtGramPoint) {
      ++out.zeros_above;
      continue;
    }
    while (z.t > out.intervals[i].hi + kAtGramPoint) ++i;
    auto& iv = out.intervals[i];
    if (z.flag == ZeroFlag::ok) {
      ++iv.k;
    } else {
      iv.flagged = true;
      ++out.flagged_records;
    }
  }
  return out;
}

ClassificationReport report(const std::vector<GramInterval>& intervals) {
  ClassificationReport r;
  if (!intervals.empty()) {
    r.t_lo = intervals.front().lo;
    r.t_hi = intervals.back().hi;
  }
  for (const auto& iv : intervals) {
    if (iv.flagged) {
      ++r.flagged_intervals;
      ++r.flagged_count;
      continue;
    }
    ++r.histogram[iv.k];
    ++r.n_g;
    r.n_zeros += iv.k;
    if (iv.k != 1) ++r.failure_count;
    if (iv.k == 0) ++r.weak_failure_count;
    if (iv.k >= 1) ++r.weak_success_count;
  }
  return r;
}

ClassificationReport report(const Classification& classification) {
  ClassificationReport r = report(classification.intervals);
  r.t_lo = classification.t_lo;
  r.t_hi = classification.t_hi;
  r.flagged_count = static_cast<std::int64_t>(classification.flagged_records);
  return r;
}

ClassificationReport merge_reports(const std::vector<ClassificationReport>& reports) {
  ClassificationReport out;
  bool first = true;
  for (const auto& r : reports) {
    if (first) {
      out.t_lo = r.t_lo;
      out.t_hi = r.t_hi;
      first = false;
    }
    out.t_lo = std::min(out.t_lo, r.t_lo);
    out.t_hi = std::max(out.t_hi, r.t_hi);
    for (const auto& [k, c] : r.histogram) out.histogram[k] += c;
    out.n_g += r.n_g;
    out.n_zeros += r.n_zeros;
    out.failure_count += r.failure_count;
    out.weak_failure_count += r.weak_failure_count;
    out.weak_success_count += r.weak_success_count;
    out.flagged_count += r.flagged_count;
    out.flagged_intervals += r.flagged_intervals;
  }
  return out;
}

DecayProfile decay_profile(const std::vector<ClassificationReport>& reports) {
  const ClassificationReport pooled = merge_reports(reports);
  DecayProfile out;
  out.n_g = pooled.n_g;
  if (pooled.n_g == 0) return out;
  for (const auto& [k, c] : pooled.histogram) out.rate[k] = static_cast<double>(c) / static_cast<double>(pooled.n_g);
  const int k_max = out.rate.empty() ? 0 : out.rate.rbegin()->first;
  for (int k = 3; k <= k_max; ++k) {
    const double prev = out.rate.count(k - 1) ? out.rate.at(k - 1) : 0.0;
    const double cur = out.rate.count(k) ? out.rate.at(k) : 0.0;
    if (!(cur < prev)) out.monotone_from_2 = false;
  }
  return out;
}

std::string report_to_json(const ClassificationReport& r) {
  nlohmann::ordered_json j;
  j["range"] = {{"t_lo", r.t_lo}, {"t_hi", r.t_hi}};
  j["n_g"] = r.n_g;
  j["n_zeros"] = r.n_zeros;
  auto hist = nlohmann::ordered_json::array();
  for (const auto& [k, c] : r.histogram) hist.push_back({k, c});
  j["histogram"] = hist;
  j["failure_proportion"] = r.failure_proportion();
  j["f0_proportion"] = r.f0_proportion();
  j["weak_success_proportion"] = r.weak_success_proportion();
  j["flagged_count"] = r.flagged_count;
  return j.dump(2);
}

void write_intervals_csv(std::ostream& out, const std::vector<GramInterval>& intervals) {
  out << "n,lo,hi,k,flagged\n";
  for (const auto& iv : intervals) {
    out << fmt::format("{},{:.17g},{:.17g},{},{}\n", iv.n, iv.lo, iv.hi, iv.k, iv.flagged ? 1 : 0);
  }
}

}  // namespace gramlab
