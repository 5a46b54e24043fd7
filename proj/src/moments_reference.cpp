#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "gramlab/error.hpp"
#include "gramlab/moments.hpp"

namespace gramlab {
namespace {

constexpr std::array<double, 4> kNodes = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                          0.7966664774136267395915539, 0.9602898564975362316835609};
constexpr std::array<double, 4> kWeights = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                            0.2223810344533744705443560, 0.1012285362903762591525314};

}  // namespace

double shifted_moment_reference(const SFunction& sf, double h, int m, double t_lo, double t_hi) {
  if (!(t_lo < t_hi) || !(h > 0.0) || m < 1 || t_lo < sf.t_lo() || t_hi + h > sf.t_hi()) {
    throw ArgumentError("shifted_moment_reference: bad arguments");
  }
  std::vector<double> cuts{t_lo, t_hi};
  for (double z : sf.zeros()) {
    if (z > t_lo && z < t_hi) cuts.push_back(z);
    if (z - h > t_lo && z - h < t_hi) cuts.push_back(z - h);
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const auto jump = static_cast<double>(sf.count_upto(mid + h) - sf.count_upto(mid));
    double acc = 0.0;
    for (std::size_t k = 0; k < kNodes.size(); ++k) {
      for (double t : {mid - half * kNodes[k], mid + half * kNodes[k]}) {
        acc += kWeights[k] * std::pow(jump - sf.phase_increment(t, h), 2 * m);
      }
    }
    total += acc * half;
  }
  return total;
}

}  // namespace gramlab
