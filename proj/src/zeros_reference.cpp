#include <cmath>

#include "gramlab/error.hpp"
#include "gramlab/special_functions.hpp"
#include "gramlab/zeros.hpp"

namespace gramlab {

ZeroCensus scan_zeros_reference(double t_lo, double t_hi, double step, double tolerance) {
  if (t_lo < 10.0) throw DomainError("scan_zeros_reference: requires t_lo >= 10");
  if (!(t_hi > t_lo)) throw ArgumentError("scan_zeros_reference: requires t_lo < t_hi");
  if (!(step > 0.0)) throw ArgumentError("scan_zeros_reference: step must be > 0");

  ZeroCensus census;
  census.t_lo = t_lo;
  census.t_hi = t_hi;
  const auto n = static_cast<long long>(std::ceil((t_hi - t_lo) / step));
  const double h = (t_hi - t_lo) / static_cast<double>(n);
  double x_prev = t_lo;
  double z_prev = z_value(t_lo);
  for (long long i = 1; i <= n; ++i) {
    const double x = i == n ? t_hi : t_lo + static_cast<double>(i) * h;
    const double zx = z_value(x);
    if ((z_prev >= 0.0) != (zx >= 0.0)) {
      double a = x_prev, b = x, za = z_prev;
      while (b - a > tolerance) {
        const double m = 0.5 * (a + b);
        const double zm = z_value(m);
        if ((zm >= 0.0) == (za >= 0.0)) {
          a = m;
          za = zm;
        } else {
          b = m;
        }
      }
      census.zeros.push_back(ZeroOrdinate{0.5 * (a + b), a, b, b - a, ZeroFlag::ok});
    }
    x_prev = x;
    z_prev = zx;
  }
  return census;
}

}  // namespace gramlab
