#include "polarlab/extremal.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace polarlab {

namespace {

// Bisection for f(x) = target on [lo, hi] with f monotone; stops when the
// residual is below 1e-13 or the interval width below 1e-16, never past 200
// iterations.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double target, const char* what) {
  double flo = f(lo) - target, fhi = f(hi) - target;
  if (std::abs(flo) <= 1e-13) return lo;
  if (std::abs(fhi) <= 1e-13) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::invalid_argument(std::string(what) +
                                ": target outside the achievable range");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    if (std::abs(fm) <= 1e-13 || hi - lo <= 1e-16) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BinaryChannel bec_with_capacity(double i) {
  if (!(i >= 0.0 && i <= 1.0))
    throw std::invalid_argument("bec_with_capacity: target outside [0, 1]");
  return make_bec(1.0 - i);
}

BinaryChannel bsc_with_capacity(double i) {
  if (!(i >= 0.0 && i <= 1.0))
    throw std::invalid_argument("bsc_with_capacity: target outside [0, 1]");
  const double p = bisect(
      [](double q) { return 1.0 - binary_entropy(q); }, 0.0, 0.5, i,
      "bsc_with_capacity");
  return make_bsc(p);
}

BinaryChannel bec_with_e0(double target, double rho) {
  if (rho == 0 || !(rho > -1.0))
    throw std::invalid_argument("bec_with_e0: rho must be > -1 and nonzero");
  const double eps = bisect(
      [rho](double e) { return gallager_e0(make_bec(e), rho); }, 0.0, 1.0,
      target, "bec_with_e0");
  return make_bec(eps);
}

BinaryChannel bsc_with_e0(double target, double rho) {
  if (rho == 0 || !(rho > -1.0))
    throw std::invalid_argument("bsc_with_e0: rho must be > -1 and nonzero");
  const double p = bisect(
      [rho](double q) { return gallager_e0(make_bsc(q), rho); }, 0.0, 0.5,
      target, "bsc_with_e0");
  return make_bsc(p);
}

std::vector<E0ScanRow> e0_extremality_scan(const BinaryChannel& w, double rho0,
                                           const std::vector<double>& rho_grid) {
  const double t = gallager_e0(w, rho0);
  const BinaryChannel bec = bec_with_e0(t, rho0);
  const BinaryChannel bsc = bsc_with_e0(t, rho0);
  std::vector<E0ScanRow> rows;
  rows.reserve(rho_grid.size());
  for (double rho1 : rho_grid) {
    E0ScanRow r;
    r.rho0 = rho0;
    r.rho1 = rho1;
    r.e0_w = gallager_e0(w, rho1);
    r.e0_bec = gallager_e0(bec, rho1);
    r.e0_bsc = gallager_e0(bsc, rho1);
    const double lo = std::min(r.e0_bec, r.e0_bsc) - 1e-9;
    const double hi = std::max(r.e0_bec, r.e0_bsc) + 1e-9;
    r.in_interval = (r.e0_w >= lo && r.e0_w <= hi);
    rows.push_back(r);
  }
  return rows;
}

std::string e0_scan_csv(const std::vector<E0ScanRow>& rows) {
  std::string out = "rho0,rho1,e0_w,e0_bec,e0_bsc,in_interval\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.rho0,
                  r.rho1, r.e0_w, r.e0_bec, r.e0_bsc, r.in_interval ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace polarlab
