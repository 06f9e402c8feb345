#include <algorithm>
#include <cmath>

#include "mdspin/errors.hpp"
#include "mdspin/harness.hpp"

namespace mdspin::harness {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit", "x and y sizes differ");
  if (x.size() < 2) throw DomainError("fit", "need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx, dy = y[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("fit", "x values must not all coincide");

  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (f.intercept + f.slope * x[k]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return f;
}

ScalingFitResult fit_scaling(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw DomainError("points", "need at least 3 (s, deflection) pairs");
  const bool positive = pairs.front().second > 0.0;
  std::vector<double> lx, ly;
  for (const auto& [s, d] : pairs) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("s", "scale factors must be positive");
    if (d == 0.0 || !std::isfinite(d)) throw DomainError("deflection", "must be nonzero and finite");
    if ((d > 0.0) != positive) throw DomainError("deflection", "must all have the same sign");
    lx.push_back(std::log(s));
    ly.push_back(std::log(std::abs(d)));
  }
  const auto line = fit_line(lx, ly);
  return {line.slope, line.intercept, line.r_squared, static_cast<int>(pairs.size())};
}

}  // namespace mdspin::harness
