#ifndef LLAB_UTIL_HPP
#define LLAB_UTIL_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace llab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce to the fundamental torus domain [-pi, pi).
inline double reduce_torus(double x) {
  double y = std::fmod(x + kPi, kTwoPi);
  if (y < 0) y += kTwoPi;
  return y - kPi;
}

// Distance on the torus.
inline double torus_distance(double a, double b) {
  return std::fabs(reduce_torus(a - b));
}

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double h = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + h * static_cast<double>(i);
  return out;
}

inline std::vector<double> geomspace(double lo, double hi, std::size_t count) {
  if (lo <= 0 || hi <= 0) throw std::invalid_argument("geomspace needs positive endpoints");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double r = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(r * static_cast<double>(i));
  return out;
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double residual_rms = 0;  // RMS of fit residuals
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double r2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    r2 += r * r;
  }
  f.residual_rms = std::sqrt(r2 / static_cast<double>(n));
  return f;
}

struct WilsonInterval {
  double lo = 0;
  double hi = 1;
};

// 95% Wilson score interval for a binomial proportion.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::fmax(0.0, center - half), std::fmin(1.0, center + half)};
}

}  // namespace llab

#endif  // LLAB_UTIL_HPP
