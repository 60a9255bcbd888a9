#ifndef LLAB_SYMBOL_HPP
#define LLAB_SYMBOL_HPP

// Symbols f on the torus and everything derived from f alone: Fourier
// coefficients (trapezoid quadrature with grid doubling), the free
// sublevel-set IDS, algebraic-minimum exponent fits, and the two-sided
// envelope c*prod(2-2cos(x-E_i))^{b/2} <= f <= C*(2-2cos(x-E_{i0}))^{b/2}.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "llab/errors.hpp"
#include "llab/util.hpp"

namespace llab {

struct CosineFactor {
  double location = 0.0;  // E_i in [-pi, pi)
  double exponent = 1.0;  // alpha_i > 0
};

class Symbol {
 public:
  enum class Kind { CosinePowerProduct, Tabulated };

  static Symbol cosine_power_product(double scale,
                                     std::vector<CosineFactor> factors) {
    if (scale <= 0) throw AssumptionViolated("symbol scale must be positive");
    if (factors.empty()) throw AssumptionViolated("need at least one factor");
    for (auto& f : factors) {
      if (f.exponent <= 0) throw AssumptionViolated("factor exponents must be positive");
      f.location = reduce_torus(f.location);
    }
    for (std::size_t i = 0; i < factors.size(); ++i)
      for (std::size_t j = i + 1; j < factors.size(); ++j)
        if (torus_distance(factors[i].location, factors[j].location) < 1e-12)
          throw AssumptionViolated("factor locations must be pairwise distinct");
    Symbol s;
    s.kind_ = Kind::CosinePowerProduct;
    s.scale_ = scale;
    s.factors_ = std::move(factors);
    return s;
  }

  // Uniform samples on [-pi, pi); count must be a power of two. Samples are
  // shifted so the sampled minimum is exactly zero ((A3) normalization).
  static Symbol tabulated(std::vector<double> samples, double holder_nu) {
    const std::size_t n = samples.size();
    if (n < 2 || (n & (n - 1)) != 0)
      throw AssumptionViolated("tabulated sample count must be a power of two >= 2");
    if (!(holder_nu > 0))
      throw AssumptionViolated("tabulated symbols must declare a Holder exponent nu > 0");
    const double lo = *std::min_element(samples.begin(), samples.end());
    for (auto& v : samples) v -= lo;
    Symbol s;
    s.kind_ = Kind::Tabulated;
    s.samples_ = std::move(samples);
    s.nu_ = holder_nu;
    return s;
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  const std::vector<CosineFactor>& factors() const { return factors_; }
  const std::vector<double>& samples() const { return samples_; }

  // Declared (tabulated) or implied (cosine product) Holder exponent.
  double holder_exponent() const {
    if (kind_ == Kind::Tabulated) return nu_;
    double a_min = factors_[0].exponent;
    for (const auto& f : factors_) a_min = std::fmin(a_min, f.exponent);
    return std::fmin(1.0, 2.0 * a_min);
  }

  double operator()(double x) const {
    x = reduce_torus(x);
    if (kind_ == Kind::CosinePowerProduct) {
      double v = scale_;
      for (const auto& f : factors_) {
        const double base = 2.0 - 2.0 * std::cos(x - f.location);
        v *= std::pow(std::fmax(base, 0.0), f.exponent);
      }
      return v;
    }
    // Periodic linear interpolation between uniform samples.
    const std::size_t n = samples_.size();
    const double step = kTwoPi / static_cast<double>(n);
    double t = (x + kPi) / step;
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= n) i = n - 1;
    const double frac = t - static_cast<double>(i);
    const double a = samples_[i];
    const double b = samples_[(i + 1) % n];
    return a + frac * (b - a);
  }

  // f(. + delta): cosine products shift their minima, tabulated symbols are
  // re-sampled through the interpolant.
  Symbol shifted(double delta) const {
    if (kind_ == Kind::CosinePowerProduct) {
      auto fs = factors_;
      for (auto& f : fs) f.location = reduce_torus(f.location - delta);
      return cosine_power_product(scale_, fs);
    }
    const std::size_t n = samples_.size();
    std::vector<double> shifted_samples(n);
    const double step = kTwoPi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
      shifted_samples[j] = (*this)(-kPi + step * static_cast<double>(j) + delta);
    return tabulated(std::move(shifted_samples), nu_);
  }

  double grid_max(int log2n = 14) const {
    const std::size_t n = std::size_t{1} << log2n;
    double m = 0;
    const double step = kTwoPi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
      m = std::fmax(m, (*this)(-kPi + step * static_cast<double>(j)));
    return m;
  }

  std::string describe() const {
    std::ostringstream os;
    if (kind_ == Kind::CosinePowerProduct) {
      os << "cpp(scale=" << scale_;
      for (const auto& f : factors_) os << ",[" << f.location << "," << f.exponent << "]";
      os << ")";
    } else {
      os << "tabulated(n=" << samples_.size() << ",nu=" << nu_ << ")";
    }
    return os.str();
  }

 private:
  Symbol() = default;
  Kind kind_ = Kind::CosinePowerProduct;
  double scale_ = 1.0;
  std::vector<CosineFactor> factors_;
  std::vector<double> samples_;
  double nu_ = 1.0;
};

// ---------------------------------------------------------------------------
// Fourier coefficients a_n = (1/2pi) int f(k) e^{-ikn} dk
// ---------------------------------------------------------------------------

struct FourierCoefficients {
  int n_max = 0;
  double tol = 0;
  int grid_log2 = 0;  // grid size at which the doubling test converged
  std::vector<std::complex<double>> a;  // index n + n_max, |n| <= n_max

  std::complex<double> operator()(long n) const {
    if (n < -n_max || n > n_max) return {0.0, 0.0};
    return a[static_cast<std::size_t>(n + n_max)];
  }

  // sup over the stored range of |a_n| |n|^{1+nu}.
  double decay_sup(double nu) const {
    double s = 0;
    for (int n = 1; n <= n_max; ++n)
      s = std::fmax(s, std::abs((*this)(n)) * std::pow(n, 1.0 + nu));
    return s;
  }

  struct DecayFit {
    double nu_prime = 0;   // measured decay exponent minus 1
    double sup_const = 0;  // sup |a_n| |n|^{1+nu'}
  };

  // Log-log fit of |a_n| against n over the stored nonzero tail. Entries at
  // rounding level relative to the largest coefficient are quadrature noise,
  // not decay, and are excluded.
  DecayFit measured_decay() const {
    double amax = 0;
    for (const auto& v : a) amax = std::fmax(amax, std::abs(v));
    std::vector<double> lx, ly;
    for (int n = 2; n <= n_max; ++n) {
      const double m = std::abs((*this)(n));
      if (m > 1e-13 * amax) {
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(m));
      }
    }
    DecayFit out;
    if (lx.size() < 2) {
      // banded symbol: everything beyond the band is exactly zero
      out.nu_prime = 1.0;
      out.sup_const = decay_sup(out.nu_prime);
      return out;
    }
    const LineFit f = fit_line(lx, ly);
    out.nu_prime = -f.slope - 1.0;
    out.sup_const = decay_sup(out.nu_prime);
    return out;
  }
};

namespace detail {

// FFTW's planner is not thread-safe; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// (1/m) sum_j f(x_j) e^{-i x_j n} for |n| <= n_max on the uniform torus grid
// with m = 2^log2m points, via one forward FFT.
inline std::vector<std::complex<double>> trapezoid_coefficients(
    const Symbol& s, int n_max, int log2m) {
  const std::size_t m = std::size_t{1} << log2m;
  std::vector<std::complex<double>> buf(m);
  const double step = kTwoPi / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j)
    buf[j] = s(-kPi + step * static_cast<double>(j));
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(m), reinterpret_cast<fftw_complex*>(buf.data()),
        reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  std::vector<std::complex<double>> out(2 * static_cast<std::size_t>(n_max) + 1);
  for (int n = -n_max; n <= n_max; ++n) {
    const std::size_t idx = n >= 0 ? static_cast<std::size_t>(n)
                                   : m - static_cast<std::size_t>(-n);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // e^{i pi n}
    out[static_cast<std::size_t>(n + n_max)] =
        sign * buf[idx] / static_cast<double>(m);
  }
  return out;
}

}  // namespace detail

inline FourierCoefficients fourier_coefficients(const Symbol& s, int n_max,
                                                double tol = 1e-10,
                                                int min_log2 = 12,
                                                int max_log2 = 22) {
  if (n_max < 1) throw AssumptionViolated("n_max must be >= 1");
  if (tol <= 0) throw AssumptionViolated("tol must be positive");
  int log2m = min_log2;
  while ((std::size_t{1} << log2m) < 4 * static_cast<std::size_t>(n_max) + 4)
    ++log2m;
  if (log2m > max_log2)
    throw NonConvergent("coefficient grid cap too small for requested n_max");

  std::vector<std::complex<double>> prev =
      detail::trapezoid_coefficients(s, n_max, log2m);
  for (;;) {
    if (log2m + 1 > max_log2)
      throw NonConvergent("coefficient quadrature did not reach tol " +
                          std::to_string(tol) + " at grid 2^" +
                          std::to_string(max_log2));
    ++log2m;
    std::vector<std::complex<double>> next =
        detail::trapezoid_coefficients(s, n_max, log2m);
    double diff = 0;
    for (std::size_t i = 0; i < next.size(); ++i)
      diff = std::fmax(diff, std::abs(next[i] - prev[i]));
    prev = std::move(next);
    if (diff < tol) break;
  }

  FourierCoefficients out;
  out.n_max = n_max;
  out.tol = tol;
  out.grid_log2 = log2m;
  out.a = std::move(prev);
  // Hermitian symmetrization is exact: a_n <- (a_n + conj(a_{-n})) / 2.
  for (int n = 0; n <= n_max; ++n) {
    const auto ap = out.a[static_cast<std::size_t>(n_max + n)];
    const auto am = out.a[static_cast<std::size_t>(n_max - n)];
    const std::complex<double> sym = 0.5 * (ap + std::conj(am));
    out.a[static_cast<std::size_t>(n_max + n)] = sym;
    out.a[static_cast<std::size_t>(n_max - n)] = std::conj(sym);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Free IDS  I_f(E) = (1/2pi) |{k : f(k) <= E}|
// ---------------------------------------------------------------------------

struct FreeIdsOptions {
  int grid_log2 = 20;
  double bisect_tol = 1e-12;
};

// Caches the symbol samples once; each evaluation walks the grid and refines
// every level crossing by bisection. Known minima are inserted as extra
// nodes so that arbitrarily small sublevel sets are still seen.
class FreeIds {
 public:
  explicit FreeIds(const Symbol& s, FreeIdsOptions opt = {})
      : sym_(s), opt_(opt) {
    const std::size_t m = std::size_t{1} << opt.grid_log2;
    const double step = kTwoPi / static_cast<double>(m);
    xs_.reserve(m + 4);
    for (std::size_t j = 0; j < m; ++j) xs_.push_back(-kPi + step * static_cast<double>(j));
    if (s.kind() == Symbol::Kind::CosinePowerProduct) {
      for (const auto& f : s.factors()) xs_.push_back(f.location);
      std::sort(xs_.begin(), xs_.end());
      xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
    }
    vals_.resize(xs_.size());
    for (std::size_t j = 0; j < xs_.size(); ++j) vals_[j] = sym_(xs_[j]);
    max_val_ = *std::max_element(vals_.begin(), vals_.end());
    min_val_ = *std::min_element(vals_.begin(), vals_.end());
  }

  double min_value() const { return min_val_; }
  double max_value() const { return max_val_; }

  double operator()(double E) const {
    if (E < min_val_) return 0.0;
    if (E >= max_val_) return 1.0;
    const std::size_t n = xs_.size();
    double measure = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x0 = xs_[j];
      const double x1 = (j + 1 < n) ? xs_[j + 1] : xs_[0] + kTwoPi;
      const double f0 = vals_[j];
      const double f1 = (j + 1 < n) ? vals_[j + 1] : vals_[0];
      const bool in0 = f0 <= E, in1 = f1 <= E;
      if (in0 && in1) {
        measure += x1 - x0;
      } else if (in0 != in1) {
        const double xc = crossing(x0, x1, f0, E);
        measure += in0 ? (xc - x0) : (x1 - xc);
      }
    }
    return std::clamp(measure / kTwoPi, 0.0, 1.0);
  }

 private:
  // Bisection for the boundary of {f <= E} inside (x0, x1), where the
  // inclusion flag flips across the cell.
  double crossing(double x0, double x1, double f0, double E) const {
    const bool in0 = f0 <= E;
    double lo = x0, hi = x1;
    while (hi - lo > opt_.bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      if ((sym_(mid) <= E) == in0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  Symbol sym_;
  FreeIdsOptions opt_;
  std::vector<double> xs_, vals_;
  double min_val_ = 0, max_val_ = 0;
};

inline double free_ids_closed(const Symbol& s, double E, FreeIdsOptions opt = {}) {
  return FreeIds(s, opt)(E);
}

// ---------------------------------------------------------------------------
// Minima locations and algebraic exponents ((A3)/(A4))
// ---------------------------------------------------------------------------

struct MinimaOptions {
  int grid_log2 = 16;
  int h_log2_min = 6;           // fit window h in {2^-6, ..., 2^-16}, both signs
  int h_log2_max = 16;
  double refine_tol = 1e-13;
  double prefilter_rel = 1e-2;  // grid local minima worth refining
  double level_rel = 1e-5;      // refined value must reach this close to 0
  double fit_residual_tol = 0.05;
  double cross_check_tol = 0.05;  // vs exact 2*alpha_i for cosine products
};

struct Minimum {
  double location = 0;
  double beta = 0;      // fitted algebraic exponent
  double residual = 0;  // RMS residual of the log-log fit
};

struct MinimaReport {
  std::vector<Minimum> minima;
  double b = 0;  // max_i beta_i
  int i0 = 0;    // index of a maximizing minimum
};

namespace detail {

inline double golden_min(const Symbol& s, double lo, double hi, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = s(c), fd = s(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = s(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = s(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

inline MinimaReport minima_report(const Symbol& s, MinimaOptions opt = {}) {
  const std::size_t m = std::size_t{1} << opt.grid_log2;
  const double step = kTwoPi / static_cast<double>(m);
  std::vector<double> v(m);
  double vmax = 0;
  for (std::size_t j = 0; j < m; ++j) {
    v[j] = s(-kPi + step * static_cast<double>(j));
    vmax = std::fmax(vmax, v[j]);
  }
  // Coarse pre-filter, then golden-section refinement; the actual "is this a
  // global minimum" decision happens on the refined value, since algebraic
  // minima with small beta stay well above zero at grid resolution.
  std::vector<double> locations;
  for (std::size_t j = 0; j < m; ++j) {
    const double prev = v[(j + m - 1) % m], next = v[(j + 1) % m];
    if (v[j] <= prev && v[j] <= next && v[j] <= opt.prefilter_rel * vmax) {
      const double x = -kPi + step * static_cast<double>(j);
      double loc = detail::golden_min(s, x - step, x + step, opt.refine_tol);
      // cosine products vanish exactly at their factor locations
      if (s.kind() == Symbol::Kind::CosinePowerProduct) {
        for (const auto& f : s.factors())
          if (torus_distance(loc, f.location) < 2 * step) loc = f.location;
      }
      loc = reduce_torus(loc);
      if (s(loc) > opt.level_rel * vmax) continue;  // positive local minimum
      bool dup = false;
      for (double other : locations)
        if (torus_distance(loc, other) < 2 * step) dup = true;
      if (!dup) locations.push_back(loc);
    }
  }
  if (locations.empty())
    throw AssumptionViolated("no global minima found at the resolution of the grid");
  std::sort(locations.begin(), locations.end());

  // For tabulated symbols the interpolant is linear below the sample spacing;
  // keep the fit window above it.
  double h_floor = 0.0;
  if (s.kind() == Symbol::Kind::Tabulated)
    h_floor = 4.0 * kTwoPi / static_cast<double>(s.samples().size());

  MinimaReport report;
  for (double loc : locations) {
    std::vector<double> lx, ly;
    for (int k = opt.h_log2_min; k <= opt.h_log2_max; ++k) {
      const double h = std::ldexp(1.0, -k);
      if (h < h_floor) break;
      for (double sgn : {-1.0, 1.0}) {
        const double fv = s(loc + sgn * h);
        if (fv > 0) {
          lx.push_back(std::log(h));
          ly.push_back(std::log(fv));
        }
      }
    }
    if (lx.size() < 4)
      throw ExponentFitFailed("not enough usable points around minimum at x=" +
                              std::to_string(loc));
    const LineFit fit = fit_line(lx, ly);
    if (fit.residual_rms > opt.fit_residual_tol)
      throw ExponentFitFailed("log-log residual " + std::to_string(fit.residual_rms) +
                              " exceeds tolerance at x=" + std::to_string(loc));
    Minimum mn;
    mn.location = loc;
    mn.beta = fit.slope;
    mn.residual = fit.residual_rms;
    if (s.kind() == Symbol::Kind::CosinePowerProduct) {
      for (const auto& f : s.factors()) {
        if (torus_distance(loc, f.location) < 1e-9) {
          const double exact = 2.0 * f.exponent;
          if (std::fabs(mn.beta - exact) > opt.cross_check_tol * std::fmax(1.0, exact))
            throw ExponentFitFailed("fitted exponent " + std::to_string(mn.beta) +
                                    " disagrees with exact " + std::to_string(exact));
          mn.beta = exact;
        }
      }
    }
    report.minima.push_back(mn);
  }
  report.b = report.minima[0].beta;
  report.i0 = 0;
  for (std::size_t i = 1; i < report.minima.size(); ++i) {
    if (report.minima[i].beta > report.b) {
      report.b = report.minima[i].beta;
      report.i0 = static_cast<int>(i);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Envelope bounds
// ---------------------------------------------------------------------------

struct EnvelopeOptions {
  int grid_log2 = 14;
  double delta = 1e-3;  // exclusion radius around each minimum for g
  double sandwich_rel_tol = 1e-9;
  MinimaOptions minima{};
};

struct EnvelopeBounds {
  double c_low = 0;
  double C_up = 0;
  double b = 0;
  int i0 = 0;
  std::vector<double> minima;  // E_i
  std::vector<double> beta;    // per-minimum exponents

  double lower(double x) const {
    double v = 1.0;
    for (double e : minima) v *= std::pow(std::fmax(2.0 - 2.0 * std::cos(x - e), 0.0), b / 2.0);
    return c_low * v;
  }
  double upper(double x) const {
    const double base = std::fmax(2.0 - 2.0 * std::cos(x - minima[static_cast<std::size_t>(i0)]), 0.0);
    return C_up * std::pow(base, b / 2.0);
  }
};

inline EnvelopeBounds envelope_bounds(const Symbol& s, EnvelopeOptions opt = {}) {
  const MinimaReport rep = minima_report(s, opt.minima);  // validates (A3)/(A4)

  EnvelopeBounds env;
  env.b = rep.b;
  env.i0 = rep.i0;
  for (const auto& mn : rep.minima) {
    env.minima.push_back(mn.location);
    env.beta.push_back(mn.beta);
  }
  const std::size_t M = env.minima.size();

  // g = f / prod (2-2cos(x-E_i))^{beta_i/2} away from the minima; cosine
  // products have the exact limit g == scale at each minimum.
  double c1 = std::numeric_limits<double>::infinity();
  double C1 = 0;
  if (s.kind() == Symbol::Kind::CosinePowerProduct) c1 = C1 = s.scale();
  const std::size_t m = std::size_t{1} << opt.grid_log2;
  const double step = kTwoPi / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = -kPi + step * static_cast<double>(j);
    bool excluded = false;
    for (double e : env.minima)
      if (torus_distance(x, e) < opt.delta) excluded = true;
    if (excluded) continue;
    double denom = 1.0;
    for (std::size_t i = 0; i < M; ++i)
      denom *= std::pow(std::fmax(2.0 - 2.0 * std::cos(x - env.minima[i]), 0.0),
                        env.beta[i] / 2.0);
    const double g = s(x) / denom;
    c1 = std::fmin(c1, g);
    C1 = std::fmax(C1, g);
  }
  if (!(c1 > 0) || !std::isfinite(C1))
    throw AssumptionViolated("g = f / prod(...) is not bounded away from 0 and infinity");

  double beta_sum = 0;
  for (double bi : env.beta) beta_sum += bi;
  env.c_low = c1 * std::pow(4.0, 0.5 * (beta_sum - static_cast<double>(M) * env.b));
  env.C_up = C1 * std::pow(4.0, beta_sum - env.b);

  // Pointwise sandwich on the full evaluation grid.
  for (std::size_t j = 0; j < m; ++j) {
    const double x = -kPi + step * static_cast<double>(j);
    const double f = s(x);
    const double lo = env.lower(x), hi = env.upper(x);
    const double slack = opt.sandwich_rel_tol * std::fmax(1.0, std::fabs(f));
    if (lo > f + slack || f > hi + slack)
      throw AssumptionViolated("envelope sandwich fails at x=" + std::to_string(x));
  }
  return env;
}

}  // namespace llab

#endif  // LLAB_SYMBOL_HPP
