#ifndef LLAB_LIFSHITZ_HPP
#define LLAB_LIFSHITZ_HPP

// Tail asymptotics and theorem-level checks: double-log exponent fits, the
// generalized Temple inequality for degenerate ground states, the upper and
// lower probe experiments at the coupled volume L = ceil(gamma E^{-1/b}),
// and the smooth bump vector whose Dirichlet Rayleigh quotient decays like
// L^{-(2N-1)}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "llab/disorder.hpp"
#include "llab/errors.hpp"
#include "llab/groundstate.hpp"
#include "llab/ids.hpp"
#include "llab/operators.hpp"
#include "llab/util.hpp"

namespace llab {

// ---------------------------------------------------------------------------
// Exponent fits
// ---------------------------------------------------------------------------

struct TailFit {
  double slope = 0;
  double intercept = 0;
  double residual_rms = 0;
  double window_lo = 0, window_hi = 0;
};

// Least-squares line through (ln E, ln |ln N(E)|). All curve values must lie
// strictly inside (0,1) or the double logarithm is undefined.
inline TailFit double_log_fit(std::span<const double> energies,
                              std::span<const double> values) {
  if (energies.size() != values.size() || energies.size() < 2)
    throw WindowInvalid("need at least two (E, N(E)) pairs");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (!(energies[i] > 0)) throw WindowInvalid("energies must be positive");
    if (!(values[i] > 0.0 && values[i] < 1.0))
      throw WindowInvalid("curve value " + std::to_string(values[i]) +
                          " outside (0,1); double log undefined");
    lx.push_back(std::log(energies[i]));
    ly.push_back(std::log(std::fabs(std::log(values[i]))));
  }
  const LineFit f = fit_line(lx, ly);
  TailFit out;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.residual_rms = f.residual_rms;
  out.window_lo = *std::min_element(energies.begin(), energies.end());
  out.window_hi = *std::max_element(energies.begin(), energies.end());
  return out;
}

// Plain log-log fit (ln y against ln x), e.g. for ln I_f(E) ~ (1/b) ln E.
inline TailFit power_law_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw WindowInvalid("need at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw WindowInvalid("log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const LineFit f = fit_line(lx, ly);
  TailFit out;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.residual_rms = f.residual_rms;
  out.window_lo = *std::min_element(x.begin(), x.end());
  out.window_hi = *std::max_element(x.begin(), x.end());
  return out;
}

// ---------------------------------------------------------------------------
// Generalized Temple inequality
// ---------------------------------------------------------------------------

struct TempleSample {
  double e0 = 0;        // ground state of scale*(T^N)^beta + truncated V
  double min_form = 0;  // min over unit phi in G of <phi, V~ phi>
  bool pass = false;
};

struct TempleReport {
  std::vector<TempleSample> samples;
  double c_tilde = 0;
  double c0 = 0;
  long L = 0;
  double b = 0;
  double threshold = 0;  // c_tilde * C0 / L^b (truncation level)
  double pass_rate = 0;

  bool all_pass() const { return pass_rate == 1.0; }
};

// Per sample: E0 + 6 c~^2 (C0/L^b) >= (1-2c~)^2 min_form must hold; the
// inequality is deterministic once ||V~|| <= c~ C0/L^b, so any failure is a
// bug, not noise.
inline TempleReport temple_verify(const IntegerSymbolSpec& spec,
                                  const SingleSiteDist& dist, long L,
                                  double c_tilde, double c0, int n_samples,
                                  std::uint64_t seed, int threads = 1,
                                  long dim_cap = 4096) {
  if (!(c0 > 0) || !std::isfinite(c0))
    throw GapConstantMissing("temple_verify needs the measured gap constant C0");
  if (!(c_tilde > 0 && c_tilde < 0.5))
    throw AssumptionViolated("c_tilde must lie in (0, 1/2)");
  const int N = spec.bandwidth();
  if (L < 2 * N + 1) throw IntervalTooShort("temple_verify needs L >= 2N+1");

  const double b = spec.b_exponent();
  const double gap_floor = c0 / std::pow(static_cast<double>(L), b);
  const FiniteSection powered = matrix_power(
      assemble_modified(spec, -L, L, BoundaryTag::NeumannMod), spec.beta,
      spec.scale, dim_cap);
  const GroundBasis basis = build_basis(spec.minima, spec.alpha_bar, L);

  TempleReport rep;
  rep.c_tilde = c_tilde;
  rep.c0 = c0;
  rep.L = L;
  rep.b = b;
  rep.threshold = c_tilde * gap_floor;
  rep.samples.resize(static_cast<std::size_t>(n_samples));
  detail::parallel_samples(n_samples, threads, [&](int i) {
    const Potential V = sample_potential(dist, -L, L, seed,
                                         static_cast<std::uint64_t>(i));
    const Potential Vt = truncate_potential(V, c_tilde, c0, L, b);
    Eigen::MatrixXcd A = powered.matrix;
    for (long r = 0; r < A.rows(); ++r)
      A(r, r) += Vt.values[static_cast<std::size_t>(r)];
    const Spectrum s = eigensolve(A, false, dim_cap);
    TempleSample& sample = rep.samples[static_cast<std::size_t>(i)];
    sample.e0 = s.eigenvalues(0);
    sample.min_form = min_form_over_ground(basis, Vt);
    const double lhs = sample.e0 + 6.0 * c_tilde * c_tilde * gap_floor;
    const double rhs = (1.0 - 2.0 * c_tilde) * (1.0 - 2.0 * c_tilde) * sample.min_form;
    sample.pass = lhs >= rhs - 1e-12 * std::fmax(1.0, gap_floor);
  });
  std::size_t passed = 0;
  for (const auto& s : rep.samples) passed += s.pass ? 1 : 0;
  rep.pass_rate = static_cast<double>(passed) / static_cast<double>(n_samples);
  return rep;
}

// ---------------------------------------------------------------------------
// Bump vector (Rayleigh probe for the Dirichlet section)
// ---------------------------------------------------------------------------

namespace detail {

inline double smooth_step(double u) {  // 0 at u<=0, 1 at u>=1, C-infinity
  if (u <= 0) return 0.0;
  if (u >= 1) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

}  // namespace detail

// C-infinity bump: 1 on (-1/2, 1/2), 0 for |x| >= 3/4.
inline double bump_psi1(double x) {
  const double a = std::fabs(x);
  if (a <= 0.5) return 1.0;
  if (a >= 0.75) return 0.0;
  return detail::smooth_step((0.75 - a) / 0.25);
}

// N-th derivative of bump_psi1 by 4th-order central differences.
inline double bump_psi1_derivative(int order, double x, double h = 1e-3) {
  const auto f = [](double t) { return bump_psi1(t); };
  switch (order) {
    case 0:
      return f(x);
    case 1:
      return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    case 2:
      return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) -
              f(x - 2 * h)) /
             (12 * h * h);
    case 3:
      return (f(x - 3 * h) - 8 * f(x - 2 * h) + 13 * f(x - h) - 13 * f(x + h) +
              8 * f(x + 2 * h) - f(x + 3 * h)) /
             (-8 * h * h * h);
    default:
      throw AssumptionViolated("bump derivatives implemented for order <= 3");
  }
}

struct BumpReport {
  Eigen::VectorXd psi;        // psi_L(m) = psi_1(m/L), m in [-L, L]
  double rayleigh_numerator;  // <psi_L, T^{D,D} psi_L> for g = (2-2cos)^N
  double norm2;               // ||psi_L||^2
  long L = 0;
  int N = 0;
};

inline BumpReport bump_energy(int N, long L, long dim_cap = 4096) {
  if (N < 1) throw AssumptionViolated("N must be >= 1");
  IntegerSymbolSpec spec;
  spec.scale = 1.0;
  spec.minima = {0.0};
  spec.alpha_bar = N;
  spec.beta = 1.0;
  const long d = 2 * L + 1;
  BumpReport rep;
  rep.L = L;
  rep.N = N;
  rep.psi.resize(d);
  for (long m = -L; m <= L; ++m)
    rep.psi(m + L) = bump_psi1(static_cast<double>(m) / static_cast<double>(L));
  // psi must vanish on the N outermost sites at each end, where the boundary
  // modification lives.
  for (long m = L - N + 1; m <= L; ++m)
    if (rep.psi(m + L) != 0.0 || rep.psi(-m + L) != 0.0)
      throw SupportTooWide("bump support touches the boundary layer at L=" +
                           std::to_string(L));
  const FiniteSection sec = assemble_modified(spec, -L, L, BoundaryTag::DirichletMod);
  if (d > dim_cap) throw DimensionCap("bump section exceeds the dimension cap");
  const Eigen::VectorXd Apsi = sec.matrix.real() * rep.psi;
  rep.rayleigh_numerator = rep.psi.dot(Apsi);
  rep.norm2 = rep.psi.squaredNorm();
  return rep;
}

namespace detail {

// Nested integral int_{s}^{s+1/L} ... int psi1^{(N)}(t_N) dt, evaluated with
// fixed-order Gauss-Legendre at each level.
inline const std::vector<std::pair<double, double>>& gauss16() {
  static const std::vector<std::pair<double, double>> nodes = [] {
    // Newton iteration on Legendre P_16; nodes in (-1, 1) with weights.
    const int n = 16;
    std::vector<std::pair<double, double>> out(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      out[static_cast<std::size_t>(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return out;
  }();
  return nodes;
}

inline double nested_bump_integral(int depth, int order, double s, double width) {
  double acc = 0;
  for (const auto& [node, weight] : gauss16()) {
    const double t = s + 0.5 * width * (node + 1.0);
    const double inner = (depth == 1)
                             ? bump_psi1_derivative(order, t)
                             : nested_bump_integral(depth - 1, order, t, width);
    acc += weight * inner;
  }
  return acc * 0.5 * width;
}

}  // namespace detail

// Max over m of | (T^N psi_L)(m) - (-1)^N * nested integral |, where
// (T psi)(n) = psi(n) - psi(n+1). The two sides agree exactly in the limit;
// the measured deviation is numerical and shrinks as L grows.
inline double bump_formula_diff_deviation(int N, long L) {
  if (N < 1 || N > 3) throw AssumptionViolated("formula check implemented for N <= 3");
  const long d = 2 * L + 1;
  std::vector<double> psi(static_cast<std::size_t>(d + N), 0.0);
  for (long m = -L; m <= L; ++m)
    psi[static_cast<std::size_t>(m + L)] =
        bump_psi1(static_cast<double>(m) / static_cast<double>(L));
  // iterate (T psi)(n) = psi(n) - psi(n+1)
  std::vector<double> cur = psi;
  for (int k = 0; k < N; ++k) {
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) cur[i] = cur[i] - cur[i + 1];
    cur.pop_back();
  }
  const double width = 1.0 / static_cast<double>(L);
  const double sign = (N % 2 == 0) ? 1.0 : -1.0;
  double dev = 0;
  for (long m = -L; m <= L - N; ++m) {
    const double lhs = cur[static_cast<std::size_t>(m + L)];
    const double integral = detail::nested_bump_integral(
        N, N, static_cast<double>(m) / static_cast<double>(L), width);
    dev = std::fmax(dev, std::fabs(lhs - sign * integral));
  }
  return dev;
}

// ---------------------------------------------------------------------------
// Probes: empirical P(E_0 < E) at the coupled volume L(E)
// ---------------------------------------------------------------------------

struct ProbePoint {
  double energy = 0;
  long L = 0;
  int n = 0;
  double p_hat = 0;  // P(E_0 < E)
  WilsonInterval wilson{};
  bool skipped = false;       // dimension cap exceeded
  double p_certificate = 0;   // lower probe only: P(C3/L^b + max V < E)
  double cert_pass_rate = 0;  // lower probe only: certificate >= E_0
};

struct ProbeCurve {
  std::vector<ProbePoint> points;
  double gamma = 0;
  double b = 0;
  double c3 = 0;  // lower probe only
};

namespace detail {

inline long probe_volume(double energy, double gamma, double b) {
  return static_cast<long>(std::ceil(gamma * std::pow(energy, -1.0 / b)));
}

}  // namespace detail

// Ground-state probability of scale*(T^{N,N})^beta + V at L = ceil(gamma E^{-1/b}).
inline ProbeCurve upper_probe(const IntegerSymbolSpec& spec,
                              const SingleSiteDist& dist,
                              std::span<const double> energies, double gamma,
                              int n_samples, std::uint64_t seed,
                              int threads = 1, long dim_cap = 4096) {
  if (!(gamma > 0)) throw AssumptionViolated("gamma must be positive");
  ProbeCurve curve;
  curve.gamma = gamma;
  curve.b = spec.b_exponent();
  std::map<long, FiniteSection> cache;
  for (double E : energies) {
    if (!(E > 0)) throw AssumptionViolated("probe energies must be positive");
    ProbePoint pt;
    pt.energy = E;
    pt.L = detail::probe_volume(E, gamma, curve.b);
    pt.n = n_samples;
    if (2 * pt.L + 1 > dim_cap) {
      pt.skipped = true;  // recorded, not fatal
      curve.points.push_back(pt);
      continue;
    }
    auto it = cache.find(pt.L);
    if (it == cache.end()) {
      FiniteSection powered = matrix_power(
          assemble_modified(spec, -pt.L, pt.L, BoundaryTag::NeumannMod),
          spec.beta, spec.scale, dim_cap);
      it = cache.emplace(pt.L, std::move(powered)).first;
    }
    const FiniteSection& base = it->second;
    std::vector<int> hit(static_cast<std::size_t>(n_samples), 0);
    detail::parallel_samples(n_samples, threads, [&](int i) {
      const Potential V = sample_potential(dist, -pt.L, pt.L, seed,
                                           static_cast<std::uint64_t>(i));
      Eigen::MatrixXcd A = base.matrix;
      for (long r = 0; r < A.rows(); ++r)
        A(r, r) += V.values[static_cast<std::size_t>(r)];
      const Spectrum s = eigensolve(A, false, dim_cap);
      hit[static_cast<std::size_t>(i)] = s.eigenvalues(0) < E ? 1 : 0;
    });
    std::size_t successes = 0;
    for (int h : hit) successes += static_cast<std::size_t>(h);
    pt.p_hat = static_cast<double>(successes) / static_cast<double>(n_samples);
    pt.wilson = wilson_interval(successes, static_cast<std::size_t>(n_samples));
    curve.points.push_back(pt);
  }
  return curve;
}

// Dirichlet ground-state probability plus the bump certificate
// C3/L^b + max_n V(n), which dominates E_0 per sample. C3 is measured as the
// max over the probe volumes of the Jensen-bounded Rayleigh quotient times L^b.
inline ProbeCurve lower_probe(const IntegerSymbolSpec& spec,
                              const SingleSiteDist& dist,
                              std::span<const double> energies, double gamma,
                              int n_samples, std::uint64_t seed,
                              int threads = 1, long dim_cap = 4096) {
  if (!(gamma > 0)) throw AssumptionViolated("gamma must be positive");
  if (static_cast<int>(spec.minima.size()) != 1)
    throw AssumptionViolated("lower probe expects a single-minimum banded spec");
  ProbeCurve curve;
  curve.gamma = gamma;
  curve.b = spec.b_exponent();
  const int N = spec.bandwidth();

  // measured certificate constant over the volumes this run will touch
  std::vector<long> volumes;
  for (double E : energies) {
    const long L = detail::probe_volume(E, gamma, curve.b);
    if (2 * L + 1 <= dim_cap) volumes.push_back(L);
  }
  double c3 = 0;
  for (long L : volumes) {
    const BumpReport bump = bump_energy(N, L, dim_cap);
    const double quotient = bump.rayleigh_numerator / bump.norm2;
    c3 = std::fmax(c3, spec.scale * std::pow(quotient, spec.beta) *
                           std::pow(static_cast<double>(L), curve.b));
  }
  curve.c3 = c3;

  std::map<long, FiniteSection> cache;
  for (double E : energies) {
    if (!(E > 0)) throw AssumptionViolated("probe energies must be positive");
    ProbePoint pt;
    pt.energy = E;
    pt.L = detail::probe_volume(E, gamma, curve.b);
    pt.n = n_samples;
    if (2 * pt.L + 1 > dim_cap) {
      pt.skipped = true;
      curve.points.push_back(pt);
      continue;
    }
    auto it = cache.find(pt.L);
    if (it == cache.end()) {
      FiniteSection powered = matrix_power(
          assemble_modified(spec, -pt.L, pt.L, BoundaryTag::DirichletMod),
          spec.beta, spec.scale, dim_cap);
      it = cache.emplace(pt.L, std::move(powered)).first;
    }
    const FiniteSection& base = it->second;
    const double cert_base = c3 / std::pow(static_cast<double>(pt.L), curve.b);
    std::vector<int> hit(static_cast<std::size_t>(n_samples), 0);
    std::vector<int> cert_hit(static_cast<std::size_t>(n_samples), 0);
    std::vector<int> dominated(static_cast<std::size_t>(n_samples), 0);
    detail::parallel_samples(n_samples, threads, [&](int i) {
      const Potential V = sample_potential(dist, -pt.L, pt.L, seed,
                                           static_cast<std::uint64_t>(i));
      Eigen::MatrixXcd A = base.matrix;
      for (long r = 0; r < A.rows(); ++r)
        A(r, r) += V.values[static_cast<std::size_t>(r)];
      const Spectrum s = eigensolve(A, false, dim_cap);
      const double e0 = s.eigenvalues(0);
      const double cert = cert_base + V.max_value();
      hit[static_cast<std::size_t>(i)] = e0 < E ? 1 : 0;
      cert_hit[static_cast<std::size_t>(i)] = cert < E ? 1 : 0;
      dominated[static_cast<std::size_t>(i)] =
          cert >= e0 - 1e-10 * std::fmax(1.0, cert) ? 1 : 0;
    });
    std::size_t successes = 0, cert_successes = 0, dom = 0;
    for (int h : hit) successes += static_cast<std::size_t>(h);
    for (int h : cert_hit) cert_successes += static_cast<std::size_t>(h);
    for (int h : dominated) dom += static_cast<std::size_t>(h);
    pt.p_hat = static_cast<double>(successes) / static_cast<double>(n_samples);
    pt.wilson = wilson_interval(successes, static_cast<std::size_t>(n_samples));
    pt.p_certificate = static_cast<double>(cert_successes) / static_cast<double>(n_samples);
    pt.cert_pass_rate = static_cast<double>(dom) / static_cast<double>(n_samples);
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace llab

#endif  // LLAB_LIFSHITZ_HPP
