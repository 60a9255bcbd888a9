#ifndef LLAB_IDS_HPP
#define LLAB_IDS_HPP

// Eigenvalue counting curves and Monte Carlo IDS estimates. Samples are
// independent tasks keyed by (seed, sample index); aggregation runs in
// sample-index order, so means are bit-stable for any thread count.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "llab/disorder.hpp"
#include "llab/errors.hpp"
#include "llab/operators.hpp"
#include "llab/symbol.hpp"

namespace llab {

namespace detail {

// Static block partition of [0, count) over nthreads workers.
template <typename Fn>
inline void parallel_samples(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int from = t * chunk;
    const int to = std::min(count, from + chunk);
    if (from >= to) break;
    pool.emplace_back([from, to, &fn] {
      for (int i = from; i < to; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Normalized counting function E -> #{mu_j <= E} / dim of sec (+ diag V).
inline std::vector<double> counting_curve(const FiniteSection& sec,
                                          const Potential* V,
                                          std::span<const double> energies,
                                          long dim_cap = 4096) {
  Eigen::MatrixXcd A = sec.matrix;
  if (V != nullptr) {
    if (V->lo != sec.lo || V->hi != sec.hi)
      throw AssumptionViolated("potential interval does not match the section");
    for (long i = 0; i < A.rows(); ++i)
      A(i, i) += V->values[static_cast<std::size_t>(i)];
  }
  const Spectrum s = eigensolve(A, false, dim_cap);
  std::vector<double> out(energies.size());
  const double* begin = s.eigenvalues.data();
  const double* end = begin + s.eigenvalues.size();
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const auto count = std::upper_bound(begin, end, energies[i]) - begin;
    out[i] = static_cast<double>(count) / static_cast<double>(s.eigenvalues.size());
  }
  return out;
}

// Max deviation between the finite-volume counting function of the simple
// section and the sublevel-set IDS of the symbol.
inline double free_ids_check(const Symbol& s, long L,
                             std::span<const double> energies,
                             double coeff_tol = 1e-10, long dim_cap = 4100) {
  if (L < 64) throw AssumptionViolated("free IDS check needs L >= 64");
  const FourierCoefficients c =
      fourier_coefficients(s, static_cast<int>(2 * L), coeff_tol);
  const FiniteSection sec = assemble_simple(c, -L, L);
  const std::vector<double> counts = counting_curve(sec, nullptr, energies, dim_cap);
  const FreeIds ids(s);
  double dev = 0;
  for (std::size_t i = 0; i < energies.size(); ++i)
    dev = std::fmax(dev, std::fabs(counts[i] - ids(energies[i])));
  return dev;
}

struct IdsCurve {
  std::vector<double> energies;
  std::vector<double> mean;
  std::vector<double> stderr_;
  long L = 0;
  int n_samples = 0;
  std::string model;
};

// Monte Carlo average of counting curves over disorder realizations of dist
// added to the fixed base section.
inline IdsCurve mc_ids(const FiniteSection& base, const SingleSiteDist& dist,
                       std::span<const double> energies, int n_samples,
                       std::uint64_t seed, int threads = 1, long dim_cap = 4096) {
  if (n_samples < 1) throw AssumptionViolated("n_samples must be >= 1");
  const std::size_t ne = energies.size();
  std::vector<std::vector<double>> per_sample(static_cast<std::size_t>(n_samples));
  detail::parallel_samples(n_samples, threads, [&](int i) {
    const Potential V = sample_potential(dist, base.lo, base.hi, seed,
                                         static_cast<std::uint64_t>(i));
    per_sample[static_cast<std::size_t>(i)] =
        counting_curve(base, &V, energies, dim_cap);
  });

  IdsCurve curve;
  curve.energies.assign(energies.begin(), energies.end());
  curve.mean.assign(ne, 0.0);
  curve.stderr_.assign(ne, 0.0);
  curve.L = (base.hi - base.lo) / 2;
  curve.n_samples = n_samples;
  for (int i = 0; i < n_samples; ++i)
    for (std::size_t e = 0; e < ne; ++e) curve.mean[e] += per_sample[static_cast<std::size_t>(i)][e];
  for (std::size_t e = 0; e < ne; ++e) curve.mean[e] /= n_samples;
  if (n_samples > 1) {
    for (int i = 0; i < n_samples; ++i)
      for (std::size_t e = 0; e < ne; ++e) {
        const double r = per_sample[static_cast<std::size_t>(i)][e] - curve.mean[e];
        curve.stderr_[e] += r * r;
      }
    for (std::size_t e = 0; e < ne; ++e)
      curve.stderr_[e] = std::sqrt(curve.stderr_[e] /
                                   (static_cast<double>(n_samples) *
                                    static_cast<double>(n_samples - 1)));
  }
  return curve;
}

// Dirichlet-based lower and Neumann-based upper IDS estimates with common
// random numbers, so lower <= upper holds per sample, not just in the mean.
inline std::pair<IdsCurve, IdsCurve> sandwich_curves(
    const IntegerSymbolSpec& spec, const SingleSiteDist& dist, long L,
    std::span<const double> energies, int n_samples, std::uint64_t seed,
    int threads = 1, long dim_cap = 4096) {
  const FiniteSection dir = matrix_power(
      assemble_modified(spec, -L, L, BoundaryTag::DirichletMod), spec.beta,
      spec.scale, dim_cap);
  const FiniteSection neu = matrix_power(
      assemble_modified(spec, -L, L, BoundaryTag::NeumannMod), spec.beta,
      spec.scale, dim_cap);
  IdsCurve lower = mc_ids(dir, dist, energies, n_samples, seed, threads, dim_cap);
  IdsCurve upper = mc_ids(neu, dist, energies, n_samples, seed, threads, dim_cap);
  lower.model = "dirichlet:" + spec.describe() + ":" + dist.describe();
  upper.model = "neumann:" + spec.describe() + ":" + dist.describe();
  return {std::move(lower), std::move(upper)};
}

// Sorted eigenvalues of sec + diag(V).
inline std::vector<double> counting_eigenvalues(const FiniteSection& sec,
                                                const Potential& V,
                                                long dim_cap = 4096) {
  Eigen::MatrixXcd A = sec.matrix;
  if (V.lo != sec.lo || V.hi != sec.hi)
    throw AssumptionViolated("potential interval does not match the section");
  for (long i = 0; i < A.rows(); ++i)
    A(i, i) += V.values[static_cast<std::size_t>(i)];
  const Spectrum s = eigensolve(A, false, dim_cap);
  return {s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size()};
}

// Simple sections for f(.) and f(. + shift) with the same potential must be
// isospectral: the conjugating unitary is diagonal and commutes with both
// the interval projection and the potential.
inline double shift_check(const Symbol& s, double shift, long L,
                          const Potential& V, double coeff_tol = 1e-10,
                          long dim_cap = 4096) {
  const FourierCoefficients c0 =
      fourier_coefficients(s, static_cast<int>(2 * L), coeff_tol);
  const FourierCoefficients c1 =
      fourier_coefficients(s.shifted(shift), static_cast<int>(2 * L), coeff_tol);
  const FiniteSection s0 = assemble_simple(c0, -L, L);
  const FiniteSection s1 = assemble_simple(c1, -L, L);
  const std::vector<double> e0 =
      counting_eigenvalues(s0, V, dim_cap);
  const std::vector<double> e1 =
      counting_eigenvalues(s1, V, dim_cap);
  double dev = 0;
  for (std::size_t i = 0; i < e0.size(); ++i)
    dev = std::fmax(dev, std::fabs(e0[i] - e1[i]));
  return dev;
}

}  // namespace llab

#endif  // LLAB_IDS_HPP
