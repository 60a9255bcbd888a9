#ifndef LLAB_GROUNDSTATE_HPP
#define LLAB_GROUNDSTATE_HPP

// The kernel of a modified-Neumann section of g = prod (2-2cos(x-E_k))^{abar}
// is spanned by the phase-modulated polynomial vectors
// phi^j_k(m) = m^j e^{-i m E_k}, j = 0..abar-1, k = 1..M. This header builds
// that basis, its Gram structure, the flatness counts used by the degenerate
// Temple inequality, and the spectral-gap scaling mu_{N+1} ~ C0 / L^b.

#include <Eigen/Dense>
#include <Eigen/QR>

#include <cmath>
#include <complex>
#include <vector>

#include "llab/disorder.hpp"
#include "llab/errors.hpp"
#include "llab/operators.hpp"
#include "llab/util.hpp"

namespace llab {

struct GroundBasis {
  std::vector<double> minima;  // E_k
  int alpha_bar = 1;
  long L = 0;
  Eigen::MatrixXcd vectors;  // (2L+1) x N, unit columns, k-major then j

  int bandwidth() const {
    return static_cast<int>(minima.size()) * alpha_bar;
  }
  long volume() const { return 2 * L + 1; }
};

// Basis vectors normalized numerically to unit norm (Temple needs unit
// vectors; the printed closed-form normalizer is not reused).
inline GroundBasis build_basis(const std::vector<double>& minima, int alpha_bar,
                               long L) {
  const int M = static_cast<int>(minima.size());
  if (M < 1 || alpha_bar < 1) throw AssumptionViolated("need M >= 1 and alpha_bar >= 1");
  const int N = M * alpha_bar;
  if (L < 2 * N + 1)
    throw IntervalTooShort("L must be >= 2*M*alpha_bar + 1");
  GroundBasis basis;
  basis.minima = minima;
  basis.alpha_bar = alpha_bar;
  basis.L = L;
  const long d = 2 * L + 1;
  basis.vectors.resize(d, N);
  int col = 0;
  for (int k = 0; k < M; ++k) {
    for (int j = 0; j < alpha_bar; ++j, ++col) {
      for (long m = -L; m <= L; ++m) {
        const double mj = (j == 0) ? 1.0 : std::pow(static_cast<double>(m), j);
        basis.vectors(m + L, col) =
            mj * std::exp(Complex(0.0, -static_cast<double>(m) * minima[k]));
      }
      basis.vectors.col(col).normalize();
    }
  }
  return basis;
}

struct GramReport {
  Eigen::MatrixXcd gram;   // unit diagonal
  double max_offdiag = 0;  // max |<phi_a, phi_b>|, a != b
  double max_offdiag_times_volume = 0;
};

inline GramReport gram(const GroundBasis& basis) {
  GramReport rep;
  rep.gram = basis.vectors.adjoint() * basis.vectors;
  const long n = rep.gram.rows();
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (i != j) rep.max_offdiag = std::fmax(rep.max_offdiag, std::abs(rep.gram(i, j)));
  rep.max_offdiag_times_volume =
      rep.max_offdiag * static_cast<double>(basis.volume());
  return rep;
}

struct FlatnessReport {
  double max_abs2_times_volume = 0;  // max_l |phi(l)|^2 |Lambda_L|
  long s_count = 0;                  // #S^a_L = #{l : |Lambda_L||phi(l)|^2 >= a}
  double a = 0;
  double c_a_n = 0;  // (1-a) / (2N-a)
  long volume = 0;
  bool sup_bound_ok = false;    // max |phi(l)| <= sqrt(2N/|Lambda_L|)
  bool count_bound_ok = false;  // #S^a_L >= C_{a,N} |Lambda_L|
};

inline FlatnessReport flatness_report(const GroundBasis& basis,
                                      const Eigen::VectorXcd& phi, double a) {
  if (!(a > 0 && a < 1)) throw AssumptionViolated("a must lie in (0,1)");
  if (phi.size() != basis.vectors.rows())
    throw NotInSpan("vector length does not match the basis interval");
  if (std::fabs(phi.norm() - 1.0) > 1e-8) throw NotInSpan("vector is not unit norm");
  // span test against the orthonormalized basis
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis.vectors);
  const Eigen::MatrixXcd Q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(basis.vectors.rows(),
                                                     basis.vectors.cols());
  const double out_of_span = (phi - Q * (Q.adjoint() * phi)).norm();
  if (out_of_span > 1e-8)
    throw NotInSpan("component outside the kernel span: " + std::to_string(out_of_span));

  FlatnessReport rep;
  rep.a = a;
  rep.volume = basis.volume();
  const int N = basis.bandwidth();
  rep.c_a_n = (1.0 - a) / (2.0 * N - a);
  const double vol = static_cast<double>(rep.volume);
  for (long l = 0; l < phi.size(); ++l) {
    const double w = std::norm(phi(l)) * vol;
    rep.max_abs2_times_volume = std::fmax(rep.max_abs2_times_volume, w);
    if (w >= a) ++rep.s_count;
  }
  rep.sup_bound_ok = rep.max_abs2_times_volume <= 2.0 * N + 1e-9;
  rep.count_bound_ok =
      static_cast<double>(rep.s_count) >= rep.c_a_n * vol - 1e-9;
  return rep;
}

// min over unit phi in span(basis) of <phi, V phi>: QR-orthonormalize the
// basis (it is only asymptotically orthogonal), project the diagonal
// potential, take the smallest eigenvalue of the projected N x N form.
inline double min_form_over_ground(const GroundBasis& basis, const Potential& V) {
  if (V.lo != -basis.L || V.hi != basis.L)
    throw AssumptionViolated("potential interval does not match the basis");
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis.vectors);
  const Eigen::MatrixXcd Q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(basis.vectors.rows(),
                                                     basis.vectors.cols());
  Eigen::VectorXd v(V.values.size());
  for (std::size_t i = 0; i < V.values.size(); ++i)
    v(static_cast<long>(i)) = V.values[i];
  const Eigen::MatrixXcd form = Q.adjoint() * v.asDiagonal() * Q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(form, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// The same minimum together with the minimizing vector embedded back on the
// lattice (used to evaluate the a/|Lambda| * sum_{S^a} V lower bound).
inline std::pair<double, Eigen::VectorXcd> min_form_with_vector(
    const GroundBasis& basis, const Potential& V) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis.vectors);
  const Eigen::MatrixXcd Q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(basis.vectors.rows(),
                                                     basis.vectors.cols());
  Eigen::VectorXd v(V.values.size());
  for (std::size_t i = 0; i < V.values.size(); ++i)
    v(static_cast<long>(i)) = V.values[i];
  const Eigen::MatrixXcd form = Q.adjoint() * v.asDiagonal() * Q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(form, Eigen::ComputeEigenvectors);
  Eigen::VectorXcd phi = Q * es.eigenvectors().col(0);
  phi.normalize();
  return {es.eigenvalues()(0), phi};
}

inline long count_zero_modes(const Eigen::VectorXd& eigenvalues, double tol = 1e-10) {
  long c = 0;
  for (long i = 0; i < eigenvalues.size(); ++i)
    if (std::fabs(eigenvalues(i)) < tol) ++c;
  return c;
}

struct GapScalingReport {
  std::vector<long> L_values;
  std::vector<double> gaps;  // mu_{N+1}(L) of scale*(T^{N,N})^beta
  double slope = 0;          // expect -b = -2*abar*beta
  double intercept = 0;
  double residual_rms = 0;
  double c0 = 0;  // min_L mu_{N+1}(L) * L^b
  int kernel_dim = 0;
};

// Eigenvalues of scale*(T^{N,N})^beta are the powered eigenvalues of the
// Neumann section, so the scan eigensolves the unpowered section once per L.
inline GapScalingReport gap_scaling(const IntegerSymbolSpec& spec,
                                    const std::vector<long>& L_values,
                                    long dim_cap = 4096) {
  spec.validate();
  const int N = spec.bandwidth();
  GapScalingReport rep;
  rep.kernel_dim = N;
  for (long L : L_values) {
    if (L < 2 * N + 1)
      throw IntervalTooShort("gap scan requires L >= 2N+1");
    const FiniteSection sec =
        assemble_modified(spec, -L, L, BoundaryTag::NeumannMod);
    const Spectrum s = eigensolve(sec, false, dim_cap);
    Eigen::VectorXd mu(s.eigenvalues.size());
    for (long i = 0; i < mu.size(); ++i) {
      double v = std::fmax(s.eigenvalues(i), 0.0);
      if (v < 1e-12 * s.eigenvalues(mu.size() - 1)) v = 0.0;
      mu(i) = spec.scale * std::pow(v, spec.beta);
    }
    const long zeros = count_zero_modes(mu, 1e-10);
    if (zeros != N)
      throw KernelDimensionMismatch(
          "expected " + std::to_string(N) + " zero modes at L=" +
          std::to_string(L) + ", found " + std::to_string(zeros));
    rep.L_values.push_back(L);
    rep.gaps.push_back(mu(N));
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.L_values.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(rep.L_values[i])));
    ly.push_back(std::log(rep.gaps[i]));
  }
  if (lx.size() >= 2) {
    const LineFit f = fit_line(lx, ly);
    rep.slope = f.slope;
    rep.intercept = f.intercept;
    rep.residual_rms = f.residual_rms;
  }
  const double b = spec.b_exponent();
  double c0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.L_values.size(); ++i)
    c0 = std::fmin(c0, rep.gaps[i] * std::pow(static_cast<double>(rep.L_values[i]), b));
  rep.c0 = c0;
  return rep;
}

}  // namespace llab

#endif  // LLAB_GROUNDSTATE_HPP
