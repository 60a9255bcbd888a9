#ifndef LLAB_OPERATORS_HPP
#define LLAB_OPERATORS_HPP

// Finite sections of Laurent operators. The banded case g(x) =
// prod_i (2-2cos(x-E_i))^{abar} is factored as g = |p|^2 with
// p(x) = prod_i (1 - e^{i(x-E_i)})^{abar}; writing the section as a sum of
// stencil rows |r_n><r_n| realizes the modified boundary conditions:
// keeping only rows whose stencil lies inside the interval gives the
// Neumann section, doubling the clipped straddling rows gives the Dirichlet
// one. Both differ from the simple compression 1_I T 1_I on the N outermost
// indices per side only, and satisfy the bracketing
//   T^{N,N} (+) T^{N,N}  <=  T  <=  T^{D,D} (+) T^{D,D}.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "llab/errors.hpp"
#include "llab/symbol.hpp"
#include "llab/util.hpp"

namespace llab {

using Complex = std::complex<double>;

// Integer-power product spec: g(x) = prod_i (2-2cos(x-E_i))^{abar}, together
// with the fractional power beta and overall scale that reconstitute
// f = scale * g^beta.
struct IntegerSymbolSpec {
  double scale = 1.0;            // fraktur c
  std::vector<double> minima;    // E_i, distinct on the torus
  int alpha_bar = 1;             // shared integer exponent
  double beta = 1.0;             // in (0, 1]

  static IntegerSymbolSpec from_alpha(double alpha, std::vector<double> minima,
                                      double scale = 1.0) {
    if (alpha <= 0) throw AssumptionViolated("alpha must be positive");
    IntegerSymbolSpec spec;
    spec.scale = scale;
    spec.minima = std::move(minima);
    spec.alpha_bar = static_cast<int>(std::ceil(alpha - 1e-12));
    spec.beta = alpha / spec.alpha_bar;
    spec.validate();
    return spec;
  }

  void validate() const {
    if (scale <= 0) throw AssumptionViolated("scale must be positive");
    if (minima.empty()) throw AssumptionViolated("need at least one minimum");
    if (alpha_bar < 1) throw AssumptionViolated("alpha_bar must be >= 1");
    if (!(beta > 0 && beta <= 1.0 + 1e-15))
      throw AssumptionViolated("beta must lie in (0, 1]");
    for (std::size_t i = 0; i < minima.size(); ++i)
      for (std::size_t j = i + 1; j < minima.size(); ++j)
        if (torus_distance(minima[i], minima[j]) < 1e-12)
          throw AssumptionViolated("minima must be pairwise distinct");
  }

  int bandwidth() const {  // N = M * abar
    return static_cast<int>(minima.size()) * alpha_bar;
  }
  double b_exponent() const { return 2.0 * alpha_bar * beta; }  // b = 2 abar beta
  double alpha() const { return alpha_bar * beta; }

  Symbol g_symbol() const {
    std::vector<CosineFactor> fs;
    for (double e : minima) fs.push_back({e, static_cast<double>(alpha_bar)});
    return Symbol::cosine_power_product(1.0, fs);
  }
  Symbol f_symbol() const {  // scale * g^beta
    std::vector<CosineFactor> fs;
    for (double e : minima) fs.push_back({e, alpha()});
    return Symbol::cosine_power_product(scale, fs);
  }

  std::string describe() const {
    std::ostringstream os;
    os << "spec(scale=" << scale << ",abar=" << alpha_bar << ",beta=" << beta;
    for (double e : minima) os << "," << e;
    os << ")";
    return os.str();
  }
};

// Coefficients p_0..p_N of p(x) = prod_i (1 - e^{i(x-E_i)})^{abar}, so that
// |p(x)|^2 = g(x).
struct RootFactor {
  Eigen::VectorXcd coeffs;
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

inline RootFactor root_factor(const IntegerSymbolSpec& spec) {
  spec.validate();
  const int N = spec.bandwidth();
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(N + 1);
  p(0) = 1.0;
  int deg = 0;
  for (double e : spec.minima) {
    const Complex root = std::exp(Complex(0.0, -e));  // factor (1, -e^{-iE})
    for (int rep = 0; rep < spec.alpha_bar; ++rep) {
      for (int k = deg + 1; k >= 1; --k) p(k) = p(k) - root * p(k - 1);
      ++deg;
    }
  }
  // |p|^2 must reproduce g on a dense grid.
  const Symbol g = spec.g_symbol();
  const int m = 1 << 12;
  for (int j = 0; j < m; ++j) {
    const double x = -kPi + kTwoPi * j / m;
    Complex px = 0.0;
    for (int k = 0; k <= N; ++k) px += p(k) * std::exp(Complex(0.0, k * x));
    if (std::abs(std::norm(px) - g(x)) > 1e-10 * std::fmax(1.0, g(x)))
      throw FactorMismatch("|p|^2 deviates from g at x=" + std::to_string(x));
  }
  return {p};
}

// Laurent coefficients of g from the autocorrelation of the root factor:
// a_n = sum_l p_{l+n} conj(p_l).
inline std::vector<Complex> banded_coefficients(const RootFactor& p) {
  const int N = p.order();
  std::vector<Complex> a(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) {
    Complex s = 0.0;
    for (int l = 0; l <= N; ++l) {
      const int ln = l + n;
      if (ln >= 0 && ln <= N) s += p.coeffs(ln) * std::conj(p.coeffs(l));
    }
    a[static_cast<std::size_t>(n + N)] = s;
  }
  return a;
}

enum class BoundaryTag { Simple, NeumannMod, DirichletMod };

inline const char* to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Simple: return "simple";
    case BoundaryTag::NeumannMod: return "neumann";
    case BoundaryTag::DirichletMod: return "dirichlet";
  }
  return "?";
}

struct FiniteSection {
  Eigen::MatrixXcd matrix;  // Hermitian
  long lo = 0, hi = 0;      // lattice interval [lo, hi]
  BoundaryTag boundary = BoundaryTag::Simple;
  std::string provenance;

  long dim() const { return hi - lo + 1; }
};

// Simple boundary conditions from explicit Fourier coefficients:
// M[m, n] = a_{m-n}. Coefficients beyond n_max are treated as zero, which is
// the documented truncation when n_max < interval length - 1.
inline FiniteSection assemble_simple(const FourierCoefficients& c, long lo, long hi) {
  if (hi < lo) throw IntervalTooShort("empty interval");
  const long d = hi - lo + 1;
  FiniteSection sec;
  sec.lo = lo;
  sec.hi = hi;
  sec.boundary = BoundaryTag::Simple;
  sec.matrix = Eigen::MatrixXcd::Zero(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) sec.matrix(i, j) = c(i - j);
  return sec;
}

namespace detail {

// Adds w * |r_n restricted to [lo,hi]><r_n restricted| to M, where r_n is
// the stencil row r_n(m) = p_{m-n} supported on [n, n+N].
inline void add_clipped_row(Eigen::MatrixXcd& M, const Eigen::VectorXcd& p,
                            long n, long lo, long hi, double w) {
  const int N = static_cast<int>(p.size()) - 1;
  const long from = std::max(n, lo);
  const long to = std::min(n + N, hi);
  for (long i = from; i <= to; ++i)
    for (long j = from; j <= to; ++j)
      M(i - lo, j - lo) += w * p(i - n) * std::conj(p(j - n));
}

}  // namespace detail

// Simple section of the banded symbol via stencil rows (equals the
// coefficient assembly exactly).
inline FiniteSection assemble_simple(const IntegerSymbolSpec& spec, long lo, long hi) {
  const RootFactor p = root_factor(spec);
  const int N = p.order();
  if (hi - lo + 1 < 1) throw IntervalTooShort("empty interval");
  const long d = hi - lo + 1;
  FiniteSection sec;
  sec.lo = lo;
  sec.hi = hi;
  sec.boundary = BoundaryTag::Simple;
  sec.provenance = spec.describe();
  sec.matrix = Eigen::MatrixXcd::Zero(d, d);
  for (long n = lo - N; n <= hi; ++n)
    detail::add_clipped_row(sec.matrix, p.coeffs, n, lo, hi, 1.0);
  return sec;
}

inline FiniteSection assemble_modified(const IntegerSymbolSpec& spec, long lo,
                                       long hi, BoundaryTag bc) {
  const RootFactor p = root_factor(spec);
  const int N = p.order();
  const long d = hi - lo + 1;
  if (d < 2 * N + 1)
    throw IntervalTooShort("interval length " + std::to_string(d) +
                           " below 2N+1 = " + std::to_string(2 * N + 1));
  if (bc == BoundaryTag::Simple) return assemble_simple(spec, lo, hi);

  FiniteSection sec;
  sec.lo = lo;
  sec.hi = hi;
  sec.boundary = bc;
  sec.provenance = spec.describe();
  sec.matrix = Eigen::MatrixXcd::Zero(d, d);
  // interior rows: stencil fully inside the interval
  for (long n = lo; n <= hi - N; ++n)
    detail::add_clipped_row(sec.matrix, p.coeffs, n, lo, hi, 1.0);
  if (bc == BoundaryTag::DirichletMod) {
    // straddling rows enter twice (|u+v|^2 <= 2|u|^2 + 2|v|^2)
    for (long n = lo - N; n <= lo - 1; ++n)
      detail::add_clipped_row(sec.matrix, p.coeffs, n, lo, hi, 2.0);
    for (long n = hi - N + 1; n <= hi; ++n)
      detail::add_clipped_row(sec.matrix, p.coeffs, n, lo, hi, 2.0);
  }
  return sec;
}

inline FiniteSection direct_sum(const FiniteSection& a, const FiniteSection& b) {
  FiniteSection out;
  out.lo = a.lo;
  out.hi = a.hi + b.dim();
  out.boundary = a.boundary;
  out.provenance = a.provenance;
  out.matrix = Eigen::MatrixXcd::Zero(a.dim() + b.dim(), a.dim() + b.dim());
  out.matrix.topLeftCorner(a.dim(), a.dim()) = a.matrix;
  out.matrix.bottomRightCorner(b.dim(), b.dim()) = b.matrix;
  return out;
}

struct Spectrum {
  Eigen::VectorXd eigenvalues;  // nondecreasing
  std::optional<Eigen::MatrixXcd> vectors;
  double max_residual = 0;  // max_i ||A v_i - lambda_i v_i||, when vectors are computed
};

// Full dense Hermitian eigendecomposition (Eigen's tridiagonalization-based
// solver). Real-symmetric input takes the faster real path; results are
// deterministic for fixed input.
inline Spectrum eigensolve(const Eigen::MatrixXcd& A, bool want_vectors = false,
                           long dim_cap = 4096) {
  const long d = A.rows();
  if (d > dim_cap)
    throw DimensionCap("dimension " + std::to_string(d) + " exceeds cap " +
                       std::to_string(dim_cap));
  const double herm_err = (A - A.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::fmax(1.0, A.cwiseAbs().maxCoeff());
  if (herm_err > 1e-12 * scale)
    throw AssumptionViolated("matrix is not Hermitian");

  Spectrum out;
  const bool realsym = A.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale;
  if (realsym) {
    Eigen::MatrixXd Ar = A.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Ar, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    out.eigenvalues = es.eigenvalues();
    if (want_vectors) out.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        A, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    out.eigenvalues = es.eigenvalues();
    if (want_vectors) out.vectors = es.eigenvectors();
  }
  if (want_vectors) {
    const Eigen::MatrixXcd R =
        A * (*out.vectors) - (*out.vectors) * out.eigenvalues.asDiagonal();
    out.max_residual = R.colwise().norm().maxCoeff();
  }
  return out;
}

inline Spectrum eigensolve(const FiniteSection& sec, bool want_vectors = false,
                           long dim_cap = 4096) {
  return eigensolve(sec.matrix, want_vectors, dim_cap);
}

// scale * A^beta for PSD A: eigenvalues below 1e-12*||A|| are clamped to
// zero (Neumann kernels are exact zeros perturbed by rounding), then powered.
inline FiniteSection matrix_power(const FiniteSection& sec, double beta,
                                  double scale, long dim_cap = 4096) {
  if (!(beta > 0 && beta <= 1.0 + 1e-15))
    throw AssumptionViolated("beta must lie in (0, 1]");
  if (scale <= 0) throw AssumptionViolated("scale must be positive");
  Spectrum s = eigensolve(sec, true, dim_cap);
  const double norm = std::fmax(std::fabs(s.eigenvalues(0)),
                                std::fabs(s.eigenvalues(s.eigenvalues.size() - 1)));
  if (s.eigenvalues(0) < -1e-8 * norm)
    throw NotPSD("eigenvalue " + std::to_string(s.eigenvalues(0)) +
                 " below -1e-8 * ||A||");
  Eigen::VectorXd powered = s.eigenvalues;
  for (long i = 0; i < powered.size(); ++i) {
    double v = powered(i);
    if (v < 1e-12 * norm) v = 0.0;
    powered(i) = scale * std::pow(v, beta);
  }
  FiniteSection out;
  out.lo = sec.lo;
  out.hi = sec.hi;
  out.boundary = sec.boundary;
  out.provenance = sec.provenance + "^" + std::to_string(beta);
  const Eigen::MatrixXcd& V = *s.vectors;
  out.matrix = V * powered.asDiagonal() * V.adjoint();
  // symmetrize away the rounding from the triple product
  out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
  return out;
}

struct BracketReport {
  double min_eig_simple_minus_neumann = 0;
  double min_eig_dirichlet_minus_simple = 0;
  double norm_t = 0;  // ||T|| of the simple section
  bool ok(double tol_factor = 1e-10) const {
    return min_eig_simple_minus_neumann >= -tol_factor * norm_t &&
           min_eig_dirichlet_minus_simple >= -tol_factor * norm_t;
  }
};

// PSD certificates for T^{N,N}+T^{N,N} <= T <= T^{D,D}+T^{D,D} across the
// cut: [lo, cut] and [cut+1, hi].
inline BracketReport bracketing_check(const IntegerSymbolSpec& spec, long lo,
                                      long hi, long cut, long dim_cap = 4096) {
  const int N = spec.bandwidth();
  if (cut < lo || cut + 1 > hi) throw IntervalTooShort("cut outside interval");
  if (cut - lo + 1 < 2 * N + 1 || hi - cut < 2 * N + 1)
    throw IntervalTooShort("sub-intervals must have length >= 2N+1");

  const FiniteSection simple = assemble_simple(spec, lo, hi);
  const FiniteSection nl = assemble_modified(spec, lo, cut, BoundaryTag::NeumannMod);
  const FiniteSection nr = assemble_modified(spec, cut + 1, hi, BoundaryTag::NeumannMod);
  const FiniteSection dl = assemble_modified(spec, lo, cut, BoundaryTag::DirichletMod);
  const FiniteSection dr = assemble_modified(spec, cut + 1, hi, BoundaryTag::DirichletMod);

  const FiniteSection nsum = direct_sum(nl, nr);
  const FiniteSection dsum = direct_sum(dl, dr);

  BracketReport rep;
  const Spectrum st = eigensolve(simple, false, dim_cap);
  rep.norm_t = std::fmax(std::fabs(st.eigenvalues(0)),
                         std::fabs(st.eigenvalues(st.eigenvalues.size() - 1)));
  rep.min_eig_simple_minus_neumann =
      eigensolve(Eigen::MatrixXcd(simple.matrix - nsum.matrix), false, dim_cap)
          .eigenvalues(0);
  rep.min_eig_dirichlet_minus_simple =
      eigensolve(Eigen::MatrixXcd(dsum.matrix - simple.matrix), false, dim_cap)
          .eigenvalues(0);
  if (!rep.ok())
    throw BracketViolated(
        "bracketing violated: min eigs " +
        std::to_string(rep.min_eig_simple_minus_neumann) + ", " +
        std::to_string(rep.min_eig_dirichlet_minus_simple));
  return rep;
}

}  // namespace llab

#endif  // LLAB_OPERATORS_HPP
