#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "llab/operators.hpp"
#include "test_util.hpp"

using namespace llab;

namespace {

// closed-form spectrum of the simple (Dirichlet-path) Laplacian section:
// 2 - 2 cos(k pi / (n+1)), k = 1..n
std::vector<double> path_spectrum_simple(int n) {
  std::vector<double> out;
  for (int k = 1; k <= n; ++k) out.push_back(2.0 - 2.0 * std::cos(k * kPi / (n + 1)));
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXcd hermitian_random(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Complex(g(gen), g(gen));
  return 0.5 * (A + A.adjoint()).eval();
}

}  // namespace

TEST_CASE("integer spec bookkeeping") {
  const auto spec = IntegerSymbolSpec::from_alpha(0.7, {0.0});
  CHECK(spec.alpha_bar == 1);
  CHECK(spec.beta == Catch::Approx(0.7));
  CHECK(spec.bandwidth() == 1);
  CHECK(spec.b_exponent() == Catch::Approx(1.4));

  const auto spec2 = IntegerSymbolSpec::from_alpha(1.7, {0.0, 2.5});
  CHECK(spec2.alpha_bar == 2);
  CHECK(spec2.beta == Catch::Approx(0.85));
  CHECK(spec2.bandwidth() == 4);

  const auto exact = IntegerSymbolSpec::from_alpha(2.0, {0.0});
  CHECK(exact.alpha_bar == 2);
  CHECK(exact.beta == Catch::Approx(1.0));
}

TEST_CASE("root factor oracles") {
  // g = 2-2cos x -> p = (1, -1)
  const RootFactor p1 = root_factor(laplacian_spec());
  REQUIRE(p1.order() == 1);
  CHECK(p1.coeffs(0) == Complex(1.0, 0.0));
  CHECK(std::abs(p1.coeffs(1) - Complex(-1.0, 0.0)) < 1e-15);

  // g = (2-2cos x)^2 -> p = (1, -2, 1)
  const RootFactor p2 = root_factor(laplacian_squared_spec());
  REQUIRE(p2.order() == 2);
  CHECK(std::abs(p2.coeffs(0) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(p2.coeffs(1) - Complex(-2.0, 0.0)) < 1e-15);
  CHECK(std::abs(p2.coeffs(2) - Complex(1.0, 0.0)) < 1e-15);

  // g = 2-2cos(x-E) -> p = (1, -e^{-iE})
  IntegerSymbolSpec shifted;
  shifted.minima = {1.3};
  const RootFactor ps = root_factor(shifted);
  CHECK(std::abs(ps.coeffs(1) - (-std::exp(Complex(0.0, -1.3)))) < 1e-15);
}

TEST_CASE("root factor check catches corrupted coefficients") {
  // the grid identity |p|^2 = g is what root_factor certifies
  const IntegerSymbolSpec spec = laplacian_spec();
  const Symbol g = spec.g_symbol();
  RootFactor bad = root_factor(spec);
  bad.coeffs(1) = Complex(-0.9, 0.0);
  double max_dev = 0;
  for (int j = 0; j < 64; ++j) {
    const double x = -kPi + kTwoPi * j / 64;
    Complex px = bad.coeffs(0) + bad.coeffs(1) * std::exp(Complex(0.0, x));
    max_dev = std::fmax(max_dev, std::fabs(std::norm(px) - g(x)));
  }
  CHECK(max_dev > 1e-2);
}

TEST_CASE("assemble_simple: tridiagonal Laplacian") {
  const FourierCoefficients c = fourier_coefficients(laplacian_symbol(), 4);
  const FiniteSection sec = assemble_simple(c, -1, 1);
  REQUIRE(sec.dim() == 3);
  CHECK(sec.matrix(0, 0).real() == Catch::Approx(2.0));
  CHECK(sec.matrix(0, 1).real() == Catch::Approx(-1.0));
  CHECK(sec.matrix(0, 2).real() == Catch::Approx(0.0).margin(1e-12));
  CHECK(sec.matrix(1, 0).real() == Catch::Approx(-1.0));
  // banded path gives the same matrix exactly
  const FiniteSection banded = assemble_simple(laplacian_spec(), -1, 1);
  CHECK((sec.matrix - banded.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("assemble_simple: pentadiagonal squared Laplacian") {
  const FiniteSection sec = assemble_simple(laplacian_squared_spec(), -2, 2);
  const double stencil[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
  for (long i = 0; i < 5; ++i)
    for (long j = 0; j < 5; ++j) {
      const long d = i - j;
      const double expect = std::labs(d) <= 2 ? stencil[d + 2] : 0.0;
      CHECK(sec.matrix(i, j).real() == Catch::Approx(expect).margin(1e-13));
      CHECK(std::fabs(sec.matrix(i, j).imag()) < 1e-13);
    }
}

TEST_CASE("assemble_simple: shifted symbol off-diagonals") {
  const double E = 0.9;
  IntegerSymbolSpec spec;
  spec.minima = {E};
  const FiniteSection sec = assemble_simple(spec, 0, 3);
  // M[m, n] = a_{m-n}; a_1 = -e^{-iE}
  CHECK(std::abs(sec.matrix(1, 0) - (-std::exp(Complex(0.0, -E)))) < 1e-14);
  CHECK(std::abs(sec.matrix(0, 1) - (-std::exp(Complex(0.0, E)))) < 1e-14);
  // against the quadrature path
  const FourierCoefficients c = fourier_coefficients(spec.g_symbol(), 6);
  const FiniteSection ref = assemble_simple(c, 0, 3);
  CHECK((sec.matrix - ref.matrix).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("assemble_modified: 3-site Laplacian boundary matrices") {
  const FiniteSection neu = assemble_modified(laplacian_spec(), -1, 1,
                                              BoundaryTag::NeumannMod);
  Eigen::MatrixXd expect_n(3, 3);
  expect_n << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((neu.matrix.real() - expect_n).cwiseAbs().maxCoeff() < 1e-14);

  const FiniteSection dir = assemble_modified(laplacian_spec(), -1, 1,
                                              BoundaryTag::DirichletMod);
  Eigen::MatrixXd expect_d(3, 3);
  expect_d << 3, -1, 0, -1, 2, -1, 0, -1, 3;
  CHECK((dir.matrix.real() - expect_d).cwiseAbs().maxCoeff() < 1e-14);

  // characteristic polynomial oracle: eigenvalues {1, 3, 4}
  const Spectrum sd = eigensolve(dir);
  CHECK(sd.eigenvalues(0) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(sd.eigenvalues(1) == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(sd.eigenvalues(2) == Catch::Approx(4.0).epsilon(1e-12));

  // kernel of the Neumann section: constants
  Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(3, 1.0 / std::sqrt(3.0));
  CHECK((neu.matrix * ones).norm() < 1e-14);

  CHECK_THROWS_AS(assemble_modified(laplacian_spec(), 0, 1, BoundaryTag::NeumannMod),
                  IntervalTooShort);
}

TEST_CASE("weyl comparison on 3 sites: N <= S <= D entrywise") {
  const Spectrum n = eigensolve(assemble_modified(laplacian_spec(), -1, 1,
                                                  BoundaryTag::NeumannMod));
  const Spectrum s = eigensolve(assemble_simple(laplacian_spec(), -1, 1));
  const Spectrum d = eigensolve(assemble_modified(laplacian_spec(), -1, 1,
                                                  BoundaryTag::DirichletMod));
  // closed forms: {0, 1, 3}, {2-sqrt2, 2, 2+sqrt2}, {1, 3, 4}
  CHECK(n.eigenvalues(0) == Catch::Approx(0.0).margin(1e-13));
  CHECK(n.eigenvalues(1) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(n.eigenvalues(2) == Catch::Approx(3.0).epsilon(1e-12));
  CHECK(s.eigenvalues(0) == Catch::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.eigenvalues(1) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(s.eigenvalues(2) == Catch::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  for (int k = 0; k < 3; ++k) {
    CHECK(n.eigenvalues(k) <= s.eigenvalues(k) + 1e-12);
    CHECK(s.eigenvalues(k) <= d.eigenvalues(k) + 1e-12);
  }
}

TEST_CASE("simple = neumann + straddling rows (construction identity)") {
  for (const auto& spec : {laplacian_spec(), laplacian_squared_spec(), two_minima_spec()}) {
    const int N = spec.bandwidth();
    const long L = 3 * N + 2;
    const FiniteSection simple = assemble_simple(spec, -L, L);
    const FiniteSection neu = assemble_modified(spec, -L, L, BoundaryTag::NeumannMod);
    const FiniteSection dir = assemble_modified(spec, -L, L, BoundaryTag::DirichletMod);
    // D - S = S - N (both equal the straddling-row sum)
    const Eigen::MatrixXcd lhs = dir.matrix - simple.matrix;
    const Eigen::MatrixXcd rhs = simple.matrix - neu.matrix;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
    // the difference vanishes outside the N outermost indices at each end
    const long d = simple.dim();
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) {
        const bool corner = (i < N && j < N) || (i >= d - N && j >= d - N);
        if (!corner) CHECK(std::abs(lhs(i, j)) < 1e-14);
      }
  }
}

TEST_CASE("modified sections: hermitian, PSD Neumann, kernel dimension") {
  for (const auto& spec : {laplacian_spec(), laplacian_squared_spec(), two_minima_spec()}) {
    const int N = spec.bandwidth();
    for (long L : {2L * N + 1, 8L, 16L, 48L}) {
      if (L < 2 * N + 1) continue;
      const FiniteSection neu = assemble_modified(spec, -L, L, BoundaryTag::NeumannMod);
      CHECK((neu.matrix - neu.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
      const Spectrum s = eigensolve(neu);
      const double norm = std::fmax(std::fabs(s.eigenvalues(0)),
                                    std::fabs(s.eigenvalues(s.eigenvalues.size() - 1)));
      CHECK(s.eigenvalues(0) > -1e-12 * norm);  // PSD
      long zeros = 0;
      for (long i = 0; i < s.eigenvalues.size(); ++i)
        if (std::fabs(s.eigenvalues(i)) < 1e-10) ++zeros;
      CHECK(zeros == N);  // kernel dimension N = M * abar exactly
    }
  }
}

TEST_CASE("matrix_power basics") {
  FiniteSection diag;
  diag.lo = 0;
  diag.hi = 2;
  diag.matrix = Eigen::Vector3cd(4.0, 1.0, 0.0).asDiagonal();
  const FiniteSection root = matrix_power(diag, 0.5, 1.0);
  CHECK(root.matrix(0, 0).real() == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(root.matrix(1, 1).real() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(root.matrix(2, 2)) < 1e-12);

  // beta = 1 reproduces the section up to scale
  const FiniteSection same = matrix_power(diag, 1.0, 3.0);
  CHECK((same.matrix - 3.0 * diag.matrix).cwiseAbs().maxCoeff() < 1e-12);

  // Neumann 3-site Laplacian at beta = 1/2: eigenvalues {0, 1, sqrt 3}
  const FiniteSection neu = assemble_modified(laplacian_spec(), -1, 1,
                                              BoundaryTag::NeumannMod);
  const Spectrum s = eigensolve(matrix_power(neu, 0.5, 1.0));
  CHECK(s.eigenvalues(0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(s.eigenvalues(1) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(s.eigenvalues(2) == Catch::Approx(std::sqrt(3.0)).epsilon(1e-12));

  FiniteSection indef;
  indef.lo = 0;
  indef.hi = 1;
  indef.matrix = Eigen::Vector2cd(-1.0, 1.0).asDiagonal();
  CHECK_THROWS_AS(matrix_power(indef, 0.5, 1.0), NotPSD);
}

TEST_CASE("matrix_power commutes with direct sums") {
  const FiniteSection a = assemble_modified(laplacian_spec(), -4, 4,
                                            BoundaryTag::NeumannMod);
  const FiniteSection b = assemble_modified(two_minima_spec(), -6, 6,
                                            BoundaryTag::NeumannMod);
  const FiniteSection sum_then_power = matrix_power(direct_sum(a, b), 0.5, 2.0);
  const FiniteSection power_then_sum =
      direct_sum(matrix_power(a, 0.5, 2.0), matrix_power(b, 0.5, 2.0));
  CHECK((sum_then_power.matrix - power_then_sum.matrix).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("eigensolve contracts") {
  // closed-form path spectrum oracle at n = 10
  const FiniteSection sec = assemble_simple(laplacian_spec(), 1, 10);
  const Spectrum s = eigensolve(sec, true);
  const auto exact = path_spectrum_simple(10);
  for (int k = 0; k < 10; ++k)
    CHECK(s.eigenvalues(k) == Catch::Approx(exact[static_cast<std::size_t>(k)]).epsilon(1e-12));
  const double norm = std::fmax(std::fabs(s.eigenvalues(0)), std::fabs(s.eigenvalues(9)));
  CHECK(s.max_residual <= 1e-10 * norm);

  // dimension cap is enforced
  CHECK_THROWS_AS(eigensolve(sec, false, 5), DimensionCap);

  // complex Hermitian path: residual contract holds there too
  const Eigen::MatrixXcd H = hermitian_random(24, 3);
  const Spectrum sc = eigensolve(H, true);
  const double normc = std::fmax(std::fabs(sc.eigenvalues(0)),
                                 std::fabs(sc.eigenvalues(23)));
  CHECK(sc.max_residual <= 1e-10 * normc);
  // and eigenvalues come out sorted
  for (int k = 0; k + 1 < 24; ++k)
    CHECK(sc.eigenvalues(k) <= sc.eigenvalues(k + 1));
}

TEST_CASE("phase-shifted conjugate sections are isospectral") {
  // a section and its entrywise conjugate share the eigenvalue list
  const FiniteSection sec = assemble_simple(two_minima_spec(), -10, 10);
  const Eigen::MatrixXcd conj = sec.matrix.conjugate();
  const Spectrum s1 = eigensolve(sec);
  const Spectrum s2 = eigensolve(conj);
  CHECK((s1.eigenvalues - s2.eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bracketing certificates") {
  // Lambda_7 cut at 0
  const BracketReport r1 = bracketing_check(laplacian_spec(), -7, 7, 0);
  CHECK(r1.min_eig_simple_minus_neumann >= -1e-12);
  CHECK(r1.min_eig_dirichlet_minus_simple >= -1e-12);

  // squared Laplacian, dim 100, off-center cut
  const BracketReport r2 = bracketing_check(laplacian_squared_spec(), -50, 49, -11);
  CHECK(r2.ok(1e-10));

  // sub-intervals must be long enough
  CHECK_THROWS_AS(bracketing_check(laplacian_squared_spec(), -50, 49, -46),
                  IntervalTooShort);
}
