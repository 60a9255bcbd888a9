#ifndef LLAB_DISORDER_HPP
#define LLAB_DISORDER_HPP

// Anderson potentials: i.i.d. site values from a configurable single-site
// distribution, drawn through a counter-based generator keyed by
// (seed, sample index, site) so that realizations are reproducible
// bit-for-bit regardless of evaluation order or thread count.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "llab/errors.hpp"
#include "llab/philox.hpp"

namespace llab {

class SingleSiteDist {
 public:
  enum class Kind { Uniform, Bernoulli, PowerLaw, PointMass };

  static SingleSiteDist uniform(double hi) {
    if (hi <= 0) throw AssumptionViolated("uniform upper endpoint must be positive");
    SingleSiteDist d;
    d.kind_ = Kind::Uniform;
    d.hi_ = hi;
    return d;
  }
  static SingleSiteDist bernoulli(double p, double v) {
    if (p < 0 || p > 1) throw AssumptionViolated("bernoulli p must lie in [0,1]");
    if (v <= 0) throw AssumptionViolated("bernoulli value must be positive");
    SingleSiteDist d;
    d.kind_ = Kind::Bernoulli;
    d.p_ = p;
    d.v_ = v;
    return d;
  }
  // P([0, eps)) = (eps/cap)^kappa * ... with cap = 1: P([0,eps)) = eps^kappa.
  static SingleSiteDist power_law(double kappa, double cap = 1.0) {
    if (kappa <= 0 || cap <= 0) throw AssumptionViolated("power law needs kappa, cap > 0");
    SingleSiteDist d;
    d.kind_ = Kind::PowerLaw;
    d.kappa_ = kappa;
    d.cap_ = cap;
    return d;
  }
  static SingleSiteDist point_mass(double v) {
    if (v < 0) throw AssumptionViolated("point mass must be nonnegative");
    SingleSiteDist d;
    d.kind_ = Kind::PointMass;
    d.v_ = v;
    return d;
  }

  Kind kind() const { return kind_; }
  double uniform_hi() const { return hi_; }
  double bernoulli_p() const { return p_; }
  double value() const { return v_; }
  double kappa() const { return kappa_; }
  double cap() const { return cap_; }

  double sample_from_u(double u) const {
    switch (kind_) {
      case Kind::Uniform: return u * hi_;
      case Kind::Bernoulli: return u < p_ ? v_ : 0.0;
      case Kind::PowerLaw: return cap_ * std::pow(u, 1.0 / kappa_);
      case Kind::PointMass: return v_;
    }
    return 0.0;
  }

  double mean() const {
    switch (kind_) {
      case Kind::Uniform: return 0.5 * hi_;
      case Kind::Bernoulli: return p_ * v_;
      case Kind::PowerLaw: return cap_ * kappa_ / (kappa_ + 1.0);
      case Kind::PointMass: return v_;
    }
    return 0.0;
  }

  double sup() const {  // ||V||_inf bound for a single site
    switch (kind_) {
      case Kind::Uniform: return hi_;
      case Kind::Bernoulli: return v_;
      case Kind::PowerLaw: return cap_;
      case Kind::PointMass: return v_;
    }
    return 0.0;
  }

  double inf_support() const {
    switch (kind_) {
      case Kind::Uniform: return 0.0;
      case Kind::Bernoulli: return p_ < 1.0 ? 0.0 : v_;
      case Kind::PowerLaw: return 0.0;
      case Kind::PointMass: return v_;
    }
    return 0.0;
  }

  // inf supp P_0 = 0 and P_0 nontrivial, as the Anderson hypotheses require.
  bool anderson_valid() const {
    switch (kind_) {
      case Kind::Uniform: return true;
      case Kind::Bernoulli: return p_ > 0.0 && p_ < 1.0;
      case Kind::PowerLaw: return true;
      case Kind::PointMass: return false;
    }
    return false;
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::Uniform: os << "uniform(0," << hi_ << ")"; break;
      case Kind::Bernoulli: os << "bernoulli(p=" << p_ << ",v=" << v_ << ")"; break;
      case Kind::PowerLaw: os << "powerlaw(kappa=" << kappa_ << ",cap=" << cap_ << ")"; break;
      case Kind::PointMass: os << "pointmass(" << v_ << ")"; break;
    }
    return os.str();
  }

 private:
  SingleSiteDist() = default;
  Kind kind_ = Kind::Uniform;
  double hi_ = 1.0, p_ = 0.5, v_ = 1.0, kappa_ = 1.0, cap_ = 1.0;
};

struct Potential {
  long lo = 0, hi = -1;
  std::vector<double> values;  // one per site, index site - lo
  std::string dist;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;

  long dim() const { return hi - lo + 1; }
  double operator()(long site) const {
    return values[static_cast<std::size_t>(site - lo)];
  }
  double max_value() const {
    double m = 0;
    for (double v : values) m = std::fmax(m, v);
    return m;
  }
};

inline Potential sample_potential(const SingleSiteDist& d, long lo, long hi,
                                  std::uint64_t seed, std::uint64_t index) {
  if (hi < lo) throw AssumptionViolated("empty potential interval");
  Potential V;
  V.lo = lo;
  V.hi = hi;
  V.dist = d.describe();
  V.seed = seed;
  V.index = index;
  V.values.resize(static_cast<std::size_t>(hi - lo + 1));
  for (long site = lo; site <= hi; ++site) {
    const double u = rng::uniform01(seed, index, static_cast<std::uint64_t>(site));
    V.values[static_cast<std::size_t>(site - lo)] = d.sample_from_u(u);
  }
  return V;
}

// Pointwise min with the Temple threshold c_tilde * C0 / L^b.
inline Potential truncate_potential(const Potential& V, double c_tilde,
                                    double C0, long L, double b) {
  if (!(c_tilde > 0 && c_tilde < 0.5))
    throw AssumptionViolated("c_tilde must lie in (0, 1/2)");
  if (!(C0 > 0)) throw GapConstantMissing("C0 must be positive");
  const double threshold = c_tilde * C0 / std::pow(static_cast<double>(L), b);
  Potential out = V;
  for (auto& v : out.values) v = std::fmin(v, threshold);
  return out;
}

}  // namespace llab

#endif  // LLAB_DISORDER_HPP
