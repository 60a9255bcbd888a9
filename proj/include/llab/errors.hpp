#ifndef LLAB_ERRORS_HPP
#define LLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace llab {

// All numerical-contract violations carry a stable machine-readable name
// next to the human-readable message; the CLI maps the name into its
// error record and exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define LLAB_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& message)                \
        : Error(#Name, message) {}                           \
  }

LLAB_DEFINE_ERROR(NonConvergent);
LLAB_DEFINE_ERROR(AssumptionViolated);
LLAB_DEFINE_ERROR(ExponentFitFailed);
LLAB_DEFINE_ERROR(FactorMismatch);
LLAB_DEFINE_ERROR(IntervalTooShort);
LLAB_DEFINE_ERROR(NotPSD);
LLAB_DEFINE_ERROR(DimensionCap);
LLAB_DEFINE_ERROR(BracketViolated);
LLAB_DEFINE_ERROR(KernelDimensionMismatch);
LLAB_DEFINE_ERROR(NotInSpan);
LLAB_DEFINE_ERROR(WindowInvalid);
LLAB_DEFINE_ERROR(GapConstantMissing);
LLAB_DEFINE_ERROR(SupportTooWide);
LLAB_DEFINE_ERROR(ConfigInvalid);

#undef LLAB_DEFINE_ERROR

}  // namespace llab

#endif  // LLAB_ERRORS_HPP
