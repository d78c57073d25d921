#pragma once

#include <stdexcept>
#include <string>

namespace trimlab {

// Every failure raised by the library derives from Error. The category tells
// callers (the CLI in particular) whether the input was malformed or the
// numerics degenerated.
class Error : public std::runtime_error {
 public:
  enum class Category { Input, Numeric, Internal };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

#define TRIMLAB_DEFINE_ERROR(Name, Cat)                     \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& what)                  \
        : Error(Error::Category::Cat, what) {}              \
  };

// Argument outside the mathematical domain of an operation.
TRIMLAB_DEFINE_ERROR(DomainError, Input)
// quantile(1) requested on a support that is unbounded above.
TRIMLAB_DEFINE_ERROR(UnboundedQuantileError, Input)
TRIMLAB_DEFINE_ERROR(EmptySampleError, Input)
// 0 <= k < n - m <= n violated.
TRIMLAB_DEFINE_ERROR(InvalidTrimError, Input)
TRIMLAB_DEFINE_ERROR(ScheduleError, Input)
// Shifted quantile argument left (0,1): n too small for the requested t.
TRIMLAB_DEFINE_ERROR(RangeError, Input)
// Moment bound queried outside its validity window.
TRIMLAB_DEFINE_ERROR(OutOfWindowError, Input)
TRIMLAB_DEFINE_ERROR(ConfigError, Input)
// A required moment is infinite or an integrand diverges at an included endpoint.
TRIMLAB_DEFINE_ERROR(MomentError, Numeric)
// xi_a == xi_{1-b}, or a zero scale where a positive one is required.
TRIMLAB_DEFINE_ERROR(DegenerateWindowError, Numeric)
// Two evaluation routes that must agree did not. Signals a bug, not bad data.
TRIMLAB_DEFINE_ERROR(ConsistencyError, Internal)

#undef TRIMLAB_DEFINE_ERROR

}  // namespace trimlab
