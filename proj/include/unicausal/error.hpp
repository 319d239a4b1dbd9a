#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unicausal {

/// Base class for every failure raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation would exceed one of the configured size guards.
class SizeGuardError : public Error {
 public:
  SizeGuardError(std::string guard, std::size_t limit, std::size_t requested)
      : Error("size guard " + guard + "=" + std::to_string(limit) +
              " exceeded (requested " + std::to_string(requested) + ")"),
        guard_(std::move(guard)),
        limit_(limit),
        requested_(requested) {}

  const std::string& guard() const noexcept { return guard_; }
  std::size_t limit() const noexcept { return limit_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::string guard_;
  std::size_t limit_;
  std::size_t requested_;
};

/// Size guards shared by every constructor and enumerator.
///
/// Enumeration in this library is exhaustive and therefore exponential; the
/// guards make that cost explicit instead of letting a call run unbounded.
struct Limits {
  std::size_t max_objects = 12;
  std::size_t max_morphisms = 64;
  /// Largest element set accepted in a user-supplied set-valued functor.
  std::size_t max_set = 8;
  /// Bound on candidate assignments in any exhaustive search (natural
  /// transformation spaces, limit tuples, joint tables, derived categories).
  std::size_t max_assignments = 100000;
};

namespace detail {

/// Saturating multiply; used to size search spaces without overflow.
inline std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > static_cast<std::size_t>(-1) / b) return static_cast<std::size_t>(-1);
  return a * b;
}

inline std::size_t sat_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

inline void guard(const char* name, std::size_t limit, std::size_t requested) {
  if (requested > limit) throw SizeGuardError(name, limit, requested);
}

}  // namespace detail
}  // namespace unicausal
