#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrcalc {

// Error categories shared by every engine module. The witness string names
// the first offending cell in canonical order.
enum class ErrorCode {
  DuplicateName,
  MissingIdentity,
  CompositionGap,
  NonAssociative,
  SrcTgtMismatch,
  NotClosed,
  NoLimit,
  SizeCap,
  NoAdjoint,
  BoundaryMismatch,
  PentagonFailure,
  TriangleFailure,
  NonInvertibleCoherence,
  CoherenceFailure,
  MissingCertificate,
  NonUniqueMediator,
  PreconditionFailed,
  NotOverF,
  NoProducts,
  BadInput,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string witness = "")
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        witness_(std::move(witness)) {}

  ErrorCode code() const { return code_; }
  const std::string& witness() const { return witness_; }

 private:
  ErrorCode code_;
  std::string witness_;
};

// Default cap on morphisms of any constructed category; functor categories
// explode exponentially, so every constructor takes a cap.
inline constexpr std::size_t kDefaultCap = 10000;

struct Caps {
  std::size_t max_morphisms = kDefaultCap;
  std::size_t max_objects = kDefaultCap;
};

// Global worker count for embarrassingly parallel scans. Results are always
// reduced in canonical order, so the setting never changes any output.
void set_parallelism(unsigned workers);
unsigned parallelism();

// Runs fn(i) for i in [0, n) across the configured workers and returns the
// first i, in canonical order, for which fn returned false; n if none.
std::size_t parallel_find_first_failure(std::size_t n,
                                        const std::function<bool(std::size_t)>& fn);

}  // namespace corrcalc
