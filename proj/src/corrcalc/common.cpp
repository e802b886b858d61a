#include "corrcalc/common.hpp"

#include <atomic>
#include <future>
#include <thread>

namespace corrcalc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::MissingIdentity: return "MissingIdentity";
    case ErrorCode::CompositionGap: return "CompositionGap";
    case ErrorCode::NonAssociative: return "NonAssociative";
    case ErrorCode::SrcTgtMismatch: return "SrcTgtMismatch";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NoLimit: return "NoLimit";
    case ErrorCode::SizeCap: return "SizeCap";
    case ErrorCode::NoAdjoint: return "NoAdjoint";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::PentagonFailure: return "PentagonFailure";
    case ErrorCode::TriangleFailure: return "TriangleFailure";
    case ErrorCode::NonInvertibleCoherence: return "NonInvertibleCoherence";
    case ErrorCode::CoherenceFailure: return "CoherenceFailure";
    case ErrorCode::MissingCertificate: return "MissingCertificate";
    case ErrorCode::NonUniqueMediator: return "NonUniqueMediator";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NotOverF: return "NotOverF";
    case ErrorCode::NoProducts: return "NoProducts";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "UnknownError";
}

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_parallelism(unsigned workers) { g_workers = workers == 0 ? 1 : workers; }

unsigned parallelism() { return g_workers.load(); }

std::size_t parallel_find_first_failure(std::size_t n,
                                        const std::function<bool(std::size_t)>& fn) {
  unsigned workers = parallelism();
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i)
      if (!fn(i)) return i;
    return n;
  }
  std::atomic<std::size_t> first{n};
  std::vector<std::future<void>> futs;
  futs.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t i = lo; i < hi && i < first.load(); ++i) {
        if (!fn(i)) {
          std::size_t cur = first.load();
          while (i < cur && !first.compare_exchange_weak(cur, i)) {
          }
          return;
        }
      }
    }));
  }
  for (auto& f : futs) f.get();
  return first.load();
}

}  // namespace corrcalc
