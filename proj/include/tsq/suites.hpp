#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tsq/qcore.hpp"
#include "tsq/report.hpp"

namespace tsq {

struct SuiteConfig {
  long samples = 24;
  // Bipartite dims for discord/correlation checks; unset cycles 2x2 and 2x3.
  // Single-system coherence checks always cycle d = 2, 3, 4.
  std::optional<Dims> dims;
  std::vector<double> qs{0.3, 0.5, 1.5, 2.0};
  std::uint64_t seed = 42;
  int threads = 0;  // 0: TSQ_THREADS, else hardware concurrency

  int basis_restarts = 16;
  int roof_restarts = 4;
  int roof_max_iters = 600;
  int d3_restarts = 8;
  bool timing = false;

  /// Throws DimMismatch for dims above 4 per side and QOutOfRange for bad q.
  void validate() const;
};

SuiteReport suite_inequalities(const SuiteConfig& config);
SuiteReport suite_monotonicity(const SuiteConfig& config);
SuiteReport suite_claim_audit(const SuiteConfig& config);

/// Worker count: `requested` if positive, else TSQ_THREADS if set and
/// positive, else the hardware concurrency.
int worker_count(int requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

}  // namespace tsq
