#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace minrnn {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// Error taxonomy. Every failure class the CLI distinguishes maps to one of
// these; everything derives from minrnn::error so callers can catch broadly.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct dim_error : error {        // shape/rank mismatch
  using error::error;
};
struct domain_error : error {     // log of negative, div by zero, NaN in debug
  using error::error;
};
struct contract_error : error {   // API precondition violated
  using error::error;
};
struct data_error : error {       // bad input data (corpus, tokens)
  using error::error;
};
struct format_error : error {     // checkpoint/file format problems
  using error::error;
};
struct usage_error : error {      // CLI misuse
  using error::error;
};

inline void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}
inline int threads() { return omp_get_max_threads(); }

// NaN policy: when enabled, any op that produces a NaN throws domain_error.
// Defaults on for debug builds, off for release (NaN then propagates).
inline bool& nan_checks() {
#ifdef NDEBUG
  static bool enabled = false;
#else
  static bool enabled = true;
#endif
  return enabled;
}

}  // namespace minrnn
