#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace minfo {

/// Number of hardware threads, at least 1.
int hardware_threads();

/// Runs fn(begin, end) over contiguous chunks of [0, n) on `threads` threads.
/// Results written by the chunks must go to disjoint, preallocated storage;
/// reductions happen afterwards in index order so the outcome is independent
/// of the thread count.
void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

/// Compensated (Kahan) accumulator; used for all per-sample reductions so
/// serial and parallel paths agree to well below 1e-9 bits.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

double kahan_total(std::span<const double> values);

/// Standard error of the mean of per-sample contributions, estimated by a
/// delete-one-block jackknife over `blocks` contiguous blocks.
double block_jackknife_stderr(std::span<const double> values, int blocks = 10);

}  // namespace minfo
