#include "minfo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

namespace minfo {

int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t t = threads < 1 ? 1 : static_cast<std::size_t>(threads);
  t = std::min(t, n);
  if (t <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::vector<std::exception_ptr> errors(t);
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t begin = w * n / t;
    const std::size_t end = (w + 1) * n / t;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double kahan_total(std::span<const double> values) {
  KahanSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double block_jackknife_stderr(std::span<const double> values, int blocks) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  std::size_t b = std::min<std::size_t>(std::max(blocks, 2), n);
  std::vector<double> means(b);
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t begin = i * n / b;
    const std::size_t end = (i + 1) * n / b;
    KahanSum acc;
    for (std::size_t j = begin; j < end; ++j) acc.add(values[j]);
    means[i] = acc.value() / static_cast<double>(end - begin);
  }
  KahanSum macc;
  for (double m : means) macc.add(m);
  const double mbar = macc.value() / static_cast<double>(b);
  KahanSum vacc;
  for (double m : means) vacc.add((m - mbar) * (m - mbar));
  // sd of block means / sqrt(B): delete-one-block jackknife of the mean
  return std::sqrt(vacc.value() / (static_cast<double>(b) * static_cast<double>(b - 1)));
}

}  // namespace minfo
