#include "minfo/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace minfo {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  std::size_t n = 0;
  fftw_complex* buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  PlanPair() = default;
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    if (!buf) return;
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
    fftw_free(buf);
  }

  void ensure(std::size_t size) {
    if (n == size) return;
    this->~PlanPair();
    new (this) PlanPair();
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = fftw_alloc_complex(size);
    if (!buf) throw std::bad_alloc();
    const int ni = static_cast<int>(size);
    forward = fftw_plan_dft_1d(ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse = fftw_plan_dft_1d(ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    n = size;
  }
};

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& v, bool inv) {
  if (v.empty()) throw std::invalid_argument("fft: empty input");
  // one cached plan pair per thread per size; execution needs no lock
  thread_local std::unordered_map<std::size_t, PlanPair> cache;
  PlanPair& plan = cache[v.size()];
  plan.ensure(v.size());

  // std::complex<double> is layout-compatible with fftw_complex (double[2])
  std::memcpy(static_cast<void*>(plan.buf), static_cast<const void*>(v.data()),
              v.size() * sizeof(fftw_complex));
  fftw_execute(inv ? plan.inverse : plan.forward);
  std::memcpy(static_cast<void*>(v.data()), static_cast<const void*>(plan.buf),
              v.size() * sizeof(fftw_complex));
  if (inv) {
    const double scale = 1.0 / static_cast<double>(v.size());
    for (auto& z : v) z *= scale;
  }
}

}  // namespace minfo
