#pragma once

#include <complex>
#include <vector>

namespace minfo {

/// In-place DFT (FFTW backend, per-thread plan cache, FFTW_ESTIMATE plans so
/// results are input-independent and reproducible). Inverse scales by 1/N.
void fft_inplace(std::vector<std::complex<double>>& v, bool inverse);

}  // namespace minfo
