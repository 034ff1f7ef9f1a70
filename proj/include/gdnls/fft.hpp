#pragma once
#include <complex>
#include <vector>

namespace gdnls {

// Complex DFT of length in.size() with cached FFTW plans; safe to call from
// multiple threads. in and out must be distinct vectors; out is resized.
//   forward:  out[k] = sum_j in[j] e^{-2 pi i jk/M}
//   backward: out[j] = sum_k in[k] e^{+2 pi i jk/M}   (unnormalized)
void dft(const std::vector<std::complex<double>>& in,
         std::vector<std::complex<double>>& out, bool forward);

}  // namespace gdnls
