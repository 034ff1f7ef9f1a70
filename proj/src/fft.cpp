#include "gdnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace gdnls {
namespace {

std::mutex plan_mutex;
std::map<std::pair<int, int>, fftw_plan> plan_cache;

// FFTW planning is not thread-safe; executing a cached plan on fresh arrays is.
// FFTW_UNALIGNED lets fftw_execute_dft run on any caller buffer.
fftw_plan get_plan(int n, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  std::vector<std::complex<double>> a(n), b(n);
  fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  plan_cache.emplace(key, p);
  return p;
}

}  // namespace

void dft(const std::vector<std::complex<double>>& in,
         std::vector<std::complex<double>>& out, bool forward) {
  if (&in == &out) throw std::invalid_argument("dft: in must not alias out");
  const int n = static_cast<int>(in.size());
  out.resize(n);
  if (n == 0) return;
  fftw_plan p = get_plan(n, forward ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_execute_dft(
      p,
      reinterpret_cast<fftw_complex*>(
          const_cast<std::complex<double>*>(in.data())),
      reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace gdnls
