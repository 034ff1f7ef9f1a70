#include "gdnls/initdata.hpp"

#include <cmath>
#include <stdexcept>

#include "gdnls/spectral.hpp"

namespace gdnls {

std::uint64_t Rng::next_u64() {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached) {
    has_cached = false;
    return cached;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = two_pi * uniform();
  cached = r * std::sin(a);
  has_cached = true;
  return r * std::cos(a);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  Rng mix(master ^ (0x510e527fade682d1ull * (stream + 1)));
  return mix.next_u64();
}

SpectralField plane_wave(int n_max, double amplitude, int wavenumber) {
  if (std::abs(wavenumber) > n_max)
    throw std::invalid_argument("plane_wave: wavenumber outside band");
  SpectralField f(n_max);
  f.mode(wavenumber) = amplitude;
  return f;
}

namespace {

// Periodized envelope sum_k env((x - center) + k); five images are plenty for
// widths below ~0.2.
template <class Env>
SpectralField from_envelope(int n_max, double center, Env env) {
  Grid g(n_max);
  std::vector<cdouble> samples(g.npoints);
  for (int j = 0; j < g.npoints; ++j) {
    const double x = static_cast<double>(j) / g.npoints;
    cdouble v(0.0);
    for (int k = -4; k <= 4; ++k) v += env(x - center + k);
    samples[j] = v;
  }
  return to_spectral(samples, n_max);
}

}  // namespace

SpectralField gaussian_bump(int n_max, double amplitude, double width, double center) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be > 0");
  return from_envelope(n_max, center, [&](double y) {
    return cdouble(amplitude * std::exp(-y * y / (2.0 * width * width)));
  });
}

SpectralField random_band(int n_max, int band, double decay, std::uint64_t seed) {
  if (band > n_max) throw std::invalid_argument("random_band: band exceeds max_mode");
  Rng rng(seed);
  SpectralField f(n_max);
  for (int n = -band; n <= band; ++n) {
    const double re = rng.normal(), im = rng.normal();
    f.mode(n) = cdouble(re, im) / std::pow(1.0 + std::abs(n), decay);
  }
  return f;
}

SpectralField wave_packet(int n_max, int carrier, double width, double amplitude,
                          double center, double phase) {
  if (!(width > 0.0)) throw std::invalid_argument("wave_packet: width must be > 0");
  const cdouble rot = std::polar(1.0, phase);
  return from_envelope(n_max, center, [&](double y) {
    const double env = amplitude * std::exp(-y * y / (2.0 * width * width));
    return env * rot * std::polar(1.0, two_pi * carrier * y);
  });
}

SpectralField structured_low(int n_max, double amp) {
  SpectralField f(n_max);
  f.mode(0) = 0.8 * amp;
  f.mode(1) = 0.7 * amp;
  f.mode(-2) = 0.2 * amp;
  return f;
}

SpectralField scaled_to_h1(SpectralField f, double target_h1) {
  const double h1 = sobolev_norm(f, 1.0);
  if (!(h1 > 0.0)) throw std::invalid_argument("scaled_to_h1: zero field");
  const double s = target_h1 / h1;
  for (cdouble& c : f.coeff) c *= s;
  return f;
}

}  // namespace gdnls
