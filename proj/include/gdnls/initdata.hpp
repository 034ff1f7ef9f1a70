#pragma once
#include <cstdint>

#include "gdnls/field.hpp"

namespace gdnls {

// Deterministic splitmix64 stream; normal() is Box-Muller on top of it.
struct Rng {
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // standard normal

 private:
  std::uint64_t state;
  double cached = 0.0;
  bool has_cached = false;
};

// Decorrelated child seed for task index `stream` under one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

SpectralField plane_wave(int n_max, double amplitude, int wavenumber);

// amplitude * exp(-(x-center)^2 / (2 width^2)), periodized.
SpectralField gaussian_bump(int n_max, double amplitude, double width, double center);

// Modes |n| <= band get (N(0,1) + i N(0,1)) / (1+|n|)^decay.
SpectralField random_band(int n_max, int band, double decay, std::uint64_t seed);

// Periodized Gaussian envelope of the given width riding carrier frequency:
// amplitude * env(x - center) * e^{2 pi i carrier (x - center)} * e^{i phase}.
SpectralField wave_packet(int n_max, int carrier, double width, double amplitude,
                          double center, double phase);

// Fixed low-frequency trio (modes 0, 1, -2) whose |.|^2 has an O(amp^2)
// gradient near x = 0.75; pairs with wave_packet centered there.
SpectralField structured_low(int n_max, double amp);

SpectralField scaled_to_h1(SpectralField f, double target_h1);

}  // namespace gdnls
