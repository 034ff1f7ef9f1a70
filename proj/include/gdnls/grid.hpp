#pragma once

namespace gdnls {

// Smallest 5-smooth integer >= n (sizes FFTW handles at O(M log M) without
// falling back to generic algorithms).
int good_size(int n);

// Collocation grid used for pointwise products. npoints >= oversample*(2*max_mode+1)
// so that products of a few band-limited factors stay alias-free when read back.
struct Grid {
  int max_mode;
  int npoints;
  explicit Grid(int n_max, int oversample = 4);
};

// Sharp frequency cutoff: keeps modes |n| <= cutoff_mode, zeroes the rest.
// cutoff_mode < 0 means no cutoff beyond the ambient band of the field.
struct Cutoff {
  int cutoff_mode = -1;

  static Cutoff none() { return Cutoff{-1}; }
  static Cutoff at_mode(int k) { return Cutoff{k}; }
  static Cutoff from_epsilon(double eps);  // cutoff_mode = floor(1/eps)

  bool active_for(int max_mode) const {
    return cutoff_mode >= 0 && cutoff_mode < max_mode;
  }
};

}  // namespace gdnls
