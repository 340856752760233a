#pragma once

#include <map>
#include <string>

#include "wave3/rational.hpp"

namespace wave3 {

// key = value run configuration ('#' comments). Unknown keys are rejected;
// flow parameters under param.<name> are kept as exact rationals for the
// symbolic layer.
struct RunConfig {
  int grid_n = 128;
  double grid_length = 6.283185307179586476925286766559;  // "2pi" accepted
  double dt = 1e-3;
  double t_end = 1.0;
  double amplitude = 0.1;
  uint64_t rng_seed = 42;
  int max_mode = 12;
  double m11_offset = 4.0;  // pump level on the f-11 component of random data
  double denominator_floor = 1e-6;
  std::string space_scheme = "spectral";  // or fd4
  double stability_limit = 2.8;
  double drift_tol = 1e-8;
  int snapshot_stride = 200;
  double seed_k = 1.0, seed_m = -1.0, seed_c = 10.0;
  double tau = 1e-2;
  double window_x0 = 0.0, window_x1 = 2.0, window_t0 = 0.1, window_t1 = 0.9;
  int window_nx = 12, window_nt = 5;
  double chain_residual_tol = 1e-6;
  int max_jet_order = 12;
  std::string appendix_reading = "b";
  std::map<std::string, Rational> params;

  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
};

}  // namespace wave3
