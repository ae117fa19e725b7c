#pragma once

#include <random>

#include "tracefem/study.hpp"

namespace tracefem::testing {

/// Band mesh, cut complex and P2 space of the unit sphere with n cells per axis.
inline LevelProblem sphere_level(int cells, int variant = 0) {
  StudyConfig config;
  config.variant = variant;
  return build_level(config, cells);
}

inline Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace tracefem::testing
