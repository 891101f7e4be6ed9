#pragma once

#include <functional>
#include <random>
#include <vector>

#include "selfsim/trajectory.hpp"

namespace testing {

// Fixed seeds so property failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen{20240611};
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

// Physical-frame trajectory sampled from closed forms for w, w', w''.
inline selfsim::Trajectory sampled(const selfsim::Params& k, selfsim::EquationKind kind, std::vector<double> coords,
                                   const std::function<double(double)>& w, const std::function<double(double)>& dw,
                                   const std::function<double(double)>& d2w,
                                   selfsim::Frame frame = selfsim::Frame::physical_w) {
  std::vector<selfsim::Sample> s;
  for (double r : coords) s.push_back({r, w(r), dw(r), d2w(r)});
  selfsim::TrajectoryMeta m;
  m.kind = kind;
  m.frame = frame;
  m.params = k;
  return selfsim::Trajectory(std::move(s), m, true);
}

}  // namespace testing
