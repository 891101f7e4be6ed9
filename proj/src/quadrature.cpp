#include "selfsim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

constexpr std::array<double, 5> kNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                          0.9061798459386640};
constexpr std::array<double, 5> kWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                            0.4786286704993665, 0.2369268850561891};

double gauss_piece(const Trajectory& traj, double a, double b, int k, const SampleIntegrand& f) {
  const double h = (b - a) / k;
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    const double lo = a + j * h;
    const double mid = lo + 0.5 * h;
    double part = 0.0;
    for (std::size_t q = 0; q < kNodes.size(); ++q) {
      const double x = std::clamp(mid + 0.5 * h * kNodes[q], std::min(a, b), std::max(a, b));
      part += kWeights[q] * f(traj.interpolate(x));
    }
    total += 0.5 * h * part;
  }
  return total;
}

// Breakpoints: range ends plus every sample coordinate strictly inside.
std::vector<double> breakpoints(const Trajectory& traj, double lo, double hi) {
  std::vector<double> pts{lo};
  for (const auto& s : traj.ascending().samples())
    if (s.coord > lo && s.coord < hi) pts.push_back(s.coord);
  pts.push_back(hi);
  return pts;
}

}  // namespace

QuadratureResult integrate_range(const Trajectory& traj, double lo, double hi, const SampleIntegrand& f,
                                 double rel_tol) {
  double sign = 1.0;
  if (hi < lo) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  if (lo < traj.coord_min() || hi > traj.coord_max())
    throw InvalidArgument("integrate_range: range outside trajectory span");
  QuadratureResult res;
  if (lo == hi) {
    res.converged = true;
    return res;
  }
  const auto pts = breakpoints(traj, lo, hi);
  double previous = 0.0;
  for (int k = 1; k <= 64; k *= 2) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += gauss_piece(traj, pts[i], pts[i + 1], k, f);
    res.value = sign * total;
    res.subdivisions = k;
    if (k > 1 && std::abs(total - previous) <= rel_tol * std::max(std::abs(total), 1e-300)) {
      res.converged = true;
      break;
    }
    if (k > 1 && total == previous) {
      res.converged = true;
      break;
    }
    previous = total;
  }
  return res;
}

std::vector<double> cumulative_integral(const Trajectory& traj, const SampleIntegrand& f, double rel_tol) {
  const auto s = traj.samples();
  std::vector<double> out(s.size(), 0.0);
  if (s.size() < 2) return out;
  std::vector<double> pieces(s.size() - 1, 0.0);
  double previous_total = 0.0;
  for (int k = 1; k <= 64; k *= 2) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      pieces[i] = gauss_piece(traj, s[i].coord, s[i + 1].coord, k, f);
      total += pieces[i];
    }
    const bool done = k > 1 && (std::abs(total - previous_total) <= rel_tol * std::abs(total) || total == previous_total);
    previous_total = total;
    if (done) break;
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i) out[i + 1] = out[i] + pieces[i];
  return out;
}

}  // namespace selfsim
