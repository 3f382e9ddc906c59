#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "wso/oracle.hpp"

namespace wso {

struct CarveResult {
  std::vector<PointId> centers;
  std::vector<PointId> assignment_points;  // parallel arrays: point -> center
  std::vector<PointId> assignment_centers;
  double radius_used = 0.0;
};

// Greedy ball carving over revealed points: repeatedly take the lowest-index
// uncovered point as a center and remove everything within R of it.
// > k centers certifies R < 2 * OPT.
CarveResult greedy_ball_carve(const std::vector<PointId>& S, double R,
                              StrongOracle& so);

// Lower median of the weak distances from x to U.
double median_estimate(PointId x, const std::vector<PointId>& U,
                       const WeakOracle& wo);

struct KCenterConfig {
  int k = 1;
  double epsilon = 0.1;
  double delta = 1.0 / 3.0;
  uint64_t seed = 0;
  // Sampling multipliers: |S| ~ c_S * k * log2 n, |T| ~ c_T * k * log2 n
  // (delta-scaled), completeness threshold ~ c_complete * log2 n (delta-scaled).
  double c_S = 4.0;
  double c_T = 80.0;
  double c_complete = 4.0;
  double c_heavy = 10.0;  // heaviness threshold n / (c_heavy * k)
  double scale = 1.0;     // multiplies c_S and c_T together
  int max_iterations = 64;
  double min_coverage = 0.9;  // abort an R-probe when an iteration covers less
  // Order statistic used for ball assignment. Biased above the median so a
  // corrupted assignment needs > assign_quantile corruption (one-sided), while
  // coverage survives up to 1 - assign_quantile corruption.
  double assign_quantile = 0.55;
};

struct SampleCoverResult {
  bool aborted = false;
  std::vector<PointId> candidates;            // candidate centers (revealed)
  std::vector<PointId> candidate_of;          // per point: its candidate, -1 never
  std::vector<double> iteration_coverage;     // fraction covered per outer loop
};

// One radius probe: sample S and T, carve S at R, find complete balls
// B(c, 3R), assign remaining points whose median weak estimate is <= 6R.
SampleCoverResult sample_and_cover(const std::vector<PointId>& X, double R,
                                   const KCenterConfig& cfg, const WeakOracle& wo,
                                   StrongOracle& so);

struct KCenterSolution {
  std::vector<PointId> centers;
  std::vector<int> assignment;  // point -> index into centers
  double true_cost = 0.0;
  double R_final = 0.0;
  int level_final = 0;
  std::vector<int> probed_levels;
  std::vector<double> iteration_coverage;
  uint64_t weak_count = 0, strong_point_count = 0, strong_edge_count = 0;
};

// Binary search over R = (1+eps)^l; final carve of the candidate centers.
KCenterSolution kcenter_solve(const Metric& metric, const WeakOracle& wo,
                              StrongOracle& so, const KCenterConfig& cfg);

}  // namespace wso
