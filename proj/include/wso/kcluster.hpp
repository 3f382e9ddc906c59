#pragma once
#include <cstdint>
#include <vector>

#include "wso/oracle.hpp"

namespace wso {

struct KClusterConfig {
  int k = 1;
  int q = 2;  // 1 = k-median, 2 = k-means
  double delta = 1.0 / 3.0;
  uint64_t seed = 0;
  double threshold_scale = 1.0;  // multiplies the heavy-ball threshold
  double cap_scale = 0.05;       // cap = 18 * k * log2(n)^2 * cap_scale
  bool shuffle_stream = false;
  double q_quantile = 0.55;  // order statistic for the heavy-ball distance
  int q_candidates = 256;    // balls evaluated per stream point
  // Stop the guess search once the bracket is this many exponents wide; the
  // last aborting probes only burn strong reveals without changing the output.
  int guess_gap_stop = 8;
};

// Fixed-size heavy balls: for each coreset member, the `threshold` nearest
// members (true distances, all revealed) and that radius.
class HeavyBallIndex {
 public:
  explicit HeavyBallIndex(int threshold) : threshold_(threshold) {}
  void insert(PointId x, StrongOracle& so);
  int size() const { return int(members_.size()); }
  int threshold() const { return threshold_; }
  const std::vector<PointId>& members() const { return members_; }
  PointId member(int i) const { return members_[i]; }
  double radius(int i) const { return radii_[i]; }
  const std::vector<int>& ball(int i) const { return balls_[i]; }  // member indices

 private:
  int threshold_;
  std::vector<PointId> members_;
  std::vector<std::vector<double>> dists_;  // pairwise member distances, row per member
  std::vector<std::vector<int>> balls_;
  std::vector<double> radii_;
  void rebuild_ball(int i);
};

// Q(y, S) = min over candidate members x of an order statistic of the weak
// distances from y to ball(x), plus 6 * r_x. The statistic is biased above
// the median (default 0.55) so corrupting it needs > 55% bad pairs; only a
// fixed strided subset of ~`candidates` member balls is evaluated, which
// keeps the one-sided bound Q >= d(y, S) and is much cheaper.
// Returns the value and the minimizing member index.
struct HeavyBallDistance {
  double value;
  int member_index;
};
HeavyBallDistance heavy_ball_distance(PointId y, const HeavyBallIndex& index,
                                      const WeakOracle& wo, double quantile = 0.55,
                                      int candidates = 64);

struct Coreset {
  std::vector<PointId> members;
  std::vector<int64_t> weights;
  std::vector<int> stream_assignment;  // point -> member index, -1 for members
  bool aborted = false;
  int processed = 0;
};

// Streaming coreset for a fixed OPT guess; aborts past the sample cap.
// Per-point admission draws are keyed by (seed, point) and shared across
// guesses so the abort predicate is monotone in the guess.
Coreset coreset_stream(const std::vector<PointId>& X, double opt_guess,
                       const KClusterConfig& cfg, const WeakOracle& wo,
                       StrongOracle& so);

struct GuessResult {
  double opt_guess = 0.0;
  Coreset coreset;
  int probes = 0;
};

// Binary search over powers of two in [n, n * aspect^q] for the smallest
// returning guess.
GuessResult guess_opt(const std::vector<PointId>& X, const KClusterConfig& cfg,
                      const WeakOracle& wo, StrongOracle& so);

// Weighted ++ seeding plus local improvement over coreset members.
std::vector<PointId> weighted_postcluster(const Coreset& coreset, int k, int q,
                                          uint64_t seed, const EvalAccessor& eval);

struct KClusterSolution {
  std::vector<PointId> centers;
  std::vector<int> assignment;  // point -> index into centers
  double true_cost = 0.0;
  double opt_guess_final = 0.0;
  int coreset_size = 0;
  int guess_probes = 0;
  uint64_t weak_count = 0, strong_point_count = 0, strong_edge_count = 0;
};

KClusterSolution kcluster_solve(const Metric& metric, const WeakOracle& wo,
                                StrongOracle& so, const KClusterConfig& cfg);

// Heavy-ball threshold: max(8 log2 n, 32), delta-scaled, times threshold_scale.
int kcluster_threshold(int n, double delta, double threshold_scale = 1.0);
int kcluster_cap(int n, int k, double cap_scale);

}  // namespace wso
