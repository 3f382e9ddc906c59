#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wso/metric.hpp"
#include "wso/oracle.hpp"

namespace wso {

struct LabeledInstance {
  std::shared_ptr<Metric> metric;
  std::vector<int32_t> labels;  // empty if unlabeled
  int k = 0;
  uint64_t seed = 0;
  std::string kind;
};

// Gaussian clusters N(mu, I) with mu_i = 1e5 on axis i, dimension k,
// labels interleaved (point i -> cluster i mod k), l2 metric.
LabeledInstance gen_sbm(int n, int k, uint64_t seed);

// Corruption policy of the experiments: corrupted intra pairs flip to a fixed
// representative inter-cluster distance and vice versa.
Adversary policy_cluster_flip(const Metric& m, const std::vector<int32_t>& labels);

// A hard instance plus its scripted weak oracle. The scripted corruption
// pattern is part of the construction; `corrupt_pairs` reports it for audit.
struct ScriptedInstance {
  std::shared_ptr<Metric> metric;
  ScriptedCorruption weak;
  std::vector<std::pair<PointId, PointId>> corrupt_pairs;
  std::string kind;
  int block_size = 0;
  int matched = 0;  // matched pairs (points or blocks, per construction)
};

// k-center hard instance: S = first 3(k-1)/2 points holds a random perfect
// matching at distance 1, O is a unit-diameter cluster, everything else is c.
// The weak oracle hides the first corrupted matched pair at value c.
ScriptedInstance gen_kcenter_lb(int k, double c, int n, uint64_t seed, double delta = 1.0 / 3.0);

// Metric MST hard instance: blocks of size ceil(sqrt(log2 n)), intra 1 /
// inter k; greedily matched block pairs are merged in the weak metric.
ScriptedInstance gen_mst_metric_lb(int n, uint64_t seed, double delta = 1.0 / 3.0);

// Non-metric variant: point-level matching, one-sided fake unit distances
// that violate the triangle inequality.
ScriptedInstance gen_mst_nonmetric_lb(int n, uint64_t seed, double delta = 1.0 / 3.0);

// Metric-preserving corruption for a labeled instance: a seeded matching over
// cluster pairs collapses all cross distances of matched clusters to a small
// constant; the result provably stays a metric on well-separated instances.
ScriptedInstance policy_metric_merge(const LabeledInstance& inst, uint64_t seed);

// CSV points: one point per row, optional trailing integer label column.
LabeledInstance load_points_csv(const std::string& path);
void save_points_csv(const std::string& path, const PointsMetric& m,
                     const std::vector<int32_t>& labels);

// Binary distance table, 16-byte header: magic "WSOM", u32 version, u64 n,
// then n(n-1)/2 little-endian f64 (upper triangle, row-major).
void save_table(const std::string& path, const Metric& m);
std::shared_ptr<TableMetric> load_table(const std::string& path);

}  // namespace wso
