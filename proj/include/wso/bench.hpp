#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "wso/instances.hpp"
#include "wso/kcenter.hpp"
#include "wso/kcluster.hpp"

namespace wso {

struct RunRecord {
  std::string algorithm;
  std::string suite;
  int n = 0, k = 0;
  double delta = 0.0;
  double scale = 1.0;
  uint64_t seed = 0;
  uint64_t strong_point_count = 0;
  uint64_t strong_edge_count = 0;
  uint64_t weak_count = 0;
  double cost = 0.0;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string note;
};

struct Clustering {
  std::vector<PointId> centers;
  std::vector<int> assignment;  // point -> index into centers
  double cost = 0.0;            // under the true metric (objective-dependent)
  uint64_t strong_point_count = 0;
  uint64_t weak_count = 0;
};

enum class BaselineMode { weak_only, strong_full };

// Gonzalez farthest-first from point 0. Weak mode seeds and assigns via the
// weak oracle but is scored on true distances; strong mode reveals everything.
Clustering baseline_farthest_first(BaselineMode mode, int k, const Metric& metric,
                                   const WeakOracle& wo);

// D^q seeding (q=2); strong mode runs Lloyd on revealed coordinates when the
// ground truth is coordinate-form, and reports centroid cost.
Clustering baseline_kmeanspp(BaselineMode mode, int k, int q, const Metric& metric,
                             const WeakOracle& wo, uint64_t seed);

struct SweepConfig {
  std::string suite;  // sbm-kcenter | sbm-kmeans | mst-lb
  int n = 10000;
  int k = 7;
  std::vector<double> deltas{0.1, 0.2, 0.3};
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<double> scales{0.075, 0.1, 0.125};
  int q = 2;
  double tradeoff_exponent = 10.0;
};

std::vector<RunRecord> run_sweep(const SweepConfig& cfg);

// argmin strong_point_count * cost^exponent, ties by fewer queries then seed.
const RunRecord& select_tradeoff(const std::vector<RunRecord>& records,
                                 double exponent = 10.0);

void write_records_csv(const std::string& path, const std::vector<RunRecord>& rs);
void write_tradeoff_json(const std::string& path, const SweepConfig& cfg,
                         const std::vector<RunRecord>& rs);
void write_ledger_json(const std::string& path, const std::vector<RunRecord>& rs);

}  // namespace wso
