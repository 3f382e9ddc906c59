#pragma once
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wso/hash.hpp"

namespace wso {

// Hidden ground-truth metric. Algorithms never touch this directly; they go
// through the oracles. Cost evaluation uses EvalAccessor (uncounted).
class Metric {
 public:
  virtual ~Metric() = default;
  virtual double operator()(PointId a, PointId b) const = 0;
  int size() const { return n_; }
  double min_distance() const { return min_d_; }
  double max_distance() const { return max_d_; }
  double aspect_ratio() const { return max_d_ / min_d_; }

 protected:
  int n_ = 0;
  double min_d_ = 1.0;
  double max_d_ = 1.0;
};

// Euclidean points, distances normalized so the minimum pairwise distance is 1.
class PointsMetric final : public Metric {
 public:
  PointsMetric(std::vector<double> coords, int dim, bool normalize = true);
  double operator()(PointId a, PointId b) const override;
  int dim() const { return dim_; }
  double scale() const { return scale_; }  // normalized = raw / scale
  const double* raw(PointId a) const { return coords_.data() + size_t(a) * dim_; }
  double raw_distance(PointId a, PointId b) const;

 private:
  std::vector<double> coords_;
  int dim_;
  double scale_ = 1.0;
};

// Packed upper-triangle distance table.
class TableMetric final : public Metric {
 public:
  // values: n*(n-1)/2 doubles, row-major upper triangle (0,1),(0,2),...,(n-2,n-1)
  TableMetric(int n, std::vector<double> values, bool normalize = false,
              bool validate_triangle = true);
  double operator()(PointId a, PointId b) const override;
  static size_t tri_index(int n, PointId a, PointId b);
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Two-valued metric induced by a partition: intra within a part, inter across.
class PartitionMetric final : public Metric {
 public:
  PartitionMetric(std::vector<int32_t> labels, double intra, double inter);
  double operator()(PointId a, PointId b) const override;
  const std::vector<int32_t>& labels() const { return labels_; }

 private:
  std::vector<int32_t> labels_;
  double intra_, inter_;
};

// Uncounted accessor for scoring solutions against the true metric.
class EvalAccessor {
 public:
  explicit EvalAccessor(const Metric& m) : m_(&m) {}
  double operator()(PointId a, PointId b) const { return a == b ? 0.0 : (*m_)(a, b); }
  const Metric& metric() const { return *m_; }
  // max_p d(p, centers[assign[p]]); assign maps point -> index into centers
  double kcenter_cost(const std::vector<PointId>& centers,
                      const std::vector<int>& assign) const;
  double kcluster_cost(const std::vector<PointId>& centers,
                       const std::vector<int>& assign, int q) const;

 private:
  const Metric* m_;
};

}  // namespace wso
