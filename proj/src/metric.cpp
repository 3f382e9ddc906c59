#include "wso/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace wso {

PointsMetric::PointsMetric(std::vector<double> coords, int dim, bool normalize)
    : coords_(std::move(coords)), dim_(dim) {
  if (dim_ <= 0 || coords_.size() % dim_ != 0)
    throw std::invalid_argument("PointsMetric: bad coordinate array");
  n_ = int(coords_.size() / dim_);
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(min : mn) reduction(max : mx)
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      double d = raw_distance(i, j);
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
  }
  if (n_ < 2) mn = mx = 1.0;
  if (mn <= 0.0) throw std::invalid_argument("PointsMetric: duplicate points");
  scale_ = normalize ? mn : 1.0;
  min_d_ = mn / scale_;
  max_d_ = mx / scale_;
}

double PointsMetric::raw_distance(PointId a, PointId b) const {
  const double* pa = raw(a);
  const double* pb = raw(b);
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double t = pa[i] - pb[i];
    s += t * t;
  }
  return std::sqrt(s);
}

double PointsMetric::operator()(PointId a, PointId b) const {
  if (a == b) return 0.0;
  return raw_distance(a, b) / scale_;
}

size_t TableMetric::tri_index(int n, PointId a, PointId b) {
  if (a > b) std::swap(a, b);
  return size_t(a) * n - size_t(a) * (a + 1) / 2 + (b - a - 1);
}

TableMetric::TableMetric(int n, std::vector<double> values, bool normalize,
                         bool validate_triangle) {
  n_ = n;
  values_ = std::move(values);
  if (values_.size() != size_t(n) * (n - 1) / 2)
    throw std::invalid_argument("TableMetric: wrong number of entries");
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (double v : values_) {
    if (!(v > 0.0)) throw std::invalid_argument("TableMetric: nonpositive distance");
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  if (values_.empty()) mn = mx = 1.0;
  if (normalize && mn != 1.0)
    for (double& v : values_) v /= mn;
  min_d_ = normalize ? 1.0 : mn;
  max_d_ = normalize ? mx / mn : mx;
  if (validate_triangle && n >= 3) {
    auto at = [&](int a, int b) { return values_[tri_index(n_, a, b)]; };
    auto check = [&](int a, int b, int c) {
      if (at(a, b) > at(a, c) + at(c, b) + 1e-9 * at(a, b))
        throw std::invalid_argument("TableMetric: triangle inequality violated");
    };
    if (n <= 300) {
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int c = 0; c < n; ++c)
            if (c != a && c != b) check(a, b, c);
    } else {
      std::mt19937_64 rng(0xabcdef);
      std::uniform_int_distribution<int> pick(0, n - 1);
      for (int t = 0; t < 100000; ++t) {
        int a = pick(rng), b = pick(rng), c = pick(rng);
        if (a != b && b != c && a != c) check(a, b, c);
      }
    }
  }
}

double TableMetric::operator()(PointId a, PointId b) const {
  if (a == b) return 0.0;
  return values_[tri_index(n_, a, b)];
}

PartitionMetric::PartitionMetric(std::vector<int32_t> labels, double intra,
                                 double inter)
    : labels_(std::move(labels)), intra_(intra), inter_(inter) {
  if (!(0 < intra && intra <= inter))
    throw std::invalid_argument("PartitionMetric: need 0 < intra <= inter");
  n_ = int(labels_.size());
  min_d_ = intra_;
  max_d_ = inter_;
}

double PartitionMetric::operator()(PointId a, PointId b) const {
  if (a == b) return 0.0;
  return labels_[a] == labels_[b] ? intra_ : inter_;
}

double EvalAccessor::kcenter_cost(const std::vector<PointId>& centers,
                                  const std::vector<int>& assign) const {
  double worst = 0.0;
  for (PointId p = 0; p < int(assign.size()); ++p)
    worst = std::max(worst, (*this)(p, centers[assign[p]]));
  return worst;
}

double EvalAccessor::kcluster_cost(const std::vector<PointId>& centers,
                                   const std::vector<int>& assign, int q) const {
  double total = 0.0;
  for (PointId p = 0; p < int(assign.size()); ++p) {
    double d = (*this)(p, centers[assign[p]]);
    total += q == 2 ? d * d : d;
  }
  return total;
}

}  // namespace wso
