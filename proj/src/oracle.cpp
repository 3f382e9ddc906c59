#include "wso/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace wso {

Adversary Adversary::none_policy() { return Adversary{}; }

Adversary Adversary::constant(double v) {
  Adversary a;
  a.policy = Policy::constant_value;
  a.value = v;
  return a;
}

Adversary Adversary::uniform(uint64_t seed, double lo, double hi) {
  Adversary a;
  a.policy = Policy::uniform_value;
  a.seed = seed;
  a.lo = lo;
  a.hi = hi;
  return a;
}

Adversary Adversary::cluster_flip(const Metric& m, std::vector<int32_t> labels) {
  if (int(labels.size()) != m.size())
    throw std::invalid_argument("cluster_flip: label count mismatch");
  Adversary a;
  a.policy = Policy::cluster_flip;
  bool have_intra = false, have_inter = false;
  for (PointId x = 0; x < m.size() && !(have_intra && have_inter); ++x) {
    for (PointId y = x + 1; y < m.size() && !(have_intra && have_inter); ++y) {
      if (labels[x] == labels[y] && !have_intra) {
        a.rep_intra = m(x, y);
        have_intra = true;
      } else if (labels[x] != labels[y] && !have_inter) {
        a.rep_inter = m(x, y);
        have_inter = true;
      }
    }
  }
  if (!have_intra || !have_inter)
    throw std::invalid_argument("cluster_flip: need both intra and inter pairs");
  a.labels = std::move(labels);
  return a;
}

double Adversary::value_for(PointId a, PointId b, double true_d) const {
  switch (policy) {
    case Policy::none:
      return true_d;
    case Policy::constant_value:
      return value;
    case Policy::uniform_value:
      return lo + (hi - lo) * pair_uniform(seed, HashStream::adversary, a, b);
    case Policy::cluster_flip:
      return labels[a] == labels[b] ? rep_inter : rep_intra;
  }
  return true_d;
}

std::string Adversary::name() const {
  switch (policy) {
    case Policy::none: return "none";
    case Policy::constant_value: return "constant";
    case Policy::uniform_value: return "uniform";
    case Policy::cluster_flip: return "cluster-flip";
  }
  return "?";
}

int scaled_sample_size(int base, double delta) {
  if (delta >= 0.5)
    throw std::invalid_argument("scaled_sample_size: delta must be < 1/2");
  if (delta <= 0.0) throw std::invalid_argument("scaled_sample_size: delta must be > 0");
  double factor = 1.0 / ((0.5 - delta) * (0.5 - delta)) / 36.0;
  return int(std::ceil(double(base) * factor - 1e-9));
}

}  // namespace wso
