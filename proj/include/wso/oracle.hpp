#pragma once
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "wso/metric.hpp"

namespace wso {

struct QueryLedger {
  std::atomic<uint64_t> weak_count{0};
  std::atomic<uint64_t> strong_point_count{0};
  std::atomic<uint64_t> strong_edge_count{0};
};

// Per-pair corruption bits: keyed hash of the canonical pair, drawn once.
class CorruptionMask {
 public:
  CorruptionMask(uint64_t seed, double delta) : seed_(seed), delta_(delta) {}
  bool corrupted(PointId a, PointId b) const {
    return pair_uniform(seed_, HashStream::mask, a, b) < delta_;
  }
  double delta() const { return delta_; }
  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  double delta_;
};

// Corrupted value policy. Pure function of the instance, never of query order.
struct Adversary {
  enum class Policy { none, cluster_flip, uniform_value, constant_value };
  Policy policy = Policy::none;
  // cluster_flip
  std::vector<int32_t> labels;
  double rep_intra = 0.0;
  double rep_inter = 0.0;
  // uniform_value range, constant_value
  double lo = 1.0, hi = 1.0, value = 0.0;
  uint64_t seed = 0;

  static Adversary none_policy();
  static Adversary constant(double v);
  static Adversary uniform(uint64_t seed, double lo, double hi);
  // representatives = first observed intra/inter distance in pair index order
  static Adversary cluster_flip(const Metric& m, std::vector<int32_t> labels);

  double value_for(PointId a, PointId b, double true_d) const;
  std::string name() const;
};

// Scripted corruption override used by the lower-bound generators: the
// instance decides both which pairs are corrupted and their values.
struct ScriptedCorruption {
  std::function<std::optional<double>(PointId, PointId)> lookup;
};

class WeakOracle {
 public:
  WeakOracle(const Metric& m, std::shared_ptr<QueryLedger> ledger,
             CorruptionMask mask, Adversary adv)
      : m_(&m), ledger_(std::move(ledger)), mask_(mask), adv_(std::move(adv)) {}
  WeakOracle(const Metric& m, std::shared_ptr<QueryLedger> ledger,
             ScriptedCorruption scripted)
      : m_(&m), ledger_(std::move(ledger)), mask_(0, 0.0), scripted_(std::move(scripted)) {}

  double query(PointId x, PointId y) const {
    if (x == y) throw std::invalid_argument("weak_query: self-distance");
    ledger_->weak_count.fetch_add(1, std::memory_order_relaxed);
    if (scripted_) {
      if (auto v = scripted_->lookup(x, y)) return *v;
      return (*m_)(x, y);
    }
    double d = (*m_)(x, y);
    if (!mask_.corrupted(x, y)) return d;
    return adv_.value_for(x, y, d);
  }

  bool is_corrupted(PointId x, PointId y) const {
    if (scripted_) return scripted_->lookup(x, y).has_value();
    return mask_.corrupted(x, y);
  }

  const Metric& metric() const { return *m_; }
  QueryLedger& ledger() const { return *ledger_; }

 private:
  const Metric* m_;
  std::shared_ptr<QueryLedger> ledger_;
  CorruptionMask mask_;
  Adversary adv_;
  std::optional<ScriptedCorruption> scripted_;
};

enum class StrongMode { point, edge };

class StrongOracle {
 public:
  StrongOracle(const Metric& m, std::shared_ptr<QueryLedger> ledger,
               StrongMode mode = StrongMode::point)
      : m_(&m), ledger_(std::move(ledger)), mode_(mode), revealed_(m.size(), 0) {}

  void reveal(PointId x) {
    if (mode_ == StrongMode::edge) return;
    if (!revealed_[x]) {
      revealed_[x] = 1;
      ledger_->strong_point_count.fetch_add(1, std::memory_order_relaxed);
    }
  }

  bool is_revealed(PointId x) const {
    return mode_ == StrongMode::edge || revealed_[x] != 0;
  }

  double distance(PointId x, PointId y) {
    if (x == y) {
      if (mode_ == StrongMode::edge)
        throw std::invalid_argument("strong_edge_query: self-distance");
      return 0.0;
    }
    if (mode_ == StrongMode::point) {
      if (!revealed_[x] || !revealed_[y])
        throw std::logic_error("strong distance between unrevealed points");
      return (*m_)(x, y);
    }
    if (edge_pairs_.insert(pair_key(x, y)).second)
      ledger_->strong_edge_count.fetch_add(1, std::memory_order_relaxed);
    return (*m_)(x, y);
  }

  StrongMode mode() const { return mode_; }
  QueryLedger& ledger() const { return *ledger_; }

 private:
  const Metric* m_;
  std::shared_ptr<QueryLedger> ledger_;
  StrongMode mode_;
  std::vector<uint8_t> revealed_;
  std::unordered_set<uint64_t> edge_pairs_;
};

// Sample-size scaling for delta != 1/3 (quadratic in 1/(1/2 - delta),
// normalized so delta = 1/3 is the identity).
int scaled_sample_size(int base, double delta);

}  // namespace wso
