#include "wso/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace wso {

LabeledInstance gen_sbm(int n, int k, uint64_t seed) {
  if (k > n || k < 1) throw std::invalid_argument("gen_sbm: need 1 <= k <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> coords(size_t(n) * k);
  std::vector<int32_t> labels(n);
  for (int i = 0; i < n; ++i) {
    int c = i % k;
    labels[i] = c;
    for (int j = 0; j < k; ++j)
      coords[size_t(i) * k + j] = (j == c ? 1e5 : 0.0) + gauss(rng);
  }
  LabeledInstance inst;
  inst.metric = std::make_shared<PointsMetric>(std::move(coords), k, true);
  inst.labels = std::move(labels);
  inst.k = k;
  inst.seed = seed;
  inst.kind = "sbm";
  return inst;
}

Adversary policy_cluster_flip(const Metric& m, const std::vector<int32_t>& labels) {
  return Adversary::cluster_flip(m, labels);
}

ScriptedInstance gen_kcenter_lb(int k, double c, int n, uint64_t seed, double delta) {
  if (c < 1.0) throw std::invalid_argument("gen_kcenter_lb: need c >= 1");
  bool even = (k % 2 == 0);
  int kk = even ? k - 1 : k;  // even k adds one far point and reduces to odd
  if (kk < 3) throw std::invalid_argument("gen_kcenter_lb: k too small");
  int s_size = 3 * (kk - 1) / 2;
  int far = even ? 1 : 0;
  if (n < s_size + far + 2)
    throw std::invalid_argument("gen_kcenter_lb: n too small for k");

  std::mt19937_64 rng(seed);
  std::vector<PointId> s_points(s_size);
  std::iota(s_points.begin(), s_points.end(), 0);
  std::shuffle(s_points.begin(), s_points.end(), rng);
  // first kk-1 shuffled points form N, paired consecutively into the matching
  std::vector<std::pair<PointId, PointId>> matching;
  for (int i = 0; i + 1 < kk; i += 2) {
    PointId a = s_points[i], b = s_points[i + 1];
    if (a > b) std::swap(a, b);
    matching.push_back({a, b});
  }

  PointId w_star = even ? n - 1 : -1;
  int o_begin = s_size;
  int o_end = even ? n - 1 : n;

  std::vector<double> values(size_t(n) * (n - 1) / 2, c);
  auto set_v = [&](PointId a, PointId b, double v) {
    values[TableMetric::tri_index(n, a, b)] = v;
  };
  for (PointId a = o_begin; a < o_end; ++a)
    for (PointId b = a + 1; b < o_end; ++b) set_v(a, b, 1.0);
  for (auto [a, b] : matching) set_v(a, b, 1.0);
  if (even)
    for (PointId a = 0; a < w_star; ++a) set_v(a, w_star, c * c);

  ScriptedInstance inst;
  inst.metric = std::make_shared<TableMetric>(n, std::move(values), false, n <= 300);
  inst.kind = "kcenter-lb";

  CorruptionMask mask(seed, delta);
  PointId cx = -1, cy = -1;
  for (auto [a, b] : matching) {
    if (mask.corrupted(a, b)) {
      cx = a;
      cy = b;
      break;
    }
  }
  if (cx >= 0) inst.corrupt_pairs.push_back({cx, cy});
  inst.matched = int(matching.size());
  uint64_t key = cx >= 0 ? pair_key(cx, cy) : ~0ull;
  inst.weak.lookup = [key, c](PointId a, PointId b) -> std::optional<double> {
    if (pair_key(a, b) == key) return c;
    return std::nullopt;
  };
  return inst;
}

namespace {
std::vector<int32_t> shuffled_blocks(int n, int kb, std::mt19937_64& rng) {
  std::vector<PointId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int32_t> labels(n);
  for (int i = 0; i < n; ++i) labels[perm[i]] = i / kb;
  return labels;
}
}  // namespace

ScriptedInstance gen_mst_metric_lb(int n, uint64_t seed, double delta) {
  int kb = int(std::ceil(std::sqrt(std::log2(double(n)))));
  if (n % kb != 0)
    throw std::invalid_argument("gen_mst_metric_lb: n not divisible by block size");
  std::mt19937_64 rng(seed);
  auto labels = shuffled_blocks(n, kb, rng);
  int blocks = n / kb;

  // Corruption at block-pair granularity: a hit merges the whole cross set.
  // (Independent per-pair bits would give a vanishing matching at this scale.)
  auto block_edge = [&](int i, int j) {
    return pair_uniform(seed, HashStream::mask, i, j) < delta;
  };
  std::vector<int32_t> match(blocks, -1);
  for (int i = 0; i < blocks; ++i) {
    if (match[i] >= 0) continue;
    for (int j = i + 1; j < blocks; ++j) {
      if (match[j] < 0 && block_edge(i, j)) {
        match[i] = j;
        match[j] = i;
        break;
      }
    }
  }
  auto merged = std::make_shared<std::vector<int32_t>>(blocks);
  int matched_pairs = 0;
  for (int i = 0; i < blocks; ++i) {
    (*merged)[i] = (match[i] >= 0) ? std::min(i, int(match[i])) : i;
    if (match[i] > i) ++matched_pairs;
  }

  ScriptedInstance inst;
  inst.metric = std::make_shared<PartitionMetric>(labels, 1.0, double(kb));
  inst.kind = "mst-metric-lb";
  inst.block_size = kb;
  inst.matched = matched_pairs;

  std::vector<std::vector<PointId>> members(blocks);
  for (PointId p = 0; p < n; ++p) members[labels[p]].push_back(p);
  for (int i = 0; i < blocks; ++i) {
    if (match[i] > i)
      for (PointId a : members[i])
        for (PointId b : members[match[i]]) inst.corrupt_pairs.push_back({a, b});
  }

  auto lab = std::make_shared<std::vector<int32_t>>(std::move(labels));
  inst.weak.lookup = [lab, merged](PointId a, PointId b) -> std::optional<double> {
    int la = (*lab)[a], lb = (*lab)[b];
    if (la != lb && (*merged)[la] == (*merged)[lb]) return 1.0;
    return std::nullopt;
  };
  return inst;
}

ScriptedInstance gen_mst_nonmetric_lb(int n, uint64_t seed, double delta) {
  int kb = std::max(2, int(std::ceil(std::log2(double(n)) / 2.0)));
  std::mt19937_64 rng(seed);
  auto labels = shuffled_blocks(n, kb, rng);

  // Point-level matching; an edge exists when the whole two-sided star of
  // fake distances is corrupted (drawn as one bit per cross pair).
  auto h_edge = [&](PointId x, PointId y) {
    return pair_uniform(seed, HashStream::mask, x, y) < delta;
  };
  std::vector<PointId> match(n, -1);
  int matched_pairs = 0;
  for (PointId x = 0; x < n; ++x) {
    if (match[x] >= 0) continue;
    for (PointId y = x + 1; y < n; ++y) {
      if (match[y] < 0 && labels[x] != labels[y] && h_edge(x, y)) {
        match[x] = y;
        match[y] = x;
        ++matched_pairs;
        break;
      }
    }
  }

  int blocks = (n + kb - 1) / kb;
  std::vector<std::vector<PointId>> members(blocks);
  for (PointId p = 0; p < n; ++p) members[labels[p]].push_back(p);

  auto fake = std::make_shared<std::unordered_set<uint64_t>>();
  ScriptedInstance inst;
  for (PointId x = 0; x < n; ++x) {
    PointId y = match[x];
    if (y <= x) continue;
    for (PointId u : members[labels[y]])
      if (u != y) fake->insert(pair_key(x, u));
    for (PointId v : members[labels[x]])
      if (v != x) fake->insert(pair_key(y, v));
    fake->insert(pair_key(x, y));
  }
  for (uint64_t key : *fake)
    inst.corrupt_pairs.push_back({PointId(key >> 32), PointId(key & 0xffffffff)});

  inst.metric = std::make_shared<PartitionMetric>(labels, 1.0, double(kb));
  inst.kind = "mst-nonmetric-lb";
  inst.block_size = kb;
  inst.matched = matched_pairs;
  inst.weak.lookup = [fake](PointId a, PointId b) -> std::optional<double> {
    if (fake->count(pair_key(a, b))) return 1.0;
    return std::nullopt;
  };
  return inst;
}

ScriptedInstance policy_metric_merge(const LabeledInstance& src, uint64_t seed) {
  if (src.labels.empty()) throw std::invalid_argument("policy_metric_merge: needs labels");
  const Metric& m = *src.metric;
  int k = src.k;
  std::vector<std::vector<PointId>> members(k);
  for (PointId p = 0; p < m.size(); ++p) members[src.labels[p]].push_back(p);
  double max_intra = 0.0;
  for (int c = 0; c < k; ++c)
    for (size_t i = 0; i < members[c].size(); ++i)
      for (size_t j = i + 1; j < members[c].size(); ++j)
        max_intra = std::max(max_intra, m(members[c][i], members[c][j]));
  // Collapsed cross distance; factor 2 keeps the result a metric despite the
  // +-(intra scale) wobble of point-to-third-cluster distances.
  double c_small = 2.0 * max_intra;

  std::mt19937_64 rng(seed);
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  auto merged = std::make_shared<std::vector<int32_t>>(k);
  for (int c = 0; c < k; ++c) (*merged)[c] = c;
  int matched_pairs = 0;
  for (int i = 0; i + 1 < k; i += 2) {
    int a = order[i], b = order[i + 1];
    (*merged)[a] = (*merged)[b] = std::min(a, b);
    ++matched_pairs;
  }

  ScriptedInstance inst;
  inst.metric = src.metric;
  inst.kind = "metric-merge";
  inst.matched = matched_pairs;
  auto lab = std::make_shared<std::vector<int32_t>>(src.labels);
  inst.weak.lookup = [lab, merged, c_small](PointId a, PointId b) -> std::optional<double> {
    int la = (*lab)[a], lb = (*lab)[b];
    if (la != lb && (*merged)[la] == (*merged)[lb]) return c_small;
    return std::nullopt;
  };
  return inst;
}

LabeledInstance load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_points_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      size_t pos = 0;
      double v;
      try {
        v = std::stod(cell, &pos);
      } catch (...) {
        throw std::runtime_error("load_points_csv: non-numeric cell '" + cell + "'");
      }
      while (pos < cell.size() && std::isspace(uint8_t(cell[pos]))) ++pos;
      if (pos != cell.size())
        throw std::runtime_error("load_points_csv: non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("load_points_csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw std::runtime_error("load_points_csv: need at least 2 points");
  size_t cols = rows.front().size();
  if (cols == 0) throw std::runtime_error("load_points_csv: empty rows");

  // Trailing column is treated as labels when every entry is a small integer.
  bool labeled = cols >= 2;
  std::unordered_set<long> distinct;
  for (auto& r : rows) {
    double v = r.back();
    if (v != std::floor(v) || v < 0 || v > (1 << 30)) {
      labeled = false;
      break;
    }
    distinct.insert(long(v));
  }
  if (labeled && distinct.size() > 1024) labeled = false;

  size_t dim = labeled ? cols - 1 : cols;
  std::vector<double> coords;
  std::vector<int32_t> labels;
  for (auto& r : rows) {
    for (size_t j = 0; j < dim; ++j) coords.push_back(r[j]);
    if (labeled) labels.push_back(int32_t(r.back()));
  }
  LabeledInstance inst;
  inst.metric = std::make_shared<PointsMetric>(std::move(coords), int(dim), true);
  inst.labels = std::move(labels);
  if (!inst.labels.empty())
    inst.k = 1 + *std::max_element(inst.labels.begin(), inst.labels.end());
  inst.kind = "csv";
  return inst;
}

void save_points_csv(const std::string& path, const PointsMetric& m,
                     const std::vector<int32_t>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_points_csv: cannot open " + path);
  out.precision(17);
  for (PointId p = 0; p < m.size(); ++p) {
    for (int j = 0; j < m.dim(); ++j) {
      if (j) out << ',';
      out << m.raw(p)[j];
    }
    if (!labels.empty()) out << ',' << labels[p];
    out << '\n';
  }
}

namespace {
constexpr char kMagic[4] = {'W', 'S', 'O', 'M'};
}

void save_table(const std::string& path, const Metric& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_table: cannot open " + path);
  uint32_t version = 1;
  uint64_t n = uint64_t(m.size());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&n), 8);
  for (PointId a = 0; a < m.size(); ++a)
    for (PointId b = a + 1; b < m.size(); ++b) {
      double v = m(a, b);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
}

std::shared_ptr<TableMetric> load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_table: cannot open " + path);
  char magic[4];
  uint32_t version;
  uint64_t n;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n), 8);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("load_table: bad header");
  if (version != 1) throw std::runtime_error("load_table: unsupported version");
  std::vector<double> values(n * (n - 1) / 2);
  in.read(reinterpret_cast<char*>(values.data()), values.size() * 8);
  if (!in) throw std::runtime_error("load_table: truncated file");
  return std::make_shared<TableMetric>(int(n), std::move(values));
}

}  // namespace wso
