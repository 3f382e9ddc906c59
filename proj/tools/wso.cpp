#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wso/bench.hpp"
#include "wso/instances.hpp"
#include "wso/kcenter.hpp"
#include "wso/kcluster.hpp"
#include "wso/mst.hpp"

using nlohmann::json;
using namespace wso;

namespace {

struct OracleArgs {
  int n = 2000;
  int k = 7;
  double delta = 1.0 / 3.0;
  uint64_t seed = 1;
  std::string policy = "cluster-flip";
  double value = 0.0;
  std::string input;  // optional CSV overriding the SBM instance
};

void add_oracle_flags(CLI::App* cmd, OracleArgs& a) {
  cmd->add_option("--n", a.n, "points (SBM instance)");
  cmd->add_option("--k", a.k, "clusters / centers");
  cmd->add_option("--delta", a.delta, "per-pair corruption probability");
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--policy", a.policy, "cluster-flip|uniform|constant|none");
  cmd->add_option("--value", a.value, "constant policy value");
  cmd->add_option("--input", a.input, "CSV points file instead of SBM");
}

LabeledInstance make_instance(const OracleArgs& a) {
  if (!a.input.empty()) return load_points_csv(a.input);
  return gen_sbm(a.n, a.k, a.seed);
}

Adversary make_adversary(const OracleArgs& a, const LabeledInstance& inst) {
  if (a.policy == "cluster-flip") {
    if (inst.labels.empty())
      throw CLI::ValidationError("--policy cluster-flip needs labeled input");
    return policy_cluster_flip(*inst.metric, inst.labels);
  }
  if (a.policy == "uniform")
    return Adversary::uniform(a.seed, inst.metric->min_distance(),
                              inst.metric->max_distance());
  if (a.policy == "constant") return Adversary::constant(a.value);
  if (a.policy == "none") return Adversary::none_policy();
  throw CLI::ValidationError("unknown policy " + a.policy);
}

json ledger_json(const QueryLedger& l) {
  return {{"weak", l.weak_count.load()},
          {"strong_point", l.strong_point_count.load()},
          {"strong_edge", l.strong_edge_count.load()}};
}

void write_json(const std::string& path, const json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<uint64_t> parse_u64s(const std::string& csv) {
  std::vector<uint64_t> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
  return out;
}

int cmd_gen(const std::string& type, int n, int k, double c, uint64_t seed,
            double delta, const std::string& format, const std::string& out,
            const std::string& meta) {
  json m;
  m["type"] = type;
  m["seed"] = seed;
  if (type == "sbm") {
    LabeledInstance inst = gen_sbm(n, k, seed);
    m["n"] = n;
    m["k"] = k;
    if (format == "csv") {
      save_points_csv(out, dynamic_cast<const PointsMetric&>(*inst.metric),
                      inst.labels);
    } else {
      save_table(out, *inst.metric);
    }
  } else {
    ScriptedInstance inst;
    if (type == "kcenter-lb")
      inst = gen_kcenter_lb(k, c, n, seed, delta);
    else if (type == "mst-metric-lb")
      inst = gen_mst_metric_lb(n, seed, delta);
    else if (type == "mst-nonmetric-lb")
      inst = gen_mst_nonmetric_lb(n, seed, delta);
    else
      throw CLI::ValidationError("unknown --type " + type);
    if (format == "csv")
      throw CLI::ValidationError("lower-bound instances are table-form only");
    save_table(out, *inst.metric);
    m["n"] = inst.metric->size();
    m["kind"] = inst.kind;
    m["block_size"] = inst.block_size;
    m["matched"] = inst.matched;
    m["delta"] = delta;
    m["corrupt_pairs"] = inst.corrupt_pairs.size();
    m["note"] = "table stores true distances; the scripted corruption pattern "
                "is regenerated from (type, seed, delta)";
  }
  if (!meta.empty()) write_json(meta, m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak-strong oracle clustering and MST toolkit"};
  app.require_subcommand(1);

  // gen
  std::string g_type = "sbm", g_format = "csv", g_out = "instance.csv", g_meta;
  int g_n = 2000, g_k = 7;
  double g_c = 100.0, g_delta = 1.0 / 3.0;
  uint64_t g_seed = 1;
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--type", g_type, "sbm|kcenter-lb|mst-metric-lb|mst-nonmetric-lb");
  gen->add_option("--n", g_n, "points");
  gen->add_option("--k", g_k, "clusters (sbm) / centers (kcenter-lb)");
  gen->add_option("--c", g_c, "far distance of the kcenter-lb construction");
  gen->add_option("--seed", g_seed, "RNG seed");
  gen->add_option("--delta", g_delta, "corruption probability (lb instances)");
  gen->add_option("--format", g_format, "csv|table");
  gen->add_option("--out", g_out, "output path");
  gen->add_option("--meta", g_meta, "metadata JSON sidecar path");

  // kcenter
  OracleArgs kc_args;
  double kc_epsilon = 0.1, kc_scale = 1.0;
  std::string kc_out = "-";
  auto* kcenter = app.add_subcommand("kcenter", "weak-strong k-center");
  add_oracle_flags(kcenter, kc_args);
  kcenter->add_option("--epsilon", kc_epsilon, "radius grid resolution");
  kcenter->add_option("--scale", kc_scale, "sampling multiplier scale");
  kcenter->add_option("--out", kc_out, "result JSON path (- = stdout)");

  // kmeans / kmedian
  OracleArgs km_args;
  double km_threshold_scale = 1.0, km_cap_scale = 0.05;
  bool km_shuffle = false;
  std::string km_out = "-";
  auto* kmeans = app.add_subcommand("kmeans", "weak-strong k-means");
  auto* kmedian = app.add_subcommand("kmedian", "weak-strong k-median");
  for (auto* cmd : {kmeans, kmedian}) {
    add_oracle_flags(cmd, km_args);
    cmd->add_option("--scale,--threshold-scale", km_threshold_scale,
                    "heavy-ball threshold scale");
    cmd->add_option("--cap-scale", km_cap_scale, "coreset cap scale");
    cmd->add_flag("--shuffle", km_shuffle, "shuffle the stream order");
    cmd->add_option("--out", km_out, "result JSON path (- = stdout)");
  }

  // mst
  int m_n = 1024;
  double m_delta = 1.0 / 3.0;
  uint64_t m_seed = 1;
  std::string m_policy = "metric-lb", m_out = "-";
  auto* mst = app.add_subcommand("mst", "query-free weak-metric MST");
  mst->add_option("--n", m_n, "points");
  mst->add_option("--delta", m_delta, "corruption probability");
  mst->add_option("--seed", m_seed, "RNG seed");
  mst->add_option("--policy", m_policy, "metric-lb|nonmetric-lb|sbm-merge|none");
  mst->add_option("--out", m_out, "result JSON path (- = stdout)");

  // bench
  SweepConfig sweep;
  std::string b_deltas = "0.1,0.2,0.3", b_seeds = "1,2,3,4,5", b_scales, b_out = "bench-out";
  auto* bench = app.add_subcommand("bench", "experiment sweep");
  bench->add_option("--suite", sweep.suite, "sbm-kcenter|sbm-kmeans|mst-lb")->required();
  bench->add_option("--n", sweep.n, "points");
  bench->add_option("--k", sweep.k, "clusters");
  bench->add_option("--deltas", b_deltas, "comma list");
  bench->add_option("--seeds", b_seeds, "comma list");
  bench->add_option("--scales", b_scales, "comma list of sampling scales");
  bench->add_option("--q", sweep.q, "objective exponent (kmeans suite)");
  bench->add_option("--exponent", sweep.tradeoff_exponent, "trade-off cost exponent");
  bench->add_option("--out", b_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(g_type, g_n, g_k, g_c, g_seed, g_delta, g_format, g_out, g_meta);

    if (kcenter->parsed()) {
      LabeledInstance inst = make_instance(kc_args);
      auto ledger = std::make_shared<QueryLedger>();
      WeakOracle wo(*inst.metric, ledger, CorruptionMask(kc_args.seed, kc_args.delta),
                    make_adversary(kc_args, inst));
      StrongOracle so(*inst.metric, ledger, StrongMode::point);
      KCenterConfig cfg;
      cfg.k = kc_args.k;
      cfg.epsilon = kc_epsilon;
      cfg.delta = kc_args.delta;
      cfg.seed = kc_args.seed;
      cfg.scale = kc_scale;
      KCenterSolution sol = kcenter_solve(*inst.metric, wo, so, cfg);
      json j;
      j["centers"] = sol.centers;
      j["cost"] = sol.true_cost;
      j["R_final"] = sol.R_final;
      j["level_final"] = sol.level_final;
      j["probed_levels"] = sol.probed_levels;
      j["iteration_coverage"] = sol.iteration_coverage;
      j["ledger"] = ledger_json(*ledger);
      write_json(kc_out, j);
      return 0;
    }

    if (kmeans->parsed() || kmedian->parsed()) {
      LabeledInstance inst = make_instance(km_args);
      auto ledger = std::make_shared<QueryLedger>();
      WeakOracle wo(*inst.metric, ledger, CorruptionMask(km_args.seed, km_args.delta),
                    make_adversary(km_args, inst));
      StrongOracle so(*inst.metric, ledger, StrongMode::point);
      KClusterConfig cfg;
      cfg.k = km_args.k;
      cfg.q = kmeans->parsed() ? 2 : 1;
      cfg.delta = km_args.delta;
      cfg.seed = km_args.seed;
      cfg.threshold_scale = km_threshold_scale;
      cfg.cap_scale = km_cap_scale;
      cfg.shuffle_stream = km_shuffle;
      KClusterSolution sol = kcluster_solve(*inst.metric, wo, so, cfg);
      json j;
      j["centers"] = sol.centers;
      j["cost"] = sol.true_cost;
      j["opt_guess_final"] = sol.opt_guess_final;
      j["coreset_size"] = sol.coreset_size;
      j["guess_probes"] = sol.guess_probes;
      j["ledger"] = ledger_json(*ledger);
      write_json(km_out, j);
      return 0;
    }

    if (mst->parsed()) {
      std::shared_ptr<Metric> metric;
      std::optional<ScriptedCorruption> scripted;
      if (m_policy == "metric-lb") {
        ScriptedInstance inst = gen_mst_metric_lb(m_n, m_seed, m_delta);
        metric = inst.metric;
        scripted = inst.weak;
      } else if (m_policy == "nonmetric-lb") {
        ScriptedInstance inst = gen_mst_nonmetric_lb(m_n, m_seed, m_delta);
        metric = inst.metric;
        scripted = inst.weak;
      } else if (m_policy == "sbm-merge") {
        LabeledInstance base = gen_sbm(m_n, 7, m_seed);
        ScriptedInstance inst = policy_metric_merge(base, m_seed);
        metric = inst.metric;
        scripted = inst.weak;
      } else if (m_policy == "none") {
        metric = gen_sbm(m_n, 7, m_seed).metric;
      } else {
        throw CLI::ValidationError("unknown --policy " + m_policy);
      }
      auto ledger = std::make_shared<QueryLedger>();
      std::unique_ptr<WeakOracle> wo;
      if (scripted)
        wo = std::make_unique<WeakOracle>(*metric, ledger, *scripted);
      else
        wo = std::make_unique<WeakOracle>(*metric, ledger, CorruptionMask(m_seed, m_delta),
                                          Adversary::none_policy());
      MstResult got = mst_weak_solve(*wo, m_seed);
      EvalAccessor eval(*metric);
      auto true_d = [&](PointId a, PointId b) { return eval(a, b); };
      SpanningTree exact = mst_dense(metric->size(), true_d, 0);
      json edges = json::array();
      for (PointId u = 0; u < got.tree.size(); ++u)
        if (got.tree.parent[u] >= 0)
          edges.push_back({u, got.tree.parent[u]});
      json j;
      j["edges"] = std::move(edges);
      j["weak_weight"] = got.weak_weight;
      j["true_weight"] = got.tree.weight(true_d);
      j["exact_mst_weight"] = exact.weight(true_d);
      j["ratio"] = got.tree.weight(true_d) / exact.weight(true_d);
      j["max_degree"] = got.tree.max_degree();
      j["metric_ok"] = got.metric_ok;
      j["eps"] = got.eps;
      j["ledger"] = ledger_json(*ledger);
      write_json(m_out, j);
      return 0;
    }

    if (bench->parsed()) {
      sweep.deltas = parse_doubles(b_deltas);
      sweep.seeds = parse_u64s(b_seeds);
      if (!b_scales.empty()) sweep.scales = parse_doubles(b_scales);
      else if (sweep.suite == "sbm-kmeans") sweep.scales = {1.0, 1.5, 2.0};
      std::vector<RunRecord> records = run_sweep(sweep);
      std::string dir = b_out;
      std::filesystem::create_directories(dir);
      write_records_csv(dir + "/records.csv", records);
      write_tradeoff_json(dir + "/tradeoff.json", sweep, records);
      write_ledger_json(dir + "/ledger.json", records);
      std::cout << records.size() << " records -> " << dir << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
