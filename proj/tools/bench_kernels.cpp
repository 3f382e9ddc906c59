// Compares the OpenMP kernels against their serial references:
// dense Prim and the batch median-estimate loop of the k-center cover step.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "wso/instances.hpp"
#include "wso/kcenter.hpp"
#include "wso/mst.hpp"

using namespace wso;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_call(F&& f) {
  double t0 = now();
  f();
  return now() - t0;
}

}  // namespace

int main() {
  std::printf("%-28s %8s %12s %12s %8s\n", "kernel", "n", "serial_s", "parallel_s",
              "speedup");

  for (int n : {1000, 2000, 4000}) {
    LabeledInstance inst = gen_sbm(n, 7, 42);
    EvalAccessor eval(*inst.metric);
    auto d = [&](PointId a, PointId b) { return eval(a, b); };
    SpanningTree ts, tp;
    double s = time_call([&] { ts = mst_dense_serial(n, d); });
    double p = time_call([&] { tp = mst_dense(n, d); });
    bool same = ts.parent == tp.parent;
    std::printf("%-28s %8d %12.4f %12.4f %8.2fx%s\n", "mst_dense (Prim)", n, s, p,
                s / p, same ? "" : "  MISMATCH");
  }

  for (int n : {2000, 5000}) {
    LabeledInstance inst = gen_sbm(n, 7, 42);
    auto ledger = std::make_shared<QueryLedger>();
    WeakOracle wo(*inst.metric, ledger, CorruptionMask(42, 1.0 / 3.0),
                  policy_cluster_flip(*inst.metric, inst.labels));
    std::vector<PointId> ball(120);
    for (int i = 0; i < 120; ++i) ball[i] = i;
    std::vector<double> est_s(n, 0.0), est_p(n, 0.0);
    double s = time_call([&] {
      for (PointId p = 120; p < n; ++p) est_s[p] = median_estimate(p, ball, wo);
    });
    double p = time_call([&] {
#pragma omp parallel for schedule(dynamic, 64)
      for (PointId q = 120; q < n; ++q) est_p[q] = median_estimate(q, ball, wo);
    });
    bool same = est_s == est_p;
    std::printf("%-28s %8d %12.4f %12.4f %8.2fx%s\n", "batch median_estimate", n, s,
                p, s / p, same ? "" : "  MISMATCH");
  }
  return 0;
}
