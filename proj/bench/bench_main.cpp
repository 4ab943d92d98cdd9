// Microbenchmark comparing the serial reference loops against the
// OpenMP-parallel execution policy on the assembly and evaluation kernels.
#include <chrono>
#include <cstdio>
#include <vector>

#include "chb/discretization.hpp"
#include "chb/parallel.hpp"
#include "chb/physics.hpp"

using namespace chb;

namespace {

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (dt < best) best = dt;
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());
  std::printf("%-28s %8s %12s %12s %8s\n", "kernel", "n", "serial[ms]",
              "parallel[ms]", "speedup");

  const MaterialParams prm = MaterialParams::defaults();
  for (int n : {32, 64, 128}) {
    const Mesh mesh = build_mesh(n);
    const SourceData src = SourceData::zero(mesh);
    State s = initial_state(mesh);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      s.mu[v] = 0.01 * mesh.vertices[v][0];
      s.theta[v] = 0.02 * mesh.vertices[v][1];
    }
    const State prev = s;
    const double tau = 1e-3;
    const int reps = n <= 64 ? 7 : 3;

    struct Row {
      const char* name;
      double serial, parallel;
    };
    std::vector<Row> rows;

    auto bench_pair = [&](const char* name, auto&& fn) {
      const double ts = time_best_of(reps, [&] { fn(Exec::Serial); });
      const double tp = time_best_of(reps, [&] { fn(Exec::Parallel); });
      rows.push_back({name, ts, tp});
    };

    bench_pair("residual monolithic", [&](Exec e) {
      residual(SystemKind::MonolithicSemiImplicit, TimeDisc::SemiImplicit,
               mesh, prm, src, tau, s, prev, prev, e);
    });
    bench_pair("jacobian monolithic", [&](Exec e) {
      jacobian(SystemKind::MonolithicSemiImplicit, TimeDisc::SemiImplicit,
               mesh, prm, src, tau, s, prev, prev, e);
    });
    bench_pair("free energy", [&](Exec e) { free_energy(mesh, s, prm, e); });

    const SparseMatrix J =
        jacobian(SystemKind::MonolithicSemiImplicit, TimeDisc::SemiImplicit,
                 mesh, prm, src, tau, s, prev, prev);
    DenseVector x(J.cols(), 1.0), y(J.rows());
    bench_pair("sparse matvec", [&](Exec e) { J.matvec(x, y, e); });

    for (const Row& r : rows)
      std::printf("%-28s %8d %12.3f %12.3f %8.2f\n", r.name, n,
                  1e3 * r.serial, 1e3 * r.parallel, r.serial / r.parallel);
    std::printf("\n");
  }
  return 0;
}
