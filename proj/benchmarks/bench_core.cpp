#include <benchmark/benchmark.h>

#include <numbers>

#include "rpimc/assembly.hpp"
#include "rpimc/basis.hpp"
#include "rpimc/geometry.hpp"

using namespace rpimc;

namespace {

NodeCloud make_cloud(int per_axis) {
  const double h = 1.0 / double(per_axis - 1);
  return tag_boundaries(generate_regular_grid(Box{{0, 0, 0}, {1, 1, 1}, 3}, h),
                        FaceTags::all(BoundaryTag::neumann));
}

}  // namespace

static void BM_SupportSearch(benchmark::State& state) {
  const NodeCloud cloud = make_cloud(int(state.range(0)));
  for (auto _ : state) {
    auto supports = find_all_supports(cloud, 2.1);
    benchmark::DoNotOptimize(supports);
  }
  state.SetItemsProcessed(state.iterations() * int64_t(cloud.size()));
}
BENCHMARK(BM_SupportSearch)->Arg(11)->Arg(17);

static void BM_RpiBasisTable(benchmark::State& state) {
  const NodeCloud cloud = make_cloud(int(state.range(0)));
  RpiParams rpi;
  rpi.d_c = cloud.spacing;
  for (auto _ : state) {
    auto table = build_basis_table(cloud, find_all_supports(cloud, 2.1), BasisKind::rpi, rpi);
    benchmark::DoNotOptimize(table);
  }
  state.SetItemsProcessed(state.iterations() * int64_t(cloud.size()));
}
BENCHMARK(BM_RpiBasisTable)->Arg(11)->Arg(17)->Unit(benchmark::kMillisecond);

static void BM_MlsBasisTable(benchmark::State& state) {
  const NodeCloud cloud = make_cloud(int(state.range(0)));
  RpiParams rpi;
  rpi.d_c = cloud.spacing;
  for (auto _ : state) {
    auto table = build_basis_table(cloud, find_all_supports(cloud, 2.1), BasisKind::mls, rpi);
    benchmark::DoNotOptimize(table);
  }
  state.SetItemsProcessed(state.iterations() * int64_t(cloud.size()));
}
BENCHMARK(BM_MlsBasisTable)->Arg(11)->Arg(17)->Unit(benchmark::kMillisecond);

static void BM_OperatorAssembly(benchmark::State& state) {
  const NodeCloud cloud = make_cloud(int(state.range(0)));
  RpiParams rpi;
  rpi.d_c = cloud.spacing;
  const BasisTable basis =
      build_basis_table(cloud, find_all_supports(cloud, 2.1), BasisKind::rpi, rpi);
  Conductivity cond;
  for (auto _ : state) {
    const SparseOperator k_a = assemble_flux_operator(cloud, basis, cond);
    const SparseOperator k_s = assemble_divergence_operator(cloud, basis);
    const PenalizedSystem pen = apply_neumann_penalty(k_a, k_s, cloud, PenaltyConfig{1e6});
    benchmark::DoNotOptimize(pen);
  }
}
BENCHMARK(BM_OperatorAssembly)->Arg(11)->Arg(17)->Unit(benchmark::kMillisecond);

static void BM_Matvec(benchmark::State& state) {
  const NodeCloud cloud = make_cloud(17);
  RpiParams rpi;
  rpi.d_c = cloud.spacing;
  const BasisTable basis =
      build_basis_table(cloud, find_all_supports(cloud, 2.1), BasisKind::rpi, rpi);
  Conductivity cond;
  const SparseOperator k_a = assemble_flux_operator(cloud, basis, cond);
  const SparseOperator k_s = assemble_divergence_operator(cloud, basis);
  const SparseOperator k = multiply(k_s, k_a);
  std::vector<double> x(cloud.size(), 1.0), y(cloud.size());
  for (auto _ : state) {
    k.multiply(x, y, int(state.range(0)));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(state.iterations() * int64_t(k.nnz() * 12));
}
BENCHMARK(BM_Matvec)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
