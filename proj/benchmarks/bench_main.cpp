#include <benchmark/benchmark.h>

#include "sbc/blockmap.hpp"
#include "sbc/nf_context.hpp"
#include "sbc/normal_form.hpp"
#include "sbc/transition.hpp"
#include "sbc/verify.hpp"

using namespace sbc;

static void BM_NormalForm(benchmark::State& st) {
  const auto c = derive_constants({});
  const int w = int(st.range(0));
  for (auto _ : st) {
    const auto X = taylor_field(nf_params(c, w));
    benchmark::DoNotOptimize(normal_form(X, w));
  }
}
BENCHMARK(BM_NormalForm)->Arg(9)->Arg(13)->Unit(benchmark::kMillisecond);

static void BM_KernelCertificate(benchmark::State& st) {
  const Poly rh = printed_Rh();
  for (auto _ : st) benchmark::DoNotOptimize(kernel_certificate(rh));
}
BENCHMARK(BM_KernelCertificate)->Unit(benchmark::kMillisecond);

static void BM_Hbar8(benchmark::State& st) {
  double u = -20;
  for (auto _ : st) {
    benchmark::DoNotOptimize(hbar8(u));
    u = u > 20 ? -20 : u + 0.37;
  }
}
BENCHMARK(BM_Hbar8)->Unit(benchmark::kMicrosecond);

static void BM_BlockMapRow(benchmark::State& st) {
  const auto c = derive_constants({});
  BlockMapOptions o;
  nf_context(c, o.nf_weight);
  const double s = st.range(0) * 1e-4;
  for (auto _ : st) benchmark::DoNotOptimize(numeric_block_map(s, c, o));
}
BENCHMARK(BM_BlockMapRow)->Arg(10)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_BlockMapRowExtended(benchmark::State& st) {
  const auto c = derive_constants({});
  BlockMapOptions o;
  o.extended = true;
  nf_context(c, o.nf_weight);
  for (auto _ : st) benchmark::DoNotOptimize(numeric_block_map(1e-2, c, o));
}
BENCHMARK(BM_BlockMapRowExtended)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& st) {
  const auto c = derive_constants({});
  BlockMapOptions o;
  nf_context(c, o.nf_weight);
  const auto s = log_offsets(1e-3, 3e-2, 10);
  for (auto _ : st) benchmark::DoNotOptimize(sweep_and_fit(s, c, o, int(st.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
