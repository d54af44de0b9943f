// Times the serial training reference against the OpenMP version on a
// synthetic network. Usage: bench_kernels [genes] [runs] [epochs] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "grn/synth.hpp"
#include "grn/training.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t genes = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 10;
  const std::size_t runs = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 8;
  const std::size_t epochs = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 50;
  const int threads = argc > 4 ? std::atoi(argv[4]) : 0;

  grn::SynthSpec spec;
  spec.genes = genes;
  const grn::ExpressionDataset d = grn::generate_dataset(grn::generate_model(spec).model, spec);

  for (grn::Optimizer opt : {grn::Optimizer::gekf, grn::Optimizer::bptt}) {
    grn::TrainConfig cfg;
    cfg.optimizer = opt;
    cfg.runs = runs;
    cfg.epochs = epochs;
    grn::TrainResult serial, parallel;
    const double ts = seconds([&] { serial = grn::train_serial(d, cfg, {}); });
    const double tp = seconds([&] { parallel = grn::train(d, cfg, {}, threads); });
    const bool same = serial.mean_weights == parallel.mean_weights;
    std::printf("%-5s genes=%zu runs=%zu epochs=%zu serial=%.3fs parallel=%.3fs speedup=%.2fx identical=%s\n",
                grn::to_string(opt).c_str(), genes, runs, epochs, ts, tp, ts / tp, same ? "yes" : "no");
  }
  return 0;
}
