#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "romi/simengine.hpp"

namespace {

romi::ScenarioSpec bench_scenario() {
  romi::ScenarioSpec sc;
  sc.name = "bench";
  sc.phi = 0.25;
  for (const char* name : {"I1", "I2", "I3"}) {
    romi::IndicationScenario ind;
    ind.name = name;
    ind.tox_high = 0.25;
    ind.resp_high = 0.40;
    ind.tox_low = 0.15;
    ind.resp_low = 0.40;
    ind.true_obd = romi::Selection::low;
    sc.indications.push_back(ind);
  }
  return sc;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  long reps = argc > 1 ? std::atol(argv[1]) : 200;
  if (reps <= 0) {
    std::fprintf(stderr, "usage: %s [reps] [thread-count...]\n", argv[0]);
    return 2;
  }
  std::vector<int> thread_counts;
  for (int i = 2; i < argc; ++i) thread_counts.push_back(std::atoi(argv[i]));
  if (thread_counts.empty()) thread_counts = {1, 2, 4};

  romi::ScenarioSpec sc = bench_scenario();
  romi::DesignConfig cfg;
  cfg.kind = romi::DesignKind::romi_v1;
  cfg.n_indications = sc.k();
  const uint64_t seed = 20240101;

  std::printf("%-10s %8s %10s %10s %8s  %s\n", "mode", "threads", "seconds", "reps/s",
              "speedup", "digest");
  auto t0 = std::chrono::steady_clock::now();
  romi::OperatingCharacteristics ref = romi::simulate_serial(cfg, sc, reps, seed);
  double serial_s = seconds_since(t0);
  std::printf("%-10s %8s %10.3f %10.1f %8s  %016llx\n", "serial", "-", serial_s,
              reps / serial_s, "1.00x", static_cast<unsigned long long>(ref.digest));

  bool mismatch = false;
  for (int nt : thread_counts) {
    t0 = std::chrono::steady_clock::now();
    romi::OperatingCharacteristics oc = romi::simulate(cfg, sc, reps, seed, nt);
    double s = seconds_since(t0);
    char speedup[16];
    std::snprintf(speedup, sizeof speedup, "%.2fx", serial_s / s);
    std::printf("%-10s %8d %10.3f %10.1f %8s  %016llx%s\n", "openmp", nt, s, reps / s,
                speedup, static_cast<unsigned long long>(oc.digest),
                oc.digest == ref.digest ? "" : "  << DIGEST MISMATCH");
    if (oc.digest != ref.digest) mismatch = true;
  }
  return mismatch ? 1 : 0;
}
