#pragma once

#include <string>
#include <vector>

#include "romi/hiermodel.hpp"

namespace romi::fixtures {

// Golden K = 1 datasets shared by the fixtures, the verify command, and the
// test suite. The first mirrors the documented quadrature example.
struct GoldenDataset {
  std::string name;
  IndicationQuasiData data;
};
std::vector<GoldenDataset> golden_datasets();

std::vector<std::string> fixture_files();  // basenames under the fixture dir

// Recomputes every derived fixture value and writes the files.
void generate_all(const std::string& dir);

// Loads each fixture and recomputes it with the oracle implementations;
// also cross-checks the production code against the stored values.
// Returns one message per failed comparison (empty means clean).
std::vector<std::string> check_all(const std::string& dir);

}  // namespace romi::fixtures
