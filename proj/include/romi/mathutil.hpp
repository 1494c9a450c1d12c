#pragma once

#include <cmath>

namespace romi {

inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

// log sigmoid(x), stable in both tails
inline double log_sigmoid(double x) { return -softplus(-x); }

}  // namespace romi
