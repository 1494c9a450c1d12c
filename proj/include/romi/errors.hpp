#pragma once

#include <stdexcept>
#include <string>

namespace romi {

// invalid configuration, bad JSON, violated invariants in user input
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// (pi_tox, pi_resp, phi) with no valid joint distribution
class InfeasibleAssociation : public ConfigError {
 public:
  explicit InfeasibleAssociation(const std::string& what) : ConfigError(what) {}
};

// numeric arguments outside the supported domain
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// calibration found no sample size meeting the error constraint
class NoFeasibleN : public std::runtime_error {
 public:
  explicit NoFeasibleN(const std::string& what) : std::runtime_error(what) {}
};

// model fit requested on data it cannot support (e.g. no active indications)
class DegenerateData : public std::runtime_error {
 public:
  explicit DegenerateData(const std::string& what) : std::runtime_error(what) {}
};

// CSP requested for a scenario in which no indication has a true OBD
class NoTruthDefined : public std::runtime_error {
 public:
  explicit NoTruthDefined(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace romi
