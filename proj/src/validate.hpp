#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace crystalflow {

struct CheckResult {
  std::string family;
  std::string name;
  bool pass = false;
  bool informational = false;  // reported, never counted as a failure
  std::string detail;
};

struct ValidateOptions {
  // Family name ("interpolation") or full check name ("parseval.2d"); empty runs all.
  std::string filter;
  // Deliberately broken primitive, to prove the suite notices:
  // "wiener-norm" drops the k₀ < 0 half of the spectrum,
  // "quadrature" uses a wrong cell volume.
  std::string inject_fault;
  std::uint64_t seed = 20240611;
};

std::vector<std::string> validation_families();
std::vector<std::string> validation_faults();

// Throws ConfigError for an unknown filter or fault name.
std::vector<CheckResult> run_validation(
    const ValidateOptions& options,
    const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace crystalflow
