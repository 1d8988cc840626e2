#include <gtest/gtest.h>

#include <algorithm>

#include "errors.hpp"
#include "validate.hpp"

using namespace crystalflow;

namespace {

bool any_failed(const std::vector<CheckResult>& results, const std::string& family) {
  return std::any_of(results.begin(), results.end(), [&](const CheckResult& r) {
    return r.family == family && !r.pass && !r.informational;
  });
}

}  // namespace

TEST(Validate, AllChecksPass) {
  std::size_t streamed = 0;
  const std::vector<CheckResult> results =
      run_validation({}, [&](const CheckResult&) { ++streamed; });
  EXPECT_EQ(streamed, results.size());
  for (const std::string& family : validation_families()) {
    EXPECT_TRUE(std::any_of(results.begin(), results.end(),
                            [&](const CheckResult& r) { return r.family == family; }))
        << family;
  }
  for (const CheckResult& r : results)
    EXPECT_TRUE(r.pass || r.informational) << r.name << ": " << r.detail;
}

TEST(Validate, FilterByFamilyAndName) {
  ValidateOptions o;
  o.filter = "parseval";
  const std::vector<CheckResult> fam = run_validation(o);
  ASSERT_EQ(fam.size(), 2u);
  o.filter = "parseval.2d";
  const std::vector<CheckResult> one = run_validation(o);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].name, "parseval.2d");
  o.filter = "no-such-family";
  EXPECT_THROW(run_validation(o), ConfigError);
}

TEST(Validate, WienerFaultIsCaught) {
  ValidateOptions o;
  o.inject_fault = "wiener-norm";
  EXPECT_TRUE(any_failed(run_validation(o), "linf"));
}

TEST(Validate, QuadratureFaultIsCaught) {
  ValidateOptions o;
  o.inject_fault = "quadrature";
  EXPECT_TRUE(any_failed(run_validation(o), "parseval"));
}

TEST(Validate, UnknownFault) {
  ValidateOptions o;
  o.inject_fault = "gravity";
  EXPECT_THROW(run_validation(o), ConfigError);
  EXPECT_EQ(validation_faults().size(), 2u);
}
