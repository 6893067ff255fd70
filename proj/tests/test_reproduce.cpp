#include <gtest/gtest.h>

#include <cmath>

#include "qe/error.hpp"
#include "qe/reproduce.hpp"

namespace qe {
namespace {

TEST(Reproduce, AllCasesPass) {
  for (const auto& name : reproduction_cases()) {
    const auto t = run_reproduce(name);
    EXPECT_EQ(t.name, name);
    EXPECT_FALSE(t.rows.empty());
    EXPECT_TRUE(t.all_pass()) << name;
  }
}

TEST(Reproduce, NoBlowdownLengthHasFourRows) {
  const auto t = run_reproduce("no-blowdown-length");
  ASSERT_EQ(t.rows.size(), 4u);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.expected, 4.0);
    EXPECT_LT(std::abs(r.computed - 4.0), 1e-12);
  }
}

TEST(Reproduce, IntervalFormulaGrid) {
  const auto t = run_reproduce("hall-interval-formula");
  EXPECT_EQ(t.rows.size(), 36u);
  EXPECT_NEAR(literal_interval_length(2.0, 1, 0), std::sqrt(24.0), 1e-15);
  bool found = false;
  for (const auto& r : t.rows) {
    if (r.label == "s* k0=2 n1=1 nr=0") {
      found = true;
      EXPECT_NEAR(r.computed, std::sqrt(24.0), 1e-14);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Reproduce, BlowdownConsistencyExample) {
  const auto t = run_reproduce("blowdown-consistency");
  ASSERT_FALSE(t.rows.empty());
  EXPECT_EQ(t.rows[0].computed, 6.0);
}

TEST(Reproduce, UnknownCase) { EXPECT_THROW(run_reproduce("nope"), Error); }

}  // namespace
}  // namespace qe
