#include <gtest/gtest.h>

#include "properties.hpp"

using namespace helioseis::testing;

namespace {

void expect_clean(const PropertyOutcome& o) {
    EXPECT_GT(o.cases, 0) << o.name;
    EXPECT_EQ(o.failures, 0) << o.name << ": first failure " << o.first_failure << ", worst " << o.worst;
}

} // namespace

class Seeds : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(Seeds, HerglotzMonotonicity) { expect_clean(herglotz_monotonicity(GetParam(), 25)); }
TEST_P(Seeds, TurningPointZero) { expect_clean(turning_point_zero(GetParam(), 50)); }
TEST_P(Seeds, DebyeRecursion) { expect_clean(debye_recursion(GetParam(), 40)); }
TEST_P(Seeds, ContinuationPreservesOrbit) { expect_clean(continuation_preserves_orbit(GetParam(), 8)); }
TEST_P(Seeds, AbelKernelNonnegative) { expect_clean(abel_kernel_nonnegative(GetParam(), 20)); }

INSTANTIATE_TEST_SUITE_P(Randomized, Seeds, ::testing::Values(11u, 2024u, 90210u));
