#include "cube/projection.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cube;

namespace {

ExactOptions with_kernel(ExactKernel k, unsigned threads = 1) {
    ExactOptions o;
    o.kernel = k;
    o.parallelism = Parallelism{threads};
    return o;
}

}  // namespace

TEST(LambdaExact, Examples) {
    EXPECT_EQ(lambda_exact(make_family(FamilySpec::homogeneous(3, 2))), Rational(3, 2));
    EXPECT_EQ(lambda_exact(make_family(FamilySpec::homogeneous(3, 1))), Rational(3, 2));
    for (int n = 1; n <= 6; ++n) EXPECT_EQ(lambda_exact(oracle::all_subsets(n)), 1) << n;
}

TEST(LambdaExact, KernelsAgreeWithBruteForce) {
    CounterRng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng.bits(trial) % 9);
        std::vector<SubsetMask> sets;
        const std::uint64_t span = std::uint64_t{1} << n;
        for (std::uint64_t s = 0; s < span; ++s) {
            if (rng.uniform(1000 * trial + s) < 0.3) sets.emplace_back(s, n);
        }
        if (sets.empty()) sets.emplace_back(span - 1, n);
        const SupportFamily fam(n, std::move(sets));
        const Rational expect = oracle::brute_lambda(fam);
        EXPECT_EQ(lambda_exact(fam, with_kernel(ExactKernel::gray)), expect);
        EXPECT_EQ(lambda_exact(fam, with_kernel(ExactKernel::transform)), expect);
        EXPECT_EQ(lambda_exact(fam, with_kernel(ExactKernel::gray, 8)), expect);
    }
}

TEST(LambdaExact, RangeAndPermutationInvariance) {
    const auto fam = make_family(FamilySpec::explicit_sets(7, {{1, 2}, {2, 5, 7}, {3}, {}, {4, 6}, {1, 3, 5}}));
    const Rational lam = lambda_exact(fam);
    EXPECT_GE(lam, 1);
    EXPECT_LE(lam * lam, Rational(fam.size()));
    EXPECT_EQ(lambda_exact(fam.permuted({6, 5, 4, 3, 2, 1, 0})), lam);
    EXPECT_EQ(lambda_exact(fam.permuted({1, 0, 3, 2, 5, 4, 6})), lam);
}

TEST(LambdaExact, IgnoresInactiveCoordinates) {
    const auto small = make_family(FamilySpec::explicit_sets(3, {{1, 2}, {3}, {1}}));
    const auto wide = make_family(FamilySpec::explicit_sets(40, {{1, 2}, {40}, {1}}));
    EXPECT_EQ(lambda_exact(small), lambda_exact(wide));
}

TEST(LambdaExact, Guards) {
    const auto fam = make_family(FamilySpec::explicit_sets(40, {{1, 2}, {40}, {1}}));
    ExactOptions tight;
    tight.max_dimension = 2;
    EXPECT_THROW(lambda_exact(fam, tight), GuardError);
    std::vector<std::vector<int>> wide;
    for (int i = 1; i <= 35; ++i) wide.push_back({i});
    EXPECT_THROW(lambda_exact(make_family(FamilySpec::explicit_sets(35, wide))), GuardError);
}

TEST(LambdaLevel, Examples) {
    EXPECT_EQ(lambda_level_exact(3, 2, LevelMode::exact_degree), Rational(3, 2));
    EXPECT_EQ(lambda_level_exact(4, 2, LevelMode::exact_degree), Rational(3, 2));
    EXPECT_EQ(lambda_level_exact(2, 1, LevelMode::up_to_degree), Rational(3, 2));
    EXPECT_THROW(lambda_level_exact(3, 4, LevelMode::exact_degree), std::exception);
}

TEST(LambdaLevel, MatchesEnumeration) {
    for (int n = 1; n <= 12; ++n) {
        for (int d = 1; d <= n; ++d) {
            EXPECT_EQ(lambda_level_exact(n, d, LevelMode::exact_degree), lambda_exact(make_family(FamilySpec::homogeneous(n, d))))
                << n << " " << d;
            EXPECT_EQ(lambda_level_exact(n, d, LevelMode::up_to_degree), lambda_exact(make_family(FamilySpec::up_to(n, d))))
                << n << " " << d;
        }
    }
}

TEST(ClosedForms, Examples) {
    EXPECT_NEAR(lambda_closed_forms(1).lambda_l1, 1.0, 1e-15);
    EXPECT_NEAR(lambda_closed_forms(3).lambda_l1, 1.5, 1e-14);
    EXPECT_NEAR(lambda_closed_forms(4).lambda_l1, 1.5, 1e-14);
}

TEST(Haagerup, ExamplesAndAgreement) {
    EXPECT_EQ(haagerup_lambda(2), 1);
    EXPECT_EQ(haagerup_lambda(3), Rational(3, 2));
    EXPECT_EQ(haagerup_lambda(4), Rational(3, 2));
    for (int n = 1; n <= 16; ++n) EXPECT_EQ(haagerup_lambda(n), lambda_exact(oracle::singletons(n))) << n;
    for (int n = 1; n <= 30; ++n) {
        const double closed = lambda_closed_forms(n).lambda_l1;
        EXPECT_NEAR(to_double(haagerup_lambda(n)), closed, 1e-12 * closed) << n;
    }
}

TEST(Primes, Reports) {
    EXPECT_EQ(prime_singleton_report(10).lambda, Rational(3, 2));
    EXPECT_EQ(prime_singleton_report(10).prime_count, 4);
    EXPECT_THROW(prime_singleton_report(2), DomainError);
}

TEST(SquareFree, CrossCheckAtSixteen) {
    const auto rep = squarefree_mc(16, 200000, 42, Parallelism{2});
    EXPECT_EQ(rep.family_size, 11U);
    ASSERT_TRUE(rep.exact.has_value());
    EXPECT_EQ(*rep.exact, lambda_exact(make_family(FamilySpec::square_free(16))));
    EXPECT_LE(std::abs(rep.estimate.mean - to_double(*rep.exact)), 4 * rep.estimate.std_error);
}

TEST(MonteCarlo, ConstantFamily) {
    const auto fam = make_family(FamilySpec::explicit_sets(3, {{}}));
    const auto est = lambda_mc(fam, 1000, 1);
    EXPECT_EQ(est.mean, 1.0);
    EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, WithinFourStandardErrors) {
    const auto fam = make_family(FamilySpec::homogeneous(12, 2));
    const auto est = lambda_mc(fam, 100000, 42);
    const double exact = to_double(lambda_exact(fam));
    EXPECT_LE(std::abs(est.mean - exact), 4 * est.std_error);
    EXPECT_LE(est.ci95_lo, est.mean);
    EXPECT_GE(est.ci95_hi, est.mean);
    EXPECT_EQ(est.samples, 100000U);
    EXPECT_EQ(est.seed, 42U);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResult) {
    const auto fam = make_family(FamilySpec::up_to(20, 3));
    const auto a = lambda_mc(fam, 50001, 9, Parallelism{1});
    const auto b = lambda_mc(fam, 50001, 9, Parallelism{8});
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.ci95_lo, b.ci95_lo);
    const auto c = squarefree_mc(40, 20000, 5, Parallelism{1});
    const auto d = squarefree_mc(40, 20000, 5, Parallelism{8});
    EXPECT_EQ(c.estimate.mean, d.estimate.mean);
    EXPECT_EQ(c.estimate.std_error, d.estimate.std_error);
}
