#include "cube/core.hpp"
#include "cube/family_json.hpp"
#include "cube/gray.hpp"
#include "cube/rng.hpp"
#include "cube/walsh.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace cube;

TEST(Character, EmptySetIsConstantOne) {
    for (std::uint64_t x = 0; x < 8; ++x) EXPECT_EQ(character_eval(SubsetMask(0, 3), CubePoint(x, 3)), 1);
}

TEST(Character, SignFlips) {
    const auto s = SubsetMask::from_indices({1, 2}, 4);
    EXPECT_EQ(character_eval(s, CubePoint::from_signs({-1, 1, 1, 1})), -1);
    EXPECT_EQ(character_eval(s, CubePoint::from_signs({-1, -1, 1, 1})), 1);
}

TEST(Character, OrthonormalityN8) {
    const int n = 8;
    for (std::uint64_t s = 0; s < 256; s += 7) {
        for (std::uint64_t t = 0; t < 256; t += 5) {
            long long acc = 0;
            for (std::uint64_t x = 0; x < 256; ++x) acc += character_sign(s, x) * character_sign(t, x);
            EXPECT_EQ(acc, s == t ? 256 : 0) << s << " " << t;
        }
    }
    (void)n;
}

TEST(CubePoint, RejectsBadInput) {
    EXPECT_THROW(CubePoint::from_signs({1, 0}), DomainError);
    EXPECT_THROW(CubePoint(4, 2), std::exception);
    EXPECT_THROW(SubsetMask::from_indices({0}, 3), DomainError);
    EXPECT_THROW(SubsetMask::from_indices({4}, 3), DomainError);
    EXPECT_THROW(SubsetMask::from_indices({1, 1}, 3), DomainError);
    EXPECT_EQ(SubsetMask::from_indices({3, 1}, 3).indices(), (std::vector<int>{1, 3}));
}

TEST(Evaluate, Examples) {
    const auto singles = make_family(FamilySpec::homogeneous(2, 1));
    EXPECT_EQ(evaluate(WalshPolynomial<long long>::indicator(singles), CubePoint::ones(2)), 2);
    const auto pairs = make_family(FamilySpec::homogeneous(3, 2));
    const auto f = WalshPolynomial<long long>::indicator(pairs);
    EXPECT_EQ(evaluate(f, CubePoint::ones(3)), 3);
    EXPECT_EQ(evaluate(f, CubePoint::from_signs({1, 1, -1})), -1);
    EXPECT_THROW(evaluate(f, CubePoint::ones(4)), DimensionError);
}

TEST(Walsh, ConstantAndCharacter) {
    std::vector<Rational> ones(16, Rational(1));
    auto c = walsh_transform<Rational>(ones);
    EXPECT_EQ(c[0], 1);
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_EQ(c[i], 0);

    std::vector<Rational> chi(16);
    for (std::uint64_t x = 0; x < 16; ++x) chi[x] = character_sign(1, x);
    c = walsh_transform<Rational>(chi);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], i == 1 ? 1 : 0);
}

TEST(Walsh, RoundTripExact) {
    CounterRng rng(7);
    for (int n : {4, 8, 12}) {
        std::vector<Rational> coeffs(std::size_t{1} << n);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            coeffs[i] = Rational(static_cast<long long>(rng.bits(i) % 17) - 8, 1 + static_cast<long long>(rng.bits(i + 9999) % 5));
        }
        const auto values = inverse_walsh_transform<Rational>(coeffs);
        EXPECT_EQ(walsh_transform<Rational>(values), coeffs) << n;
    }
}

TEST(Walsh, MatchesEvaluate) {
    const auto fam = make_family(FamilySpec::up_to(5, 2));
    std::vector<long long> c(fam.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<long long>(i) - 7;
    const WalshPolynomial<long long> f(fam, c);
    const auto values = value_table(f);
    for (std::uint64_t x = 0; x < 32; ++x) EXPECT_EQ(values[x], evaluate(f, CubePoint(x, 5)));
}

TEST(Walsh, RejectsNonPowerOfTwo) {
    std::vector<double> v(6, 1.0);
    EXPECT_THROW(walsh_transform<double>(v), std::exception);
}

TEST(Family, Factories) {
    const auto primes = make_family(FamilySpec::prime_singletons(10));
    ASSERT_EQ(primes.size(), 4U);
    std::vector<std::vector<int>> got;
    for (const auto& s : primes.sets()) got.push_back(s.indices());
    EXPECT_EQ(got, (std::vector<std::vector<int>>{{2}, {3}, {5}, {7}}));

    EXPECT_EQ(make_family(FamilySpec::homogeneous(4, 2)).size(), 6U);

    const auto sf = make_family(FamilySpec::square_free(10));
    std::set<std::vector<int>> members;
    for (const auto& s : sf.sets()) members.insert(s.indices());
    EXPECT_TRUE(members.count({2, 3}));
    EXPECT_FALSE(members.count({2, 3, 5}));
    EXPECT_EQ(make_family(FamilySpec::square_free(16)).size(), 11U);
}

TEST(Family, SizesMatchBinomials) {
    for (int n = 1; n <= 14; ++n) {
        BigInt cumulative = 1;
        for (int d = 1; d <= n; ++d) {
            cumulative += binomial(n, d);
            EXPECT_EQ(BigInt(make_family(FamilySpec::homogeneous(n, d)).size()), binomial(n, d));
            EXPECT_EQ(BigInt(make_family(FamilySpec::up_to(n, d)).size()), cumulative);
        }
    }
}

TEST(Family, RejectsDuplicatesAndEmpty) {
    EXPECT_THROW(make_family(FamilySpec::explicit_sets(3, {{1}, {1}})), DomainError);
    EXPECT_THROW(make_family(FamilySpec::explicit_sets(3, {})), DomainError);
    EXPECT_THROW(make_family(FamilySpec::homogeneous(3, 4)), std::exception);
}

TEST(Family, Permuted) {
    const auto fam = make_family(FamilySpec::explicit_sets(4, {{1, 2}, {4}}));
    const auto p = fam.permuted({3, 2, 1, 0});
    std::vector<std::vector<int>> got;
    for (const auto& s : p.sets()) got.push_back(s.indices());
    EXPECT_EQ(got, (std::vector<std::vector<int>>{{1}, {3, 4}}));
}

TEST(Gray, SmallCases) {
    const auto one = gray_iterate(1);
    ASSERT_EQ(one.size(), 2U);
    EXPECT_EQ(one[0].point, CubePoint::ones(1));
    EXPECT_FALSE(one[0].flipped.has_value());
    EXPECT_EQ(one[1].flipped, 0);
    EXPECT_EQ(one[1].point.coordinate(0), -1);
}

TEST(Gray, VisitsEveryPointOnce) {
    for (int n : {2, 5, 10}) {
        const auto walk = gray_iterate(n);
        ASSERT_EQ(walk.size(), std::size_t{1} << n);
        std::set<std::uint64_t> seen;
        for (std::size_t i = 0; i < walk.size(); ++i) {
            seen.insert(walk[i].point.bits());
            if (i > 0) {
                const std::uint64_t diff = walk[i].point.bits() ^ walk[i - 1].point.bits();
                ASSERT_EQ(std::popcount(diff), 1);
                EXPECT_EQ(std::countr_zero(diff), *walk[i].flipped);
            }
        }
        EXPECT_EQ(seen.size(), std::size_t{1} << n);
    }
}

TEST(Rng, CounterBasedAndDeterministic) {
    const CounterRng a(42, 3);
    const CounterRng b(42, 3);
    const CounterRng c(42, 4);
    for (std::uint64_t i = 0; i < 100; ++i) {
        EXPECT_EQ(a.bits(i), b.bits(i));
        EXPECT_NE(a.bits(i), c.bits(i));
        EXPECT_GE(a.uniform(i), 0.0);
        EXPECT_LT(a.uniform(i), 1.0);
    }
}

TEST(FamilyJson, ShorthandAndRoundTrip) {
    EXPECT_EQ(parse_family("homog:5:2"), FamilySpec::homogeneous(5, 2));
    EXPECT_EQ(parse_family("upto:7:3"), FamilySpec::up_to(7, 3));
    EXPECT_EQ(parse_family("primes:30"), FamilySpec::prime_singletons(30));
    EXPECT_EQ(parse_family("sqfree:16"), FamilySpec::square_free(16));
    EXPECT_THROW(parse_family("homog:5"), DomainError);
    EXPECT_THROW(parse_family("homog:x:2"), DomainError);

    const auto spec = FamilySpec::explicit_sets(4, {{1, 2}, {3}});
    EXPECT_EQ(family_spec_from_json(family_spec_to_json(spec)), spec);

    const auto path = std::filesystem::temp_directory_path() / "cube_family_test.json";
    {
        std::ofstream f(path);
        f << family_spec_to_json(spec).dump();
    }
    EXPECT_EQ(parse_family("file:" + path.string()), spec);
    EXPECT_EQ(parse_family(path.string()), spec);
    std::filesystem::remove(path);
    EXPECT_THROW(parse_family("/nonexistent/family.json"), DomainError);
}

TEST(FamilyJson, MaterializedListing) {
    const auto j = family_to_json(make_family(FamilySpec::homogeneous(3, 2)));
    EXPECT_EQ(j.dump(), R"({"kind":"explicit","N":3,"sets":[[1,2],[1,3],[2,3]]})");
    const auto again = make_family(family_spec_from_json(j));
    EXPECT_EQ(again.size(), 3U);
}

TEST(Oracle, AllSubsetsHelper) {
    EXPECT_EQ(oracle::all_subsets(3).size(), 8U);
    EXPECT_EQ(oracle::brute_lambda(oracle::all_subsets(3)), 1);
}
