#include <algorithm>
#include <array>
#include <cmath>

#include "certus/error.hpp"
#include "certus/format.hpp"
#include "certus/fuzzy.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using namespace certus;

namespace {

const Ladder& L = Ladder::standard();
const FuzzySet& S(std::string_view name) { return L.set(name); }

}  // namespace

TEST_CASE("membership interpolates and is zero outside the support") {
  CHECK(membership(S("high"), 0.70) == doctest::Approx(1.0));
  CHECK(membership(S("high"), 0.50) == doctest::Approx(0.0));
  CHECK(membership(S("high"), 0.55) == doctest::Approx(0.5));
  CHECK(membership(S("high"), 0.95) == 0.0);
  CHECK(membership(FuzzySet::point(0.3), 0.3) == 1.0);
  CHECK(membership(FuzzySet::point(0.3), 0.31) == 0.0);
  CHECK_THROWS_AS(S("high").membership(1.2), DomainError);
  CHECK_THROWS_AS(S("high").membership(-0.1), DomainError);
}

TEST_CASE("validate_set reports each violated invariant") {
  CHECK(validate_set(FuzzySet::trapezoid(0.2, 0.3, 0.4, 0.5).breakpoints()).empty());

  std::vector<Breakpoint> subnormal{{0.1, 0.5}};
  auto v = validate_set(subnormal);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("normalized") != std::string::npos);

  std::vector<Breakpoint> bimodal{{0.1, 0}, {0.2, 1}, {0.3, 0}, {0.4, 1}};
  v = validate_set(bimodal);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("convex") != std::string::npos);

  std::vector<Breakpoint> unordered{{0.5, 1}, {0.2, 0}};
  CHECK_FALSE(validate_set(unordered).empty());
  std::vector<Breakpoint> out_of_range{{0.5, 1}, {1.5, 0}};
  CHECK_FALSE(validate_set(out_of_range).empty());
  CHECK_THROWS_AS(FuzzySet::from_breakpoints(bimodal), InvalidSetError);
  CHECK_THROWS_AS(FuzzySet::trapezoid(0.5, 0.4, 0.6, 0.7), InvalidSetError);
}

TEST_CASE("subset, contains and overlaps on the default ladder") {
  CHECK(subset_of(S("high"), S("high")));
  CHECK(subset_of(FuzzySet::point(0.7), S("high")));
  CHECK_FALSE(subset_of(S("high"), S("low")));
  CHECK(contains_set(S("high"), FuzzySet::point(0.7)));
  CHECK_FALSE(contains_set(S("low"), S("high")));
  CHECK(overlaps(S("low"), S("med")));
  CHECK_FALSE(overlaps(S("low"), S("high")));
  CHECK(overlaps(S("high"), S("high")));
  // Singletons overlap exactly where the other set has positive membership.
  CHECK(overlaps(FuzzySet::point(0.55), S("high")));
  CHECK_FALSE(overlaps(FuzzySet::point(0.5), S("high")));
  // certain sits in the core of very_high.
  CHECK(subset_of(S("certain"), S("very_high")));
  CHECK_FALSE(subset_of(S("zero"), S("very_low")));
}

TEST_CASE("subset check catches violations strictly inside a segment") {
  // The narrow triangle peaks at 0.5 where the wide one has membership 0.5.
  auto narrow = FuzzySet::triangle(0.45, 0.5, 0.55);
  auto wide = FuzzySet::trapezoid(0.0, 1.0, 1.0, 1.0);
  CHECK_FALSE(subset_of(narrow, wide));
  CHECK(subset_of(FuzzySet::point(1.0), wide));
  // Crossing segments: overlap happens between breakpoints only.
  CHECK(overlaps(FuzzySet::triangle(0.1, 0.2, 0.4), FuzzySet::triangle(0.3, 0.5, 0.6)));
}

TEST_CASE("rank closed form") {
  CHECK(S("zero").rank() == 0.0);
  CHECK(S("certain").rank() == 1.0);
  CHECK(S("high").rank() == doctest::Approx(0.70).epsilon(1e-12));
  CHECK(FuzzySet::trapezoid(0.1, 0.2, 0.3, 0.6).rank() == doctest::Approx(0.3));
  CHECK(FuzzySet::triangle(0.2, 0.3, 0.7).rank() == doctest::Approx((0.2 + 0.3 + 0.3 + 0.7) / 4));
  CHECK(rank(FuzzySet::point(0.42)) == doctest::Approx(0.42));
}

TEST_CASE("rank agrees with alpha-cut integration on random trapezoids") {
  testing::Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::array<double, 4> c{u(rng), u(rng), u(rng), u(rng)};
    std::sort(c.begin(), c.end());
    auto t = FuzzySet::trapezoid(c[0], c[1], c[2], c[3]);
    CHECK(t.rank() == doctest::Approx(testing::trapezoid_rank_by_integration(c[0], c[1], c[2], c[3], 10000))
                          .epsilon(1e-6));
  }
}

TEST_CASE("rank agrees with bisection oracle on irregular shapes") {
  auto odd = FuzzySet::from_breakpoints({{0.1, 0.0}, {0.2, 0.7}, {0.3, 1.0}, {0.35, 1.0}, {0.6, 0.2}, {0.9, 0.0}});
  CHECK(odd.rank() == doctest::Approx(testing::rank_by_bisection(odd, 10000)).epsilon(1e-6));
  for (const auto& e : L.entries()) {
    CHECK(e.set.rank() == doctest::Approx(testing::rank_by_bisection(e.set, 10000)).epsilon(1e-6));
  }
}

TEST_CASE("comparison properties on random trapezoids") {
  testing::Rng rng(11);
  std::vector<FuzzySet> sets;
  for (int i = 0; i < 300; ++i) sets.push_back(testing::random_trapezoid(rng));
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    const auto& a = sets[i];
    const auto& b = sets[i + 1];
    CHECK(subset_of(a, b) == contains_set(b, a));
    CHECK(overlaps(a, b) == overlaps(b, a));
    CHECK(subset_of(a, a));
    CHECK(overlaps(a, a));
    CHECK(compare(a, b, Order::greater) == (a.rank() > b.rank() + kTolerance));
    CHECK(compare(a, b, Order::less) == compare(b, a, Order::greater));
    CHECK_FALSE((compare(a, b, Order::greater) && compare(a, b, Order::less)));
    CHECK(compare(a, a, Order::greater_equal));
    CHECK(compare(a, a, Order::less_equal));
  }
}

TEST_CASE("compare examples") {
  CHECK(compare(S("very_high"), S("med"), Order::greater));
  CHECK(compare(S("high"), S("high"), Order::greater_equal));
  CHECK_FALSE(compare(S("low"), S("high"), Order::greater));
  // Equal rank, different shape: neither strict order nor equality holds.
  auto same_rank = FuzzySet::triangle(0.6, 0.7, 0.8);
  CHECK_FALSE(compare(same_rank, S("high"), Order::greater));
  CHECK_FALSE(compare(same_rank, S("high"), Order::less));
  CHECK_FALSE(compare(same_rank, S("high"), Order::greater_equal));
}

TEST_CASE("extremum picks by rank with first occurrence on ties") {
  std::vector<FuzzySet> two{S("high"), S("low")};
  CHECK(extremum(two, Extremum::min) == S("low"));
  std::vector<FuzzySet> one{S("med")};
  CHECK(extremum(one, Extremum::max) == S("med"));
  std::vector<FuzzySet> tie{FuzzySet::triangle(0.6, 0.7, 0.8), S("high")};
  CHECK(extremum_index(tie, Extremum::max) == 0);
  CHECK(extremum_index(tie, Extremum::min) == 0);
  CHECK_THROWS_AS(extremum(std::vector<FuzzySet>{}, Extremum::min), Error);
}

TEST_CASE("ladder scores and nearest canonical") {
  CHECK(L.score("zero") == 0);
  CHECK(L.score("med") == 3);
  CHECK(L.score("certain") == 6);
  CHECK(L.unscore(-1) == "zero");
  CHECK(L.unscore(9) == "certain");
  CHECK(L.unscore(2) == "low");
  CHECK_THROWS_AS(L.score("huge"), LookupError);
  for (std::size_t i = 1; i < L.entries().size(); ++i) CHECK(L.entry(i - 1).set.rank() < L.entry(i).set.rank());

  CHECK(L.nearest_canonical(S("high")) == "high");
  CHECK(L.nearest_canonical(FuzzySet::point(0.33)) == "low");
  // Equidistant from very_low (0.15) and low (0.35): the lower score wins.
  CHECK(L.nearest_canonical(FuzzySet::point(0.25)) == "very_low");
  CHECK(L.name_of(S("med")) == std::optional<std::string_view>("med"));
  CHECK_FALSE(L.name_of(FuzzySet::point(0.5)));
}

TEST_CASE("ladder override must be strictly increasing") {
  std::array<FuzzySet, 7> sets{S("zero"), S("very_low"), S("low"), S("med"), S("high"), S("very_high"), S("certain")};
  CHECK_NOTHROW(Ladder::from_sets(sets));
  std::swap(sets[2], sets[3]);
  CHECK_THROWS_AS(Ladder::from_sets(sets), InvalidSetError);
}

TEST_CASE("literals print back to constructors") {
  CHECK(to_literal(FuzzySet::point(0.25)) == "point(0.25)");
  CHECK(to_literal(FuzzySet::triangle(0.6, 0.7, 0.8)) == "triangle(0.6, 0.7, 0.8)");
  CHECK(to_literal(S("high")) == "trapezoid(0.5, 0.6, 0.8, 0.9)");
  CHECK(describe(S("high"), L) == "high");
  CHECK(describe(FuzzySet::point(0.42), L) == "point(0.42)");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1e-7) == "0.0000001");
}
