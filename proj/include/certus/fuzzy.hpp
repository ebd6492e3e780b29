#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace certus {

/// Tolerance applied to membership and rank comparisons.
inline constexpr double kTolerance = 1e-12;

struct Breakpoint {
  double x = 0.0;
  double mu = 0.0;

  bool operator==(const Breakpoint&) const = default;
};

/// A convex, normalized, piecewise-linear membership function on [0,1].
///
/// Membership is linear between consecutive breakpoints and zero outside the
/// first and last breakpoint. A single breakpoint (v, 1) is the crisp set {v}.
/// Instances are always valid; the factories throw InvalidSetError otherwise.
class FuzzySet {
 public:
  static FuzzySet point(double v);
  static FuzzySet triangle(double a, double b, double c);
  static FuzzySet trapezoid(double a, double b, double c, double d);
  static FuzzySet from_breakpoints(std::vector<Breakpoint> points);

  std::span<const Breakpoint> breakpoints() const { return points_; }
  bool is_singleton() const { return points_.size() == 1; }

  /// Throws DomainError when x is outside [0,1].
  double membership(double x) const;

  /// Yager's ordering value, the integral over alpha of the alpha-cut midpoint.
  double rank() const { return rank_; }

  /// Support endpoints where membership is positive or at a breakpoint.
  double lower() const { return points_.front().x; }
  double upper() const { return points_.back().x; }

  bool operator==(const FuzzySet& other) const { return points_ == other.points_; }

 private:
  explicit FuzzySet(std::vector<Breakpoint> points);

  std::vector<Breakpoint> points_;
  double rank_ = 0.0;
};

/// One message per violated invariant; empty when the breakpoints form a valid set.
std::vector<std::string> validate_set(std::span<const Breakpoint> points);

double membership(const FuzzySet& set, double x);
double rank(const FuzzySet& set);

/// `A is B`: membership of a never exceeds membership of b.
bool subset_of(const FuzzySet& a, const FuzzySet& b);
/// `A contains B`.
bool contains_set(const FuzzySet& a, const FuzzySet& b);
/// `A overlaps B`: some x has positive membership in both.
bool overlaps(const FuzzySet& a, const FuzzySet& b);
/// Pointwise-equal membership functions.
bool same_membership(const FuzzySet& a, const FuzzySet& b);

enum class Order { greater, less, greater_equal, less_equal };

/// gt/lt compare ranks strictly; ge/le additionally accept identical membership.
bool compare(const FuzzySet& a, const FuzzySet& b, Order order);

enum class Extremum { min, max };

/// Index of the least/greatest-ranked set; first occurrence wins ties.
std::size_t extremum_index(std::span<const FuzzySet> sets, Extremum mode);
FuzzySet extremum(std::span<const FuzzySet> sets, Extremum mode);

inline constexpr std::array<std::string_view, 7> kCanonicalNames = {
    "zero", "very_low", "low", "med", "high", "very_high", "certain"};

bool is_canonical_name(std::string_view name);

struct LadderEntry {
  std::string name;
  FuzzySet set;
  int score = 0;
};

/// The seven named reference sets with their integer scores 0..6.
class Ladder {
 public:
  /// The built-in ladder.
  static const Ladder& standard();

  /// Sets in canonical-name order. Throws InvalidSetError unless ranks strictly increase.
  static Ladder from_sets(std::array<FuzzySet, 7> sets);

  std::span<const LadderEntry> entries() const { return entries_; }
  const LadderEntry& entry(std::size_t score) const { return entries_.at(score); }

  std::optional<std::size_t> find(std::string_view name) const;
  const FuzzySet& set(std::string_view name) const;

  int score(std::string_view name) const;
  /// Clamps s into [0,6] before the lookup.
  std::string_view unscore(int s) const;

  /// Ladder entry with the closest rank; ties go to the lower score.
  std::string_view nearest_canonical(const FuzzySet& set) const;
  /// Name of the entry whose membership equals the set, if any.
  std::optional<std::string_view> name_of(const FuzzySet& set) const;

 private:
  explicit Ladder(std::vector<LadderEntry> entries) : entries_(std::move(entries)) {}

  std::vector<LadderEntry> entries_;
};

/// `point(v)`, `triangle(a,b,c)`, `trapezoid(a,b,c,d)` or a raw breakpoint list.
std::string to_literal(const FuzzySet& set);

/// Canonical name when the set is on the ladder, literal text otherwise.
std::string describe(const FuzzySet& set, const Ladder& ladder);

}  // namespace certus
