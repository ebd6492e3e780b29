#include "certus/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "certus/error.hpp"
#include "certus/format.hpp"

namespace certus {
namespace {

std::string join_violations(const std::vector<std::string>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

// Left and right cut boundaries integrated separately. On the rising side the
// cut for alpha in (mu_k, mu_k+1] starts on segment k, so the integral over that
// band is the band height times the segment's mean x. Flat bands contribute nothing.
double yager_rank(std::span<const Breakpoint> p) {
  std::size_t first_peak = 0;
  while (p[first_peak].mu < 1.0 - kTolerance) ++first_peak;
  std::size_t last_peak = p.size() - 1;
  while (p[last_peak].mu < 1.0 - kTolerance) --last_peak;

  double left = p.front().x * p.front().mu;
  for (std::size_t k = 0; k < first_peak; ++k) {
    left += (p[k + 1].mu - p[k].mu) * (p[k].x + p[k + 1].x) / 2.0;
  }
  double right = p.back().x * p.back().mu;
  for (std::size_t k = last_peak; k + 1 < p.size(); ++k) {
    right += (p[k].mu - p[k + 1].mu) * (p[k].x + p[k + 1].x) / 2.0;
  }
  return (left + right) / 2.0;
}

// Membership of the set restricted to the open interval (lo, hi), which holds no
// breakpoint of the set, evaluated as one-sided limits at both ends.
std::pair<double, double> interval_limits(const FuzzySet& set, double lo, double hi) {
  const auto p = set.breakpoints();
  const double mid = (lo + hi) / 2.0;
  if (p.size() == 1 || mid < p.front().x || mid > p.back().x) return {0.0, 0.0};
  auto it = std::upper_bound(p.begin(), p.end(), mid,
                             [](double x, const Breakpoint& b) { return x < b.x; });
  const Breakpoint& a = *(it - 1);
  const Breakpoint& b = *it;
  const double slope = (b.mu - a.mu) / (b.x - a.x);
  return {a.mu + slope * (lo - a.x), a.mu + slope * (hi - a.x)};
}

std::vector<double> merged_grid(const FuzzySet& a, const FuzzySet& b) {
  std::vector<double> grid;
  grid.reserve(a.breakpoints().size() + b.breakpoints().size());
  for (const auto& bp : a.breakpoints()) grid.push_back(bp.x);
  for (const auto& bp : b.breakpoints()) grid.push_back(bp.x);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

std::vector<std::string> validate_set(std::span<const Breakpoint> points) {
  std::vector<std::string> violations;
  if (points.empty()) {
    violations.emplace_back("empty breakpoint list");
    return violations;
  }
  bool domain_ok = true;
  bool mu_ok = true;
  bool increasing = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.x >= 0.0 && p.x <= 1.0)) domain_ok = false;
    if (!(p.mu >= 0.0 && p.mu <= 1.0)) mu_ok = false;
    if (i > 0 && !(points[i - 1].x < p.x)) increasing = false;
  }
  if (!domain_ok) violations.emplace_back("breakpoint x outside [0,1]");
  if (!mu_ok) violations.emplace_back("membership value outside [0,1]");
  if (!increasing) violations.emplace_back("breakpoint x values not strictly increasing");

  double peak = 0.0;
  for (const auto& p : points) peak = std::max(peak, p.mu);
  if (std::abs(peak - 1.0) > kTolerance) {
    std::ostringstream msg;
    msg << "not normalized: maximum membership is " << format_number(peak);
    violations.push_back(msg.str());
  }

  // Unimodal: once membership falls it may never rise again.
  bool falling = false;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double delta = points[i].mu - points[i - 1].mu;
    if (delta < -kTolerance) falling = true;
    if (falling && delta > kTolerance) {
      violations.emplace_back("not convex: membership rises again after falling at x = " +
                              format_number(points[i - 1].x));
      break;
    }
  }
  return violations;
}

FuzzySet::FuzzySet(std::vector<Breakpoint> points) : points_(std::move(points)) {
  rank_ = yager_rank(points_);
}

FuzzySet FuzzySet::from_breakpoints(std::vector<Breakpoint> points) {
  auto violations = validate_set(points);
  if (!violations.empty()) throw InvalidSetError(join_violations(violations));
  return FuzzySet(std::move(points));
}

FuzzySet FuzzySet::point(double v) { return from_breakpoints({{v, 1.0}}); }

FuzzySet FuzzySet::triangle(double a, double b, double c) { return trapezoid(a, b, b, c); }

FuzzySet FuzzySet::trapezoid(double a, double b, double c, double d) {
  if (!(a <= b && b <= c && c <= d)) {
    throw InvalidSetError("set literal parameters must be non-decreasing");
  }
  const std::array<Breakpoint, 4> raw = {{{a, 0.0}, {b, 1.0}, {c, 1.0}, {d, 0.0}}};
  std::vector<Breakpoint> points;
  for (const auto& bp : raw) {
    if (!points.empty() && points.back().x == bp.x) {
      points.back().mu = std::max(points.back().mu, bp.mu);
    } else {
      points.push_back(bp);
    }
  }
  return from_breakpoints(std::move(points));
}

double FuzzySet::membership(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("membership argument " + format_number(x) + " outside [0,1]");
  }
  if (x < points_.front().x || x > points_.back().x) return 0.0;
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const Breakpoint& b, double v) { return b.x < v; });
  if (it->x == x) return it->mu;
  const Breakpoint& lo = *(it - 1);
  const Breakpoint& hi = *it;
  return lo.mu + (hi.mu - lo.mu) * (x - lo.x) / (hi.x - lo.x);
}

double membership(const FuzzySet& set, double x) { return set.membership(x); }
double rank(const FuzzySet& set) { return set.rank(); }

bool subset_of(const FuzzySet& a, const FuzzySet& b) {
  const auto grid = merged_grid(a, b);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (a.membership(grid[i]) > b.membership(grid[i]) + kTolerance) return false;
    if (i + 1 < grid.size()) {
      auto [al, ar] = interval_limits(a, grid[i], grid[i + 1]);
      auto [bl, br] = interval_limits(b, grid[i], grid[i + 1]);
      if (al > bl + kTolerance || ar > br + kTolerance) return false;
    }
  }
  return true;
}

bool contains_set(const FuzzySet& a, const FuzzySet& b) { return subset_of(b, a); }

bool overlaps(const FuzzySet& a, const FuzzySet& b) {
  const auto grid = merged_grid(a, b);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (a.membership(grid[i]) > kTolerance && b.membership(grid[i]) > kTolerance) return true;
    if (i + 1 < grid.size()) {
      // A non-negative linear piece that is positive at either end is positive
      // throughout the open interval.
      auto [al, ar] = interval_limits(a, grid[i], grid[i + 1]);
      auto [bl, br] = interval_limits(b, grid[i], grid[i + 1]);
      if (std::max(al, ar) > kTolerance && std::max(bl, br) > kTolerance) return true;
    }
  }
  return false;
}

bool same_membership(const FuzzySet& a, const FuzzySet& b) {
  return subset_of(a, b) && subset_of(b, a);
}

bool compare(const FuzzySet& a, const FuzzySet& b, Order order) {
  const bool greater = a.rank() > b.rank() + kTolerance;
  const bool less = a.rank() < b.rank() - kTolerance;
  switch (order) {
    case Order::greater:
      return greater;
    case Order::less:
      return less;
    case Order::greater_equal:
      return greater || same_membership(a, b);
    case Order::less_equal:
      return less || same_membership(a, b);
  }
  return false;
}

std::size_t extremum_index(std::span<const FuzzySet> sets, Extremum mode) {
  if (sets.empty()) throw Error("min/max needs at least one set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    const double r = sets[i].rank();
    const double b = sets[best].rank();
    if (mode == Extremum::min ? r < b - kTolerance : r > b + kTolerance) best = i;
  }
  return best;
}

FuzzySet extremum(std::span<const FuzzySet> sets, Extremum mode) {
  return sets[extremum_index(sets, mode)];
}

bool is_canonical_name(std::string_view name) {
  return std::find(kCanonicalNames.begin(), kCanonicalNames.end(), name) != kCanonicalNames.end();
}

const Ladder& Ladder::standard() {
  static const Ladder ladder = from_sets({
      FuzzySet::point(0.0),
      FuzzySet::trapezoid(0.0, 0.1, 0.2, 0.3),
      FuzzySet::trapezoid(0.2, 0.3, 0.4, 0.5),
      FuzzySet::trapezoid(0.35, 0.45, 0.55, 0.65),
      FuzzySet::trapezoid(0.5, 0.6, 0.8, 0.9),
      FuzzySet::trapezoid(0.8, 0.9, 1.0, 1.0),
      FuzzySet::point(1.0),
  });
  return ladder;
}

Ladder Ladder::from_sets(std::array<FuzzySet, 7> sets) {
  std::vector<LadderEntry> entries;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i > 0 && !(sets[i].rank() > sets[i - 1].rank() + kTolerance)) {
      throw InvalidSetError("ladder ranks must strictly increase: " +
                            std::string(kCanonicalNames[i]) + " does not rank above " +
                            std::string(kCanonicalNames[i - 1]));
    }
    entries.push_back({std::string(kCanonicalNames[i]), sets[i], static_cast<int>(i)});
  }
  return Ladder(std::move(entries));
}

std::optional<std::size_t> Ladder::find(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

const FuzzySet& Ladder::set(std::string_view name) const {
  auto i = find(name);
  if (!i) throw LookupError("unknown canonical set '" + std::string(name) + "'");
  return entries_[*i].set;
}

int Ladder::score(std::string_view name) const {
  auto i = find(name);
  if (!i) throw LookupError("unknown canonical set '" + std::string(name) + "'");
  return entries_[*i].score;
}

std::string_view Ladder::unscore(int s) const {
  const int clamped = std::clamp(s, 0, static_cast<int>(entries_.size()) - 1);
  return entries_[static_cast<std::size_t>(clamped)].name;
}

std::string_view Ladder::nearest_canonical(const FuzzySet& set) const {
  std::size_t best = 0;
  double best_distance = std::abs(set.rank() - entries_[0].set.rank());
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const double d = std::abs(set.rank() - entries_[i].set.rank());
    if (d < best_distance - kTolerance) {
      best = i;
      best_distance = d;
    }
  }
  return entries_[best].name;
}

std::optional<std::string_view> Ladder::name_of(const FuzzySet& set) const {
  for (const auto& e : entries_) {
    if (e.set == set || same_membership(e.set, set)) return std::string_view(e.name);
  }
  return std::nullopt;
}

std::string to_literal(const FuzzySet& set) {
  const auto p = set.breakpoints();
  if (p.size() == 1) return "point(" + format_number(p[0].x) + ")";

  // Reconstruct trapezoid parameters when the shape is one: rises 0 -> 1, optional
  // plateau, falls 1 -> 0, with vertical edges allowed at either end.
  std::vector<double> params;
  std::size_t i = 0;
  if (p[0].mu == 0.0) {
    params.push_back(p[0].x);
    i = 1;
  }
  bool shape_ok = i < p.size() && p[i].mu == 1.0;
  if (shape_ok) {
    if (params.empty()) params.push_back(p[i].x);
    params.push_back(p[i].x);
    std::size_t j = i;
    if (j + 1 < p.size() && p[j + 1].mu == 1.0) ++j;
    params.push_back(p[j].x);
    if (j + 1 == p.size()) {
      params.push_back(p[j].x);
    } else if (j + 2 == p.size() && p[j + 1].mu == 0.0) {
      params.push_back(p[j + 1].x);
    } else {
      shape_ok = false;
    }
  }
  if (shape_ok && params.size() == 4) {
    if (params[1] == params[2]) {
      return "triangle(" + format_number(params[0]) + ", " + format_number(params[1]) + ", " +
             format_number(params[3]) + ")";
    }
    return "trapezoid(" + format_number(params[0]) + ", " + format_number(params[1]) + ", " +
           format_number(params[2]) + ", " + format_number(params[3]) + ")";
  }

  std::string out = "[";
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k > 0) out += ", ";
    out += "(" + format_number(p[k].x) + ", " + format_number(p[k].mu) + ")";
  }
  return out + "]";
}

std::string describe(const FuzzySet& set, const Ladder& ladder) {
  if (auto name = ladder.name_of(set)) return std::string(*name);
  return to_literal(set);
}

}  // namespace certus
