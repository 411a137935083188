#ifndef BALLSPACE_NESTS_HPP
#define BALLSPACE_NESTS_HPP

// Nests (families totally ordered by inclusion): maximal-nest enumeration,
// spherical completeness and the OT nest lemma.

#include "ballspace/balls.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace ballspace {

inline constexpr std::size_t kDefaultNestBound = 20;

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

using Nest = std::vector<PointSet>;

namespace detail {

inline std::vector<PointSet> distinct_sets(const std::vector<PointSet>& family, std::size_t bound) {
  std::vector<PointSet> distinct;
  for (const auto& s : family) {
    if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(s);
  }
  if (distinct.size() > bound) {
    throw InstanceTooLarge("instance too large: " + std::to_string(distinct.size()) + " distinct balls exceed the bound of " +
                           std::to_string(bound));
  }
  std::sort(distinct.begin(), distinct.end());
  return distinct;
}

}  // namespace detail

/// All maximal nests of the family, each listed from its largest ball down.
/// A maximal chain in a finite poset runs from a maximal element to a minimal
/// one through covering pairs, so the search walks cover edges only.
inline std::vector<Nest> enumerate_maximal_nests(const std::vector<PointSet>& family,
                                                 std::size_t bound = kDefaultNestBound) {
  const std::vector<PointSet> sets = detail::distinct_sets(family, bound);
  const std::size_t k = sets.size();
  auto below = [&](std::size_t c, std::size_t b) { return sets[c].proper_subset_of(sets[b]); };

  std::vector<std::vector<std::size_t>> covers(k);
  std::vector<bool> is_maximal(k, true);
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t c = 0; c < k; ++c) {
      if (!below(c, b)) continue;
      is_maximal[c] = false;
      bool direct = true;
      for (std::size_t m = 0; m < k && direct; ++m) direct = !(below(c, m) && below(m, b));
      if (direct) covers[b].push_back(c);
    }
  }

  std::vector<Nest> out;
  std::vector<std::size_t> path;
  std::function<void(std::size_t)> walk = [&](std::size_t top) {
    path.push_back(top);
    if (covers[top].empty()) {
      Nest nest;
      for (std::size_t i : path) nest.push_back(sets[i]);
      out.push_back(std::move(nest));
    }
    for (std::size_t c : covers[top]) walk(c);
    path.pop_back();
  };
  for (std::size_t b = 0; b < k; ++b) {
    if (is_maximal[b]) walk(b);
  }
  return out;
}

/// Every nest must have a nonempty intersection. It suffices to look at the
/// maximal nests, whose intersection is their smallest member. Witnesses are
/// positions in `family`.
inline Report check_spherical_completeness(const std::vector<PointSet>& family,
                                           std::size_t bound = kDefaultNestBound) {
  Report report;
  auto position = [&](const PointSet& s) {
    return static_cast<std::size_t>(std::find(family.begin(), family.end(), s) - family.begin());
  };
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i].empty()) report.add("empty-ball", {i}, "family member is the empty set");
  }
  for (const Nest& nest : enumerate_maximal_nests(family, bound)) {
    PointSet common = nest.front();
    for (const auto& s : nest) common = common.intersect(s);
    if (common.empty()) {
      std::vector<std::size_t> witness;
      for (const auto& s : nest) witness.push_back(position(s));
      report.add("empty-intersection", std::move(witness), "nest has empty intersection");
    }
  }
  return report;
}

/// For a nest {B_x : x in A} inside the generated space of x0, checks
///   d(x,y) <= |phi(x0,x) - phi(x0,y)|
/// and that y in B_x, phi(x,y) <= phi(y,x), phi(x0,y) <= phi(x0,x) are
/// equivalent, for every ordered pair of A.
inline Report check_nest_equivalences(const std::vector<PointId>& centers, const OtFunction& phi, PointId x0,
                                      const FiniteMetricSpace& space) {
  require_same_size(space, phi, "OT function");
  require_point(space, x0, "x0");
  const PointSet root = ot_ball(space, phi, x0).members;
  std::vector<PointSet> balls;
  for (PointId x : centers) {
    require_point(space, x, "nest center");
    if (!root.contains(x)) {
      throw PreconditionError("nest center " + space.label(x) + " is not in the ball of " + space.label(x0));
    }
    balls.push_back(ot_ball(space, phi, x).members);
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      if (!balls[i].subset_of(balls[j]) && !balls[j].subset_of(balls[i])) {
        throw PreconditionError("not a nest: balls of " + space.label(centers[i]) + " and " + space.label(centers[j]) +
                                " are incomparable");
      }
    }
  }

  Report report;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const PointId x = centers[i];
      const PointId y = centers[j];
      const Scalar& fx = phi(x0, x).value();
      const Scalar& fy = phi(x0, y).value();
      const Scalar gap = abs(Scalar(fx - fy));
      if (space.distance(x, y) > gap) {
        report.add("bound", {x.index, y.index}, to_string(space.distance(x, y)) + " > " + to_string(gap));
      }
      const bool in_ball = balls[i].contains(y);
      const bool swapped = phi(x, y) <= phi(y, x);
      const bool descends = fy <= fx;
      if (in_ball != swapped) report.add("(i)<=>(ii)", {x.index, y.index});
      if (in_ball != descends) report.add("(i)<=>(iii)", {x.index, y.index});
      if (swapped != descends) report.add("(ii)<=>(iii)", {x.index, y.index});
    }
  }
  return report;
}

}  // namespace ballspace

#endif  // BALLSPACE_NESTS_HPP
