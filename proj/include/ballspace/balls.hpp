#ifndef BALLSPACE_BALLS_HPP
#define BALLSPACE_BALLS_HPP

// Balls of the four families, ball assignments x -> B_x and the strong
// contractivity check.

#include "ballspace/functions.hpp"

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace ballspace {

/// Sorted set of points. Balls are compared by members, never by center.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<PointId> points) : items_(std::move(points)) { normalize(); }
  PointSet(std::initializer_list<std::size_t> indices) {
    for (std::size_t i : indices) items_.push_back(PointId{i});
    normalize();
  }

  static PointSet all(std::size_t n) {
    PointSet s;
    for (std::size_t i = 0; i < n; ++i) s.items_.push_back(PointId{i});
    return s;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(PointId p) const { return std::binary_search(items_.begin(), items_.end(), p); }
  bool subset_of(const PointSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }
  bool proper_subset_of(const PointSet& other) const { return size() < other.size() && subset_of(other); }
  bool is_singleton(PointId p) const { return items_.size() == 1 && items_.front() == p; }

  PointSet intersect(const PointSet& other) const {
    PointSet out;
    std::set_intersection(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                          std::back_inserter(out.items_));
    return out;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (PointId p : items_) out.push_back(p.index);
    return out;
  }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<PointId>& points() const { return items_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;
  friend auto operator<=>(const PointSet&, const PointSet&) = default;

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<PointId> items_;
};

enum class BallOrigin { ck, ot, ck_inf, petal, explicit_family };

inline std::string to_string(BallOrigin origin) {
  switch (origin) {
    case BallOrigin::ck: return "CK";
    case BallOrigin::ot: return "OT";
    case BallOrigin::ck_inf: return "CK_INF";
    case BallOrigin::petal: return "PETAL";
    case BallOrigin::explicit_family: return "EXPLICIT";
  }
  return "?";
}

struct Ball {
  PointId center;
  PointSet members;
  BallOrigin origin = BallOrigin::explicit_family;
};

/// B_x = {y : d(x,y) <= varphi(x) - varphi(y)}
inline Ball ck_ball(const FiniteMetricSpace& space, const CkFunction& varphi, PointId x) {
  require_same_size(space, varphi, "CK function");
  require_point(space, x, "center");
  std::vector<PointId> members;
  for (PointId y : space.points()) {
    if (ck_member(space, varphi, x, y)) members.push_back(y);
  }
  return Ball{x, PointSet(std::move(members)), BallOrigin::ck};
}

/// B_x = {y : d(x,y) <= -phi(x,y)}
inline Ball ot_ball(const FiniteMetricSpace& space, const OtFunction& phi, PointId x) {
  require_same_size(space, phi, "OT function");
  require_point(space, x, "center");
  std::vector<PointId> members;
  for (PointId y : space.points()) {
    if (ot_member(space, phi, x, y)) members.push_back(y);
  }
  return Ball{x, PointSet(std::move(members)), BallOrigin::ot};
}

/// B_x = {y : phi(y) + d(x,y) <= phi(x)}; all of X when phi(x) = +inf.
inline Ball ckinf_ball(const FiniteMetricSpace& space, const CkInfFunction& phi, PointId x) {
  require_same_size(space, phi, "CK-inf function");
  require_point(space, x, "center");
  std::vector<PointId> members;
  for (PointId y : space.points()) {
    if (ckinf_member(space, phi, x, y)) members.push_back(y);
  }
  return Ball{x, PointSet(std::move(members)), BallOrigin::ck_inf};
}

/// P_gamma(a,b) = {y : gamma d(y,a) + d(y,b) <= d(a,b)}
inline PointSet petal(const FiniteMetricSpace& space, const Scalar& gamma, PointId a, PointId b) {
  if (gamma <= 0) throw PreconditionError("petal: gamma must be positive, got " + to_string(gamma));
  require_point(space, a, "a");
  require_point(space, b, "b");
  std::vector<PointId> members;
  for (PointId y : space.points()) {
    if (gamma * space.distance(y, a) + space.distance(y, b) <= space.distance(a, b)) members.push_back(y);
  }
  return PointSet(std::move(members));
}

/// x -> B_x on a subset `domain` of a space with `universe` points.
class BallAssignment {
 public:
  BallAssignment(std::size_t universe, PointSet domain) : domain_(std::move(domain)), balls_(universe) {
    for (PointId p : domain_) {
      if (p.index >= universe) throw StructuralError("assignment domain exceeds the space");
    }
  }

  std::size_t universe() const { return balls_.size(); }
  const PointSet& domain() const { return domain_; }

  void set(Ball ball) {
    if (!domain_.contains(ball.center)) {
      throw StructuralError("ball center " + std::to_string(ball.center.index) + " outside the assignment domain");
    }
    balls_.at(ball.center.index) = std::move(ball);
  }

  const Ball& ball(PointId x) const {
    const auto& b = balls_.at(x.index);
    if (!b) throw PreconditionError("no ball assigned to point " + std::to_string(x.index));
    return *b;
  }
  const PointSet& members(PointId x) const { return ball(x).members; }

  /// Distinct member sets over the domain, in domain order.
  std::vector<PointSet> family() const {
    std::vector<PointSet> out;
    for (PointId x : domain_) {
      if (std::find(out.begin(), out.end(), members(x)) == out.end()) out.push_back(members(x));
    }
    return out;
  }

 private:
  PointSet domain_;
  std::vector<std::optional<Ball>> balls_;
};

inline BallAssignment ck_assignment(const FiniteMetricSpace& space, const CkFunction& varphi) {
  BallAssignment a(space.size(), PointSet::all(space.size()));
  for (PointId x : space.points()) a.set(ck_ball(space, varphi, x));
  return a;
}

inline BallAssignment ot_assignment(const FiniteMetricSpace& space, const OtFunction& phi) {
  BallAssignment a(space.size(), PointSet::all(space.size()));
  for (PointId x : space.points()) a.set(ot_ball(space, phi, x));
  return a;
}

/// All of X as domain; in general not strongly contractive (two +inf points
/// share the ball X).
inline BallAssignment ckinf_assignment(const FiniteMetricSpace& space, const CkInfFunction& phi) {
  BallAssignment a(space.size(), PointSet::all(space.size()));
  for (PointId x : space.points()) a.set(ckinf_ball(space, phi, x));
  return a;
}

/// {B_x : x in B_x0} for the OT balls of phi.
inline BallAssignment generated_ball_space(const FiniteMetricSpace& space, const OtFunction& phi, PointId x0) {
  Ball root = ot_ball(space, phi, x0);
  BallAssignment a(space.size(), root.members);
  for (PointId x : root.members) a.set(ot_ball(space, phi, x));
  return a;
}

/// {B_x : x in B_x0} for the CK-inf balls of phi.
inline BallAssignment ckinf_generated_ball_space(const FiniteMetricSpace& space, const CkInfFunction& phi,
                                                 PointId x0) {
  Ball root = ckinf_ball(space, phi, x0);
  BallAssignment a(space.size(), root.members);
  for (PointId x : root.members) a.set(ckinf_ball(space, phi, x));
  return a;
}

/// Balls given directly as member sets, ball i centered at point i.
inline BallAssignment explicit_assignment(const std::vector<PointSet>& balls) {
  BallAssignment a(balls.size(), PointSet::all(balls.size()));
  for (std::size_t i = 0; i < balls.size(); ++i) a.set(Ball{PointId{i}, balls[i], BallOrigin::explicit_family});
  return a;
}

/// Conditions over the domain:
///   (1) x in B_x
///   (2) y in B_x implies B_y subset of B_x
///   (3) y in B_x \ {x} implies B_y proper subset of B_x
/// plus "domain" when a ball reaches outside the domain, so B_y is undefined.
inline Report check_strongly_contractive(const BallAssignment& assignment) {
  Report report;
  for (PointId x : assignment.domain()) {
    const PointSet& bx = assignment.members(x);
    if (bx.empty()) report.add("nonempty", {x.index}, "B_x is empty");
    if (!bx.contains(x)) report.add("(1)", {x.index}, "x not in B_x");
    for (PointId y : bx) {
      if (!assignment.domain().contains(y)) {
        report.add("domain", {x.index, y.index}, "B_x contains a point outside the domain");
        continue;
      }
      const PointSet& by = assignment.members(y);
      if (!by.subset_of(bx)) report.add("(2)", {x.index, y.index}, "B_y not contained in B_x");
      if (y != x && !by.proper_subset_of(bx)) report.add("(3)", {x.index, y.index}, "B_y not properly contained in B_x");
    }
  }
  return report;
}

}  // namespace ballspace

#endif  // BALLSPACE_BALLS_HPP
