#ifndef BALLSPACE_DESCENT_HPP
#define BALLSPACE_DESCENT_HPP

// Constructive singleton-ball search. In a strongly contractive assignment
// every step y in B_x \ {x} gives B_y strictly inside B_x, so on a finite
// space repeated steps must stop at some a with B_a = {a}.

#include "ballspace/balls.hpp"

#include <vector>

namespace ballspace {

struct DescentTrace {
  std::vector<PointId> chain;
  std::vector<PointSet> balls;
  PointId terminal;
};

class ContractivityError : public Error {
 public:
  explicit ContractivityError(Report report)
      : Error("ball assignment is not strongly contractive"), report_(std::move(report)) {}
  const Report& report() const { return report_; }

 private:
  Report report_;
};

/// Descends from x, each step moving to the member of the current ball whose
/// own ball is smallest (ties: lowest index), until the ball is {terminal}.
inline DescentTrace singleton_descent(const BallAssignment& assignment, PointId x) {
  if (!assignment.domain().contains(x)) {
    throw PreconditionError("descent start " + std::to_string(x.index) + " is outside the assignment domain");
  }
  Report report = check_strongly_contractive(assignment);
  if (!report.ok()) throw ContractivityError(std::move(report));

  DescentTrace trace;
  PointId current = x;
  for (;;) {
    const PointSet& ball = assignment.members(current);
    trace.chain.push_back(current);
    trace.balls.push_back(ball);
    if (ball.is_singleton(current)) break;
    std::optional<PointId> next;
    for (PointId y : ball) {
      if (y == current) continue;
      if (!next || assignment.members(y).size() < assignment.members(*next).size()) next = y;
    }
    current = *next;
  }
  trace.terminal = current;
  return trace;
}

/// Singleton search for CK-inf balls from any start. A start with value +inf
/// has the whole space as its ball; the walk first enters the lowest-index
/// CK element and descends in the ball space that element generates.
inline DescentTrace ckinf_singleton(const FiniteMetricSpace& space, const CkInfFunction& phitilde, PointId x0) {
  require_same_size(space, phitilde, "CK-inf function");
  require_point(space, x0, "x0");
  if (phitilde.is_ck_element(x0)) return singleton_descent(ckinf_generated_ball_space(space, phitilde, x0), x0);

  PointId entry{0};
  while (!phitilde.is_ck_element(entry)) ++entry.index;
  DescentTrace inner = singleton_descent(ckinf_generated_ball_space(space, phitilde, entry), entry);
  DescentTrace trace;
  trace.chain.push_back(x0);
  trace.balls.push_back(ckinf_ball(space, phitilde, x0).members);
  trace.chain.insert(trace.chain.end(), inner.chain.begin(), inner.chain.end());
  trace.balls.insert(trace.balls.end(), inner.balls.begin(), inner.balls.end());
  trace.terminal = inner.terminal;
  return trace;
}

}  // namespace ballspace

#endif  // BALLSPACE_DESCENT_HPP
