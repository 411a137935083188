#ifndef BALLSPACE_LEMMAS_HPP
#define BALLSPACE_LEMMAS_HPP

// The invariant suite over one instance: ball lemmas for every family,
// contractivity, descent soundness, the nest lemma and the reduction
// identities between CK, OT, CK-inf and petal balls.

#include "ballspace/nests.hpp"
#include "ballspace/theorems.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ballspace {

struct LemmaCheck {
  std::string name;
  std::size_t cases = 0;
  Report report;
};

struct LemmaSuite {
  std::vector<LemmaCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.report.ok(); });
  }
  std::size_t violation_count() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.report.violations.size();
    return n;
  }
  const LemmaCheck* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

struct PetalConfig {
  PointSet M;
  PointId b;
  Scalar gamma;
};

struct LemmaInput {
  FiniteMetricSpace space;
  std::optional<CkFunction> ck;
  std::optional<CkInfFunction> ckinf;
  std::optional<OtFunction> ot;
  /// When empty, every b with M = X \ {b} and gamma in {1/2, 1, 2}.
  std::vector<PetalConfig> petals;
};

using BallLookup = std::function<PointSet(PointId)>;

/// Chain nonempty, balls strictly shrinking and matching `ball_of`, terminal
/// ball exactly {terminal}, terminal inside the start ball, length <= |X|.
inline Report check_descent_trace(const DescentTrace& trace, const BallLookup& ball_of, const PointSet& start_ball,
                                  std::size_t universe) {
  Report r;
  if (trace.chain.empty() || trace.chain.size() != trace.balls.size()) {
    r.add("shape", {}, "chain and ball lists disagree");
    return r;
  }
  const std::size_t s = trace.chain.front().index;
  if (trace.chain.size() > universe) r.add("length", {s}, std::to_string(trace.chain.size()) + " steps");
  for (std::size_t i = 0; i + 1 < trace.balls.size(); ++i) {
    if (!trace.balls[i + 1].proper_subset_of(trace.balls[i])) {
      r.add("strict-shrink", {trace.chain[i].index, trace.chain[i + 1].index});
    }
  }
  if (trace.chain.back() != trace.terminal) r.add("terminal", {s, trace.terminal.index}, "chain does not end at terminal");
  if (!ball_of(trace.terminal).is_singleton(trace.terminal)) r.add("singleton", {s, trace.terminal.index});
  if (!start_ball.contains(trace.terminal)) r.add("in-start-ball", {s, trace.terminal.index});
  return r;
}

namespace detail {

inline Report ball_lemma(const FiniteMetricSpace& space, const BallLookup& ball_of,
                         const std::function<bool(PointId, PointId)>& strict_part, std::string_view strict_rule) {
  Report r;
  for (PointId x : space.points()) {
    const PointSet bx = ball_of(x);
    if (!bx.contains(x)) r.add("(1)", {x.index});
    for (PointId y : bx) {
      const PointSet by = ball_of(y);
      if (!by.subset_of(bx)) r.add("(2)", {x.index, y.index});
      if (y == x) continue;
      if (!by.proper_subset_of(bx)) r.add("(3)", {x.index, y.index});
      if (!strict_part(x, y)) r.add(std::string(strict_rule), {x.index, y.index});
    }
  }
  return r;
}

inline std::vector<PetalConfig> default_petals(std::size_t n) {
  std::vector<PetalConfig> out;
  if (n < 2) return out;
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<PointId> rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != b) rest.push_back(PointId{i});
    }
    for (const Scalar& g : {Scalar(1, 2), Scalar(1), Scalar(2)}) out.push_back({PointSet(rest), PointId{b}, g});
  }
  return out;
}

}  // namespace detail

inline void run_ck_lemmas(const FiniteMetricSpace& space, const CkFunction& ck, LemmaSuite& suite) {
  const std::size_t n = space.size();
  auto ball_of = [&](PointId x) { return ck_ball(space, ck, x).members; };

  suite.checks.push_back({"ck-ball-lemma", n * n,
                          detail::ball_lemma(space, ball_of, [&](PointId x, PointId y) { return ck(y) < ck(x); },
                                             "phi(y)<phi(x)")});

  const BallAssignment assignment = ck_assignment(space, ck);
  suite.checks.push_back({"ck-strongly-contractive", 1, check_strongly_contractive(assignment)});

  LemmaCheck descent{"ck-descent", n, {}};
  for (PointId x : space.points()) {
    descent.report.append(check_descent_trace(singleton_descent(assignment, x), ball_of, ball_of(x), n));
  }
  suite.checks.push_back(std::move(descent));

  const OtFunction phi = ck_to_ot(ck);
  LemmaCheck embedding{"ck-to-ot", n * n, {}};
  embedding.report.append(check_ot_axioms(phi, space).violations);
  if (ot_elements(phi).size() != n) embedding.report.add("all-ot-elements", {});
  for (PointId x : space.points()) {
    for (PointId y : space.points()) {
      if (phi(x, y) + phi(y, x) != ExtScalar(0)) embedding.report.add("antisymmetric", {x.index, y.index});
    }
  }
  suite.checks.push_back(std::move(embedding));

  LemmaCheck coherence{"ck-ot-ball-coherence", n, {}};
  for (PointId x : space.points()) {
    if (ot_ball(space, phi, x).members != ball_of(x)) coherence.report.add("ot_ball=ck_ball", {x.index});
  }
  suite.checks.push_back(std::move(coherence));

  const std::vector<PointSet> family = assignment.family();
  if (family.size() <= kDefaultNestBound) {
    suite.checks.push_back({"ck-spherically-complete", 1, check_spherical_completeness(family)});
  }
}

inline void run_ot_lemmas(const FiniteMetricSpace& space, const OtFunction& phi, LemmaSuite& suite) {
  const std::size_t n = space.size();
  const OtAxiomReport axioms = check_ot_axioms(phi, space);
  suite.checks.push_back({"ot-axioms", n * n * n, axioms.violations});
  if (!axioms.ok()) return;

  auto ball_of = [&](PointId x) { return ot_ball(space, phi, x).members; };
  suite.checks.push_back({"ot-ball-lemma", n * n,
                          detail::ball_lemma(space, ball_of, [&](PointId x, PointId y) { return phi(x, y) < phi(y, x); },
                                             "phi(x,y)<phi(y,x)")});

  LemmaCheck pair_sum{"ot-pair-sum", n * n, {}};
  for (PointId x : space.points()) {
    for (PointId y : space.points()) {
      if (phi(x, y) + phi(y, x) < ExtScalar(0)) pair_sum.report.add("phi(x,y)+phi(y,x)>=0", {x.index, y.index});
    }
  }
  suite.checks.push_back(std::move(pair_sum));

  LemmaCheck elements{"ot-elements", n, {}};
  const auto found = ot_elements(phi);
  if (found.size() != n) elements.report.add("all-points", {}, std::to_string(found.size()) + " of " + std::to_string(n));
  for (const auto& e : found) {
    if (ExtScalar(e.infimum) != axioms.row_infimum[e.point.index]) elements.report.add("infimum", {e.point.index});
  }
  suite.checks.push_back(std::move(elements));

  const BallAssignment full = ot_assignment(space, phi);
  LemmaCheck contractive{"ot-strongly-contractive", n + 1, check_strongly_contractive(full)};
  LemmaCheck contained{"ot-generated-contained", n, {}};
  LemmaCheck nests{"ot-nest-lemma", 0, {}};
  LemmaCheck spherical{"ot-spherically-complete", 0, {}};
  for (PointId x0 : space.points()) {
    const BallAssignment generated = generated_ball_space(space, phi, x0);
    contractive.report.append(check_strongly_contractive(generated));
    const PointSet root = ball_of(x0);
    for (PointId x : generated.domain()) {
      if (!generated.members(x).subset_of(root)) contained.report.add("B_x within B_x0", {x0.index, x.index});
    }
    const std::vector<PointSet> family = generated.family();
    if (family.size() > kDefaultNestBound) continue;
    spherical.cases += 1;
    spherical.report.append(check_spherical_completeness(family));
    for (const Nest& nest : enumerate_maximal_nests(family)) {
      std::vector<PointId> centers;
      for (PointId x : generated.domain()) {
        if (std::find(nest.begin(), nest.end(), generated.members(x)) != nest.end()) centers.push_back(x);
      }
      nests.cases += 1;
      nests.report.append(check_nest_equivalences(centers, phi, x0, space));
    }
  }
  suite.checks.push_back(std::move(contractive));
  suite.checks.push_back(std::move(contained));
  suite.checks.push_back(std::move(nests));
  suite.checks.push_back(std::move(spherical));

  LemmaCheck descent{"ot-descent", n, {}};
  for (PointId x : space.points()) {
    descent.report.append(check_descent_trace(singleton_descent(full, x), ball_of, ball_of(x), n));
  }
  suite.checks.push_back(std::move(descent));
}

inline void run_ckinf_lemmas(const FiniteMetricSpace& space, const CkInfFunction& phi, LemmaSuite& suite) {
  const std::size_t n = space.size();
  auto ball_of = [&](PointId x) { return ckinf_ball(space, phi, x).members; };

  LemmaCheck lemma{"ckinf-ball-lemma", n * n, {}};
  for (PointId x : space.points()) {
    const PointSet bx = ball_of(x);
    if (!bx.contains(x)) lemma.report.add("(1)", {x.index});
    if (phi(x).is_infinite() && bx != PointSet::all(n)) lemma.report.add("infinite-center-ball=X", {x.index});
    for (PointId y : bx) {
      const PointSet by = ball_of(y);
      if (!by.subset_of(bx)) lemma.report.add("(2)", {x.index, y.index});
      if (!(phi(y) <= phi(x))) lemma.report.add("phi(y)<=phi(x)", {x.index, y.index});
      if (phi(x).is_infinite() || y == x) continue;
      if (!by.proper_subset_of(bx)) lemma.report.add("(3)", {x.index, y.index});
      if (phi(y).is_infinite()) lemma.report.add("phi(y)<+inf", {x.index, y.index});
    }
  }
  suite.checks.push_back(std::move(lemma));

  LemmaCheck contractive{"ckinf-strongly-contractive", 0, {}};
  LemmaCheck restriction{"ckinf-restriction", 0, {}};
  for (PointId x0 : space.points()) {
    if (!phi.is_ck_element(x0)) continue;
    contractive.cases += 1;
    contractive.report.append(check_strongly_contractive(ckinf_generated_ball_space(space, phi, x0)));

    const CkRestriction r = restrict_ckinf(phi, x0, space);
    restriction.cases += 1;
    if (PointSet(r.ball) != ball_of(x0)) restriction.report.add("B0", {x0.index});
    restriction.report.append(check_metric_axioms(r.space.matrix()));
    for (std::size_t i = 0; i < r.ball.size(); ++i) {
      const PointId x = r.ball[i];
      if (!phi(x).is_finite() || phi(x).value() != r.function.values()[i]) {
        restriction.report.add("restricted-value", {x0.index, x.index});
      }
      std::vector<PointId> mapped;
      for (PointId local : ck_ball(r.space, r.function, PointId{i}).members) mapped.push_back(r.ball[local.index]);
      if (PointSet(std::move(mapped)) != ball_of(x)) restriction.report.add("ckinf_ball=ck_ball", {x0.index, x.index});
    }
  }
  suite.checks.push_back(std::move(contractive));
  suite.checks.push_back(std::move(restriction));

  LemmaCheck descent{"ckinf-descent", n, {}};
  for (PointId x : space.points()) {
    descent.report.append(check_descent_trace(ckinf_singleton(space, phi, x), ball_of, ball_of(x), n));
  }
  suite.checks.push_back(std::move(descent));
}

/// P_gamma(x,b) cap M equals the CK ball of x -> d(x,b)/gamma over M, and
/// petals shrink as gamma grows.
inline void run_petal_lemmas(const FiniteMetricSpace& space, const std::vector<PetalConfig>& configs,
                             LemmaSuite& suite) {
  LemmaCheck identity{"petal-identity", 0, {}};
  LemmaCheck monotone{"petal-monotone", 0, {}};
  for (const PetalConfig& c : configs) {
    const std::vector<PointId>& members = c.M.points();
    const FiniteMetricSpace sub = space.subspace(members);
    std::vector<Scalar> values;
    for (PointId m : members) values.push_back(space.distance(m, c.b) / c.gamma);
    const CkFunction varphi(std::move(values));
    for (std::size_t i = 0; i < members.size(); ++i) {
      identity.cases += 1;
      std::vector<PointId> mapped;
      for (PointId local : ck_ball(sub, varphi, PointId{i}).members) mapped.push_back(members[local.index]);
      if (petal(space, c.gamma, members[i], c.b).intersect(c.M) != PointSet(std::move(mapped))) {
        identity.report.add("petal=ck_ball", {members[i].index, c.b.index}, "gamma=" + to_string(c.gamma));
      }
      monotone.cases += 1;
      if (!petal(space, c.gamma * 2, members[i], c.b).subset_of(petal(space, c.gamma, members[i], c.b))) {
        monotone.report.add("P_2g within P_g", {members[i].index, c.b.index}, "gamma=" + to_string(c.gamma));
      }
    }
  }
  suite.checks.push_back(std::move(identity));
  suite.checks.push_back(std::move(monotone));
}

inline LemmaSuite verify_lemmas(const LemmaInput& input) {
  LemmaSuite suite;
  if (input.ck) run_ck_lemmas(input.space, *input.ck, suite);
  if (input.ot) run_ot_lemmas(input.space, *input.ot, suite);
  if (input.ckinf) run_ckinf_lemmas(input.space, *input.ckinf, suite);
  run_petal_lemmas(input.space, input.petals.empty() ? detail::default_petals(input.space.size()) : input.petals,
                   suite);
  return suite;
}

}  // namespace ballspace

#endif  // BALLSPACE_LEMMAS_HPP
