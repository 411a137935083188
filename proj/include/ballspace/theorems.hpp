#ifndef BALLSPACE_THEOREMS_HPP
#define BALLSPACE_THEOREMS_HPP

// Certified solvers for the fixed-point and variational theorems, in OT form
// and in CK-inf form. Each solver checks the hypotheses, finds the witness by
// singleton descent, then re-checks the conclusion by exhaustive evaluation
// over X without looking at the descent.

#include "ballspace/descent.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ballspace {

enum class TheoremId {
  caristi,
  caristi_multi,
  ekeland_basic,
  ekeland_altered,
  ekeland_usual,
  flower_petal,
  takahashi,
  oettli_thera,
};

inline constexpr TheoremId kAllTheorems[] = {
    TheoremId::caristi,      TheoremId::caristi_multi, TheoremId::ekeland_basic, TheoremId::ekeland_altered,
    TheoremId::ekeland_usual, TheoremId::flower_petal, TheoremId::takahashi,     TheoremId::oettli_thera,
};

inline std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::caristi: return "caristi";
    case TheoremId::caristi_multi: return "caristi-multi";
    case TheoremId::ekeland_basic: return "ekeland-basic";
    case TheoremId::ekeland_altered: return "ekeland-altered";
    case TheoremId::ekeland_usual: return "ekeland-usual";
    case TheoremId::flower_petal: return "flower-petal";
    case TheoremId::takahashi: return "takahashi";
    case TheoremId::oettli_thera: return "oettli-thera";
  }
  return "?";
}

inline std::optional<TheoremId> parse_theorem_id(std::string_view name) {
  for (TheoremId id : kAllTheorems) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

/// f : X -> X
struct SelfMap {
  std::vector<PointId> image;

  PointId operator()(PointId x) const { return image.at(x.index); }
};

/// F : X -> nonempty subsets of X
struct MultiMap {
  std::vector<PointSet> images;

  const PointSet& operator()(PointId x) const { return images.at(x.index); }
};

enum class FunctionForm { ot, ck_inf, ck };

inline std::string to_string(FunctionForm form) {
  switch (form) {
    case FunctionForm::ot: return "OT";
    case FunctionForm::ck_inf: return "CK_INF";
    case FunctionForm::ck: return "CK";
  }
  return "?";
}

struct TheoremCertificate {
  TheoremId theorem = TheoremId::caristi;
  FunctionForm form = FunctionForm::ot;
  std::optional<PointId> witness;
  Report hypotheses;
  Report conclusion;
  std::optional<DescentTrace> trace;

  bool valid() const { return witness.has_value() && hypotheses.ok() && conclusion.ok(); }
};

namespace detail {

inline void require_self_map(const FiniteMetricSpace& space, const SelfMap& f) {
  if (f.image.size() != space.size()) throw StructuralError("self-map must assign an image to every point");
  for (PointId y : f.image) require_point(space, y, "self-map image");
}

inline void require_multi_map(const FiniteMetricSpace& space, const MultiMap& F) {
  if (F.images.size() != space.size()) throw StructuralError("multimap must assign an image set to every point");
  for (std::size_t x = 0; x < F.images.size(); ++x) {
    if (F.images[x].empty()) throw StructuralError("multimap image of point " + std::to_string(x) + " is empty");
    for (PointId y : F.images[x]) require_point(space, y, "multimap image");
  }
}

inline void require_positive(const Scalar& value, std::string_view name) {
  if (value <= 0) throw PreconditionError(std::string(name) + " must be positive, got " + to_string(value));
}

inline void require_nonnegative(const Scalar& value, std::string_view name) {
  if (value < 0) throw PreconditionError(std::string(name) + " must be nonnegative, got " + to_string(value));
}

inline Report ot_function_hypotheses(const FiniteMetricSpace& space, const OtFunction& phi) {
  Report out;
  for (const Violation& v : check_ot_axioms(phi, space).violations.violations) {
    out.add("ot-axiom " + v.rule, v.witness, v.detail);
  }
  return out;
}

inline ExtScalar row_minimum(const OtFunction& phi, PointId x) {
  const auto& row = phi.matrix().at(x.index);
  return *std::min_element(row.begin(), row.end());
}

inline ExtScalar minimum(const CkInfFunction& phi) {
  return *std::min_element(phi.values().begin(), phi.values().end());
}

inline void ekeland_usual_guards(const Scalar& eps, const Scalar& gamma, const Scalar& delta) {
  require_nonnegative(eps, "epsilon");
  require_positive(gamma, "gamma");
  require_nonnegative(delta, "delta");
  if (gamma * delta < eps) {
    throw PreconditionError("need gamma*delta >= epsilon, got gamma*delta=" + to_string(Scalar(gamma * delta)) +
                            " < epsilon=" + to_string(eps));
  }
}

/// Runs descent and stores witness and trace on the certificate.
inline void attach_descent(TheoremCertificate& cert, DescentTrace trace) {
  cert.witness = trace.terminal;
  cert.trace = std::move(trace);
}

}  // namespace detail

// OT form ------------------------------------------------------------------

/// Fixed point of f under d(x,f(x)) <= -phi(x,f(x)) for every x.
inline TheoremCertificate caristi_fp(const FiniteMetricSpace& space, const OtFunction& phi, const SelfMap& f,
                                     PointId start = PointId{0}) {
  detail::require_self_map(space, f);
  require_point(space, start, "start");
  TheoremCertificate cert{TheoremId::caristi, FunctionForm::ot, {}, {}, {}, {}};
  cert.hypotheses = detail::ot_function_hypotheses(space, phi);
  for (PointId x : space.points()) {
    if (!ot_member(space, phi, x, f(x))) {
      cert.hypotheses.add("d(x,f(x))<=-phi(x,f(x))", {x.index, f(x).index},
                          "d=" + to_string(space.distance(x, f(x))) + ", phi=" + to_string(phi(x, f(x))));
    }
  }
  if (!cert.hypotheses.ok()) return cert;
  detail::attach_descent(cert, singleton_descent(ot_assignment(space, phi), start));
  const PointId a = *cert.witness;
  if (f(a) != a) cert.conclusion.add("f(a)=a", {a.index, f(a).index});
  return cert;
}

/// a in F(a), under: every x has some y in F(x) with d(x,y) <= -phi(x,y).
inline TheoremCertificate caristi_fp_multi(const FiniteMetricSpace& space, const OtFunction& phi, const MultiMap& F,
                                           PointId start = PointId{0}) {
  detail::require_multi_map(space, F);
  require_point(space, start, "start");
  TheoremCertificate cert{TheoremId::caristi_multi, FunctionForm::ot, {}, {}, {}, {}};
  cert.hypotheses = detail::ot_function_hypotheses(space, phi);
  for (PointId x : space.points()) {
    const auto& image = F(x);
    if (std::none_of(image.begin(), image.end(), [&](PointId y) { return ot_member(space, phi, x, y); })) {
      cert.hypotheses.add("exists y in F(x): d(x,y)<=-phi(x,y)", {x.index});
    }
  }
  if (!cert.hypotheses.ok()) return cert;
  detail::attach_descent(cert, singleton_descent(ot_assignment(space, phi), start));
  const PointId a = *cert.witness;
  if (!F(a).contains(a)) cert.conclusion.add("a in F(a)", {a.index});
  return cert;
}

/// a with -phi(a,x) < d(a,x) for all x != a.
inline TheoremCertificate ekeland_basic(const FiniteMetricSpace& space, const OtFunction& phi,
                                        PointId start = PointId{0}) {
  require_point(space, start, "start");
  TheoremCertificate cert{TheoremId::ekeland_basic, FunctionForm::ot, {}, {}, {}, {}};
  cert.hypotheses = detail::ot_function_hypotheses(space, phi);
  if (!cert.hypotheses.ok()) return cert;
  detail::attach_descent(cert, singleton_descent(ot_assignment(space, phi), start));
  const PointId a = *cert.witness;
  for (PointId x : space.points()) {
    if (x != a && !(phi(a, x) > ExtScalar(-space.distance(a, x)))) {
      cert.conclusion.add("-phi(a,x)<d(a,x)", {a.index, x.index});
    }
  }
  return cert;
}

/// a with -phi(a,x) < gamma d(a,x) for x != a, and -phi(x0,a) >= gamma d(x0,a).
/// Found by descent on phi / gamma from x0.
inline TheoremCertificate ekeland_altered(const FiniteMetricSpace& space, const OtFunction& phi, const Scalar& gamma,
                                          PointId x0) {
  detail::require_positive(gamma, "gamma");
  require_point(space, x0, "x0");
  TheoremCertificate cert{TheoremId::ekeland_altered, FunctionForm::ot, {}, {}, {}, {}};
  cert.hypotheses = detail::ot_function_hypotheses(space, phi);
  if (!cert.hypotheses.ok()) return cert;
  const OtFunction psi = phi.scaled(Scalar(1) / gamma);
  detail::attach_descent(cert, singleton_descent(ot_assignment(space, psi), x0));
  const PointId a = *cert.witness;
  for (PointId x : space.points()) {
    if (x != a && !(phi(a, x) > ExtScalar(Scalar(-gamma * space.distance(a, x))))) {
      cert.conclusion.add("(CC4) -phi(a,x)<gamma*d(a,x)", {a.index, x.index});
    }
  }
  if (!(phi(x0, a) <= ExtScalar(Scalar(-gamma * space.distance(x0, a))))) {
    cert.conclusion.add("(CC5) -phi(x0,a)>=gamma*d(x0,a)", {x0.index, a.index});
  }
  return cert;
}

/// Given -eps <= inf phi(x0,.) and gamma*delta >= eps: a with d(a,x0) <= delta
/// that strictly minimizes x -> phi(a,x) + gamma d(x,a).
inline TheoremCertificate ekeland_usual(const FiniteMetricSpace& space, const OtFunction& phi, const Scalar& eps,
                                        const Scalar& gamma, const Scalar& delta, PointId x0) {
  detail::ekeland_usual_guards(eps, gamma, delta);
  require_point(space, x0, "x0");
  TheoremCertificate cert{TheoremId::ekeland_usual, FunctionForm::ot, {}, {}, {}, {}};
  cert.hypotheses = detail::ot_function_hypotheses(space, phi);
  if (!cert.hypotheses.ok()) return cert;
  const ExtScalar inf = detail::row_minimum(phi, x0);
  if (ExtScalar(Scalar(-eps)) > inf) {
    cert.hypotheses.add("-eps<=inf phi(x0,.)", {x0.index}, "inf=" + to_string(inf) + ", eps=" + to_string(eps));
    return cert;
  }
  const OtFunction psi = phi.scaled(Scalar(1) / gamma);
  detail::attach_descent(cert, singleton_descent(ot_assignment(space, psi), x0));
  const PointId a = *cert.witness;
  if (space.distance(a, x0) > delta) {
    cert.conclusion.add("d(a,x0)<=delta", {a.index, x0.index}, "d=" + to_string(space.distance(a, x0)));
  }
  if (phi(a, a) != ExtScalar(0)) cert.conclusion.add("phi_gamma(a)=0", {a.index});
  for (PointId x : space.points()) {
    if (x == a) continue;
    const ExtScalar value = phi(a, x) + ExtScalar(Scalar(gamma * space.distance(x, a)));
    if (!(value > ExtScalar(0))) {
      cert.conclusion.add("phi_gamma(x)>phi_gamma(a)", {a.index, x.index}, "phi_gamma(x)=" + to_string(value));
    }
  }
  return cert;
}

/// a in P_gamma(x0,b) cap M with P_gamma(a,b) cap M = {a}, for finite M not
/// containing b. Uses the CK function x -> d(x,b) / gamma on M.
inline TheoremCertificate flower_petal(const FiniteMetricSpace& space, const PointSet& M, PointId x0, PointId b,
                                       const Scalar& gamma) {
  detail::require_positive(gamma, "gamma");
  require_point(space, x0, "x0");
  require_point(space, b, "b");
  if (M.empty()) throw PreconditionError("M must be nonempty");
  for (PointId m : M) require_point(space, m, "M member");
  if (!M.contains(x0)) throw PreconditionError("x0 must lie in M");
  if (M.contains(b)) throw PreconditionError("b must lie outside M");

  TheoremCertificate cert{TheoremId::flower_petal, FunctionForm::ck, {}, {}, {}, {}};
  const std::vector<PointId>& members = M.points();
  const FiniteMetricSpace sub = space.subspace(members);
  std::vector<Scalar> values;
  for (PointId m : members) values.push_back(space.distance(m, b) / gamma);
  const CkFunction varphi(std::move(values));
  const auto local = static_cast<std::size_t>(std::find(members.begin(), members.end(), x0) - members.begin());
  DescentTrace inner = singleton_descent(ck_assignment(sub, varphi), PointId{local});

  DescentTrace trace;
  for (PointId p : inner.chain) trace.chain.push_back(members[p.index]);
  for (const PointSet& s : inner.balls) {
    std::vector<PointId> mapped;
    for (PointId p : s) mapped.push_back(members[p.index]);
    trace.balls.emplace_back(std::move(mapped));
  }
  trace.terminal = members[inner.terminal.index];
  detail::attach_descent(cert, std::move(trace));

  const PointId a = *cert.witness;
  if (!petal(space, gamma, x0, b).intersect(M).contains(a)) {
    cert.conclusion.add("a in P_gamma(x0,b) cap M", {a.index, x0.index, b.index});
  }
  if (!petal(space, gamma, a, b).intersect(M).is_singleton(a)) {
    cert.conclusion.add("P_gamma(a,b) cap M={a}", {a.index, b.index});
  }
  return cert;
}

/// a in B_x0 with inf phi(a,.) = 0, given that every u in B_x0 with a
/// negative infimum has some v != u in its ball.
inline TheoremCertificate takahashi(const FiniteMetricSpace& space, const OtFunction& phi, PointId x0) {
  require_point(space, x0, "x0");
  TheoremCertificate cert{TheoremId::takahashi, FunctionForm::ot, {}, {}, {}, {}};
  cert.hypotheses = detail::ot_function_hypotheses(space, phi);
  if (!cert.hypotheses.ok()) return cert;
  const PointSet root = ot_ball(space, phi, x0).members;
  for (PointId u : root) {
    if (!(detail::row_minimum(phi, u) < ExtScalar(0))) continue;
    bool moves = false;
    for (PointId v : space.points()) moves = moves || (v != u && ot_member(space, phi, u, v));
    if (!moves) {
      cert.hypotheses.add("inf phi(u,.)<0 => exists v!=u: d(u,v)<=-phi(u,v)", {u.index},
                          "inf=" + to_string(detail::row_minimum(phi, u)));
    }
  }
  if (!cert.hypotheses.ok()) return cert;
  detail::attach_descent(cert, singleton_descent(ot_assignment(space, phi), x0));
  const PointId a = *cert.witness;
  if (!root.contains(a)) cert.conclusion.add("a in B_x0", {a.index, x0.index});
  if (detail::row_minimum(phi, a) != ExtScalar(0)) {
    cert.conclusion.add("inf phi(a,.)=0", {a.index}, "inf=" + to_string(detail::row_minimum(phi, a)));
  }
  return cert;
}

/// a in B_x0 cap Psi, given that every x in B_x0 \ Psi has some y != x in its ball.
inline TheoremCertificate oettli_thera(const FiniteMetricSpace& space, const OtFunction& phi, PointId x0,
                                       const PointSet& psi_set) {
  require_point(space, x0, "x0");
  for (PointId p : psi_set) require_point(space, p, "Psi member");
  TheoremCertificate cert{TheoremId::oettli_thera, FunctionForm::ot, {}, {}, {}, {}};
  cert.hypotheses = detail::ot_function_hypotheses(space, phi);
  if (!cert.hypotheses.ok()) return cert;
  const PointSet root = ot_ball(space, phi, x0).members;
  for (PointId x : root) {
    if (psi_set.contains(x)) continue;
    bool moves = false;
    for (PointId y : space.points()) moves = moves || (y != x && ot_member(space, phi, x, y));
    if (!moves) cert.hypotheses.add("x in B_x0 \\ Psi => exists y!=x: d(x,y)<=-phi(x,y)", {x.index});
  }
  if (!cert.hypotheses.ok()) return cert;
  detail::attach_descent(cert, singleton_descent(ot_assignment(space, phi), x0));
  const PointId a = *cert.witness;
  if (!root.contains(a)) cert.conclusion.add("a in B_x0", {a.index, x0.index});
  if (!psi_set.contains(a)) cert.conclusion.add("a in Psi", {a.index});
  return cert;
}

// CK-inf form -------------------------------------------------------------

/// Inputs for the parameterized solvers; each theorem reads what it needs.
struct TheoremParams {
  std::optional<SelfMap> f;
  std::optional<MultiMap> F;
  std::optional<PointSet> psi;
  std::optional<PointSet> M;
  std::optional<PointId> b;
  std::optional<PointId> x0;
  std::optional<Scalar> gamma;
  std::optional<Scalar> epsilon;
  std::optional<Scalar> delta;
};

namespace detail {

template <typename T>
const T& require_param(const std::optional<T>& value, std::string_view name) {
  if (!value) throw PreconditionError("missing parameter: " + std::string(name));
  return *value;
}

}  // namespace detail

/// The CK-inf forms of caristi, caristi-multi, ekeland-basic,
/// ekeland-altered, ekeland-usual and takahashi. Arithmetic is in
/// (-inf, +inf]; comparisons are exact.
inline TheoremCertificate solve_ckinf(TheoremId theorem, const FiniteMetricSpace& space, const CkInfFunction& phi,
                                      const TheoremParams& params) {
  require_same_size(space, phi, "CK-inf function");
  TheoremCertificate cert{theorem, FunctionForm::ck_inf, {}, {}, {}, {}};
  const PointId start = params.x0.value_or(PointId{0});
  require_point(space, start, "start");
  auto d = [&](PointId x, PointId y) { return ExtScalar(space.distance(x, y)); };
  auto strictly_isolated = [&](PointId a, const Scalar& gamma, std::string_view rule) {
    for (PointId x : space.points()) {
      if (x != a && !(phi(a) < phi(x) + ExtScalar(Scalar(gamma * space.distance(a, x))))) {
        cert.conclusion.add(std::string(rule), {a.index, x.index});
      }
    }
  };

  switch (theorem) {
    case TheoremId::caristi: {
      const SelfMap& f = detail::require_param(params.f, "f");
      detail::require_self_map(space, f);
      for (PointId x : space.points()) {
        if (!(phi(f(x)) + d(x, f(x)) <= phi(x))) {
          cert.hypotheses.add("phi(f(x))+d(x,f(x))<=phi(x)", {x.index, f(x).index});
        }
      }
      if (!cert.hypotheses.ok()) return cert;
      detail::attach_descent(cert, ckinf_singleton(space, phi, start));
      const PointId a = *cert.witness;
      if (f(a) != a) cert.conclusion.add("f(a)=a", {a.index, f(a).index});
      return cert;
    }
    case TheoremId::caristi_multi: {
      const MultiMap& F = detail::require_param(params.F, "F");
      detail::require_multi_map(space, F);
      for (PointId x : space.points()) {
        const auto& image = F(x);
        if (std::none_of(image.begin(), image.end(), [&](PointId y) { return phi(y) + d(x, y) <= phi(x); })) {
          cert.hypotheses.add("exists y in F(x): phi(y)+d(x,y)<=phi(x)", {x.index});
        }
      }
      if (!cert.hypotheses.ok()) return cert;
      detail::attach_descent(cert, ckinf_singleton(space, phi, start));
      const PointId a = *cert.witness;
      if (!F(a).contains(a)) cert.conclusion.add("a in F(a)", {a.index});
      return cert;
    }
    case TheoremId::ekeland_basic: {
      detail::attach_descent(cert, ckinf_singleton(space, phi, start));
      strictly_isolated(*cert.witness, Scalar(1), "phi(a)<phi(x)+d(a,x)");
      return cert;
    }
    case TheoremId::ekeland_altered: {
      const Scalar& gamma = detail::require_param(params.gamma, "gamma");
      const PointId x0 = detail::require_param(params.x0, "x0");
      detail::require_positive(gamma, "gamma");
      detail::attach_descent(cert, ckinf_singleton(space, phi.scaled(Scalar(1) / gamma), x0));
      const PointId a = *cert.witness;
      strictly_isolated(a, gamma, "phi(a)<phi(x)+gamma*d(a,x)");
      if (!(phi(a) + ExtScalar(Scalar(gamma * space.distance(a, x0))) <= phi(x0))) {
        cert.conclusion.add("phi(a)<=phi(x0)-gamma*d(a,x0)", {a.index, x0.index});
      }
      return cert;
    }
    case TheoremId::ekeland_usual: {
      const Scalar& eps = detail::require_param(params.epsilon, "epsilon");
      const Scalar& gamma = detail::require_param(params.gamma, "gamma");
      const Scalar& delta = detail::require_param(params.delta, "delta");
      const PointId x0 = detail::require_param(params.x0, "x0");
      detail::ekeland_usual_guards(eps, gamma, delta);
      const ExtScalar inf = detail::minimum(phi);
      if (!(phi(x0) <= inf + ExtScalar(eps))) {
        cert.hypotheses.add("phi(x0)<=inf phi+eps", {x0.index},
                            "phi(x0)=" + to_string(phi(x0)) + ", inf=" + to_string(inf) + ", eps=" + to_string(eps));
        return cert;
      }
      detail::attach_descent(cert, ckinf_singleton(space, phi.scaled(Scalar(1) / gamma), x0));
      const PointId a = *cert.witness;
      if (space.distance(a, x0) > delta) {
        cert.conclusion.add("d(a,x0)<=delta", {a.index, x0.index}, "d=" + to_string(space.distance(a, x0)));
      }
      strictly_isolated(a, gamma, "phi_gamma(x)>phi_gamma(a)");
      return cert;
    }
    case TheoremId::takahashi: {
      const ExtScalar inf = detail::minimum(phi);
      for (PointId u : space.points()) {
        if (!(inf < phi(u))) continue;
        bool moves = false;
        for (PointId v : space.points()) moves = moves || (v != u && phi(v) + d(u, v) <= phi(u));
        if (!moves) cert.hypotheses.add("inf phi<phi(u) => exists v!=u: phi(v)+d(u,v)<=phi(u)", {u.index});
      }
      if (!cert.hypotheses.ok()) return cert;
      detail::attach_descent(cert, ckinf_singleton(space, phi, start));
      const PointId a = *cert.witness;
      if (phi(a) != inf) cert.conclusion.add("phi(a)=inf phi", {a.index}, "phi(a)=" + to_string(phi(a)));
      return cert;
    }
    case TheoremId::flower_petal:
    case TheoremId::oettli_thera:
      throw PreconditionError(to_string(theorem) + " has no CK-inf form");
  }
  return cert;
}

/// Dispatches an OT-form theorem using the shared parameter block.
inline TheoremCertificate solve_ot(TheoremId theorem, const FiniteMetricSpace& space, const OtFunction& phi,
                                   const TheoremParams& params) {
  require_same_size(space, phi, "OT function");
  switch (theorem) {
    case TheoremId::caristi:
      return caristi_fp(space, phi, detail::require_param(params.f, "f"), params.x0.value_or(PointId{0}));
    case TheoremId::caristi_multi:
      return caristi_fp_multi(space, phi, detail::require_param(params.F, "F"), params.x0.value_or(PointId{0}));
    case TheoremId::ekeland_basic:
      return ekeland_basic(space, phi, params.x0.value_or(PointId{0}));
    case TheoremId::ekeland_altered:
      return ekeland_altered(space, phi, detail::require_param(params.gamma, "gamma"),
                             detail::require_param(params.x0, "x0"));
    case TheoremId::ekeland_usual:
      return ekeland_usual(space, phi, detail::require_param(params.epsilon, "epsilon"),
                           detail::require_param(params.gamma, "gamma"), detail::require_param(params.delta, "delta"),
                           detail::require_param(params.x0, "x0"));
    case TheoremId::flower_petal:
      return flower_petal(space, detail::require_param(params.M, "M"), detail::require_param(params.x0, "x0"),
                          detail::require_param(params.b, "b"), detail::require_param(params.gamma, "gamma"));
    case TheoremId::takahashi:
      return takahashi(space, phi, detail::require_param(params.x0, "x0"));
    case TheoremId::oettli_thera:
      return oettli_thera(space, phi, detail::require_param(params.x0, "x0"), detail::require_param(params.psi, "psi"));
  }
  throw PreconditionError("unknown theorem");
}

}  // namespace ballspace

#endif  // BALLSPACE_THEOREMS_HPP
