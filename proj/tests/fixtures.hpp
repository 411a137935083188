#ifndef BALLSPACE_TESTS_FIXTURES_HPP
#define BALLSPACE_TESTS_FIXTURES_HPP

// Hand-built instances and random hypothesis-satisfying solver inputs.

#include "oracles.hpp"

#include "ballspace/generate.hpp"

namespace fixtures {

using namespace ballspace;

inline ScalarMatrix matrix(std::initializer_list<std::initializer_list<int>> rows) {
  ScalarMatrix out;
  for (auto row : rows) {
    out.emplace_back();
    for (int v : row) out.back().push_back(Scalar(v));
  }
  return out;
}

/// d(a,b)=1, d(a,c)=2, d(b,c)=1
inline FiniteMetricSpace three_point() { return FiniteMetricSpace(matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}), {"a", "b", "c"}); }

inline CkFunction ck310() { return CkFunction({Scalar(3), Scalar(1), Scalar(0)}); }

inline OtFunction phi310() { return ck_to_ot(ck310()); }

inline CkInfFunction ckinf_inf10() { return CkInfFunction({ExtScalar::infinity(), ExtScalar(1), ExtScalar(0)}); }

/// {0,1,2,3} with d = |x-y|
inline FiniteMetricSpace line(std::size_t n) {
  ScalarMatrix d(n, std::vector<Scalar>(n));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) d[i][j] = Scalar(i > j ? i - j : j - i);
  }
  return FiniteMetricSpace(std::move(d), std::move(labels));
}

/// phi(x,y) = x - y for x != 0, phi(0,y) = 0, on {0,..,n-1}
inline OtFunction truncated_phi(std::size_t n) {
  ExtMatrix m(n, std::vector<ExtScalar>(n));
  for (std::size_t x = 1; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) m[x][y] = ExtScalar(Scalar(static_cast<long>(x) - static_cast<long>(y)));
  return OtFunction(std::move(m));
}

inline SelfMap self_map(std::initializer_list<std::size_t> image) {
  SelfMap f;
  for (std::size_t i : image) f.image.push_back(PointId{i});
  return f;
}

inline MultiMap multi_map(std::initializer_list<PointSet> images) { return MultiMap{std::vector<PointSet>(images)}; }

inline TheoremId ckinf_theorems[] = {TheoremId::caristi,         TheoremId::caristi_multi, TheoremId::ekeland_basic,
                                     TheoremId::ekeland_altered, TheoremId::ekeland_usual, TheoremId::takahashi};

/// An OT function together with solver parameters satisfying the theorem's
/// hypotheses.
struct OtCase {
  OtFunction phi;
  TheoremParams params;
};

struct CkInfCase {
  CkInfFunction phi;
  TheoremParams params;
};

inline PointSet random_member_set(oracle::Picker& pick, const PointSet& pool) {
  std::vector<PointId> out;
  for (PointId p : pool)
    if (pick.coin()) out.push_back(p);
  return PointSet(std::move(out));
}

/// Smallest c >= 1 such that d(u,v) <= -c phi(u,v) wherever phi(u,v) < 0.
/// Scaling by c keeps phi an OT function and makes every negative row
/// minimum come with a point of the ball.
inline Scalar takahashi_scale(const FiniteMetricSpace& space, const OtFunction& phi) {
  Scalar c(1);
  for (PointId u : space.points())
    for (PointId v : space.points()) {
      const ExtScalar& e = phi(u, v);
      if (e.is_finite() && e.value() < 0) c = std::max(c, Scalar(space.distance(u, v) / -e.value()));
    }
  return c;
}

inline OtCase valid_ot_case(TheoremId id, const FiniteMetricSpace& space, const OtFunction& phi, oracle::Picker& pick) {
  const std::size_t n = space.size();
  OtCase out{phi, {}};
  TheoremParams& p = out.params;
  const PointId x0{pick.index(n)};
  switch (id) {
    case TheoremId::caristi: {
      SelfMap f;
      for (PointId x : space.points()) f.image.push_back(pick.from(ot_ball(space, phi, x).members.points()));
      p.f = f;
      p.x0 = x0;
      break;
    }
    case TheoremId::caristi_multi: {
      MultiMap F;
      for (PointId x : space.points()) {
        std::vector<PointId> image = random_member_set(pick, PointSet::all(n)).points();
        image.push_back(pick.from(ot_ball(space, phi, x).members.points()));
        F.images.emplace_back(std::move(image));
      }
      p.F = F;
      p.x0 = x0;
      break;
    }
    case TheoremId::ekeland_basic:
      p.x0 = x0;
      break;
    case TheoremId::ekeland_altered:
      p.x0 = x0;
      p.gamma = pick.gamma();
      break;
    case TheoremId::ekeland_usual: {
      const auto& row = phi.matrix()[x0.index];
      const ExtScalar low = *std::min_element(row.begin(), row.end());
      Scalar eps = Scalar(-low.value()) + Scalar(static_cast<long>(pick.index(3)), 2);
      p.x0 = x0;
      p.epsilon = eps;
      p.gamma = pick.gamma();
      p.delta = Scalar(eps / *p.gamma) + Scalar(static_cast<long>(pick.index(2)));
      break;
    }
    case TheoremId::flower_petal: {
      const PointId b{pick.index(n)};
      std::vector<PointId> rest;
      for (PointId x : space.points())
        if (x != b) rest.push_back(x);
      PointId start = pick.from(rest);
      std::vector<PointId> M = random_member_set(pick, PointSet(rest)).points();
      M.push_back(start);
      p.M = PointSet(std::move(M));
      p.x0 = start;
      p.b = b;
      p.gamma = pick.gamma();
      break;
    }
    case TheoremId::takahashi:
      out.phi = phi.scaled(takahashi_scale(space, phi));
      p.x0 = x0;
      break;
    case TheoremId::oettli_thera: {
      std::vector<PointId> psi = random_member_set(pick, PointSet::all(n)).points();
      for (PointId x : ot_ball(space, phi, x0).members)
        if (ot_ball(space, phi, x).members.size() == 1) psi.push_back(x);
      p.psi = PointSet(std::move(psi));
      p.x0 = x0;
      break;
    }
  }
  return out;
}

/// Smallest c >= 1 with phi(v)+d(u,v) <= phi(u) after scaling by c, for every
/// finite u above the minimum and v a minimizer.
inline Scalar ckinf_takahashi_scale(const FiniteMetricSpace& space, const CkInfFunction& phi) {
  const auto& vals = phi.values();
  const PointId low{static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin())};
  Scalar c(1);
  for (PointId u : space.points()) {
    if (!phi(u).is_finite() || phi(u) == phi(low)) continue;
    c = std::max(c, Scalar(space.distance(u, low) / Scalar(phi(u).value() - phi(low).value())));
  }
  return c;
}

inline CkInfCase valid_ckinf_case(TheoremId id, const FiniteMetricSpace& space, const CkInfFunction& phi,
                                  oracle::Picker& pick) {
  const std::size_t n = space.size();
  CkInfCase out{phi, {}};
  TheoremParams& p = out.params;
  const PointId x0{pick.index(n)};
  switch (id) {
    case TheoremId::caristi: {
      SelfMap f;
      for (PointId x : space.points()) f.image.push_back(pick.from(ckinf_ball(space, phi, x).members.points()));
      p.f = f;
      p.x0 = x0;
      break;
    }
    case TheoremId::caristi_multi: {
      MultiMap F;
      for (PointId x : space.points()) {
        std::vector<PointId> image = random_member_set(pick, PointSet::all(n)).points();
        image.push_back(pick.from(ckinf_ball(space, phi, x).members.points()));
        F.images.emplace_back(std::move(image));
      }
      p.F = F;
      p.x0 = x0;
      break;
    }
    case TheoremId::ekeland_basic:
      p.x0 = x0;
      break;
    case TheoremId::ekeland_altered:
      p.x0 = x0;
      p.gamma = pick.gamma();
      break;
    case TheoremId::ekeland_usual: {
      std::vector<PointId> finite;
      for (PointId x : space.points())
        if (phi.is_ck_element(x)) finite.push_back(x);
      const PointId start = pick.from(finite);
      const auto& vals = phi.values();
      const Scalar low = std::min_element(vals.begin(), vals.end())->value();
      const Scalar eps = Scalar(phi(start).value() - low) + Scalar(static_cast<long>(pick.index(3)), 2);
      p.x0 = start;
      p.epsilon = eps;
      p.gamma = pick.gamma();
      p.delta = Scalar(eps / *p.gamma) + Scalar(static_cast<long>(pick.index(2)));
      break;
    }
    case TheoremId::takahashi:
      out.phi = phi.scaled(ckinf_takahashi_scale(space, phi));
      p.x0 = x0;
      break;
    default:
      throw PreconditionError("no CK-inf form");
  }
  return out;
}

}  // namespace fixtures

#endif  // BALLSPACE_TESTS_FIXTURES_HPP
