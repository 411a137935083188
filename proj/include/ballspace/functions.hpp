#ifndef BALLSPACE_FUNCTIONS_HPP
#define BALLSPACE_FUNCTIONS_HPP

// Caristi-Kirk (CK), extended CK and Oettli-Thera (OT) functions on a finite
// metric space, their axiom checkers and conversions.
//
// Lower semicontinuity is never tested: every off-diagonal distance is
// positive, so the topology is discrete and every function is continuous.
// Boundedness below is automatic on finitely many values.

#include "ballspace/core.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace ballspace {

/// phi : X -> R.
class CkFunction {
 public:
  explicit CkFunction(std::vector<Scalar> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  const Scalar& operator()(PointId x) const { return values_.at(x.index); }
  const std::vector<Scalar>& values() const { return values_; }

  friend bool operator==(const CkFunction&, const CkFunction&) = default;

 private:
  std::vector<Scalar> values_;
};

/// phi : X -> (-inf, +inf], not identically +inf. Finite points are CK elements.
class CkInfFunction {
 public:
  explicit CkInfFunction(std::vector<ExtScalar> values) : values_(std::move(values)) {
    if (std::none_of(values_.begin(), values_.end(), [](const ExtScalar& v) { return v.is_finite(); })) {
      throw PreconditionError("CK-inf function is identically +inf");
    }
  }

  std::size_t size() const { return values_.size(); }
  const ExtScalar& operator()(PointId x) const { return values_.at(x.index); }
  const std::vector<ExtScalar>& values() const { return values_; }
  bool is_ck_element(PointId x) const { return (*this)(x).is_finite(); }

  /// Pointwise multiplication by a positive factor.
  CkInfFunction scaled(const Scalar& factor) const {
    std::vector<ExtScalar> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(v.scaled(factor));
    return CkInfFunction(std::move(out));
  }

  friend bool operator==(const CkInfFunction&, const CkInfFunction&) = default;

 private:
  std::vector<ExtScalar> values_;
};

/// phi : X x X -> (-inf, +inf]. Holds any square matrix; validity is what
/// check_ot_axioms decides.
class OtFunction {
 public:
  explicit OtFunction(ExtMatrix values) : values_(std::move(values)) {
    if (values_.empty()) throw StructuralError("OT function: empty matrix");
    require_square(values_, values_.size(), "OT function");
  }

  std::size_t size() const { return values_.size(); }
  const ExtScalar& operator()(PointId x, PointId y) const { return values_.at(x.index).at(y.index); }
  const ExtMatrix& matrix() const { return values_; }

  OtFunction scaled(const Scalar& factor) const {
    ExtMatrix out = values_;
    for (auto& row : out) {
      for (auto& v : row) v = v.scaled(factor);
    }
    return OtFunction(std::move(out));
  }

  friend bool operator==(const OtFunction&, const OtFunction&) = default;

 private:
  ExtMatrix values_;
};

template <typename F>
void require_same_size(const FiniteMetricSpace& space, const F& f, std::string_view what) {
  if (f.size() != space.size()) {
    throw StructuralError(std::string(what) + " has " + std::to_string(f.size()) + " points, the space has " +
                          std::to_string(space.size()));
  }
}

struct OtAxiomReport {
  /// Rules "(b)" with witness (x), "(c)" with witness (x,z,y), "(d)" with witness (x).
  Report violations;
  /// min over y of phi(x,y), per x.
  std::vector<ExtScalar> row_infimum;
  std::string condition_a = "vacuous (finite discrete topology)";

  bool ok() const { return violations.ok(); }
};

inline OtAxiomReport check_ot_axioms(const OtFunction& phi, const FiniteMetricSpace& space) {
  require_same_size(space, phi, "OT function");
  const std::size_t n = phi.size();
  const auto& m = phi.matrix();
  OtAxiomReport report;
  for (std::size_t x = 0; x < n; ++x) {
    if (m[x][x] != ExtScalar(0)) report.violations.add("(b)", {x}, "phi(x,x)=" + to_string(m[x][x]));
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      for (std::size_t y = 0; y < n; ++y) {
        const ExtScalar via = m[x][z] + m[z][y];
        if (m[x][y] > via) {
          report.violations.add("(c)", {x, z, y},
                                to_string(m[x][y]) + " > " + to_string(m[x][z]) + " + " + to_string(m[z][y]));
        }
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    ExtScalar inf = *std::min_element(m[x].begin(), m[x].end());
    if (inf.is_infinite()) report.violations.add("(d)", {x}, "row is identically +inf");
    report.row_infimum.push_back(std::move(inf));
  }
  return report;
}

struct OtElement {
  PointId point;
  Scalar infimum;
};

/// Every point whose row has a finite infimum. On a finite space with a zero
/// diagonal that is all of X.
inline std::vector<OtElement> ot_elements(const OtFunction& phi) {
  std::vector<OtElement> out;
  for (std::size_t x = 0; x < phi.size(); ++x) {
    const auto& row = phi.matrix()[x];
    const ExtScalar inf = *std::min_element(row.begin(), row.end());
    if (inf.is_finite()) out.push_back({PointId{x}, inf.value()});
  }
  return out;
}

/// phi(x,y) := varphi(y) - varphi(x).
inline OtFunction ck_to_ot(const CkFunction& varphi) {
  const std::size_t n = varphi.size();
  ExtMatrix m(n, std::vector<ExtScalar>(n));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) m[x][y] = Scalar(varphi.values()[y] - varphi.values()[x]);
  }
  return OtFunction(std::move(m));
}

// Ball membership predicates, shared by the ball constructors and the
// restriction below.

/// d(x,y) <= varphi(x) - varphi(y)
inline bool ck_member(const FiniteMetricSpace& space, const CkFunction& varphi, PointId x, PointId y) {
  return space.distance(x, y) <= varphi(x) - varphi(y);
}

/// d(x,y) <= -phi(x,y), decided as phi(x,y) <= -d(x,y) so +inf never needs negating.
inline bool ot_member(const FiniteMetricSpace& space, const OtFunction& phi, PointId x, PointId y) {
  return phi(x, y) <= ExtScalar(-space.distance(x, y));
}

/// phi(y) + d(x,y) <= phi(x)
inline bool ckinf_member(const FiniteMetricSpace& space, const CkInfFunction& phi, PointId x, PointId y) {
  return phi(y) + ExtScalar(space.distance(x, y)) <= phi(x);
}

struct CkRestriction {
  /// B_0 in increasing index order; position i of `space`/`function` is ball[i].
  std::vector<PointId> ball;
  FiniteMetricSpace space;
  CkFunction function;
};

/// Restricts a CK-inf function to the ball of a CK element x0.
inline CkRestriction restrict_ckinf(const CkInfFunction& phitilde, PointId x0, const FiniteMetricSpace& space) {
  require_same_size(space, phitilde, "CK-inf function");
  require_point(space, x0, "x0");
  if (!phitilde.is_ck_element(x0)) {
    throw PreconditionError("not a CK element: " + space.label(x0) + " has value +inf");
  }
  std::vector<PointId> ball;
  std::vector<Scalar> values;
  for (PointId y : space.points()) {
    if (ckinf_member(space, phitilde, x0, y)) {
      ball.push_back(y);
      values.push_back(phitilde(y).value());
    }
  }
  FiniteMetricSpace sub = space.subspace(ball);
  return CkRestriction{std::move(ball), std::move(sub), CkFunction(std::move(values))};
}

}  // namespace ballspace

#endif  // BALLSPACE_FUNCTIONS_HPP
