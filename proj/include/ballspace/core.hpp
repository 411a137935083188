#ifndef BALLSPACE_CORE_HPP
#define BALLSPACE_CORE_HPP

// Exact scalars, extended scalars, points and finite metric spaces.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ballspace {

/// Exact rational. Always normalized (positive denominator, gcd 1).
using Scalar = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, unparsable text, unknown keys.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(const Scalar& s) {
  const Integer num = boost::multiprecision::numerator(s);
  const Integer den = boost::multiprecision::denominator(s);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// Parses "p", "-p", "p/q" or "-p/q" with q > 0. No decimals, no whitespace.
inline Scalar parse_scalar(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!detail::all_digits(num) || !detail::all_digits(den)) {
    throw StructuralError("not an exact rational: \"" + std::string(text) + "\"");
  }
  Integer n(std::string{num});
  Integer d(std::string{den});
  if (d == 0) throw StructuralError("zero denominator: \"" + std::string(text) + "\"");
  if (negative) n = -n;
  return Scalar(n, d);
}

/// A value in (-inf, +inf]. Minus infinity cannot be represented.
class ExtScalar {
 public:
  ExtScalar() = default;
  ExtScalar(Scalar value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  ExtScalar(I value) : value_(Scalar(value)) {}  // NOLINT(google-explicit-constructor)

  static ExtScalar infinity() {
    ExtScalar e;
    e.value_.reset();
    return e;
  }

  bool is_finite() const { return value_.has_value(); }
  bool is_infinite() const { return !value_.has_value(); }

  const Scalar& value() const {
    if (!value_) throw PreconditionError("value() on +inf");
    return *value_;
  }

  /// Multiplication by a strictly positive scalar; +inf stays +inf.
  ExtScalar scaled(const Scalar& factor) const {
    if (factor <= 0) throw PreconditionError("scale factor must be positive");
    if (!value_) return infinity();
    return ExtScalar(*value_ * factor);
  }

  friend bool operator==(const ExtScalar& a, const ExtScalar& b) { return a.value_ == b.value_; }

  friend std::strong_ordering operator<=>(const ExtScalar& a, const ExtScalar& b) {
    if (!a.value_ || !b.value_) {
      if (!a.value_ && !b.value_) return std::strong_ordering::equal;
      return a.value_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (*a.value_ < *b.value_) return std::strong_ordering::less;
    if (*a.value_ == *b.value_) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
  }

  friend ExtScalar operator+(const ExtScalar& a, const ExtScalar& b) {
    if (!a.value_ || !b.value_) return infinity();
    return ExtScalar(*a.value_ + *b.value_);
  }

 private:
  std::optional<Scalar> value_{Scalar(0)};
};

/// Exact sum in (-inf, +inf]; +inf absorbs.
inline ExtScalar ext_add(const ExtScalar& a, const ExtScalar& b) { return a + b; }

inline std::string to_string(const ExtScalar& e) { return e.is_finite() ? to_string(e.value()) : "inf"; }

/// Accepts everything parse_scalar does plus "inf". "-inf" is rejected.
inline ExtScalar parse_ext_scalar(std::string_view text) {
  if (text == "inf" || text == "+inf") return ExtScalar::infinity();
  if (text == "-inf") throw StructuralError("-inf is outside the codomain (-inf, +inf]");
  return parse_scalar(text);
}

struct PointId {
  std::size_t index = 0;

  friend auto operator<=>(const PointId&, const PointId&) = default;
};

using ScalarMatrix = std::vector<std::vector<Scalar>>;
using ExtMatrix = std::vector<std::vector<ExtScalar>>;

/// One failed condition: which rule, on which indices, and the numbers involved.
struct Violation {
  std::string rule;
  std::vector<std::size_t> witness;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Report {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string rule, std::vector<std::size_t> witness, std::string detail = {}) {
    violations.push_back({std::move(rule), std::move(witness), std::move(detail)});
  }
  void append(const Report& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
  bool contains(std::string_view rule, const std::vector<std::size_t>& witness) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule && v.witness == witness; });
  }

  friend bool operator==(const Report&, const Report&) = default;
};

template <typename Matrix>
void require_square(const Matrix& m, std::size_t expected, std::string_view what) {
  if (m.size() != expected) {
    throw StructuralError(std::string(what) + ": expected " + std::to_string(expected) + " rows, got " +
                          std::to_string(m.size()));
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != expected) {
      throw StructuralError(std::string(what) + ": row " + std::to_string(i) + " has " + std::to_string(m[i].size()) +
                            " entries, expected " + std::to_string(expected));
    }
  }
}

/// Checks zero diagonal, positivity off the diagonal, symmetry and the
/// triangle inequality. Witness tuples are (i,j) or (i,j,k) with
/// d[i][k] > d[i][j] + d[j][k].
inline Report check_metric_axioms(const ScalarMatrix& dist) {
  if (dist.empty()) throw StructuralError("metric: at least one point is required");
  require_square(dist, dist.size(), "metric");
  const std::size_t n = dist.size();
  Report report;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0) report.add("zero-diagonal", {i}, "d=" + to_string(dist[i][i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dist[i][j] <= 0) report.add("positivity", {i, j}, "d=" + to_string(dist[i][j]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[i][j] != dist[j][i]) {
        report.add("symmetry", {i, j}, to_string(dist[i][j]) + " != " + to_string(dist[j][i]));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k]) {
          report.add("triangle", {i, j, k},
                     to_string(dist[i][k]) + " > " + to_string(dist[i][j]) + " + " + to_string(dist[j][k]));
        }
      }
    }
  }
  return report;
}

class MetricAxiomError : public Error {
 public:
  explicit MetricAxiomError(Report report)
      : Error("distance matrix violates the metric axioms"), report_(std::move(report)) {}
  const Report& report() const { return report_; }

 private:
  Report report_;
};

/// Immutable finite metric space. Construction validates every axiom.
class FiniteMetricSpace {
 public:
  explicit FiniteMetricSpace(ScalarMatrix dist, std::vector<std::string> labels = {})
      : dist_(std::move(dist)), labels_(std::move(labels)) {
    Report report = check_metric_axioms(dist_);
    if (!report.ok()) throw MetricAxiomError(std::move(report));
    if (labels_.empty()) {
      for (std::size_t i = 0; i < dist_.size(); ++i) labels_.push_back("p" + std::to_string(i));
    }
    if (labels_.size() != dist_.size()) throw StructuralError("label count does not match the metric size");
    std::vector<std::string> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw StructuralError("point labels must be unique");
    }
  }

  std::size_t size() const { return dist_.size(); }
  bool contains(PointId p) const { return p.index < dist_.size(); }

  const Scalar& distance(PointId x, PointId y) const { return dist_.at(x.index).at(y.index); }
  const std::string& label(PointId p) const { return labels_.at(p.index); }
  const std::vector<std::string>& labels() const { return labels_; }
  const ScalarMatrix& matrix() const { return dist_; }

  std::vector<PointId> points() const {
    std::vector<PointId> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
    return out;
  }

  std::optional<PointId> find(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return PointId{static_cast<std::size_t>(it - labels_.begin())};
  }

  /// The induced metric on `members` (in the given order), keeping labels.
  FiniteMetricSpace subspace(std::span<const PointId> members) const {
    ScalarMatrix sub(members.size(), std::vector<Scalar>(members.size()));
    std::vector<std::string> sub_labels;
    for (std::size_t i = 0; i < members.size(); ++i) {
      sub_labels.push_back(label(members[i]));
      for (std::size_t j = 0; j < members.size(); ++j) sub[i][j] = distance(members[i], members[j]);
    }
    // An induced metric satisfies the axioms already; skip the cubic re-check.
    return FiniteMetricSpace(std::move(sub), std::move(sub_labels), Validated{});
  }

 private:
  struct Validated {};
  FiniteMetricSpace(ScalarMatrix dist, std::vector<std::string> labels, Validated)
      : dist_(std::move(dist)), labels_(std::move(labels)) {}

  ScalarMatrix dist_;
  std::vector<std::string> labels_;
};

inline void require_point(const FiniteMetricSpace& space, PointId p, std::string_view role) {
  if (!space.contains(p)) {
    throw PreconditionError(std::string(role) + " index " + std::to_string(p.index) + " is outside a space of " +
                            std::to_string(space.size()) + " points");
  }
}

}  // namespace ballspace

#endif  // BALLSPACE_CORE_HPP
