#ifndef BALLSPACE_INSTANCE_HPP
#define BALLSPACE_INSTANCE_HPP

// Instance files: one JSON object per file.
//
//   {
//     "points":  ["a", "b", "c"],
//     "metric":  [["0","1","2"], ["1","0","1"], ["2","1","0"]],
//     "ck":      ["3", "1", "0"],                  optional
//     "ckinf":   ["inf", "1", "0"],                optional
//     "ot":      [["0","-2","-3"], ...],           optional, "inf" allowed
//     "problem": {                                 optional
//       "f": ["b","c","c"], "F": [["b"],["a","c"],["a","c"]],
//       "psi": ["c"], "M": ["1","2"], "b": "0", "x0": "a",
//       "gamma": "2", "epsilon": "3", "delta": "3/2"
//     }
//   }
//
// Numbers are exact rationals written as "p" or "p/q" strings; JSON integers
// are accepted on input. Decimals are rejected, as are unknown keys and "-inf".

#include "ballspace/generate.hpp"
#include "ballspace/theorems.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ballspace {

struct InstanceFile {
  std::vector<std::string> points;
  ScalarMatrix metric;
  std::optional<std::vector<Scalar>> ck;
  std::optional<std::vector<ExtScalar>> ckinf;
  std::optional<ExtMatrix> ot;

  std::optional<std::vector<std::size_t>> f;
  std::optional<std::vector<std::vector<std::size_t>>> F;
  std::optional<std::vector<std::size_t>> psi;
  std::optional<std::vector<std::size_t>> M;
  std::optional<std::size_t> b;
  std::optional<std::size_t> x0;
  std::optional<Scalar> gamma;
  std::optional<Scalar> epsilon;
  std::optional<Scalar> delta;

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;

  /// Validates the metric; throws MetricAxiomError.
  FiniteMetricSpace space() const { return FiniteMetricSpace(metric, points); }

  TheoremParams params() const {
    TheoremParams p;
    if (f) {
      SelfMap map;
      for (std::size_t i : *f) map.image.push_back(PointId{i});
      p.f = std::move(map);
    }
    if (F) {
      MultiMap map;
      for (const auto& image : *F) map.images.push_back(to_set(image));
      p.F = std::move(map);
    }
    if (psi) p.psi = to_set(*psi);
    if (M) p.M = to_set(*M);
    if (b) p.b = PointId{*b};
    if (x0) p.x0 = PointId{*x0};
    p.gamma = gamma;
    p.epsilon = epsilon;
    p.delta = delta;
    return p;
  }

 private:
  static PointSet to_set(const std::vector<std::size_t>& indices) {
    std::vector<PointId> out;
    for (std::size_t i : indices) out.push_back(PointId{i});
    return PointSet(std::move(out));
  }
};

namespace detail {

using nlohmann::json;

inline std::string field(const std::string& path) { return "field " + (path.empty() ? std::string("/") : path); }

inline std::string scalar_text(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.is_number_unsigned() ? std::to_string(j.get<std::uint64_t>())
                                                           : std::to_string(j.get<std::int64_t>());
  throw StructuralError(field(path) + ": expected a rational string or an integer, got " + std::string(j.type_name()));
}

inline Scalar read_scalar(const json& j, const std::string& path) {
  try {
    return parse_scalar(scalar_text(j, path));
  } catch (const StructuralError& e) {
    if (std::string_view(e.what()).starts_with("field ")) throw;
    throw StructuralError(field(path) + ": " + e.what());
  }
}

inline ExtScalar read_ext_scalar(const json& j, const std::string& path) {
  try {
    return parse_ext_scalar(scalar_text(j, path));
  } catch (const StructuralError& e) {
    if (std::string_view(e.what()).starts_with("field ")) throw;
    throw StructuralError(field(path) + ": " + e.what());
  }
}

inline const json& require_array(const json& j, const std::string& path, std::size_t expected) {
  if (!j.is_array()) throw StructuralError(field(path) + ": expected an array");
  if (expected != static_cast<std::size_t>(-1) && j.size() != expected) {
    throw StructuralError(field(path) + ": expected " + std::to_string(expected) + " entries, got " +
                          std::to_string(j.size()));
  }
  return j;
}

inline constexpr std::size_t kAnySize = static_cast<std::size_t>(-1);

inline void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                                const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw StructuralError(field(path) + ": unknown key \"" + key + "\"");
    }
  }
}

class LabelIndex {
 public:
  explicit LabelIndex(const std::vector<std::string>& labels) : labels_(labels) {}

  std::size_t resolve(const json& j, const std::string& path) const {
    if (!j.is_string()) throw StructuralError(field(path) + ": expected a point label");
    const auto label = j.get<std::string>();
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw StructuralError(field(path) + ": unknown point \"" + label + "\"");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  std::vector<std::size_t> resolve_all(const json& j, const std::string& path) const {
    require_array(j, path, kAnySize);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(resolve(j[i], path + "/" + std::to_string(i)));
    return out;
  }

 private:
  const std::vector<std::string>& labels_;
};

}  // namespace detail

inline InstanceFile parse_instance(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructuralError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw StructuralError("instance must be a single JSON object");
  detail::reject_unknown_keys(doc, {"points", "metric", "ck", "ckinf", "ot", "problem"}, "");

  InstanceFile inst;
  if (!doc.contains("points")) throw StructuralError("field /points: missing");
  if (!doc.contains("metric")) throw StructuralError("field /metric: missing");
  const json& points = detail::require_array(doc["points"], "/points", detail::kAnySize);
  if (points.empty()) throw StructuralError("field /points: at least one point is required");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].is_string()) throw StructuralError("field /points/" + std::to_string(i) + ": expected a string label");
    const auto label = points[i].get<std::string>();
    if (std::find(inst.points.begin(), inst.points.end(), label) != inst.points.end()) {
      throw StructuralError("field /points/" + std::to_string(i) + ": duplicate label \"" + label + "\"");
    }
    inst.points.push_back(label);
  }
  const std::size_t n = inst.points.size();

  const json& metric = detail::require_array(doc["metric"], "/metric", n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_path = "/metric/" + std::to_string(i);
    const json& row = detail::require_array(metric[i], row_path, n);
    std::vector<Scalar> values;
    for (std::size_t j = 0; j < n; ++j) values.push_back(detail::read_scalar(row[j], row_path + "/" + std::to_string(j)));
    inst.metric.push_back(std::move(values));
  }

  if (doc.contains("ck")) {
    const json& ck = detail::require_array(doc["ck"], "/ck", n);
    std::vector<Scalar> values;
    for (std::size_t i = 0; i < n; ++i) values.push_back(detail::read_scalar(ck[i], "/ck/" + std::to_string(i)));
    inst.ck = std::move(values);
  }
  if (doc.contains("ckinf")) {
    const json& ckinf = detail::require_array(doc["ckinf"], "/ckinf", n);
    std::vector<ExtScalar> values;
    for (std::size_t i = 0; i < n; ++i) values.push_back(detail::read_ext_scalar(ckinf[i], "/ckinf/" + std::to_string(i)));
    inst.ckinf = std::move(values);
  }
  if (doc.contains("ot")) {
    const json& ot = detail::require_array(doc["ot"], "/ot", n);
    ExtMatrix m;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string row_path = "/ot/" + std::to_string(i);
      const json& row = detail::require_array(ot[i], row_path, n);
      std::vector<ExtScalar> values;
      for (std::size_t j = 0; j < n; ++j) {
        values.push_back(detail::read_ext_scalar(row[j], row_path + "/" + std::to_string(j)));
      }
      m.push_back(std::move(values));
    }
    inst.ot = std::move(m);
  }

  if (doc.contains("problem")) {
    const json& problem = doc["problem"];
    if (!problem.is_object()) throw StructuralError("field /problem: expected an object");
    detail::reject_unknown_keys(problem, {"f", "F", "psi", "M", "b", "x0", "gamma", "epsilon", "delta"}, "/problem");
    const detail::LabelIndex labels(inst.points);
    if (problem.contains("f")) {
      detail::require_array(problem["f"], "/problem/f", n);
      inst.f = labels.resolve_all(problem["f"], "/problem/f");
    }
    if (problem.contains("F")) {
      const json& F = detail::require_array(problem["F"], "/problem/F", n);
      std::vector<std::vector<std::size_t>> images;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string path = "/problem/F/" + std::to_string(i);
        images.push_back(labels.resolve_all(F[i], path));
        if (images.back().empty()) throw StructuralError(detail::field(path) + ": image set must be nonempty");
      }
      inst.F = std::move(images);
    }
    if (problem.contains("psi")) inst.psi = labels.resolve_all(problem["psi"], "/problem/psi");
    if (problem.contains("M")) inst.M = labels.resolve_all(problem["M"], "/problem/M");
    if (problem.contains("b")) inst.b = labels.resolve(problem["b"], "/problem/b");
    if (problem.contains("x0")) inst.x0 = labels.resolve(problem["x0"], "/problem/x0");
    if (problem.contains("gamma")) inst.gamma = detail::read_scalar(problem["gamma"], "/problem/gamma");
    if (problem.contains("epsilon")) inst.epsilon = detail::read_scalar(problem["epsilon"], "/problem/epsilon");
    if (problem.contains("delta")) inst.delta = detail::read_scalar(problem["delta"], "/problem/delta");
  }
  return inst;
}

/// Canonical form: fixed key order, every number as a "p/q" or "p" string.
inline nlohmann::ordered_json serialize_instance(const InstanceFile& inst) {
  using oj = nlohmann::ordered_json;
  auto label = [&](std::size_t i) { return inst.points.at(i); };
  auto labels = [&](const std::vector<std::size_t>& v) {
    oj out = oj::array();
    for (std::size_t i : v) out.push_back(label(i));
    return out;
  };
  oj doc;
  doc["points"] = inst.points;
  oj metric = oj::array();
  for (const auto& row : inst.metric) {
    oj r = oj::array();
    for (const auto& v : row) r.push_back(to_string(v));
    metric.push_back(std::move(r));
  }
  doc["metric"] = std::move(metric);
  if (inst.ck) {
    oj a = oj::array();
    for (const auto& v : *inst.ck) a.push_back(to_string(v));
    doc["ck"] = std::move(a);
  }
  if (inst.ckinf) {
    oj a = oj::array();
    for (const auto& v : *inst.ckinf) a.push_back(to_string(v));
    doc["ckinf"] = std::move(a);
  }
  if (inst.ot) {
    oj m = oj::array();
    for (const auto& row : *inst.ot) {
      oj r = oj::array();
      for (const auto& v : row) r.push_back(to_string(v));
      m.push_back(std::move(r));
    }
    doc["ot"] = std::move(m);
  }
  oj problem = oj::object();
  if (inst.f) problem["f"] = labels(*inst.f);
  if (inst.F) {
    oj images = oj::array();
    for (const auto& image : *inst.F) images.push_back(labels(image));
    problem["F"] = std::move(images);
  }
  if (inst.psi) problem["psi"] = labels(*inst.psi);
  if (inst.M) problem["M"] = labels(*inst.M);
  if (inst.b) problem["b"] = label(*inst.b);
  if (inst.x0) problem["x0"] = label(*inst.x0);
  if (inst.gamma) problem["gamma"] = to_string(*inst.gamma);
  if (inst.epsilon) problem["epsilon"] = to_string(*inst.epsilon);
  if (inst.delta) problem["delta"] = to_string(*inst.delta);
  if (!problem.empty()) doc["problem"] = std::move(problem);
  return doc;
}

inline std::string serialize_instance_text(const InstanceFile& inst) { return serialize_instance(inst).dump(2) + "\n"; }

inline InstanceFile instance_from(const GeneratedInstance& g) {
  InstanceFile inst;
  inst.points = g.space.labels();
  inst.metric = g.space.matrix();
  inst.ck = g.ck.values();
  inst.ckinf = g.ckinf.values();
  inst.ot = g.ot.matrix();
  return inst;
}

}  // namespace ballspace

#endif  // BALLSPACE_INSTANCE_HPP
