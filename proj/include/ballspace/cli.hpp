#ifndef BALLSPACE_CLI_HPP
#define BALLSPACE_CLI_HPP

// Command dispatch for the `ballspace` tool. Reports are JSON with a fixed
// field order; --human renders the same content as indented text.
//
// Exit codes: 0 all checks passed or the theorem is certified, 1 a check or
// hypothesis failed, 2 structural or usage error.

#include "ballspace/instance.hpp"
#include "ballspace/lemmas.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace ballspace {

struct CliOptions {
  std::string command;
  std::optional<std::string> theorem;
  std::optional<std::string> instance_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> count;
  std::optional<std::size_t> size;
  std::size_t jobs = 1;
  bool human = false;
  /// ot, ck or ckinf; required only when an instance has several function blocks.
  std::optional<std::string> form;
};

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

inline std::string instance_digest(const InstanceFile& inst) {
  return "sha256:" + sha256_hex(serialize_instance_text(inst));
}

namespace detail {

using ojson = nlohmann::ordered_json;

class ReportBuilder {
 public:
  ReportBuilder(const std::vector<std::string>& labels) : labels_(labels) {}  // NOLINT

  std::string label(std::size_t i) const { return i < labels_.size() ? labels_[i] : std::to_string(i); }
  std::string label(PointId p) const { return label(p.index); }

  ojson labels_of(const PointSet& s) const {
    ojson out = ojson::array();
    for (PointId p : s) out.push_back(label(p));
    return out;
  }

  ojson violations(const Report& r) const {
    ojson out = ojson::array();
    for (const Violation& v : r.violations) {
      ojson item;
      item["rule"] = v.rule;
      ojson witness = ojson::array();
      for (std::size_t i : v.witness) witness.push_back(label(i));
      item["witness"] = std::move(witness);
      if (!v.detail.empty()) item["detail"] = v.detail;
      out.push_back(std::move(item));
    }
    return out;
  }

  ojson check(std::string_view name, const Report& r) const {
    ojson out;
    out["name"] = name;
    out["status"] = r.ok() ? "pass" : "fail";
    out["violations"] = violations(r);
    return out;
  }

  ojson trace(const DescentTrace& t) const {
    ojson out;
    out["start"] = label(t.chain.front());
    ojson chain = ojson::array();
    std::string path;
    for (PointId p : t.chain) {
      chain.push_back(label(p));
      path += (path.empty() ? "" : "→") + label(p);
    }
    out["chain"] = std::move(chain);
    ojson balls = ojson::array();
    for (const PointSet& s : t.balls) balls.push_back(labels_of(s));
    out["balls"] = std::move(balls);
    out["terminal"] = label(t.terminal);
    out["path"] = path;
    return out;
  }

  ojson certificate(const TheoremCertificate& c) const {
    ojson out;
    out["theorem"] = to_string(c.theorem);
    out["form"] = to_string(c.form);
    out["valid"] = c.valid();
    out["witness"] = c.witness ? ojson(label(*c.witness)) : ojson(nullptr);
    out["hypotheses"] = check("hypotheses", c.hypotheses);
    out["conclusion"] = check("conclusion", c.conclusion);
    out["trace"] = c.trace ? trace(*c.trace) : ojson(nullptr);
    return out;
  }

  ojson lemma_suite(const LemmaSuite& suite) const {
    ojson checks = ojson::array();
    for (const LemmaCheck& c : suite.checks) {
      ojson item = check(c.name, c.report);
      item["cases"] = c.cases;
      checks.push_back(std::move(item));
    }
    return checks;
  }

 private:
  std::vector<std::string> labels_;
};

enum class Form { ot, ck, ckinf };

inline std::string form_name(Form f) {
  switch (f) {
    case Form::ot: return "ot";
    case Form::ck: return "ck";
    case Form::ckinf: return "ckinf";
  }
  return "?";
}

inline bool has_form(const InstanceFile& inst, Form f) {
  switch (f) {
    case Form::ot: return inst.ot.has_value();
    case Form::ck: return inst.ck.has_value();
    case Form::ckinf: return inst.ckinf.has_value();
  }
  return false;
}

inline Form select_form(const InstanceFile& inst, const std::optional<std::string>& requested,
                        std::initializer_list<Form> allowed, std::string_view command) {
  if (requested) {
    for (Form f : allowed) {
      if (form_name(f) == *requested) {
        if (!has_form(inst, f)) throw StructuralError("instance has no \"" + *requested + "\" block");
        return f;
      }
    }
    throw StructuralError("--form " + *requested + " is not accepted by " + std::string(command));
  }
  std::vector<Form> present;
  for (Form f : allowed) {
    if (has_form(inst, f)) present.push_back(f);
  }
  if (present.empty()) {
    std::string names;
    for (Form f : allowed) names += (names.empty() ? "" : "/") + form_name(f);
    throw StructuralError(std::string(command) + " needs a function block (" + names + ")");
  }
  if (present.size() > 1) {
    throw StructuralError("instance has several function blocks; choose one with --form");
  }
  return present.front();
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open instance file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

inline std::string render_human(const ojson& report);

class Session {
 public:
  explicit Session(const CliOptions& options) : options_(options) {
    report_["command"] = options.command + (options.theorem ? " " + *options.theorem : "");
  }

  RunResult finish() {
    report_["status"] = failed_ ? "fail" : "pass";
    report_["exit"] = failed_ ? kExitFail : kExitPass;
    RunResult result;
    result.exit_code = failed_ ? kExitFail : kExitPass;
    result.out = options_.human ? render_human(report_) : report_.dump(2) + "\n";
    return result;
  }

  void attach_instance(const InstanceFile& inst) {
    report_["instance"] = *options_.instance_path;
    report_["digest"] = instance_digest(inst);
    report_["checks"] = ojson::array();
  }

  void add_check(const ReportBuilder& rb, std::string_view name, const Report& r, ojson extra = ojson::object()) {
    ojson item = rb.check(name, r);
    for (auto& [k, v] : extra.items()) item[k] = v;
    report_["checks"].push_back(std::move(item));
    failed_ = failed_ || !r.ok();
  }

  void fail() { failed_ = true; }
  ojson& report() { return report_; }

 private:
  const CliOptions& options_;
  ojson report_;
  bool failed_ = false;
};

/// Metric check shared by every instance command. Returns the space if valid.
inline std::optional<FiniteMetricSpace> checked_space(Session& session, const ReportBuilder& rb,
                                                      const InstanceFile& inst) {
  Report metric = check_metric_axioms(inst.metric);
  session.add_check(rb, "metric-axioms", metric);
  if (!metric.ok()) return std::nullopt;
  return inst.space();
}

inline OtFunction ot_of(const InstanceFile& inst, Form form) {
  if (form == Form::ck) return ck_to_ot(CkFunction(*inst.ck));
  return OtFunction(*inst.ot);
}

inline void cmd_check_ot(Session& session, const ReportBuilder& rb, const InstanceFile& inst, const CliOptions& o) {
  const Form form = select_form(inst, o.form, {Form::ot, Form::ck}, "check-ot");
  auto space = checked_space(session, rb, inst);
  if (!space) return;
  const OtFunction phi = ot_of(inst, form);
  const OtAxiomReport axioms = check_ot_axioms(phi, *space);
  ojson extra;
  extra["source"] = form_name(form);
  extra["condition_a"] = axioms.condition_a;
  ojson infima = ojson::array();
  for (std::size_t x = 0; x < axioms.row_infimum.size(); ++x) {
    ojson item;
    item["point"] = rb.label(x);
    item["infimum"] = to_string(axioms.row_infimum[x]);
    infima.push_back(std::move(item));
  }
  extra["row_infimum"] = std::move(infima);
  session.add_check(rb, "ot-axioms", axioms.violations, std::move(extra));
}

inline void cmd_check_ck(Session& session, const ReportBuilder& rb, const InstanceFile& inst, const CliOptions& o) {
  const Form form = select_form(inst, o.form, {Form::ck, Form::ckinf}, "check-ck");
  auto space = checked_space(session, rb, inst);
  if (!space) return;
  ojson extra;
  extra["source"] = form_name(form);
  extra["lower_semicontinuity"] = "vacuous (finite discrete topology)";
  Report r;
  if (form == Form::ck) {
    const auto& v = *inst.ck;
    extra["infimum"] = to_string(*std::min_element(v.begin(), v.end()));
    session.add_check(rb, "ck-function", r, std::move(extra));
    return;
  }
  const auto& v = *inst.ckinf;
  ojson elements = ojson::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_finite()) elements.push_back(rb.label(i));
  }
  if (elements.empty()) r.add("not-identically-inf", {}, "every value is +inf");
  extra["infimum"] = to_string(*std::min_element(v.begin(), v.end()));
  extra["ck_elements"] = std::move(elements);
  session.add_check(rb, "ckinf-function", r, std::move(extra));
}

inline void cmd_balls(Session& session, const ReportBuilder& rb, const InstanceFile& inst, const CliOptions& o) {
  const Form form = select_form(inst, o.form, {Form::ck, Form::ckinf, Form::ot}, "balls");
  auto space = checked_space(session, rb, inst);
  if (!space) return;
  std::vector<Ball> balls;
  Report contractive;
  if (form == Form::ck) {
    const CkFunction ck(*inst.ck);
    const BallAssignment a = ck_assignment(*space, ck);
    for (PointId x : space->points()) balls.push_back(a.ball(x));
    contractive = check_strongly_contractive(a);
  } else if (form == Form::ot) {
    const OtFunction phi(*inst.ot);
    session.add_check(rb, "ot-axioms", check_ot_axioms(phi, *space).violations);
    const BallAssignment a = ot_assignment(*space, phi);
    for (PointId x : space->points()) balls.push_back(a.ball(x));
    contractive = check_strongly_contractive(a);
  } else {
    const CkInfFunction phi(*inst.ckinf);
    for (PointId x : space->points()) balls.push_back(ckinf_ball(*space, phi, x));
    // The full CK-inf family need not be contractive; generated spaces are.
    for (PointId x0 : space->points()) {
      if (phi.is_ck_element(x0)) contractive.append(check_strongly_contractive(ckinf_generated_ball_space(*space, phi, x0)));
    }
  }
  ojson list = ojson::array();
  for (const Ball& b : balls) {
    ojson item;
    item["center"] = rb.label(b.center);
    item["origin"] = to_string(b.origin);
    item["members"] = rb.labels_of(b.members);
    list.push_back(std::move(item));
  }
  session.report()["balls"] = std::move(list);
  session.add_check(rb, "strongly-contractive", contractive);
}

inline void cmd_descend(Session& session, const ReportBuilder& rb, const InstanceFile& inst, const CliOptions& o) {
  const Form form = select_form(inst, o.form, {Form::ck, Form::ckinf, Form::ot}, "descend");
  auto space = checked_space(session, rb, inst);
  if (!space) return;
  const PointId start{inst.x0.value_or(0)};
  std::optional<DescentTrace> trace;
  BallLookup ball_of;
  if (form == Form::ckinf) {
    const CkInfFunction phi(*inst.ckinf);
    trace = ckinf_singleton(*space, phi, start);
    ball_of = [&, phi](PointId x) { return ckinf_ball(*space, phi, x).members; };
  } else {
    const OtFunction phi = ot_of(inst, form);
    if (form == Form::ot) session.add_check(rb, "ot-axioms", check_ot_axioms(phi, *space).violations);
    const BallAssignment a = form == Form::ck ? ck_assignment(*space, CkFunction(*inst.ck)) : ot_assignment(*space, phi);
    const Report contractive = check_strongly_contractive(a);
    session.add_check(rb, "strongly-contractive", contractive);
    if (!contractive.ok()) return;
    trace = singleton_descent(a, start);
    ball_of = [a](PointId x) { return a.members(x); };
  }
  session.add_check(rb, "descent", check_descent_trace(*trace, ball_of, ball_of(start), space->size()));
  session.report()["trace"] = rb.trace(*trace);
}

inline void cmd_solve(Session& session, const ReportBuilder& rb, const InstanceFile& inst, const CliOptions& o) {
  const auto theorem = parse_theorem_id(o.theorem.value_or(""));
  if (!theorem) throw StructuralError("unknown theorem id: \"" + o.theorem.value_or("") + "\"");
  auto space = checked_space(session, rb, inst);
  if (!space) return;
  const TheoremParams params = inst.params();
  TheoremCertificate cert;
  if (*theorem == TheoremId::flower_petal) {
    cert = solve_ot(*theorem, *space, OtFunction(ExtMatrix(space->size(), std::vector<ExtScalar>(space->size()))), params);
  } else {
    const Form form = select_form(inst, o.form, {Form::ot, Form::ck, Form::ckinf}, "solve");
    if (form == Form::ckinf) {
      cert = solve_ckinf(*theorem, *space, CkInfFunction(*inst.ckinf), params);
    } else {
      cert = solve_ot(*theorem, *space, ot_of(inst, form), params);
    }
  }
  session.report()["certificate"] = rb.certificate(cert);
  if (!cert.valid()) session.fail();
}

inline LemmaInput lemma_input(const InstanceFile& inst, FiniteMetricSpace space) {
  LemmaInput in{std::move(space), std::nullopt, std::nullopt, std::nullopt, {}};
  if (inst.ck) in.ck = CkFunction(*inst.ck);
  if (inst.ckinf) in.ckinf = CkInfFunction(*inst.ckinf);
  if (inst.ot) in.ot = OtFunction(*inst.ot);
  return in;
}

inline void cmd_verify_file(Session& session, const ReportBuilder& rb, const InstanceFile& inst) {
  auto space = checked_space(session, rb, inst);
  if (!space) return;
  const LemmaSuite suite = verify_lemmas(lemma_input(inst, *space));
  session.report()["lemmas"] = rb.lemma_suite(suite);
  if (!suite.ok()) session.fail();
}

inline void cmd_verify_generated(Session& session, const CliOptions& o) {
  const std::uint64_t first = o.seed.value_or(1);
  const std::size_t count = o.count.value_or(1);
  std::vector<ojson> results(count);
  std::vector<char> passed(count, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const std::uint64_t seed = first + i;
      const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
      const LemmaSuite suite = verify_lemmas(LemmaInput{g.space, g.ck, g.ckinf, g.ot, {}});
      const ReportBuilder rb(g.space.labels());
      ojson item;
      item["seed"] = seed;
      item["size"] = g.space.size();
      item["digest"] = instance_digest(instance_from(g));
      item["status"] = suite.ok() ? "pass" : "fail";
      item["checks"] = rb.lemma_suite(suite);
      results[i] = std::move(item);
      passed[i] = suite.ok() ? 1 : 0;
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, count));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  session.report()["seed"] = first;
  session.report()["count"] = count;
  ojson suites = ojson::array();
  for (auto& r : results) suites.push_back(std::move(r));
  session.report()["suites"] = std::move(suites);
  if (std::find(passed.begin(), passed.end(), 0) != passed.end()) session.fail();
}

inline std::string render_violations(const ojson& list, const std::string& indent) {
  std::string out;
  for (const auto& v : list) {
    std::string witness;
    for (const auto& w : v["witness"]) witness += (witness.empty() ? "" : ",") + w.get<std::string>();
    out += indent + v["rule"].get<std::string>() + " at (" + witness + ")";
    if (v.contains("detail")) out += ": " + v["detail"].get<std::string>();
    out += "\n";
  }
  return out;
}

inline std::string render_checks(const ojson& checks, const std::string& indent) {
  std::string out;
  for (const auto& c : checks) {
    out += indent + (c["status"] == "pass" ? "[pass] " : "[FAIL] ") + c["name"].get<std::string>();
    if (c.contains("cases")) out += " (" + std::to_string(c["cases"].get<std::size_t>()) + " cases)";
    out += "\n" + render_violations(c["violations"], indent + "  ");
  }
  return out;
}

inline std::string render_trace(const ojson& t, const std::string& indent) {
  if (t.is_null()) return indent + "trace: none\n";
  std::string out = indent + "trace: " + t["path"].get<std::string>() + "\n";
  for (std::size_t i = 0; i < t["chain"].size(); ++i) {
    std::string members;
    for (const auto& m : t["balls"][i]) members += (members.empty() ? "" : ", ") + m.get<std::string>();
    out += indent + "  B(" + t["chain"][i].get<std::string>() + ") = {" + members + "}\n";
  }
  return out;
}

inline std::string render_human(const ojson& report) {
  std::string out = "command: " + report["command"].get<std::string>() + "\n";
  if (report.contains("instance")) out += "instance: " + report["instance"].get<std::string>() + "\n";
  if (report.contains("digest")) out += "digest: " + report["digest"].get<std::string>() + "\n";
  if (report.contains("checks")) out += render_checks(report["checks"], "");
  if (report.contains("balls")) {
    for (const auto& b : report["balls"]) {
      std::string members;
      for (const auto& m : b["members"]) members += (members.empty() ? "" : ", ") + m.get<std::string>();
      out += "B(" + b["center"].get<std::string>() + ") = {" + members + "}\n";
    }
  }
  if (report.contains("trace")) out += render_trace(report["trace"], "");
  if (report.contains("certificate")) {
    const auto& c = report["certificate"];
    out += "certificate: " + c["theorem"].get<std::string>() + " (" + c["form"].get<std::string>() + ") " +
           (c["valid"].get<bool>() ? "valid" : "INVALID") + "\n";
    out += "  witness: " + (c["witness"].is_null() ? std::string("none") : c["witness"].get<std::string>()) + "\n";
    out += render_checks(ojson::array({c["hypotheses"], c["conclusion"]}), "  ");
    out += render_trace(c["trace"], "  ");
  }
  if (report.contains("lemmas")) out += render_checks(report["lemmas"], "");
  if (report.contains("suites")) {
    for (const auto& s : report["suites"]) {
      out += "seed " + std::to_string(s["seed"].get<std::uint64_t>()) + " (" + std::to_string(s["size"].get<std::size_t>()) +
             " points): " + s["status"].get<std::string>() + "\n";
      out += render_checks(s["checks"], "  ");
    }
  }
  out += "status: " + report["status"].get<std::string>() + " (exit " + std::to_string(report["exit"].get<int>()) + ")\n";
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> commands = {"check-metric", "check-ot", "check-ck", "balls",
                                                    "descend",      "solve",    "verify-lemmas", "gen"};
  return commands;
}

inline RunResult run(const CliOptions& options) {
  try {
    if (options.command == "gen") {
      if (!options.seed || !options.size) throw StructuralError("gen needs <seed> <n>");
      if (*options.size == 0) throw StructuralError("gen: n must be at least 1");
      return {kExitPass, serialize_instance_text(instance_from(generate_instance(*options.seed, *options.size))), {}};
    }
    const auto& known = cli_commands();
    if (std::find(known.begin(), known.end(), options.command) == known.end()) {
      throw StructuralError("unknown command: \"" + options.command + "\"");
    }
    detail::Session session(options);
    if (options.command == "verify-lemmas" && !options.instance_path) {
      detail::cmd_verify_generated(session, options);
      return session.finish();
    }
    if (!options.instance_path) throw StructuralError(options.command + " needs an instance file");
    const InstanceFile inst = detail::load_instance(*options.instance_path);
    session.attach_instance(inst);
    const detail::ReportBuilder rb(inst.points);
    if (options.command == "check-metric") {
      detail::checked_space(session, rb, inst);
    } else if (options.command == "check-ot") {
      detail::cmd_check_ot(session, rb, inst, options);
    } else if (options.command == "check-ck") {
      detail::cmd_check_ck(session, rb, inst, options);
    } else if (options.command == "balls") {
      detail::cmd_balls(session, rb, inst, options);
    } else if (options.command == "descend") {
      detail::cmd_descend(session, rb, inst, options);
    } else if (options.command == "solve") {
      detail::cmd_solve(session, rb, inst, options);
    } else {
      detail::cmd_verify_file(session, rb, inst);
    }
    return session.finish();
  } catch (const Error& e) {
    return {kExitUsage, {}, std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace ballspace

#endif  // BALLSPACE_CLI_HPP
