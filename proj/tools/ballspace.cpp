// ballspace <command> [instance] [--seed S] [--count K] [--jobs N] [--human] [--form F]

#include "ballspace/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  ballspace::CliOptions opts;
  CLI::App app{"Ball spaces over exact finite metric spaces: checks, descent and certified theorem solvers"};
  app.require_subcommand(1);

  std::string instance;
  std::string theorem;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t size = 0;
  std::string form;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--human", opts.human, "indented text instead of JSON");
    sub->add_option("--form", form, "function block to use when several are present")
        ->check(CLI::IsMember({"ot", "ck", "ckinf"}));
  };

  const std::pair<const char*, const char*> simple[] = {
      {"check-metric", "validate the distance matrix"},
      {"check-ot", "check the OT-function axioms (a CK block is lifted first)"},
      {"check-ck", "check a CK or CK-inf function block"},
      {"balls", "list every ball and check strong contractivity"},
      {"descend", "singleton descent from x0 (or the first point)"},
  };
  for (const auto& [name, help] : simple) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("instance", instance, "instance file")->required();
    add_common(sub);
  }

  auto* solve = app.add_subcommand("solve", "certify a theorem on an instance");
  std::string theorem_help = "one of:";
  for (auto id : ballspace::kAllTheorems) theorem_help += " " + ballspace::to_string(id);
  solve->add_option("theorem", theorem, theorem_help)->required();
  solve->add_option("instance", instance, "instance file")->required();
  add_common(solve);

  auto* verify = app.add_subcommand("verify-lemmas", "lemma suite on a file, or on generated instances");
  auto* file_opt = verify->add_option("instance", instance, "instance file (omit to use --seed/--count)");
  auto* seed_opt = verify->add_option("--seed", seed, "first seed")->excludes(file_opt);
  auto* count_opt =
      verify->add_option("--count", count, "number of generated instances")->check(CLI::PositiveNumber)->excludes(file_opt);
  verify->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_common(verify);

  auto* gen = app.add_subcommand("gen", "print a generated instance");
  gen->add_option("seed", seed)->required();
  gen->add_option("n", size, "number of points")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ballspace::kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  opts.command = chosen->get_name();
  if (!instance.empty()) opts.instance_path = instance;
  if (!theorem.empty()) opts.theorem = theorem;
  if (!form.empty()) opts.form = form;
  if (chosen == gen) {
    opts.seed = seed;
    opts.size = size;
  }
  if (chosen == verify) {
    if (seed_opt->count() > 0) opts.seed = seed;
    if (count_opt->count() > 0) opts.count = count;
  }

  const ballspace::RunResult result = ballspace::run(opts);
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
