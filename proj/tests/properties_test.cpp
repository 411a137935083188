// Seeded property tests. Every loop runs a fixed seed range so failures
// reproduce; the failing seed is printed with each assertion.

#include "fixtures.hpp"

#include "ballspace/lemmas.hpp"

#include <gtest/gtest.h>

using namespace ballspace;
using namespace fixtures;

namespace {

constexpr std::uint64_t kSeeds = 100;

Scalar random_scalar(oracle::Picker& pick) {
  const long num = static_cast<long>(pick.index(41)) - 20;
  const long den = static_cast<long>(pick.index(6)) + 1;
  return Scalar(num, den);
}

ExtScalar random_ext(oracle::Picker& pick) {
  if (pick.index(5) == 0) return ExtScalar::infinity();
  return random_scalar(pick);
}

/// A metric, then maybe one entry disturbed so that some axiom may break.
ScalarMatrix random_matrix(oracle::Picker& pick, std::uint64_t seed) {
  const std::size_t n = 1 + pick.index(6);
  ScalarMatrix d = generate_ot(seed, n).space.matrix();
  if (pick.coin()) {
    const std::size_t i = pick.index(n), j = pick.index(n);
    d[i][j] = Scalar(static_cast<long>(pick.index(9)) - 2, 2);
  }
  return d;
}

ExtMatrix random_ot_matrix(oracle::Picker& pick, std::uint64_t seed) {
  const std::size_t n = 1 + pick.index(5);
  ExtMatrix m = generate_ot(seed, n).phi.matrix();
  if (pick.coin()) m[pick.index(n)][pick.index(n)] = random_ext(pick);
  return m;
}

}  // namespace

TEST(ScalarLaws, AssociativityAndCrossMultipliedComparison) {
  oracle::Picker pick(1);
  for (int i = 0; i < 500; ++i) {
    const Scalar x = random_scalar(pick), y = random_scalar(pick), z = random_scalar(pick);
    EXPECT_EQ(Scalar((x + y) + z), Scalar(x + (y + z)));
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const Integer lhs = numerator(x) * denominator(y);
    const Integer rhs = numerator(y) * denominator(x);
    EXPECT_EQ(x < y, lhs < rhs);
    EXPECT_EQ(x == y, lhs == rhs);
    EXPECT_EQ(parse_scalar(to_string(x)), x);
  }
}

TEST(ExtAddLaws, CommutativeAssociativeMonotone) {
  oracle::Picker pick(2);
  for (int i = 0; i < 500; ++i) {
    const ExtScalar x = random_ext(pick), y = random_ext(pick), z = random_ext(pick);
    EXPECT_EQ(ext_add(x, y), ext_add(y, x));
    EXPECT_EQ(ext_add(ext_add(x, y), z), ext_add(x, ext_add(y, z)));
    if (x <= y) {
      EXPECT_LE(ext_add(x, z), ext_add(y, z));
    }
    EXPECT_EQ(oracle::ext(ext_add(x, y)), oracle::plus(oracle::ext(x), oracle::ext(y)));
    EXPECT_EQ(x <= y, oracle::le(oracle::ext(x), oracle::ext(y)));
  }
}

TEST(MetricChecker, AgreesWithTripleLoop) {
  oracle::Picker pick(3);
  int rejected = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const ScalarMatrix d = random_matrix(pick, seed);
    const bool ok = oracle::metric_ok(d);
    EXPECT_EQ(check_metric_axioms(d).ok(), ok) << seed;
    rejected += !ok;
  }
  EXPECT_GT(rejected, 20);  // the disturbed matrices do exercise the failing side
}

TEST(OtChecker, AgreesWithTripleLoop) {
  oracle::Picker pick(4);
  int rejected = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const ExtMatrix m = random_ot_matrix(pick, seed);
    const bool ok = oracle::ot_ok(oracle::ext(m));
    const FiniteMetricSpace X = line(m.size());
    const OtAxiomReport r = check_ot_axioms(OtFunction(m), X);
    // (d) only fires on an all-+inf row, which already breaks (b)
    EXPECT_EQ(r.ok(), ok) << seed;
    rejected += !ok;
  }
  EXPECT_GT(rejected, 20);
}

TEST(CkToOt, AntisymmetricAndValid) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const OtFunction phi = ck_to_ot(g.ck);
    EXPECT_TRUE(check_ot_axioms(phi, g.space).ok()) << seed;
    for (PointId x : g.space.points())
      for (PointId y : g.space.points()) EXPECT_EQ(ext_add(phi(x, y), phi(y, x)), ExtScalar(0)) << seed;
  }
}

TEST(OtFunction, PairSumsAreNonnegativeAndEveryPointIsAnElement) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    for (PointId x : g.space.points())
      for (PointId y : g.space.points()) EXPECT_GE(ext_add(g.ot(x, y), g.ot(y, x)), ExtScalar(0)) << seed;
    EXPECT_EQ(ot_elements(g.ot).size(), g.space.size()) << seed;
  }
}

TEST(Balls, ConstructorsAgreeWithOracles) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const auto& d = g.space.matrix();
    const auto ot = oracle::ext(g.ot.matrix());
    const auto ckinf = oracle::ext(g.ckinf.values());
    for (PointId x : g.space.points()) {
      EXPECT_EQ(ck_ball(g.space, g.ck, x).members.indices(), oracle::ck_ball(d, g.ck.values(), x.index)) << seed;
      EXPECT_EQ(ot_ball(g.space, g.ot, x).members.indices(), oracle::ot_ball(d, ot, x.index)) << seed;
      EXPECT_EQ(ckinf_ball(g.space, g.ckinf, x).members.indices(), oracle::ckinf_ball(d, ckinf, x.index)) << seed;
    }
  }
}

TEST(Balls, CkOtCoherence) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const OtFunction phi = ck_to_ot(g.ck);
    for (PointId x : g.space.points())
      EXPECT_EQ(ot_ball(g.space, phi, x).members, ck_ball(g.space, g.ck, x).members) << seed;
  }
}

TEST(Balls, CkInfCoherenceInsideTheRestrictedBall) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    for (PointId x0 : g.space.points()) {
      if (!g.ckinf.is_ck_element(x0)) continue;
      const CkRestriction r = restrict_ckinf(g.ckinf, x0, g.space);
      for (std::size_t i = 0; i < r.ball.size(); ++i) {
        std::vector<PointId> mapped;
        for (PointId p : ck_ball(r.space, r.function, PointId{i}).members) mapped.push_back(r.ball[p.index]);
        EXPECT_EQ(ckinf_ball(g.space, g.ckinf, r.ball[i]).members, PointSet(mapped)) << seed;
      }
    }
  }
}

TEST(Balls, StrongContractivityOfEveryConstruction) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    EXPECT_TRUE(check_strongly_contractive(ck_assignment(g.space, g.ck)).ok()) << seed;
    EXPECT_TRUE(check_strongly_contractive(ot_assignment(g.space, g.ot)).ok()) << seed;
    std::vector<oracle::Set> balls;
    for (PointId x : g.space.points()) balls.push_back(ot_ball(g.space, g.ot, x).members.indices());
    EXPECT_TRUE(oracle::strongly_contractive(balls, PointSet::all(g.space.size()).indices())) << seed;
    for (PointId x0 : g.space.points()) {
      const BallAssignment gen = generated_ball_space(g.space, g.ot, x0);
      EXPECT_TRUE(check_strongly_contractive(gen).ok()) << seed;
      for (const PointSet& s : gen.family()) EXPECT_TRUE(s.subset_of(gen.domain())) << seed;
      if (g.ckinf.is_ck_element(x0)) {
        EXPECT_TRUE(check_strongly_contractive(ckinf_generated_ball_space(g.space, g.ckinf, x0)).ok()) << seed;
      }
    }
  }
}

TEST(Balls, StrictPartConsequences) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    for (PointId x : g.space.points()) {
      for (PointId y : ck_ball(g.space, g.ck, x).members)
        if (y != x) {
          EXPECT_LT(g.ck(y), g.ck(x)) << seed;
        }
      for (PointId y : ot_ball(g.space, g.ot, x).members)
        if (y != x) {
          EXPECT_LT(g.ot(x, y), g.ot(y, x)) << seed;
        }
      for (PointId y : ckinf_ball(g.space, g.ckinf, x).members) {
        EXPECT_LE(g.ckinf(y), g.ckinf(x)) << seed;
        if (g.ckinf(x).is_finite()) {
          EXPECT_TRUE(g.ckinf(y).is_finite()) << seed;
        }
      }
    }
  }
}

TEST(Nests, EnumerationMatchesSubsetOracle) {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, 2 + seed % 7);
    for (PointId x0 : g.space.points()) {
      const auto family = generated_ball_space(g.space, g.ot, x0).family();
      std::vector<oracle::Set> plain;
      for (const auto& s : family) plain.push_back(s.indices());
      std::set<std::vector<oracle::Set>> got;
      for (const Nest& n : enumerate_maximal_nests(family)) {
        std::vector<oracle::Set> v;
        for (const auto& s : n) v.push_back(s.indices());
        got.insert(v);
      }
      EXPECT_EQ(got, oracle::maximal_nests(plain)) << seed;
      ++compared;
    }
  }
  EXPECT_GT(compared, 300);
}

TEST(Descent, SoundFromEveryStart) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const auto& d = g.space.matrix();
    const auto ot = oracle::ext(g.ot.matrix());
    const BallAssignment a = ot_assignment(g.space, g.ot);
    for (PointId x : g.space.points()) {
      const DescentTrace t = singleton_descent(a, x);
      EXPECT_EQ(oracle::ot_ball(d, ot, t.terminal.index), oracle::Set{t.terminal.index}) << seed;
      EXPECT_TRUE(oracle::contains(oracle::ot_ball(d, ot, x.index), t.terminal.index)) << seed;
      EXPECT_LE(t.chain.size(), g.space.size()) << seed;
      for (std::size_t i = 1; i < t.balls.size(); ++i) EXPECT_TRUE(t.balls[i].proper_subset_of(t.balls[i - 1])) << seed;

      const DescentTrace ct = ckinf_singleton(g.space, g.ckinf, x);
      const auto v = oracle::ext(g.ckinf.values());
      EXPECT_EQ(oracle::ckinf_ball(d, v, ct.terminal.index), oracle::Set{ct.terminal.index}) << seed;
      EXPECT_TRUE(oracle::contains(oracle::ckinf_ball(d, v, x.index), ct.terminal.index)) << seed;
    }
  }
}

TEST(Petals, IdentityWithCkBallsAndMonotonicity) {
  oracle::Picker pick(7);
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const std::size_t n = g.space.size();
    const PointId b{pick.index(n)};
    std::vector<PointId> M;
    for (PointId x : g.space.points())
      if (x != b && pick.coin()) M.push_back(x);
    if (M.empty()) continue;
    const Scalar gamma = pick.gamma();
    const FiniteMetricSpace sub = g.space.subspace(M);
    std::vector<Scalar> values;
    for (PointId m : M) values.push_back(g.space.distance(m, b) / gamma);
    const CkFunction varphi(values);
    const PointSet Mset(M);
    for (std::size_t i = 0; i < M.size(); ++i) {
      std::vector<PointId> mapped;
      for (PointId p : ck_ball(sub, varphi, PointId{i}).members) mapped.push_back(M[p.index]);
      EXPECT_EQ(petal(g.space, gamma, M[i], b).intersect(Mset), PointSet(mapped)) << seed;
      EXPECT_EQ(petal(g.space, gamma, M[i], b).indices(), oracle::petal(g.space.matrix(), gamma, M[i].index, b.index));
      EXPECT_TRUE(petal(g.space, gamma * 2, M[i], b).subset_of(petal(g.space, gamma, M[i], b))) << seed;
    }
  }
}

TEST(Solvers, OtAndCkInfFormsAgreeOnFiniteFunctions) {
  oracle::Picker pick(8);
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    std::vector<ExtScalar> finite(g.ck.values().begin(), g.ck.values().end());
    const CkInfFunction phitilde(finite);
    const OtFunction phi = ck_to_ot(g.ck);
    TheoremParams p;
    p.x0 = PointId{pick.index(g.space.size())};
    p.gamma = pick.gamma();
    for (TheoremId id : {TheoremId::ekeland_basic, TheoremId::ekeland_altered}) {
      const auto ck = solve_ckinf(id, g.space, phitilde, p);
      const auto ot = solve_ot(id, g.space, phi, p);
      ASSERT_TRUE(ck.valid() && ot.valid()) << seed;
      // the altered witness is isolated for phi / gamma
      const Scalar g_used = id == TheoremId::ekeland_altered ? *p.gamma : Scalar(1);
      const Scalar inv = Scalar(1) / g_used;
      EXPECT_EQ(ckinf_ball(g.space, phitilde.scaled(inv), *ck.witness).members.size(), 1u) << seed;
      EXPECT_EQ(ot_ball(g.space, phi.scaled(inv), *ot.witness).members.size(), 1u) << seed;
      EXPECT_EQ(ck.witness, ot.witness) << seed;
    }
  }
}

TEST(Solvers, ScalingCoherence) {
  oracle::Picker pick(9);
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const Scalar gamma = pick.gamma();
    const PointId x0{pick.index(g.space.size())};
    const auto altered = ekeland_altered(g.space, g.ot, gamma, x0);
    const auto basic = ekeland_basic(g.space, g.ot.scaled(Scalar(1) / gamma), x0);
    ASSERT_TRUE(altered.valid()) << seed;
    EXPECT_EQ(altered.witness, basic.witness) << seed;
    EXPECT_EQ(altered.trace->chain, basic.trace->chain) << seed;
    // (CC5) on the basic witness
    const PointId a = *basic.witness;
    EXPECT_LE(g.ot(x0, a), ExtScalar(Scalar(-gamma * g.space.distance(x0, a)))) << seed;
  }
}

TEST(Solvers, FlowerPetalWitnessLiesInTheStartingPetal) {
  oracle::Picker pick(10);
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const OtCase c = valid_ot_case(TheoremId::flower_petal, g.space, g.ot, pick);
    const auto cert = solve_ot(TheoremId::flower_petal, g.space, c.phi, c.params);
    ASSERT_TRUE(cert.valid()) << seed;
    EXPECT_TRUE(petal(g.space, *c.params.gamma, *c.params.x0, *c.params.b).contains(*cert.witness)) << seed;
  }
}

TEST(Lemmas, SuiteIsCleanOnGeneratedInstances) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const GeneratedInstance g = generate_instance(seed, default_instance_size(seed));
    const LemmaSuite suite = verify_lemmas(LemmaInput{g.space, g.ck, g.ckinf, g.ot, {}});
    EXPECT_TRUE(suite.ok()) << seed << ": " << suite.violation_count() << " violations";
    EXPECT_GT(suite.checks.size(), 15u);
  }
}

TEST(Lemmas, SuiteFlagsAnInvalidOtFunction) {
  const LemmaSuite suite = verify_lemmas(LemmaInput{line(4), std::nullopt, std::nullopt, truncated_phi(4), {}});
  EXPECT_FALSE(suite.ok());
  ASSERT_NE(suite.find("ot-axioms"), nullptr);
  EXPECT_TRUE(suite.find("ot-axioms")->report.contains("(c)", {0, 1, 2}));
}

TEST(Generation, DeterministicPerSeed) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const GeneratedInstance a = generate_instance(seed, default_instance_size(seed));
    const GeneratedInstance b = generate_instance(seed, default_instance_size(seed));
    EXPECT_EQ(a.space.matrix(), b.space.matrix());
    EXPECT_EQ(a.ck.values(), b.ck.values());
    EXPECT_EQ(a.ckinf.values(), b.ckinf.values());
    EXPECT_EQ(a.ot.matrix(), b.ot.matrix());
  }
}
