#ifndef BALLSPACE_GENERATE_HPP
#define BALLSPACE_GENERATE_HPP

// Seeded random instances for property tests. Every generator owns its RNG;
// the same seed always yields the same instance.

#include "ballspace/functions.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ballspace {

struct WeightRange {
  Scalar low{1};
  Scalar high{4};
};

namespace detail {

class Sampler {
 public:
  Sampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    rng_.seed(seq);
  }

  std::int64_t integer(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_); }

  bool chance(int numerator, int denominator) { return integer(1, denominator) <= numerator; }

  /// Rational in [lo, hi] with denominator in 1..4.
  Scalar rational(const Scalar& lo, const Scalar& hi) {
    const std::int64_t q = integer(1, 4);
    const Scalar lo_q = lo * q;
    const Scalar hi_q = hi * q;
    Integer first = boost::multiprecision::numerator(lo_q) / boost::multiprecision::denominator(lo_q);
    if (Scalar(first) < lo_q) ++first;
    Integer last = boost::multiprecision::numerator(hi_q) / boost::multiprecision::denominator(hi_q);
    if (Scalar(last) > hi_q) --last;
    if (first > last) return lo;
    const auto span = static_cast<std::int64_t>(last - first);
    return Scalar(first + integer(0, span), q);
  }

 private:
  std::mt19937_64 rng_;
};

template <typename T, typename Add>
void shortest_path_closure(std::vector<std::vector<T>>& m, Add add) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        T via = add(m[i][k], m[k][j]);
        if (via < m[i][j]) m[i][j] = std::move(via);
      }
    }
  }
}

inline FiniteMetricSpace random_metric(Sampler& s, std::size_t n, const WeightRange& range) {
  ScalarMatrix d(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = s.rational(range.low, range.high);
      d[j][i] = d[i][j];
    }
  }
  shortest_path_closure(d, [](const Scalar& a, const Scalar& b) { return Scalar(a + b); });
  return FiniteMetricSpace(std::move(d));
}

inline CkFunction random_ck(Sampler& s, std::size_t n, const WeightRange& range) {
  const Scalar top = range.high * static_cast<std::int64_t>(n);
  std::vector<Scalar> values;
  for (std::size_t i = 0; i < n; ++i) values.push_back(s.rational(Scalar(0), top));
  return CkFunction(std::move(values));
}

}  // namespace detail

struct OtInstance {
  FiniteMetricSpace space;
  OtFunction phi;
  /// Draws discarded because their closure had a negative cycle.
  int rejected = 0;
  /// True when every draw was rejected and the CK embedding was used instead.
  bool fallback = false;
};

inline constexpr int kOtRetryBudget = 64;

/// Random metric (positive weights closed under shortest paths) and a random
/// OT function: a zero-diagonal matrix, closed under shortest paths on the
/// complete digraph so that phi(x,y) <= phi(x,z) + phi(z,y). Draws whose
/// closure has a negative cycle are discarded.
inline OtInstance generate_ot(std::uint64_t seed, std::size_t n_points, const WeightRange& range = {},
                              int retry_budget = kOtRetryBudget) {
  if (n_points == 0) throw PreconditionError("generate_ot: n_points must be at least 1");
  if (range.low <= 0 || range.high < range.low) throw PreconditionError("generate_ot: need 0 < low <= high");
  detail::Sampler s(seed, 0);
  FiniteMetricSpace space = detail::random_metric(s, n_points, range);
  const std::size_t n = n_points;
  const Scalar spread = range.high * static_cast<std::int64_t>(n);
  int rejected = 0;
  for (; rejected < retry_budget; ++rejected) {
    // Potential differences give the drift, the slack term breaks symmetry and
    // occasionally goes negative, which is where negative cycles come from.
    std::vector<Scalar> potential;
    for (std::size_t i = 0; i < n; ++i) potential.push_back(s.rational(Scalar(0), spread));
    ExtMatrix g(n, std::vector<ExtScalar>(n));
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        if (s.chance(1, 10)) {
          g[x][y] = ExtScalar::infinity();
          continue;
        }
        const Scalar half_low = range.low / 2;
        const Scalar slack = s.chance(1, 8) ? Scalar(-s.rational(Scalar(0), half_low)) : s.rational(half_low, range.high);
        g[x][y] = Scalar(potential[y] - potential[x] + slack);
      }
    }
    detail::shortest_path_closure(g, [](const ExtScalar& a, const ExtScalar& b) { return a + b; });
    bool negative_cycle = false;
    for (std::size_t x = 0; x < n; ++x) negative_cycle = negative_cycle || g[x][x] < ExtScalar(0);
    if (!negative_cycle) return OtInstance{std::move(space), OtFunction(std::move(g)), rejected, false};
  }
  CkFunction ck = detail::random_ck(s, n, range);
  return OtInstance{std::move(space), ck_to_ot(ck), rejected, true};
}

/// One instance carrying every function family on a shared space.
struct GeneratedInstance {
  std::uint64_t seed = 0;
  FiniteMetricSpace space;
  CkFunction ck;
  CkInfFunction ckinf;
  OtFunction ot;
};

inline GeneratedInstance generate_instance(std::uint64_t seed, std::size_t n_points, const WeightRange& range = {}) {
  OtInstance ot = generate_ot(seed, n_points, range);
  detail::Sampler s(seed, 1);
  CkFunction ck = detail::random_ck(s, n_points, range);
  CkFunction base = detail::random_ck(s, n_points, range);
  std::vector<ExtScalar> values(base.values().begin(), base.values().end());
  std::size_t finite = n_points;
  for (auto& v : values) {
    if (s.chance(1, 4)) {
      v = ExtScalar::infinity();
      --finite;
    }
  }
  if (finite == 0) values[static_cast<std::size_t>(s.integer(0, static_cast<std::int64_t>(n_points) - 1))] = base.values()[0];
  return GeneratedInstance{seed, std::move(ot.space), std::move(ck), CkInfFunction(std::move(values)), std::move(ot.phi)};
}

/// Sizes 2..12 cycling with the seed.
inline std::size_t default_instance_size(std::uint64_t seed) { return 2 + static_cast<std::size_t>(seed % 11); }

}  // namespace ballspace

#endif  // BALLSPACE_GENERATE_HPP
