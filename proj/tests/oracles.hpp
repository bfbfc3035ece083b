#pragma once

// Brute-force oracles shared by the unit suites and the acceptance binary.

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "topodyn/topodyn.hpp"

namespace topodyn::testing {

inline std::vector<std::vector<long long>> int_power(const sft_system& sft, std::size_t n) {
  const std::size_t s = sft.alphabet_size();
  std::vector<std::vector<long long>> r(s, std::vector<long long>(s, 0)), a = r;
  for (std::size_t i = 0; i < s; ++i) {
    r[i][i] = 1;
    for (std::size_t j = 0; j < s; ++j) a[i][j] = sft.allowed(static_cast<int>(i), static_cast<int>(j));
  }
  for (std::size_t k = 0; k < n; ++k) {
    auto next = r;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        next[i][j] = 0;
        for (std::size_t l = 0; l < s; ++l) next[i][j] += r[i][l] * a[l][j];
      }
    r = next;
  }
  return r;
}

// random valid 0/1 matrix of size s
inline sft_system random_sft(std::mt19937_64& rng, int s, double density) {
  std::bernoulli_distribution coin(density);
  for (;;) {
    std::vector<std::vector<int>> m(s, std::vector<int>(s));
    for (auto& row : m)
      for (auto& v : row) v = coin(rng);
    try {
      return sft_system::build(m);
    } catch (const error&) {
    }
  }
}

// uniformly chosen periodic point of period <= maxp
inline std::optional<ep_point> random_periodic(std::mt19937_64& rng, const sft_system& sft, std::size_t maxp) {
  auto per = enumerate_periodic(sft, maxp);
  if (per.empty()) return std::nullopt;
  return per[std::uniform_int_distribution<std::size_t>(0, per.size() - 1)(rng)];
}

inline ep_point random_point(std::mt19937_64& rng, std::size_t alphabet) {
  std::uniform_int_distribution<int> sym(0, static_cast<int>(alphabet) - 1), len(1, 3), core(0, 4), off(-4, 4);
  auto w = [&](int n) {
    word out(static_cast<std::size_t>(n));
    for (auto& c : out) c = sym(rng);
    return out;
  };
  return ep_point(w(len(rng)), w(core(rng)), w(len(rng)), off(rng), alphabet);
}

// Exhaustive: some admissible central word on [-N, N] with b to the left and a to the right.
inline bool brute_su(const sft_system& sft, const ep_point& a, const ep_point& b, int max_n) {
  for (int n = 0; n <= max_n; ++n) {
    // tails themselves must be admissible at the junction, which they are inside a and b
    word w;
    std::function<bool(int)> dfs = [&](int k) {
      if (k > n) return sft.allowed(w.back(), a.at(n + 1));
      int prev = w.empty() ? b.at(-n - 1) : w.back();
      for (int c = 0; c < static_cast<int>(sft.alphabet_size()); ++c) {
        if (!sft.allowed(prev, c)) continue;
        w.push_back(c);
        if (dfs(k + 1)) return true;
        w.pop_back();
      }
      return false;
    };
    if (dfs(-n)) return true;
  }
  return false;
}

inline digraph random_digraph(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return digraph(n, e);
}

inline std::vector<std::vector<bool>> closure(const digraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = g.has_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

// Worst tracking error recomputed from one stored orbit of x: segment i owns
// times start_i .. start_i + n_i with start_{i+1} = start_i + n_i + p_i.
template <class S>
double glue_error_oracle(const S& sys, const gluing_witness<point_t<S>>& g) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < g.points.size(); ++i) total += g.lengths[i] + (i < g.gaps.size() ? g.gaps[i] : 0);
  auto orb = orbit(sys, g.x, static_cast<std::size_t>(total + 1));
  double worst = 0;
  std::int64_t start = 0;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    auto xi = orbit(sys, g.points[i], static_cast<std::size_t>(g.lengths[i] + 1));
    for (std::int64_t j = 0; j <= g.lengths[i]; ++j)
      worst = std::max(worst, sys.distance(orb[static_cast<std::size_t>(start + j)], xi[static_cast<std::size_t>(j)]));
    if (i < g.gaps.size()) start += g.lengths[i] + g.gaps[i];
  }
  return worst;
}

// Backward half by T^{-j}, forward half by T^{m+j}, each from scratch.
template <class S>
double bary_error_oracle(const S& sys, const barycenter_witness<point_t<S>>& w) {
  double worst = 0;
  for (std::int64_t j = 0; j <= w.n1; ++j) worst = std::max(worst, sys.distance(iterate(sys, w.x0, -j), iterate(sys, w.p, -j)));
  for (std::int64_t j = 0; j <= w.n2; ++j) worst = std::max(worst, sys.distance(iterate(sys, w.x0, w.m + j), iterate(sys, w.q, j)));
  return worst;
}

}  // namespace topodyn::testing
