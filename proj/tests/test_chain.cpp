#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"

using namespace topodyn;
using namespace topodyn::testing;

namespace {

std::vector<double> circle_centers(std::size_t n) {
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return pts;
}

grid_system circle_grid(std::size_t n, double shift) {
  return grid_system::from_map(1, ambient::torus, circle_centers(n), [shift](std::span<const double> x) {
    double y = x[0] + shift;
    return std::vector<double>{y - std::floor(y)};
  }, 0.5 / static_cast<double>(n), 1.0);
}

grid_system identity_grid(std::size_t n) { return circle_grid(n, 0.0); }

// chain_graph over an arbitrary digraph; the base is a placeholder of matching size
chain_graph wrap(const digraph& g) {
  auto base = std::make_shared<grid_system>(identity_grid(g.size()));
  return chain_graph(base, 1.0, g);
}

std::vector<int> bfs_oracle(const digraph& g, std::size_t src) {
  std::vector<int> d(g.size(), -1);
  std::vector<std::size_t> q{src};
  d[src] = 0;
  for (std::size_t h = 0; h < q.size(); ++h)
    for (std::size_t v = 0; v < g.size(); ++v)
      if (g.has_edge(static_cast<std::uint32_t>(q[h]), static_cast<std::uint32_t>(v)) && d[v] < 0) {
        d[v] = d[q[h]] + 1;
        q.push_back(v);
      }
  return d;
}

}  // namespace

TEST(BuildChainGraph, IdentitySelfLoops) {
  auto g = identity_grid(20);
  auto cg = build_chain_graph(g, 0.01);
  for (std::uint32_t i = 0; i < 20; ++i) EXPECT_TRUE(cg.graph().has_edge(i, i));
  EXPECT_EQ(cg.edge_count(), 20u);
}

TEST(BuildChainGraph, RotationTenCells) {
  auto cg = build_chain_graph(circle_grid(10, 0.3), 0.06);
  for (std::uint32_t i = 0; i < 10; ++i) {
    auto out = cg.graph().successors(i);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0], (i + 3) % 10);
  }
}

TEST(BuildChainGraph, LargeDeltaComplete) {
  auto cg = build_chain_graph(circle_grid(12, 0.3), 0.6);
  EXPECT_EQ(cg.edge_count(), 144u);
}

TEST(BuildChainGraph, EdgesMatchStrictInequality) {
  auto g = grid_system::torus(15, 2, cat_double, 3.0);
  for (double delta : {0.03, 0.05, 0.1}) {
    auto cg = build_chain_graph(g, delta);
    for (std::uint32_t i = 0; i < g.size(); ++i)
      for (std::uint32_t j = 0; j < g.size(); ++j)
        EXPECT_EQ(cg.graph().has_edge(i, j), g.distance(g.image(i), g.point(j)) + edge_tolerance < delta);
  }
}

TEST(ChainRecurrent, IdentityAllNodes) {
  for (double delta : {1e-6, 0.01, 0.3}) EXPECT_EQ(chain_recurrent_nodes(build_chain_graph(identity_grid(25), delta)).size(), 25u);
}

TEST(ChainRecurrent, MorseSmaleNearFixedPoints) {
  auto ms = circle_map_system::make_morse_smale(1);
  auto g = ms.grid(0.005);
  const double delta = 2 * g.mesh();
  auto cg = build_chain_graph(g, delta);
  auto rec = chain_recurrent_nodes(cg);
  auto cl = closure(cg.graph());
  std::vector<std::uint32_t> oracle;
  for (std::uint32_t i = 0; i < g.size(); ++i)
    if (cl[i][i]) oracle.push_back(i);
  EXPECT_EQ(rec, oracle);
  ASSERT_FALSE(rec.empty());
  EXPECT_LT(rec.size(), g.size() / 4);
  // a recurrent cell cannot be moved by more than delta + 2 mesh
  for (auto i : rec) EXPECT_LT(ms.distance(ms.apply(g.point(i)[0]), g.point(i)[0]), delta + 2 * g.mesh());
  EXPECT_FALSE(chain_analysis(cg).chain_transitive);
}

TEST(ChainRecurrent, CatMapGrid) {
  auto g = grid_system::torus(50, 2, cat_double, 3.0);
  auto cg = build_chain_graph(g, 2 * g.mesh());
  EXPECT_EQ(chain_recurrent_nodes(cg).size(), g.size());
  auto a = chain_analysis(cg);
  EXPECT_TRUE(a.chain_transitive);
  EXPECT_TRUE(a.chain_mixing);
  EXPECT_EQ(a.cycle_gcd, 1u);
  auto n = chain_bound(cg);
  // all-pairs BFS oracle on a sample of sources
  std::size_t worst = 0;
  for (std::size_t s = 0; s < g.size(); s += 97) {
    auto d = bfs_oracle(cg.graph(), s);
    for (int v : d) {
      ASSERT_GE(v, 0);
      worst = std::max<std::size_t>(worst, static_cast<std::size_t>(v));
    }
  }
  EXPECT_LE(worst + 2, n);
  EXPECT_LT(n, 40u);
}

TEST(ChainAnalysis, SmallGraphs) {
  auto id = build_chain_graph(identity_grid(5), 0.05);
  EXPECT_FALSE(chain_analysis(id).chain_transitive);
  auto swap = wrap(digraph(2, {{0, 1}, {1, 0}}));
  auto a = chain_analysis(swap);
  EXPECT_TRUE(a.chain_transitive);
  EXPECT_FALSE(a.chain_mixing);
  EXPECT_EQ(a.cycle_gcd, 2u);
}

TEST(FindChain, Examples) {
  auto id = build_chain_graph(identity_grid(5), 0.05);
  auto c = find_chain(id, 2, 2);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->path.length(), 1u);
  EXPECT_EQ(c->path.nodes[0], c->path.nodes[1]);
  EXPECT_FALSE(find_chain(id, 1, 3));

  auto rot = build_chain_graph(circle_grid(10, 0.3), 0.06);
  auto d = bfs_oracle(rot.graph(), 0);
  auto r = find_chain(rot, 0, 5);
  ASSERT_TRUE(r);
  EXPECT_EQ(static_cast<int>(r->path.length()), d[5]);
  EXPECT_EQ(r->path.length(), 5u);  // 3k = 5 mod 10 first at k = 5
  for (double e : r->path.step_errors) EXPECT_LT(e, 0.06);
}

TEST(FindChain, LowestIndexTieBreak) {
  // 0 -> {1, 2} -> 3: both paths have length 2, the one through 1 wins
  auto cg = wrap(digraph(4, {{0, 2}, {0, 1}, {2, 3}, {1, 3}}));
  auto c = find_chain(cg, 0, 3);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->node_ids, (std::vector<std::uint32_t>{0, 1, 3}));
}

TEST(ChainBound, Examples) {
  for (std::size_t n : {2u, 5u, 9u}) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> complete, cycle;
    for (std::uint32_t i = 0; i < n; ++i) {
      cycle.emplace_back(i, static_cast<std::uint32_t>((i + 1) % n));
      for (std::uint32_t j = 0; j < n; ++j) complete.emplace_back(i, j);
    }
    EXPECT_EQ(chain_bound(wrap(digraph(n, complete))), 3u);
    EXPECT_EQ(chain_bound(wrap(digraph(n, cycle))), 2 + (n - 1));
  }
  try {
    chain_bound(build_chain_graph(identity_grid(4), 0.01));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_chain_transitive);
  }
}

TEST(ChainCsv, RoundTrip) {
  auto rot = build_chain_graph(circle_grid(10, 0.3), 0.06);
  auto c = find_chain(rot, 0, 5);
  std::stringstream ss;
  write_chain_csv(ss, c->path);
  auto rows = read_points_csv(ss);
  ASSERT_EQ(rows.size(), c->path.nodes.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i], c->path.nodes[i]);
  std::stringstream bad("step,x0,step_error\n0,abc,\n");
  EXPECT_THROW(read_points_csv(bad), error);
}

TEST(AssembleBarycenterChain, Examples) {
  auto sys = cat_map();
  cat_point o = cat_point::Zero(2);
  barycenter_chain_witness<cat_point> w{1, 1, o, o, o, 0};
  auto c = assemble_barycenter_chain(sys, o, o, 0.1, w);
  EXPECT_TRUE(steps_below(sys, c, 0.1));
  for (const auto& n : c.nodes) EXPECT_EQ(sys.distance(n, o), 0.0);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    auto inst = random_bary_instance(sys, rng, random_torus(rng), [&](const cat_point& p) { return perturb(p, rng, 0.05); });
    auto ch = assemble_barycenter_chain(sys, inst.x, inst.y, 0.1, inst.w);
    EXPECT_TRUE(steps_below(sys, ch, 0.1));
    EXPECT_EQ(sys.distance(ch.nodes.front(), inst.x), 0.0);
    EXPECT_LT(sys.distance(ch.nodes.back(), inst.y), 1e-20);
  }
  w.z = perturb(sys.apply(o), rng, 0.2);
  w.m = 2;
  w.z(0) += precise_real(0.15);
  try {
    assemble_barycenter_chain(sys, o, o, 0.1, w);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::witness_inequality_violated);
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(AssembleSupathChain, Degenerate) {
  auto sys = cat_map();
  std::mt19937_64 rng(23);
  auto p = random_torus(rng);
  auto c = assemble_supath_chain(sys, iterate(sys, p, -3), iterate(sys, p, 4), 0.05, std::vector<cat_point>{p}, {}, {3, 3});
  EXPECT_TRUE(steps_below(sys, c, 0.05));
  EXPECT_EQ(c.length(), 7u);
}

// su-path 0 -> 1/2 -> 1 on the ladder: 1/2 lies in W^u(0), 1 in W^s(1/2)
TEST(AssembleSupathChain, Ladder) {
  ladder_system L;
  auto zero = ladder_point::at_zero(), one = ladder_point::at_one(), half = ladder_point::orbit_point(0);
  EXPECT_TRUE(L.unstable_related(zero, half));
  EXPECT_TRUE(L.stable_related(half, one));
  std::vector<recurrence_witness<ladder_point>> w{{zero, 1, 6}, {ladder_point::orbit_point(6), 6, 1}};
  auto x = ladder_point::orbit_point(-10), y = ladder_point::orbit_point(10);
  EXPECT_NEAR(x.value(), 1.0 / 12, 1e-15);
  EXPECT_NEAR(y.value(), 11.0 / 12, 1e-15);
  auto c = assemble_supath_chain(L, x, y, 0.2, std::vector<ladder_point>{zero, half, one}, w, {1, 1});
  EXPECT_TRUE(steps_below(L, c, 0.2));
  EXPECT_LT(c.nodes.front().value(), 0.2);
  EXPECT_GT(c.nodes.back().value(), 0.8);

  w[0].m = 1;  // T^-1(1/2) = 1/3 is not within 0.2 of T(0) = 0
  try {
    assemble_supath_chain(L, x, y, 0.2, std::vector<ladder_point>{zero, half, one}, w, {1, 1});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::witness_inequality_violated);
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(AssembleSupathChain, RandomWitnessSets) {
  auto sys = cat_map();
  std::mt19937_64 rng(29);
  for (int t = 0; t < 10; ++t) {
    auto inst = random_supath_instance(sys, rng, random_torus(rng), [&](const cat_point& p) { return perturb(p, rng, 0.04); });
    auto c = assemble_supath_chain(sys, inst.x, inst.y, 0.05, inst.path, inst.witnesses, inst.ends);
    EXPECT_TRUE(steps_below(sys, c, 0.05));
  }
}

// ---- invariants ----

TEST(Invariants, SccMatchesTransitiveClosure) {
  std::mt19937_64 rng(1001);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    double p = std::uniform_real_distribution<double>(0.2, 3.0)(rng) / static_cast<double>(n);
    auto g = random_digraph(rng, n, p);
    auto scc = strongly_connected_components(g);
    auto cl = closure(g);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool same = i == j || (cl[i][j] && cl[j][i]);
        EXPECT_EQ(scc.component[i] == scc.component[j], same);
      }
    std::vector<std::uint32_t> cyc;
    for (std::uint32_t i = 0; i < n; ++i)
      if (cl[i][i]) cyc.push_back(i);
    EXPECT_EQ(cyclic_nodes(g), cyc);
    bool all = n > 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) all = all && cl[i][j];
    EXPECT_EQ(strongly_connected(g), all);
  }
}

TEST(Invariants, MonotoneInDelta) {
  std::mt19937_64 rng(1002);
  for (int t = 0; t < 8; ++t) {
    std::vector<double> pts(120);
    for (auto& v : pts) v = std::uniform_real_distribution<double>(0, 1)(rng);
    double a = std::uniform_real_distribution<double>(0, 0.5)(rng);
    auto g = grid_system::from_map(1, ambient::torus, pts, [a](std::span<const double> x) {
      double y = x[0] + a * std::sin(2 * std::numbers::pi * x[0]) / (2 * std::numbers::pi);
      return std::vector<double>{y - std::floor(y)};
    }, 0.05);
    std::optional<chain_graph> last;
    for (double d : {0.002, 0.005, 0.01, 0.02, 0.05, 0.1}) {
      auto cg = build_chain_graph(g, d);
      if (last) {
        for (auto [u, v] : last->graph().edges()) EXPECT_TRUE(cg.graph().has_edge(u, v));
        auto r0 = chain_recurrent_nodes(*last), r1 = chain_recurrent_nodes(cg);
        EXPECT_TRUE(std::includes(r1.begin(), r1.end(), r0.begin(), r0.end()));
      }
      last = cg;
    }
  }
}

TEST(Invariants, TransitiveGraphsRespectBound) {
  std::mt19937_64 rng(1003);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    auto g = random_digraph(rng, 30, 0.12);
    auto cg = wrap(g);
    if (!chain_analysis(cg).chain_transitive) continue;
    ++checked;
    auto n = chain_bound(cg);
    for (std::uint32_t i = 0; i < 30; ++i)
      for (std::uint32_t j = 0; j < 30; ++j) {
        auto c = find_chain(cg, i, j);
        ASSERT_TRUE(c);
        EXPECT_LE(c->path.length(), n);
      }
  }
  EXPECT_GT(checked, 5);
}

TEST(Invariants, AcceptedChainsSatisfyStepCondition) {
  auto sys = cat_map();
  std::mt19937_64 rng(1004);
  for (int t = 0; t < 30; ++t) {
    std::vector<cat_point> nodes{random_torus(rng)};
    for (int i = 0; i < 20; ++i) nodes.push_back(perturb(sys.apply(nodes.back()), rng, 0.02));
    try {
      auto c = make_chain(sys, nodes, 0.015);
      EXPECT_TRUE(steps_below(sys, c, 0.015));
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::chain_step_violated);
      auto i = *e.index();
      EXPECT_GE(sys.distance(sys.apply(nodes[i]), nodes[i + 1]), 0.015);
    }
  }
}

TEST(Invariants, IdentityAlwaysRecurrent) {
  std::mt19937_64 rng(1005);
  for (int t = 0; t < 20; ++t) {
    double d = std::exp(std::uniform_real_distribution<double>(-20, 0)(rng));
    EXPECT_EQ(chain_recurrent_nodes(build_chain_graph(identity_grid(40), d)).size(), 40u);
  }
}
