#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "errors.hpp"
#include "symbolic.hpp"
#include "system.hpp"
#include "systems.hpp"
#include "toral.hpp"

namespace topodyn {

// ===================== barycenter =====================

// x0 follows the backward orbit of p for n1 steps and, m steps later, the
// forward orbit of q for n2 steps, all within epsilon.
template <class Point>
struct barycenter_witness {
  Point p, q;
  double epsilon = 0;
  std::int64_t n1 = 1, n2 = 1;
  std::int64_t m = 0;
  std::int64_t N = 1;
  Point x0;
};

template <dynamical_system S>
double barycenter_deviation(const S& sys, const barycenter_witness<point_t<S>>& w) {
  double worst = 0;
  auto x = w.x0;
  auto p = w.p;
  for (std::int64_t i = 0; i <= w.n1; ++i) {
    worst = std::max(worst, sys.distance(x, p));
    if (i < w.n1) x = sys.apply_inverse(x), p = sys.apply_inverse(p);
  }
  auto y = iterate(sys, w.x0, w.m);
  auto q = w.q;
  for (std::int64_t i = 0; i <= w.n2; ++i) {
    worst = std::max(worst, sys.distance(y, q));
    if (i < w.n2) y = sys.apply(y), q = sys.apply(q);
  }
  return worst;
}

template <dynamical_system S>
bool verify_barycenter_witness(const S& sys, const barycenter_witness<point_t<S>>& w) {
  if (w.n1 < 0 || w.n2 < 0 || w.m < 0 || w.N < 1 || w.m > w.N || !(w.epsilon > 0)) return false;
  return barycenter_deviation(sys, w) < w.epsilon;
}

template <class Point>
struct barycenter_search {
  std::optional<barycenter_witness<Point>> witness;
  std::string method;
  std::size_t candidates = 0;
  std::int64_t n_cap = 0;
  // A none-result covers every admissible x0 and every m <= n_cap.
  bool exhaustive = false;
  // The witness works for every n1, n2 (not only the requested ones).
  bool uniform = false;
};

namespace detail {

template <dynamical_system S>
std::optional<barycenter_search<point_t<S>>> trivial_barycenter(const S& sys, const point_t<S>& p, const point_t<S>& q,
                                                                double eps, std::int64_t n1, std::int64_t n2) {
  if (sys.distance(p, q) != 0) return std::nullopt;
  barycenter_search<point_t<S>> r;
  r.method = "p = q, x0 = p";
  r.uniform = true;
  r.witness = barycenter_witness<point_t<S>>{p, q, eps, n1, n2, 0, 1, p};
  return r;
}

}  // namespace detail

// Every x0 of a finite pool and every m <= n_cap; the smallest m wins, ties go
// to the earliest pool entry.
template <dynamical_system S>
barycenter_search<point_t<S>> exhaustive_barycenter(const S& sys, const point_t<S>& p, const point_t<S>& q, double eps,
                                                    std::int64_t n1, std::int64_t n2, std::int64_t n_cap,
                                                    const std::vector<point_t<S>>& pool, std::string method) {
  if (auto t = detail::trivial_barycenter(sys, p, q, eps, n1, n2)) return *t;
  barycenter_search<point_t<S>> r;
  r.method = std::move(method);
  r.candidates = pool.size();
  r.n_cap = n_cap;
  r.exhaustive = true;
  const auto pb = orbit(sys, p, -n1);
  const auto qf = orbit(sys, q, n2);
  std::int64_t best = n_cap + 1;
  std::size_t best_idx = 0;
  for (std::size_t idx = 0; idx < pool.size(); ++idx) {
    auto x = pool[idx];
    bool ok = true;
    for (std::int64_t i = 0; i <= n1 && ok; ++i) {
      ok = sys.distance(x, pb[static_cast<std::size_t>(i)]) < eps;
      if (i < n1) x = sys.apply_inverse(x);
    }
    if (!ok) continue;
    const std::int64_t top = std::min(best - 1, n_cap);
    if (top < 0) continue;
    const auto fx = orbit(sys, pool[idx], top + n2);
    for (std::int64_t m = 0; m <= top; ++m) {
      bool fits = true;
      for (std::int64_t i = 0; i <= n2 && fits; ++i)
        fits = sys.distance(fx[static_cast<std::size_t>(m + i)], qf[static_cast<std::size_t>(i)]) < eps;
      if (fits) {
        best = m;
        best_idx = idx;
        break;
      }
    }
  }
  if (best <= n_cap)
    r.witness = barycenter_witness<point_t<S>>{p, q, eps, n1, n2, best, std::max<std::int64_t>(best, 1), pool[best_idx]};
  return r;
}

inline barycenter_search<ladder_point> check_barycenter(const ladder_system& sys, const ladder_point& p, const ladder_point& q,
                                                        double eps, std::int64_t n1, std::int64_t n2, std::int64_t n_cap) {
  return exhaustive_barycenter(sys, p, q, eps, n1, n2, n_cap, sys.enumerate(),
                               "exhaustive over the truncated space (n_max = " + std::to_string(sys.n_max()) + ")");
}

inline barycenter_search<double> check_barycenter(const cantor_identity_system& sys, double p, double q, double eps,
                                                  std::int64_t n1, std::int64_t n2, std::int64_t n_cap) {
  return exhaustive_barycenter(sys, p, q, eps, n1, n2, n_cap, sys.points(), "exhaustive over the Cantor stage");
}

// Candidates are the cell centers of a uniform grid of the given resolution.
inline barycenter_search<double> check_barycenter(const circle_map_system& sys, double p, double q, double eps,
                                                  std::int64_t n1, std::int64_t n2, std::int64_t n_cap, double resolution = 1e-3) {
  const auto n = static_cast<std::size_t>(std::ceil(1.0 / resolution));
  auto r = exhaustive_barycenter(sys, p, q, eps, n1, n2, n_cap, sys.uniform_points(n),
                                 "grid search over " + std::to_string(n) + " initial points");
  r.exhaustive = false;  // a finite grid of a continuum
  return r;
}

// Shift of finite type: with K the agreement radius of eps, a witness must copy
// p on (-inf, K] and q (moved by m) on [m-K, inf). Between the two it needs an
// admissible bridge, or consistency where they overlap; m is searched upward
// with exact-length reachability, which also certifies the none-result.
inline barycenter_search<ep_point> check_barycenter(const shift_system& sys, const ep_point& p, const ep_point& q, double eps,
                                                    std::int64_t n1, std::int64_t n2, std::int64_t n_cap) {
  require_admissible(sys.sft(), p);
  require_admissible(sys.sft(), q);
  if (auto t = detail::trivial_barycenter(sys, p, q, eps, n1, n2)) return *t;
  barycenter_search<ep_point> r;
  r.method = "cylinder splice with exact-length bridge";
  r.n_cap = n_cap;
  r.exhaustive = true;
  r.uniform = true;
  const std::int64_t K = shift_system::agreement_radius(eps);
  const std::size_t s = sys.sft().alphabet_size();
  const int from = p.at(K), to = q.at(-K);
  std::vector<std::uint8_t> reach(s, 0);
  reach[static_cast<std::size_t>(from)] = 1;
  std::vector<std::vector<std::uint8_t>> seen{reach};
  bool cycled = false;
  std::int64_t found = -1;
  for (std::int64_t m = 0; m <= n_cap && found < 0; ++m) {
    ++r.candidates;
    const std::int64_t b = m - K;
    if (b <= K) {
      bool same = true;
      for (std::int64_t t = b; t <= K && same; ++t) same = p.at(t) == q.at(t - m);
      if (same) found = m;
      continue;
    }
    if (cycled) continue;
    std::vector<std::uint8_t> next(s, 0);
    for (std::size_t a = 0; a < s; ++a)
      if (reach[a])
        for (std::size_t c = 0; c < s; ++c) next[c] |= sys.sft().adjacency()[a][c];
    reach = next;
    if (reach[static_cast<std::size_t>(to)]) {
      found = m;
    } else if (std::find(seen.begin(), seen.end(), reach) != seen.end()) {
      cycled = true;  // reachable sets repeat: no later length reaches `to`
      break;
    } else {
      seen.push_back(reach);
    }
  }
  if (found < 0) return r;
  const std::int64_t b = found - K;
  const std::int64_t e = std::min(K, b - 1);
  ep_point moved = shift_apply(q, -found);
  ep_point x0 = detail::trace_segments(sys.sft(), {{p, std::min(e, -K), e}, {moved, b, std::max(b, found + K)}});
  r.witness = barycenter_witness<ep_point>{p, q, eps, n1, n2, found, std::max<std::int64_t>(found, 1), x0};
  return r;
}

// ===================== gluing orbit =====================

template <class Point>
struct gluing_witness {
  std::vector<Point> points;          // x_i
  std::vector<std::int64_t> lengths;  // n_i
  std::vector<std::int64_t> gaps;     // p_i, one fewer than segments
  Point x;
  double epsilon = 0;
  std::int64_t N = 1;

  // Time at which the orbit of x starts following x_i.
  std::vector<std::int64_t> offsets() const {
    std::vector<std::int64_t> out{0};
    for (std::size_t i = 0; i + 1 < lengths.size(); ++i) out.push_back(out.back() + lengths[i] + gaps[i]);
    return out;
  }
};

template <class Point>
struct segment {
  Point x;
  std::int64_t n = 0;
};

template <dynamical_system S>
double gluing_deviation(const S& sys, const gluing_witness<point_t<S>>& g) {
  const auto off = g.offsets();
  double worst = 0;
  auto y = g.x;
  std::int64_t t = 0;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    y = iterate(sys, y, off[i] - t);
    t = off[i];
    auto xi = g.points[i];
    auto yi = y;
    for (std::int64_t j = 0; j <= g.lengths[i]; ++j) {
      worst = std::max(worst, sys.distance(yi, xi));
      if (j < g.lengths[i]) yi = sys.apply(yi), xi = sys.apply(xi);
    }
  }
  return worst;
}

template <dynamical_system S>
bool verify_gluing_witness(const S& sys, const gluing_witness<point_t<S>>& g) {
  if (g.points.empty() || g.lengths.size() != g.points.size() || g.gaps.size() + 1 != g.points.size()) return false;
  if (g.N < 1 || !(g.epsilon > 0)) return false;
  for (auto n : g.lengths)
    if (n < 0) return false;
  for (auto p : g.gaps)
    if (p < 1 || p > g.N) return false;
  return gluing_deviation(sys, g) < g.epsilon;
}

namespace detail {
template <class Point>
void check_segments(const std::vector<segment<Point>>& segs) {
  if (segs.empty()) throw error(errc::invalid_argument, "gluing needs at least one segment");
  for (std::size_t i = 0; i < segs.size(); ++i)
    if (segs[i].n < 1) throw error(errc::invalid_argument, "segment lengths must be positive", i);
}
}  // namespace detail

// Gluing on an irreducible shift. Tracing at eps means agreeing on a window of
// radius K around every traced time. Mixing shifts use the constant gap
// mixing_time + 2K (every bridge exists); otherwise each gap is the smallest
// p > 2K for which a bridge of length p - 2K exists, which is at most
// 2K + the longest shortest path of the transition graph.
class sft_gluer {
 public:
  sft_gluer(const shift_system& sys, double eps) : sys_(sys), eps_(eps), K_(shift_system::agreement_radius(eps)) {
    auto st = sft_structure(sys.sft());
    if (!st.irreducible) throw error(errc::chain_not_found, "the shift is not irreducible");
    if (auto mt = mixing_time(sys.sft())) {
      mixing_ = true;
      N_ = static_cast<std::int64_t>(*mt) + 2 * K_;
    } else {
      const auto g = sys.sft().graph();
      std::size_t worst = 0;
      for (std::uint32_t a = 0; a < g.size(); ++a)
        for (std::uint32_t b = 0; b < g.size(); ++b) worst = std::max(worst, shortest_path(g, a, b)->size() - 1);
      N_ = static_cast<std::int64_t>(worst) + 2 * K_;
    }
  }

  std::int64_t bound() const { return N_; }
  double epsilon() const { return eps_; }
  std::int64_t radius() const { return K_; }
  bool mixing() const { return mixing_; }

  gluing_witness<ep_point> glue(const std::vector<segment<ep_point>>& segs) const {
    detail::check_segments(segs);
    gluing_witness<ep_point> g;
    g.epsilon = eps_;
    g.N = N_;
    std::vector<orbit_segment_spec> spec;
    std::int64_t off = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      require_admissible(sys_.sft(), segs[i].x);
      g.points.push_back(segs[i].x);
      g.lengths.push_back(segs[i].n);
      if (i > 0) {
        const auto& prev = spec.back();
        const std::int64_t gap = mixing_ ? N_ : smallest_gap(prev.base.at(prev.end), segs[i].x.at(-K_));
        g.gaps.push_back(gap);
        off += segs[i - 1].n + gap;
      }
      spec.push_back({shift_apply(segs[i].x, -off), off - K_, off + segs[i].n + K_});
    }
    g.x = detail::trace_segments(sys_.sft(), spec);
    return g;
  }

 private:
  std::int64_t smallest_gap(int from, int to) const {
    auto path = shortest_path(sys_.sft().graph(), static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to));
    return static_cast<std::int64_t>(path->size() - 1) + 2 * K_;
  }

  shift_system sys_;
  double eps_;
  std::int64_t K_;
  std::int64_t N_ = 0;
  bool mixing_ = false;
};

// Hyperbolic toral automorphism: δ = 0.9·eps/C so that shadowing a δ-pseudo-orbit
// costs at most 0.9·eps. δ-chains come from a cell-center grid of mesh h with
// edges below 2h; a connection u -> v is [u, c_a, ..., c_b, v] with c_a the cell
// of T(u) and c_b the cell of T^{-1}(v), so the outer steps stay below
// max(h, ||A||·h) and every length lies in [2, N] with N = chain_bound.
template <class Real = precise_real>
class toral_gluer {
 public:
  using point = torus_point<Real>;

  toral_gluer(const toral_system<Real>& sys, double eps) : sys_(sys), eps_(eps) {
    if (!(eps > 0)) throw error(errc::param_out_of_range, "epsilon must be positive");
    const auto& t = sys.automorphism();
    delta_ = 0.9 * eps / t.shadowing_constant();
    const double spread = 1.1 * std::max(2.0, t.operator_norm());
    const std::size_t d = t.dim();
    per_axis_ = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)) * spread / (2 * delta_)));
    double total = std::pow(static_cast<double>(per_axis_), static_cast<double>(d));
    if (total > 4e6) throw error(errc::param_out_of_range, "epsilon too small for the chain grid");
    auto grid = std::make_shared<const grid_system>(grid_system::torus(
        per_axis_, d, [this](std::span<const double> x) { return sys_.apply_double(x); }, t.operator_norm()));
    mesh_ = grid->mesh();
    graph_ = std::make_shared<chain_graph>(build_chain_graph(grid, 2 * mesh_));
    N_ = static_cast<std::int64_t>(chain_bound(*graph_));
  }

  std::int64_t bound() const { return N_; }
  double epsilon() const { return eps_; }
  double delta() const { return delta_; }
  double mesh() const { return mesh_; }
  const chain_graph& graph() const { return *graph_; }
  const toral_system<Real>& system() const { return sys_; }

  std::uint32_t cell_of(const point& y) const {
    std::size_t id = 0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      double v = to_double(detail::frac(y(k)));
      id = id * per_axis_ + std::min(per_axis_ - 1, static_cast<std::size_t>(v * static_cast<double>(per_axis_)));
    }
    return static_cast<std::uint32_t>(id);
  }

  point center(std::uint32_t c) const {
    auto p = graph_->base().point(c);
    return sys_.from_doubles(std::vector<double>(p.begin(), p.end()));
  }

  // δ-chain u, ..., v of length in [2, N].
  std::vector<point> connect(const point& u, const point& v) const {
    const auto a = cell_of(sys_.apply(u));
    const auto b = cell_of(sys_.apply_inverse(v));
    std::vector<point> out{u};
    if (a == b) {
      out.push_back(center(a));
    } else {
      auto path = shortest_path(graph_->graph(), a, b);
      if (!path) throw error(errc::chain_not_found, "no grid chain between the requested cells");
      for (auto c : *path) out.push_back(center(c));
    }
    out.push_back(v);
    return out;
  }

  // Pseudo-orbit orbit(x_1) + chain + orbit(x_2) + ..., shadowed.
  gluing_witness<point> glue(const std::vector<segment<point>>& segs) const {
    detail::check_segments(segs);
    gluing_witness<point> g;
    g.epsilon = eps_;
    g.N = N_;
    std::vector<point> po;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      g.points.push_back(segs[i].x);
      g.lengths.push_back(segs[i].n);
      if (i > 0) {
        auto link = connect(po.back(), segs[i].x);
        g.gaps.push_back(static_cast<std::int64_t>(link.size() - 1));
        po.insert(po.end(), link.begin() + 1, link.end() - 1);
      }
      auto seg = orbit(sys_, segs[i].x, segs[i].n);
      po.insert(po.end(), seg.begin(), seg.end());
    }
    const auto& t = sys_.automorphism();
    auto sh = shadow(t, pseudo_orbit<Real>::make(t, std::move(po), delta_));
    g.x = sh.z0;
    return g;
  }

 private:
  toral_system<Real> sys_;
  double eps_;
  double delta_ = 0, mesh_ = 0;
  std::size_t per_axis_ = 0;
  std::shared_ptr<chain_graph> graph_;
  std::int64_t N_ = 0;
};

inline gluing_witness<ep_point> gluing_orbit(const shift_system& sys, const std::vector<segment<ep_point>>& segs, double eps) {
  return sft_gluer(sys, eps).glue(segs);
}

template <class Real>
gluing_witness<torus_point<Real>> gluing_orbit(const toral_system<Real>& sys, const std::vector<segment<torus_point<Real>>>& segs,
                                                double eps) {
  return toral_gluer<Real>(sys, eps).glue(segs);
}

// Systems without a shadowing construction.
template <dynamical_system S>
gluing_witness<point_t<S>> gluing_orbit(const S&, const std::vector<segment<point_t<S>>>&, double) {
  throw error(errc::not_shadowing_capable, "no shadowing construction for this system");
}

// Segments (T^{-ℓN}(p), ℓN) and (q, ℓN) glued, then moved forward by ℓN.
template <dynamical_system S, class Gluer>
barycenter_witness<point_t<S>> barycenter_from_gluing(const S& sys, const Gluer& gluer, const point_t<S>& p, const point_t<S>& q,
                                                      std::int64_t ell) {
  if (ell < 1) throw error(errc::param_out_of_range, "ell must be positive");
  const std::int64_t len = ell * gluer.bound();
  auto g = gluer.glue({{iterate(sys, p, -len), len}, {q, len}});
  return {p, q, g.epsilon, len, len, g.gaps.front(), g.N, iterate(sys, g.x, len)};
}

// Backward orbit of p, δ-chain, forward orbit of q, shadowed: the witness of
// shadowing + transitivity, with m the chain length.
template <class Real>
barycenter_search<torus_point<Real>> check_barycenter(const toral_gluer<Real>& gluer, const torus_point<Real>& p,
                                                      const torus_point<Real>& q, std::int64_t n1, std::int64_t n2) {
  const auto& sys = gluer.system();
  if (auto t = detail::trivial_barycenter(sys, p, q, gluer.epsilon(), n1, n2)) return *t;
  barycenter_search<torus_point<Real>> r;
  r.method = "shadowed pseudo-orbit: backward orbit of p, grid chain, forward orbit of q";
  r.n_cap = gluer.bound();
  auto g = gluer.glue({{iterate(sys, p, -n1), n1}, {q, n2}});
  r.witness = barycenter_witness<torus_point<Real>>{p, q, gluer.epsilon(), n1, n2, g.gaps.front(), g.N, iterate(sys, g.x, n1)};
  return r;
}

template <class Real>
barycenter_search<torus_point<Real>> check_barycenter(const toral_system<Real>& sys, const torus_point<Real>& p,
                                                      const torus_point<Real>& q, double eps, std::int64_t n1, std::int64_t n2) {
  return check_barycenter(toral_gluer<Real>(sys, eps), p, q, n1, n2);
}

// ===================== accessibility =====================

enum class su_relation { stable, unstable };

template <class Point>
struct su_path {
  std::vector<Point> nodes;
  std::vector<su_relation> relations;
  std::size_t length() const { return relations.size(); }
};

template <dynamical_system S>
bool verify_su_path(const S& sys, const su_path<point_t<S>>& path) {
  if constexpr (!has_relation_oracle<S>) {
    throw error(errc::relation_oracle_unavailable, "the system decides no asymptotic relation");
  } else {
    if (path.nodes.empty() || path.relations.size() + 1 != path.nodes.size()) return false;
    for (std::size_t i = 0; i < path.relations.size(); ++i) {
      const auto& a = path.nodes[i];
      const auto& b = path.nodes[i + 1];
      bool ok = path.relations[i] == su_relation::stable ? sys.stable_related(a, b) : sys.unstable_related(a, b);
      if (!ok) return false;
    }
    return true;
  }
}

// Breadth-first search over the pool. When the system can produce points of
// W^s(u) ∩ W^u(y), those are offered as extra nodes, which is how two steps
// suffice on hyperbolic systems.
template <dynamical_system S>
std::optional<su_path<point_t<S>>> check_accessible(const S& sys, const point_t<S>& x, const point_t<S>& y,
                                                    std::vector<point_t<S>> pool, std::size_t max_len) {
  if constexpr (!has_relation_oracle<S>) {
    throw error(errc::relation_oracle_unavailable, "the system decides no asymptotic relation");
  } else {
    auto index_of = [&](const point_t<S>& a) {
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (sys.distance(pool[i], a) == 0) return i;
      pool.push_back(a);
      return pool.size() - 1;
    };
    const std::size_t src = index_of(x), dst = index_of(y);
    if (src == dst) return su_path<point_t<S>>{{x}, {}};
    std::vector<std::int64_t> parent(pool.size(), -1);
    std::vector<su_relation> rel(pool.size(), su_relation::stable);
    std::vector<char> seen(pool.size(), 0);
    seen[src] = 1;
    std::vector<std::size_t> layer{src};
    for (std::size_t depth = 0; depth < max_len && !layer.empty() && !seen[dst]; ++depth) {
      std::vector<std::size_t> next;
      for (auto u : layer) {
        if constexpr (requires { sys.su_witness(pool[u], y); }) {
          if (auto z = sys.su_witness(pool[u], y)) index_of(*z);
          parent.resize(pool.size(), -1);
          rel.resize(pool.size(), su_relation::stable);
          seen.resize(pool.size(), 0);
        }
        for (std::size_t v = 0; v < pool.size(); ++v) {
          if (seen[v]) continue;
          bool st = sys.stable_related(pool[u], pool[v]);
          if (!st && !sys.unstable_related(pool[u], pool[v])) continue;
          seen[v] = 1;
          parent[v] = static_cast<std::int64_t>(u);
          rel[v] = st ? su_relation::stable : su_relation::unstable;
          next.push_back(v);
        }
      }
      layer.swap(next);
    }
    if (!seen[dst]) return std::nullopt;
    su_path<point_t<S>> path;
    for (auto v = static_cast<std::int64_t>(dst); v >= 0; v = parent[static_cast<std::size_t>(v)]) {
      path.nodes.push_back(pool[static_cast<std::size_t>(v)]);
      if (static_cast<std::size_t>(v) != src) path.relations.push_back(rel[static_cast<std::size_t>(v)]);
    }
    std::reverse(path.nodes.begin(), path.nodes.end());
    std::reverse(path.relations.begin(), path.relations.end());
    return path;
  }
}

// ===================== average shadowing =====================

struct average_shadowing_result {
  std::size_t steps = 0;
  // smallest N0 such that every window of length n >= N0 that fits averages below delta
  std::optional<std::size_t> min_n0;
  bool is_avg_pseudo_orbit = false;
  double full_average = 0;  // (1/n)·Σ d(T(x_j), x_{j+1}) over the whole sequence
  std::optional<bool> avg_shadowed_by_y;
  std::optional<double> limsup_proxy;  // max of (1/n)·Σ_{j<n} d(T^j(y), x_j) over the last half of n
};

template <dynamical_system S>
average_shadowing_result average_shadowing_check(const S& sys, const std::vector<point_t<S>>& seq, double delta,
                                                 const std::optional<point_t<S>>& y, double eps) {
  if (seq.size() < 2) throw error(errc::invalid_argument, "sequence needs at least two points");
  average_shadowing_result r;
  const std::size_t M = seq.size() - 1;
  r.steps = M;
  std::vector<double> prefix(M + 1, 0.0);
  for (std::size_t j = 0; j < M; ++j) prefix[j + 1] = prefix[j] + sys.distance(sys.apply(seq[j]), seq[j + 1]);
  r.full_average = prefix[M] / static_cast<double>(M);
  // worst window average per length, scanned from the longest down
  std::optional<std::size_t> n0;
  for (std::size_t n = M; n >= 1; --n) {
    double worst = 0;
    for (std::size_t k = 0; k + n <= M; ++k) worst = std::max(worst, (prefix[k + n] - prefix[k]) / static_cast<double>(n));
    if (!(worst < delta)) break;
    n0 = n;
  }
  r.min_n0 = n0;
  r.is_avg_pseudo_orbit = n0.has_value();
  if (y) {
    double sum = 0, proxy = 0;
    auto z = *y;
    for (std::size_t n = 1; n <= seq.size(); ++n) {
      sum += sys.distance(z, seq[n - 1]);
      z = sys.apply(z);
      if (2 * n >= seq.size()) proxy = std::max(proxy, sum / static_cast<double>(n));
    }
    r.limsup_proxy = proxy;
    r.avg_shadowed_by_y = proxy < eps;
  }
  return r;
}

// ===================== empirical transitivity =====================

struct transitivity_result {
  bool transitive_at_mesh = false;  // crossing for some n in [-H, H]
  bool one_sided_at_mesh = false;   // crossing for some n in [0, H]
  bool mixing_at_mesh = false;      // crossing for every n in [N, H], some N <= H/2
  std::optional<std::size_t> mixing_from;
  std::size_t cells = 0, occupied = 0;
  double mesh = 0;
  std::size_t horizon = 0;
  std::string method;
};

inline transitivity_result transitivity_from_table(const crossing_table& t, double mesh) {
  transitivity_result r;
  r.cells = t.cells;
  r.mesh = mesh;
  r.horizon = t.horizon;
  r.method = t.method;
  const std::size_t w = t.words();
  std::vector<std::uint64_t> occ(w, 0);
  for (std::size_t i = 0; i < t.cells; ++i)
    if (t.occupied[i]) occ[i / 64] |= 1ULL << (i % 64), ++r.occupied;
  auto covers = [&](const std::vector<std::uint64_t>& row) {
    for (std::size_t k = 0; k < w; ++k)
      if ((row[k] & occ[k]) != occ[k]) return false;
    return true;
  };
  r.transitive_at_mesh = r.one_sided_at_mesh = true;
  for (std::size_t i = 0; i < t.cells; ++i) {
    if (!t.occupied[i]) continue;
    std::vector<std::uint64_t> fwd(w, 0), both(w, 0);
    for (std::size_t n = 0; n <= t.horizon; ++n)
      for (std::size_t k = 0; k < w; ++k) {
        fwd[k] |= t.forward[n][i * w + k];
        both[k] |= t.forward[n][i * w + k] | t.backward[n][i * w + k];
      }
    r.one_sided_at_mesh = r.one_sided_at_mesh && covers(fwd);
    r.transitive_at_mesh = r.transitive_at_mesh && covers(both);
  }
  auto full = [&](std::size_t n) {
    std::vector<std::uint64_t> row(w);
    for (std::size_t i = 0; i < t.cells; ++i) {
      if (!t.occupied[i]) continue;
      std::copy(t.forward[n].begin() + static_cast<std::ptrdiff_t>(i * w), t.forward[n].begin() + static_cast<std::ptrdiff_t>((i + 1) * w),
                row.begin());
      if (!covers(row)) return false;
    }
    return true;
  };
  for (std::size_t n = t.horizon + 1; n-- > 0;) {
    if (!full(n)) break;
    r.mixing_from = n;
  }
  r.mixing_at_mesh = r.mixing_from && 2 * *r.mixing_from <= t.horizon;
  return r;
}

template <class S>
transitivity_result empirical_transitivity(const S& sys, double mesh, std::size_t horizon) {
  return transitivity_from_table(sys.crossings(mesh, horizon), mesh);
}

// ===================== rotation shadowing search =====================

struct rotation_shadow_search {
  double best_y = 0;
  double best_error = 0;  // min over grid points y of max_n d(T^n(y), x_n)
  double resolution = 0;
  // Rotations are isometries, so any y lies within resolution/2 of a grid point
  // whose errors differ by at most resolution/2.
  bool certified_none(double eps) const { return best_error - 0.5 * resolution >= eps; }
};

inline rotation_shadow_search search_rotation_shadow(const circle_map_system& sys, const std::vector<double>& seq, double resolution) {
  if (sys.kind() != circle_map_system::rotation) throw error(errc::invalid_argument, "isometry bound needs a rotation");
  const auto n = static_cast<std::size_t>(std::ceil(1.0 / resolution));
  rotation_shadow_search r;
  r.resolution = 1.0 / static_cast<double>(n);
  r.best_error = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double y0 = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double y = y0, worst = 0;
    for (double x : seq) {
      worst = std::max(worst, sys.distance(y, x));
      if (worst >= r.best_error) break;
      y = sys.apply(y);
    }
    if (worst < r.best_error) r.best_error = worst, r.best_y = y0;
  }
  return r;
}

}  // namespace topodyn
