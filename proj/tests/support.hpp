#pragma once

// Seeded generators shared by the unit suites and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "topodyn/topodyn.hpp"

namespace topodyn::testing {

using cat_system = toral_system<precise_real>;
using cat_point = torus_point<precise_real>;

inline cat_system cat_map() { return cat_system(toral_auto<precise_real>::build({{2, 1}, {1, 1}}), "cat_map"); }

inline std::vector<double> cat_double(std::span<const double> x) {
  auto f = [](double v) { return v - std::floor(v); };
  return {f(2 * x[0] + x[1]), f(x[0] + x[1])};
}

template <class Real = precise_real>
torus_point<Real> random_torus(std::mt19937_64& rng, std::size_t dim = 2) {
  std::uniform_real_distribution<double> u(0, 1);
  torus_point<Real> p(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) p(static_cast<Eigen::Index>(i)) = Real(u(rng));
  return p;
}

// Uniform vector in the Euclidean ball of radius r.
template <class Real = precise_real>
torus_point<Real> random_offset(std::mt19937_64& rng, double r, std::size_t dim = 2) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 1);
  torus_point<Real> v(static_cast<Eigen::Index>(dim));
  double n = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    double c = g(rng);
    v(static_cast<Eigen::Index>(i)) = Real(c);
    n += c * c;
  }
  double scale = r * std::pow(u(rng), 1.0 / static_cast<double>(dim)) / std::sqrt(n);
  return toral_auto<Real>::reduce(v * Real(scale));
}

template <class Point>
Point perturb(const Point& x, std::mt19937_64& rng, double r) {
  using Real = typename Point::Scalar;
  return toral_auto<Real>::reduce(x + random_offset<Real>(rng, r, static_cast<std::size_t>(x.size())));
}

// Random δ-pseudo-orbit: each step is T(x_i) plus a perturbation of norm < δ.
template <class Real>
pseudo_orbit<Real> random_pseudo_orbit(const toral_auto<Real>& t, std::mt19937_64& rng, std::size_t len, double delta) {
  std::vector<torus_point<Real>> pts{random_torus<Real>(rng, t.dim())};
  while (pts.size() < len) pts.push_back(perturb(t.apply(pts.back()), rng, 0.999 * delta));
  return pseudo_orbit<Real>::make(t, std::move(pts), delta);
}

// Independent shadow oracle on the torus: nested grids along the unstable line
// through x_0, so the stable coordinate of z_0 - x_0 is pinned to zero (the
// construction's boundary convention). A candidate scores by how many steps its
// orbit stays within `bound` of the pseudo-orbit; each level keeps the longest
// surviving run of grid points and refines around it.
template <class Real>
torus_point<Real> grid_shadow_oracle(const toral_auto<Real>& t, const pseudo_orbit<Real>& po, double bound, double resolution) {
  const torus_point<Real> u = t.unstable_basis().col(0);
  auto at = [&](double c) { return toral_auto<Real>::reduce(po.points[0] + u * Real(c)); };
  auto survival = [&](double c) {
    auto z = at(c);
    std::size_t n = 0;
    for (; n < po.points.size(); ++n) {
      if (toral_auto<Real>::distance(z, po.points[n]) > bound) break;
      z = t.apply(z);
    }
    return n;
  };
  double center = 0, half = 2 * bound;
  for (;;) {
    const double step = half / 20;
    std::vector<std::size_t> score(41);
    for (int i = 0; i <= 40; ++i) score[static_cast<std::size_t>(i)] = survival(center + step * (i - 20));
    const auto best = *std::max_element(score.begin(), score.end());
    int lo = 0;
    while (score[static_cast<std::size_t>(lo)] != best) ++lo;
    int hi = lo;
    while (hi < 40 && score[static_cast<std::size_t>(hi + 1)] == best) ++hi;
    center += step * (0.5 * (lo + hi) - 20);
    if (step < resolution) return at(center);
    half = step * (0.5 * (hi - lo) + 1);
  }
}

// First |n| <= window at which the orbits of x and y are more than c apart.
inline std::optional<std::int64_t> separation_time(const toral_auto<precise_real>& t, cat_point x, cat_point y, double c,
                                                   int window) {
  cat_point xb = x, yb = y;
  for (int n = 0; n <= window; ++n) {
    if (toral_auto<precise_real>::distance(x, y) > c) return n;
    if (toral_auto<precise_real>::distance(xb, yb) > c) return -n;
    x = t.apply(x), y = t.apply(y), xb = t.apply_inverse(xb), yb = t.apply_inverse(yb);
  }
  return std::nullopt;
}

// Witnesses for the barycenter chain, generated so that every hypothesis holds
// with margin: p near T^k(x), z near T(p), q near T(T^m(z)), y = T^l(q + noise).
template <class S>
struct bary_instance {
  point_t<S> x, y;
  barycenter_chain_witness<point_t<S>> w;
};

template <class S, class Noise>
bary_instance<S> random_bary_instance(const S& sys, std::mt19937_64& rng, point_t<S> x, Noise noise) {
  std::uniform_int_distribution<int> small(1, 6), zero_up(0, 6);
  bary_instance<S> r;
  r.x = x;
  r.w.k = small(rng);
  r.w.l = small(rng);
  r.w.m = zero_up(rng);
  r.w.p = noise(iterate(sys, x, r.w.k));
  r.w.z = noise(sys.apply(r.w.p));
  auto before_q = r.w.m == 0 ? noise(sys.apply(r.w.p)) : noise(iterate(sys, r.w.z, r.w.m));
  r.w.q = sys.apply(before_q);
  r.y = iterate(sys, noise(r.w.q), r.w.l);
  return r;
}

template <class S>
struct supath_instance {
  point_t<S> x, y;
  std::vector<point_t<S>> path;
  std::vector<recurrence_witness<point_t<S>>> witnesses;
  supath_endpoints ends;
};

// Path built forward: v_i near T^{n_i}(z_{i-1}), z_i = T^{m_i}(T(v_i) + noise).
template <class S, class Noise>
supath_instance<S> random_supath_instance(const S& sys, std::mt19937_64& rng, point_t<S> z0, Noise noise) {
  std::uniform_int_distribution<int> small(1, 5), steps(0, 3);
  supath_instance<S> r;
  r.path.push_back(z0);
  const int m = steps(rng);
  for (int i = 0; i < m; ++i) {
    recurrence_witness<point_t<S>> w;
    w.n = small(rng);
    w.m = small(rng);
    w.v = noise(iterate(sys, r.path.back(), w.n));
    r.path.push_back(iterate(sys, noise(sys.apply(w.v)), w.m));
    r.witnesses.push_back(w);
  }
  r.ends.k = small(rng);
  r.ends.l = small(rng);
  r.x = iterate(sys, noise(z0), -r.ends.k);
  r.y = iterate(sys, noise(sys.apply(r.path.back())), r.ends.l);
  return r;
}

// Stepwise re-check of a chain, written out independently of make_chain / chain_valid.
template <class S>
bool steps_below(const S& sys, const chain<point_t<S>>& c, double eps) {
  for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) {
    auto image = sys.apply(c.nodes[i]);
    if (!(sys.distance(image, c.nodes[i + 1]) < eps)) return false;
  }
  return !c.nodes.empty();
}

// Random point of a shift: a random admissible central word, extended admissibly.
inline ep_point random_shift_point(std::mt19937_64& rng, const shift_system& sys, std::int64_t radius) {
  auto words = sys.central_words(radius);
  auto& w = words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
  return sys.extend(w, -radius);
}

// SFT noise at scale 2^-K: keep coordinates [-K, K] and re-extend admissibly outside.
inline ep_point shift_noise(const shift_system& sys, const ep_point& x, std::int64_t K) {
  return sys.extend(x.window(-K, static_cast<std::size_t>(2 * K + 1)), -K);
}

}  // namespace topodyn::testing
