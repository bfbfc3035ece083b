#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "symbolic.hpp"
#include "system.hpp"
#include "toral.hpp"

namespace topodyn {

// For each n in [0, H] (forward) and [1, H] (backward) a cells x cells bit
// matrix: bit (i, j) set when some sampled point of cell i is in cell j after n
// (resp. -n) steps. Only occupied cells (meeting the space) take part.
struct crossing_table {
  std::size_t cells = 0;
  std::size_t horizon = 0;
  std::vector<std::uint8_t> occupied;
  std::vector<std::vector<std::uint64_t>> forward, backward;
  std::string method;

  std::size_t words() const { return (cells + 63) / 64; }

  void init(std::size_t n_cells, std::size_t h) {
    cells = n_cells;
    horizon = h;
    occupied.assign(cells, 0);
    forward.assign(h + 1, std::vector<std::uint64_t>(cells * words(), 0));
    backward.assign(h + 1, std::vector<std::uint64_t>(cells * words(), 0));
  }
  static void set(std::vector<std::uint64_t>& m, std::size_t w, std::size_t i, std::size_t j) {
    m[i * w + j / 64] |= 1ULL << (j % 64);
  }
  static bool get(const std::vector<std::uint64_t>& m, std::size_t w, std::size_t i, std::size_t j) {
    return (m[i * w + j / 64] >> (j % 64)) & 1ULL;
  }
};

// Crossing table from explicit sample points and a cell assignment.
template <dynamical_system S, class CellOf>
crossing_table sampled_crossings(const S& sys, const std::vector<point_t<S>>& samples, std::size_t cells, CellOf&& cell_of,
                                 std::size_t horizon, const std::string& method) {
  crossing_table t;
  t.init(cells, horizon);
  t.method = method;
  const std::size_t w = t.words();
  std::vector<std::uint32_t> start(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    start[i] = static_cast<std::uint32_t>(cell_of(samples[i]));
    t.occupied[start[i]] = 1;
  }
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<point_t<S>> cur = samples;
    auto& table = dir == 0 ? t.forward : t.backward;
    for (std::size_t n = 0; n <= horizon; ++n) {
      if (n > 0)
        for (auto& x : cur) x = dir == 0 ? sys.apply(x) : sys.apply_inverse(x);
      if (dir == 1 && n == 0) continue;
      for (std::size_t i = 0; i < cur.size(); ++i) crossing_table::set(table[n], w, start[i], cell_of(cur[i]));
    }
  }
  return t;
}

// Cells of width 2·mesh along [0, 1).
inline std::size_t interval_cells(double mesh) { return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(1.0 / (2 * mesh)))); }
inline std::size_t interval_cell(double x, std::size_t cells) {
  auto c = static_cast<std::int64_t>(std::floor(x * static_cast<double>(cells)));
  return static_cast<std::size_t>(std::clamp<std::int64_t>(c, 0, static_cast<std::int64_t>(cells) - 1));
}

inline std::size_t next_prime(std::size_t n) {
  auto prime = [](std::size_t v) {
    if (v < 2) return false;
    for (std::size_t d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return true;
  };
  while (!prime(n)) ++n;
  return n;
}

// ===================== shift of finite type =====================

class shift_system {
 public:
  using point_type = ep_point;

  explicit shift_system(sft_system sft, std::string name = "sft") : sft_(std::move(sft)), name_(std::move(name)) {}

  const sft_system& sft() const { return sft_; }
  const std::string& name() const { return name_; }

  ep_point apply(const ep_point& x) const { return shift_apply(x, 1); }
  ep_point apply_inverse(const ep_point& x) const { return shift_apply(x, -1); }
  ep_point iterate(const ep_point& x, std::int64_t n) const { return shift_apply(x, n); }
  double distance(const ep_point& x, const ep_point& y) const { return sft_distance(x, y); }

  bool stable_related(const ep_point& x, const ep_point& y) const {
    return asymptotic_related(x, y, direction::forward).has_value();
  }
  bool unstable_related(const ep_point& x, const ep_point& y) const {
    return asymptotic_related(x, y, direction::backward).has_value();
  }
  std::optional<ep_point> su_witness(const ep_point& a, const ep_point& b) const { return su_intersect(sft_, a, b); }

  // Radius K with d(x, y) < eps  <=>  x and y agree on [-K, K].
  static std::int64_t agreement_radius(double eps) {
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(std::log2(1.0 / eps) + 1e-12)));
  }

  // Every admissible central word of length 2K+1, extended on both sides by
  // following the smallest predecessor / successor until a symbol repeats.
  std::vector<ep_point> sample(std::int64_t radius) const {
    std::vector<ep_point> out;
    for (const auto& w : central_words(radius)) out.push_back(extend(w, -radius));
    return out;
  }

  std::vector<word> central_words(std::int64_t radius) const {
    const auto len = static_cast<std::size_t>(2 * radius + 1);
    std::vector<word> words;
    for (int c = 0; c < static_cast<int>(sft_.alphabet_size()); ++c) words.push_back({c});
    while (!words.empty() && words.front().size() < len) {
      std::vector<word> next;
      for (const auto& w : words)
        for (int c = 0; c < static_cast<int>(sft_.alphabet_size()); ++c)
          if (sft_.allowed(w.back(), c)) {
            next.push_back(w);
            next.back().push_back(c);
          }
      words.swap(next);
    }
    return words;
  }

  // Point equal to w on positions start .. start+|w|-1.
  ep_point extend(const word& w, std::int64_t start) const {
    const int s = static_cast<int>(sft_.alphabet_size());
    word right_path{w.back()};
    while (true) {
      int cur = right_path.back(), next = 0;
      while (!sft_.allowed(cur, next)) ++next;
      auto seen = std::find(right_path.begin(), right_path.end(), next);
      if (seen != right_path.end()) {
        // right_path[j] sits at position start + |w| - 1 + j
        word pre, cyc(seen, right_path.end());
        if (seen == right_path.begin()) cyc = detail::rotate_by(cyc, 1);
        else pre.assign(right_path.begin() + 1, seen);
        word core = w;
        core.insert(core.end(), pre.begin(), pre.end());
        word left_path{w.front()};
        while (true) {
          int c2 = left_path.back(), prev = 0;
          while (prev < s && !sft_.allowed(prev, c2)) ++prev;
          auto seen2 = std::find(left_path.begin(), left_path.end(), prev);
          if (seen2 != left_path.end()) {
            // left_path lists symbols going backward in time
            word pre2, cyc2(seen2, left_path.end());
            if (seen2 != left_path.begin()) pre2.assign(left_path.begin() + 1, seen2);
            std::reverse(pre2.begin(), pre2.end());
            std::reverse(cyc2.begin(), cyc2.end());
            if (seen2 == left_path.begin()) cyc2 = detail::rotate_by(cyc2, -1);
            word full_core = pre2;
            full_core.insert(full_core.end(), core.begin(), core.end());
            return ep_point(cyc2, full_core, cyc, start - static_cast<std::int64_t>(pre2.size()), sft_.alphabet_size());
          }
          left_path.push_back(prev);
        }
      }
      right_path.push_back(next);
    }
  }

  // Cylinder cover [w] of central words of radius K (2^{-(K+1)} <= mesh):
  // a point of [u] reaches [v] after n steps iff an admissible path joins the
  // two windows at that offset, decided exactly by boolean matrix powers.
  crossing_table crossings(double mesh, std::size_t horizon) const {
    std::int64_t K = 0;
    while (std::ldexp(1.0, -static_cast<int>(K + 1)) > mesh) ++K;
    auto words = central_words(K);
    crossing_table t;
    t.init(words.size(), horizon);
    t.method = "cylinder cover, exact path existence";
    std::fill(t.occupied.begin(), t.occupied.end(), 1);
    const std::size_t w = t.words();
    const auto len = static_cast<std::int64_t>(2 * K + 1);
    const std::size_t s = sft_.alphabet_size();
    // reach[L][a][b]: path with exactly L edges from a to b
    std::vector<bool_matrix> reach{bool_matrix(s, std::vector<std::uint8_t>(s, 0))};
    for (std::size_t a = 0; a < s; ++a) reach[0][a][a] = 1;
    auto reach_len = [&](std::size_t L) -> const bool_matrix& {
      while (reach.size() <= L) reach.push_back(detail::bool_product(reach.back(), sft_.adjacency()));
      return reach[L];
    };
    auto cross = [&](const word& u, const word& v, std::int64_t n) {
      // u on [0, len), v on [n, n+len)
      if (n >= len) return reach_len(static_cast<std::size_t>(n - len + 1))[static_cast<std::size_t>(u.back())][static_cast<std::size_t>(v.front())] != 0;
      for (std::int64_t k = n; k < len; ++k)
        if (u[static_cast<std::size_t>(k)] != v[static_cast<std::size_t>(k - n)]) return false;
      return true;
    };
    for (std::size_t n = 0; n <= horizon; ++n)
      for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
          if (cross(words[i], words[j], static_cast<std::int64_t>(n))) crossing_table::set(t.forward[n], w, i, j);
          if (n > 0 && cross(words[j], words[i], static_cast<std::int64_t>(n))) crossing_table::set(t.backward[n], w, i, j);
        }
    return t;
  }

 private:
  sft_system sft_;
  std::string name_;
};

// ===================== hyperbolic toral automorphism =====================

template <class Real = precise_real>
class toral_system {
 public:
  using point_type = torus_point<Real>;

  explicit toral_system(toral_auto<Real> t, std::string name = "toral") : t_(std::move(t)), name_(std::move(name)) {}

  const toral_auto<Real>& automorphism() const { return t_; }
  const std::string& name() const { return name_; }
  std::size_t dim() const { return t_.dim(); }

  point_type apply(const point_type& x) const { return t_.apply(x); }
  point_type apply_inverse(const point_type& x) const { return t_.apply_inverse(x); }
  double distance(const point_type& a, const point_type& b) const { return toral_auto<Real>::distance(a, b); }
  double lipschitz() const { return t_.operator_norm(); }

  // Geometric-decay window of 60 steps (see check_decay).
  bool stable_related(const point_type& x, const point_type& y) const { return check_decay(t_, x, y, 60, true).ok(); }
  bool unstable_related(const point_type& x, const point_type& y) const { return check_decay(t_, x, y, 60, false).ok(); }
  std::optional<point_type> su_witness(const point_type& a, const point_type& b) const { return su_intersect_toral(t_, a, b); }

  point_type from_doubles(const std::vector<double>& c) const {
    point_type v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = Real(c[i]);
    return toral_auto<Real>::reduce(v);
  }
  static std::vector<double> to_doubles(const point_type& x) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(to_double(x(i)));
    return out;
  }

  std::vector<double> apply_double(std::span<const double> x) const {
    std::vector<double> y(x.size(), 0.0);
    const auto& a = t_.matrix();
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) y[i] += static_cast<double>(a[i][j]) * x[j];
      y[i] -= std::floor(y[i]);
    }
    return y;
  }

  // Uniform torus grid whose mesh does not exceed the request.
  grid_system grid(double mesh) const {
    auto n = static_cast<std::size_t>(std::ceil(0.5 * std::sqrt(static_cast<double>(dim())) / mesh));
    return grid_system::torus(n, dim(), [this](std::span<const double> x) { return apply_double(x); }, lipschitz());
  }

  // Square cells of side w = 2·mesh/sqrt(d) (half-diagonal = mesh). Sample
  // points lie on the unstable (stable, for backward time) segment through each
  // cell center; since centers are rational their orbits are computed exactly,
  // and the image of the segment is the segment of length λ^n·w through the
  // image of the center. Up to `max_length` of it is walked.
  crossing_table crossings(double mesh, std::size_t horizon, double max_length = 60.0) const {
    const std::size_t d = dim();
    const auto per_axis = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)) / (2 * mesh)));
    std::size_t cells = 1;
    for (std::size_t k = 0; k < d; ++k) cells *= per_axis;
    crossing_table t;
    t.init(cells, horizon);
    t.method = "segment sampling along invariant directions, exact rational center orbits";
    std::fill(t.occupied.begin(), t.occupied.end(), 1);
    const std::size_t words = t.words();
    const double w = 1.0 / static_cast<double>(per_axis);
    const auto den = static_cast<long long>(2 * per_axis);
    auto cell_of = [&](const std::vector<double>& x) {
      std::size_t id = 0;
      for (std::size_t k = 0; k < d; ++k) {
        double v = x[k] - std::floor(x[k]);
        id = id * per_axis + std::min(per_axis - 1, static_cast<std::size_t>(v * static_cast<double>(per_axis)));
      }
      return id;
    };
    for (int dir = 0; dir < 2; ++dir) {
      const bool fwd = dir == 0;
      const auto& basis = fwd ? t_.unstable_basis() : t_.stable_basis();
      const bool segment = basis.cols() == 1;
      std::vector<double> u(d);
      for (std::size_t k = 0; k < d; ++k) u[k] = to_double(basis(static_cast<Eigen::Index>(k), 0));
      const double rate = fwd ? 1.0 / t_.lambda_u_inv() : 1.0 / t_.lambda_s();
      const int_matrix& m = fwd ? t_.matrix() : t_.inverse_matrix();
      auto& table = fwd ? t.forward : t.backward;
      for (std::size_t c = 0; c < cells; ++c) {
        rational_torus_point p{std::vector<long long>(d), den};
        std::size_t r = c;
        for (std::size_t k = d; k-- > 0;) {
          p.num[k] = static_cast<long long>(2 * (r % per_axis) + 1);
          r /= per_axis;
        }
        double half = segment ? 0.5 * w : 0.0;
        for (std::size_t n = 0; n <= horizon; ++n) {
          if (n > 0) {
            p = rational_apply(m, p);
            half *= rate;
          }
          if (!fwd && n == 0) continue;
          const double reach = std::min(half, 0.5 * max_length);
          std::vector<double> x(d);
          const double step = 0.5 * w;
          for (double s = -reach; s <= reach + 1e-15; s += step) {
            for (std::size_t k = 0; k < d; ++k) x[k] = static_cast<double>(p.num[k]) / static_cast<double>(den) + s * u[k];
            crossing_table::set(table[n], words, c, cell_of(x));
            if (reach == 0) break;
          }
        }
      }
    }
    return t;
  }

 private:
  toral_auto<Real> t_;
  std::string name_;
};

// ===================== ladder space =====================

// X = {0, 1} ∪ {1/n : n >= 2} ∪ {1 - 1/n : n >= 3}; the non-fixed points form a
// single orbit indexed by k ∈ Z: k = 0 is 1/2, k > 0 is 1 - 1/(k+2), k < 0 is
// 1/(2-k). T moves every non-fixed point to the next point on the right.
struct ladder_point {
  enum kind_t { zero, one, orbit } kind = orbit;
  std::int64_t index = 0;

  static ladder_point at_zero() { return {zero, 0}; }
  static ladder_point at_one() { return {one, 0}; }
  static ladder_point orbit_point(std::int64_t k) { return {orbit, k}; }

  // exact value num/den
  std::pair<std::int64_t, std::int64_t> rational() const {
    if (kind == zero) return {0, 1};
    if (kind == one) return {1, 1};
    if (index >= 0) return {index + 1, index + 2};
    return {1, 2 - index};
  }
  double value() const {
    auto [n, d] = rational();
    return static_cast<double>(n) / static_cast<double>(d);
  }
  bool operator==(const ladder_point&) const = default;
};

class ladder_system {
 public:
  using point_type = ladder_point;

  explicit ladder_system(std::int64_t n_max = 64) : n_max_(n_max) {}

  std::int64_t n_max() const { return n_max_; }
  std::string name() const { return "ladder"; }

  ladder_point apply(const ladder_point& x) const { return iterate(x, 1); }
  ladder_point apply_inverse(const ladder_point& x) const { return iterate(x, -1); }
  ladder_point iterate(ladder_point x, std::int64_t n) const {
    if (x.kind == ladder_point::orbit) x.index += n;
    return x;
  }
  // |a - b| rounded once from the exact rational difference
  double distance(const ladder_point& a, const ladder_point& b) const {
    auto [an, ad] = a.rational();
    auto [bn, bd] = b.rational();
    const __int128 num = static_cast<__int128>(an) * bd - static_cast<__int128>(bn) * ad;
    const __int128 den = static_cast<__int128>(ad) * bd;
    return static_cast<double>(num < 0 ? -num : num) / static_cast<double>(den);
  }

  // ω-limit is 1 for every non-fixed point, α-limit is 0.
  static int omega(const ladder_point& x) { return x.kind == ladder_point::zero ? 0 : 1; }
  static int alpha(const ladder_point& x) { return x.kind == ladder_point::one ? 1 : 0; }
  bool stable_related(const ladder_point& x, const ladder_point& y) const {
    if (x.kind != ladder_point::orbit || y.kind != ladder_point::orbit) return x == y || (omega(x) == omega(y) && x.kind != ladder_point::zero && y.kind != ladder_point::zero);
    return true;
  }
  bool unstable_related(const ladder_point& x, const ladder_point& y) const {
    if (x.kind != ladder_point::orbit || y.kind != ladder_point::orbit) return x == y || (alpha(x) == alpha(y) && x.kind != ladder_point::one && y.kind != ladder_point::one);
    return true;
  }
  // W^s(a) ∩ W^u(b): the fixed points and one orbit point cover every case.
  std::optional<ladder_point> su_witness(const ladder_point& a, const ladder_point& b) const {
    for (auto c : {ladder_point::at_zero(), ladder_point::at_one(), ladder_point::orbit_point(0)})
      if (stable_related(a, c) && unstable_related(b, c)) return c;
    return std::nullopt;
  }

  // Fixed points first, then the orbit points with |k| <= n_max by index.
  std::vector<ladder_point> enumerate() const {
    std::vector<ladder_point> out{ladder_point::at_zero(), ladder_point::at_one()};
    for (std::int64_t k = -n_max_; k <= n_max_; ++k) out.push_back(ladder_point::orbit_point(k));
    return out;
  }

  std::vector<ladder_point> periodic_points() const { return {ladder_point::at_zero(), ladder_point::at_one()}; }

  // Points of the truncated space in increasing order of value.
  std::vector<ladder_point> sorted() const {
    auto pts = enumerate();
    std::sort(pts.begin(), pts.end(), [](const ladder_point& a, const ladder_point& b) { return a.value() < b.value(); });
    return pts;
  }

  grid_system grid() const {
    std::vector<double> pts, imgs;
    for (const auto& p : sorted()) {
      pts.push_back(p.value());
      imgs.push_back(apply(p).value());
    }
    // points of X beyond the truncation lie within 1/(n_max+3) of 0 or 1
    return grid_system(1, ambient::euclidean, pts, imgs, 1.0 / static_cast<double>(n_max_ + 3), std::nullopt);
  }

  crossing_table crossings(double mesh, std::size_t horizon) const {
    const std::size_t cells = interval_cells(mesh);
    return sampled_crossings(*this, enumerate(), cells, [cells](const ladder_point& x) { return interval_cell(x.value(), cells); },
                             horizon, "all points of the truncated space, exact orbits");
  }

 private:
  std::int64_t n_max_;
};

// ===================== circle maps =====================

// Rotation by an exact rational num/den, or the Morse–Smale map
// x + a·sin(2πkx)/(2πk) with fixed points j/(2k) (even j repelling, odd j attracting).
class circle_map_system {
 public:
  using point_type = double;
  enum kind_t { rotation, morse_smale };

  static circle_map_system make_rotation(long long num, long long den) {
    circle_map_system s;
    s.kind_ = rotation;
    s.num_ = num;
    s.den_ = den;
    s.alpha_ = static_cast<double>(num) / static_cast<double>(den);
    return s;
  }
  static circle_map_system make_morse_smale(int k, double a = 0.5) {
    circle_map_system s;
    s.kind_ = morse_smale;
    s.k_ = k;
    s.a_ = a;
    return s;
  }

  kind_t kind() const { return kind_; }
  long long numerator() const { return num_; }
  long long denominator() const { return den_; }
  double alpha() const { return alpha_; }
  int k() const { return k_; }
  std::string name() const { return kind_ == rotation ? "rotation" : "morse_smale_circle"; }
  double lipschitz() const { return kind_ == rotation ? 1.0 : 1.0 + a_; }

  double lift(double x) const {
    if (kind_ == rotation) return x + alpha_;
    const double w = 2 * std::numbers::pi * k_;
    return x + a_ * std::sin(w * x) / w;
  }
  double apply(double x) const {
    double y = lift(x);
    return y - std::floor(y);
  }
  double apply_inverse(double x) const {
    if (kind_ == rotation) {
      double y = x - alpha_;
      return y - std::floor(y);
    }
    // the lift is increasing and moves points by at most a/(2πk)
    const double r = a_ / (2 * std::numbers::pi * k_);
    double lo = x - r - 1e-12, hi = x + r + 1e-12;
    for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
      double mid = 0.5 * (lo + hi);
      (lift(mid) < x ? lo : hi) = mid;
    }
    double y = 0.5 * (lo + hi);
    return y - std::floor(y);
  }
  double distance(double a, double b) const {
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1 - d);
  }

  // Fixed points of the Morse–Smale map, increasing.
  std::vector<double> fixed_points() const {
    std::vector<double> out;
    if (kind_ == morse_smale)
      for (int j = 0; j < 2 * k_; ++j) out.push_back(static_cast<double>(j) / (2.0 * k_));
    return out;
  }
  bool attracting(std::size_t j) const { return j % 2 == 1; }

  // Index of the fixed point x sits on (within 1e-15), if any.
  std::optional<std::size_t> fixed_index(double x) const {
    auto fp = fixed_points();
    for (std::size_t j = 0; j < fp.size(); ++j)
      if (distance(x, fp[j]) <= 1e-15) return j;
    return std::nullopt;
  }
  // ω- and α-limit (as fixed-point indices) of a Morse–Smale point.
  std::size_t omega(double x) const { return limit(x, true); }
  std::size_t alpha_limit(double x) const { return limit(x, false); }

  bool stable_related(double x, double y) const {
    if (kind_ == rotation) return distance(x, y) <= 1e-15;
    auto fx = fixed_index(x), fy = fixed_index(y);
    if (fx && !attracting(*fx)) return fy == fx;  // W^s of a repeller is the point itself
    if (fy && !attracting(*fy)) return fx == fy;
    return omega(x) == omega(y);
  }
  bool unstable_related(double x, double y) const {
    if (kind_ == rotation) return distance(x, y) <= 1e-15;
    auto fx = fixed_index(x), fy = fixed_index(y);
    if (fx && attracting(*fx)) return fy == fx;
    if (fy && attracting(*fy)) return fx == fy;
    return alpha_limit(x) == alpha_limit(y);
  }
  std::optional<double> su_witness(double a, double b) const {
    std::vector<double> candidates{a, b};
    auto fp = fixed_points();
    for (std::size_t j = 0; j < fp.size(); ++j) candidates.push_back(fp[j] + 0.5 / (2.0 * k_));
    for (double c : candidates) {
      c -= std::floor(c);
      if (stable_related(a, c) && unstable_related(b, c)) return c;
    }
    return std::nullopt;
  }

  // Cell-center grid with a prime number of cells: for a rotation every grid
  // edge is then a shift by a step coprime to the cell count.
  grid_system grid(double mesh) const {
    const std::size_t n = next_prime(static_cast<std::size_t>(std::ceil(1.0 / (2 * mesh))));
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return grid_system::from_map(1, ambient::torus, pts, [this](std::span<const double> x) { return std::vector<double>{apply(x[0])}; },
                                 0.5 / static_cast<double>(n), lipschitz());
  }

  std::vector<double> uniform_points(std::size_t n) const {
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return pts;
  }

  crossing_table crossings(double mesh, std::size_t horizon) const {
    const std::size_t cells = interval_cells(mesh);
    return sampled_crossings(*this, uniform_points(cells * 16), cells, [cells](double x) { return interval_cell(x, cells); }, horizon,
                             "16 uniform samples per cell, floating-point orbits");
  }

 private:
  std::size_t limit(double x, bool forward) const {
    auto fp = fixed_points();
    if (auto f = fixed_index(x)) return *f;
    const double step = 0.5 / k_;
    const auto j = static_cast<std::size_t>(std::floor((x - std::floor(x)) / step)) % fp.size();
    const std::size_t nxt = (j + 1) % fp.size();
    // the arc (fp[j], fp[j+1]) flows from its repelling end to its attracting end
    const std::size_t att = attracting(j) ? j : nxt, rep = attracting(j) ? nxt : j;
    return forward ? att : rep;
  }

  kind_t kind_ = rotation;
  long long num_ = 0, den_ = 1;
  double alpha_ = 0, a_ = 0.5;
  int k_ = 1;
};

// ===================== identity on a Cantor set =====================

// Left endpoints of the 2^depth intervals of the depth-th ternary Cantor stage.
class cantor_identity_system {
 public:
  using point_type = double;

  explicit cantor_identity_system(int depth) : depth_(depth) {
    const std::size_t n = std::size_t{1} << depth;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0, scale = 1;
      for (int b = depth - 1; b >= 0; --b) {
        scale /= 3;
        if ((i >> b) & 1U) v += 2 * scale;
      }
      points_.push_back(v);
    }
  }

  int depth() const { return depth_; }
  std::string name() const { return "cantor_identity"; }
  const std::vector<double>& points() const { return points_; }
  double apply(double x) const { return x; }
  double apply_inverse(double x) const { return x; }
  double distance(double a, double b) const { return std::abs(a - b); }
  double lipschitz() const { return 1.0; }
  bool stable_related(double x, double y) const { return x == y; }
  bool unstable_related(double x, double y) const { return x == y; }
  std::optional<double> su_witness(double a, double b) const {
    if (a == b) return a;
    return std::nullopt;
  }
  // smallest distance between two points of the stage
  double gap() const { return std::pow(3.0, -depth_); }

  grid_system grid() const {
    return grid_system(1, ambient::euclidean, points_, points_, std::pow(3.0, -depth_), 1.0);
  }

  crossing_table crossings(double mesh, std::size_t horizon) const {
    const std::size_t cells = interval_cells(mesh);
    return sampled_crossings(*this, points_, cells, [cells](double x) { return interval_cell(x, cells); }, horizon,
                             "all points of the stage");
  }

 private:
  int depth_;
  std::vector<double> points_;
};

}  // namespace topodyn
