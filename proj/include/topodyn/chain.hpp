#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "system.hpp"

namespace topodyn {

inline constexpr double edge_tolerance = 1e-12;

enum class ambient { torus, euclidean };

inline double wrap_coordinate(double d) { return d - std::round(d); }

// Distance in R^d or in the flat torus R^d/Z^d (coordinatewise wrap, then Euclidean).
inline double ambient_distance(ambient kind, std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (kind == ambient::torus) d = wrap_coordinate(d);
    s += d * d;
  }
  return std::sqrt(s);
}

// Finite set of representatives with their images under T.
class grid_system {
 public:
  using map_fn = std::function<std::vector<double>(std::span<const double>)>;

  grid_system(std::size_t dim, ambient kind, std::vector<double> points, std::vector<double> images, double mesh,
              std::optional<double> lipschitz = std::nullopt)
      : dim_(dim), kind_(kind), points_(std::move(points)), images_(std::move(images)), mesh_(mesh), lipschitz_(lipschitz) {
    if (dim_ == 0 || points_.size() % dim_ || images_.size() != points_.size())
      throw error(errc::invalid_argument, "grid coordinates do not match the dimension");
    if (!(mesh_ > 0)) throw error(errc::invalid_argument, "mesh must be positive");
  }

  static grid_system from_map(std::size_t dim, ambient kind, std::vector<double> points, const map_fn& f, double mesh,
                              std::optional<double> lipschitz = std::nullopt) {
    std::vector<double> images;
    images.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); i += dim) {
      auto y = f(std::span<const double>(points.data() + i, dim));
      images.insert(images.end(), y.begin(), y.end());
    }
    return grid_system(dim, kind, std::move(points), std::move(images), mesh, lipschitz);
  }

  // Cell centers of the uniform n^d grid on the torus; mesh = half cell diagonal.
  static grid_system torus(std::size_t n, std::size_t dim, const map_fn& f, std::optional<double> lipschitz = std::nullopt) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= n;
    std::vector<double> pts(total * dim);
    for (std::size_t c = 0; c < total; ++c) {
      std::size_t r = c;
      for (std::size_t k = dim; k-- > 0;) {
        pts[c * dim + k] = (static_cast<double>(r % n) + 0.5) / static_cast<double>(n);
        r /= n;
      }
    }
    double mesh = 0.5 * std::sqrt(static_cast<double>(dim)) / static_cast<double>(n);
    return from_map(dim, ambient::torus, std::move(pts), f, mesh, lipschitz);
  }

  std::size_t size() const { return points_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  ambient metric() const { return kind_; }
  double mesh() const { return mesh_; }
  std::optional<double> lipschitz() const { return lipschitz_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * dim_, dim_}; }
  std::span<const double> image(std::size_t i) const { return {images_.data() + i * dim_, dim_}; }
  double distance(std::span<const double> a, std::span<const double> b) const { return ambient_distance(kind_, a, b); }

  // Index of the representative nearest to y (linear scan).
  std::size_t nearest(std::span<const double> y) const {
    std::size_t best = 0;
    double bd = INFINITY;
    for (std::size_t i = 0; i < size(); ++i) {
      double d = distance(point(i), y);
      if (d < bd) bd = d, best = i;
    }
    return best;
  }

 private:
  std::size_t dim_;
  ambient kind_;
  std::vector<double> points_, images_;
  double mesh_;
  std::optional<double> lipschitz_;
};

// Uniform buckets of width >= radius so that all points within `radius` of a
// query lie in the 3^d neighbouring buckets.
class bucket_index {
 public:
  bucket_index(const grid_system& g, double radius) : g_(g) {
    const std::size_t d = g.dim();
    lo_.assign(d, 0.0);
    width_.assign(d, 1.0);
    cells_.assign(d, 1);
    for (std::size_t k = 0; k < d; ++k) {
      double lo = 0, hi = 1;
      if (g.metric() == ambient::euclidean) {
        lo = INFINITY, hi = -INFINITY;
        for (std::size_t i = 0; i < g.size(); ++i) lo = std::min(lo, g.point(i)[k]), hi = std::max(hi, g.point(i)[k]);
        hi = std::max(hi, lo + 1e-9);
      }
      auto m = static_cast<std::size_t>(std::floor((hi - lo) / radius));
      m = std::clamp<std::size_t>(m, 1, 4096);
      lo_[k] = lo;
      cells_[k] = m;
      width_[k] = (hi - lo) / static_cast<double>(m);
    }
    std::size_t total = 1;
    for (auto m : cells_) total *= m;
    buckets_.assign(total, {});
    for (std::size_t i = 0; i < g.size(); ++i) buckets_[bucket_of(g.point(i))].push_back(static_cast<std::uint32_t>(i));
  }

  template <class F>
  void for_each_near(std::span<const double> y, F&& f) const {
    const std::size_t d = g_.dim();
    std::vector<std::int64_t> base(d);
    for (std::size_t k = 0; k < d; ++k) base[k] = coord_cell(y[k], k);
    std::vector<std::int64_t> off(d, -1);
    std::vector<std::size_t> seen;
    while (true) {
      std::size_t id = 0;
      bool valid = true;
      for (std::size_t k = 0; k < d; ++k) {
        auto m = static_cast<std::int64_t>(cells_[k]);
        std::int64_t c = base[k] + off[k];
        if (g_.metric() == ambient::torus) {
          c = ((c % m) + m) % m;
        } else if (c < 0 || c >= m) {
          valid = false;
        }
        id = id * cells_[k] + static_cast<std::size_t>(std::max<std::int64_t>(c, 0));
      }
      if (valid && std::find(seen.begin(), seen.end(), id) == seen.end()) {
        seen.push_back(id);
        for (auto j : buckets_[id]) f(j);
      }
      std::size_t k = 0;
      while (k < d && off[k] == 1) off[k++] = -1;
      if (k == d) break;
      ++off[k];
    }
  }

 private:
  std::int64_t coord_cell(double v, std::size_t k) const {
    if (g_.metric() == ambient::torus) v -= std::floor(v);
    auto c = static_cast<std::int64_t>(std::floor((v - lo_[k]) / width_[k]));
    return std::clamp<std::int64_t>(c, 0, static_cast<std::int64_t>(cells_[k]) - 1);
  }
  std::size_t bucket_of(std::span<const double> y) const {
    std::size_t id = 0;
    for (std::size_t k = 0; k < g_.dim(); ++k) id = id * cells_[k] + static_cast<std::size_t>(coord_cell(y[k], k));
    return id;
  }

  const grid_system& g_;
  std::vector<double> lo_, width_;
  std::vector<std::size_t> cells_;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

class chain_graph {
 public:
  chain_graph(std::shared_ptr<const grid_system> base, double delta, digraph g)
      : base_(std::move(base)), delta_(delta), graph_(std::move(g)) {}

  const grid_system& base() const { return *base_; }
  std::shared_ptr<const grid_system> base_ptr() const { return base_; }
  double delta() const { return delta_; }
  const digraph& graph() const { return graph_; }
  std::size_t size() const { return graph_.size(); }
  std::size_t edge_count() const { return graph_.edge_count(); }

  // Every grid δ-chain is a true-space δ'-chain with this δ' when the system's
  // Lipschitz constant is known.
  std::optional<double> true_space_delta() const {
    if (!base_->lipschitz()) return std::nullopt;
    return delta_ + *base_->lipschitz() * base_->mesh() + base_->mesh();
  }

 private:
  std::shared_ptr<const grid_system> base_;
  double delta_;
  digraph graph_;
};

inline bool grid_edge(const grid_system& g, std::size_t i, std::size_t j, double delta) {
  return g.distance(g.image(i), g.point(j)) + edge_tolerance < delta;
}

inline chain_graph build_chain_graph(std::shared_ptr<const grid_system> base, double delta) {
  if (!(delta > 0)) throw error(errc::invalid_argument, "delta must be positive");
  const grid_system& g = *base;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  const bool small = g.size() <= 256 || g.dim() > 3;
  if (small) {
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (grid_edge(g, i, j, delta)) edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  } else {
    // Sources are split into contiguous blocks, one per worker; each worker
    // only reads the grid and writes its own edge list.
    bucket_index index(g, delta);
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> parts(workers);
    auto work = [&](std::size_t w) {
      const std::size_t lo = g.size() * w / workers, hi = g.size() * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i)
        index.for_each_near(g.image(i), [&](std::uint32_t j) {
          if (grid_edge(g, i, j, delta)) parts[w].emplace_back(static_cast<std::uint32_t>(i), j);
        });
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    for (auto& part : parts) edges.insert(edges.end(), part.begin(), part.end());
  }
  return chain_graph(std::move(base), delta, digraph(g.size(), std::move(edges)));
}

inline chain_graph build_chain_graph(const grid_system& g, double delta) {
  return build_chain_graph(std::make_shared<const grid_system>(g), delta);
}

inline std::vector<std::uint32_t> chain_recurrent_nodes(const chain_graph& cg) { return cyclic_nodes(cg.graph()); }

struct chain_analysis_result {
  bool chain_transitive = false;
  bool chain_mixing = false;
  std::optional<std::uint64_t> cycle_gcd;
};

inline chain_analysis_result chain_analysis(const chain_graph& cg) {
  chain_analysis_result r;
  r.cycle_gcd = topodyn::cycle_gcd(cg.graph());
  r.chain_transitive = r.cycle_gcd.has_value();
  r.chain_mixing = r.chain_transitive && r.cycle_gcd == 1u;
  return r;
}

// Grid chain together with the node indices it passes through.
struct grid_chain {
  std::vector<std::uint32_t> node_ids;
  chain<std::vector<double>> path;
};

inline double grid_step_error(const grid_system& g, std::size_t i, std::size_t j) { return g.distance(g.image(i), g.point(j)); }

inline std::optional<grid_chain> find_chain(const chain_graph& cg, std::uint32_t from, std::uint32_t to) {
  auto ids = shortest_path(cg.graph(), from, to);
  if (!ids) return std::nullopt;
  const grid_system& g = cg.base();
  grid_chain out;
  out.node_ids = *ids;
  out.path.delta = cg.delta();
  for (std::size_t k = 0; k < ids->size(); ++k) {
    auto p = g.point((*ids)[k]);
    out.path.nodes.emplace_back(p.begin(), p.end());
    if (k + 1 < ids->size()) out.path.step_errors.push_back(grid_step_error(g, (*ids)[k], (*ids)[k + 1]));
  }
  return out;
}

// 2 + the largest minimal path length over ordered node pairs.
inline std::size_t chain_bound(const chain_graph& cg) {
  auto t = max_shortest_path(cg.graph());
  if (!t) throw error(errc::not_chain_transitive, "the chain graph is not strongly connected");
  return 2 + *t;
}

// ---- export ----

inline void write_chain_csv(std::ostream& os, const chain<std::vector<double>>& c) {
  const std::size_t dim = c.nodes.empty() ? 0 : c.nodes.front().size();
  os << "step";
  for (std::size_t k = 0; k < dim; ++k) os << ",x" << k;
  os << ",step_error\n";
  os.precision(17);
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    os << i;
    for (double v : c.nodes[i]) os << ',' << v;
    os << ',';
    if (i < c.step_errors.size()) os << c.step_errors[i];
    os << '\n';
  }
}

inline void write_edge_list(std::ostream& os, const chain_graph& cg) {
  for (auto [u, v] : cg.graph().edges()) os << u << ' ' << v << '\n';
}

// Rows of a chain / pseudo-orbit CSV: (index, coordinates..., step_error).
inline std::vector<std::vector<double>> read_points_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(is, line);  // header
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() < 3) throw error(errc::parse_error, "CSV row " + std::to_string(line_no) + " too short", line_no);
    std::vector<double> p;
    try {
      for (std::size_t k = 1; k + 1 < cells.size(); ++k) p.push_back(std::stod(cells[k]));
    } catch (const std::exception&) {
      throw error(errc::parse_error, "CSV row " + std::to_string(line_no) + " has a non-numeric coordinate", line_no);
    }
    rows.push_back(std::move(p));
  }
  return rows;
}

// ---- chains assembled from the proofs' witnesses ----

// Witnesses of the barycenter-based chain construction:
// d(T^k(x), p) < ε, d(T^{-ℓ}(y), q) < ε, d(z, T(p)) < ε, d(T^m(z), T^{-1}(q)) < ε.
// With m = 0 the z-block is empty and the single junction p -> T^{-1}(q) is
// checked instead (hypothesis index 2).
template <class Point>
struct barycenter_chain_witness {
  std::int64_t k = 1, l = 1;
  Point p, q, z;
  std::int64_t m = 0;
};

template <dynamical_system S>
chain<point_t<S>> assemble_barycenter_chain(const S& sys, const point_t<S>& x, const point_t<S>& y, double epsilon,
                                            const barycenter_chain_witness<point_t<S>>& w) {
  if (w.k < 1 || w.l < 1 || w.m < 0) throw error(errc::invalid_argument, "k, l must be positive and m nonnegative");
  auto violated = [](std::size_t idx, const char* what) {
    return error(errc::witness_inequality_violated, what, idx);
  };
  const auto q_prev = sys.apply_inverse(w.q);
  if (!(sys.distance(iterate(sys, x, w.k), w.p) < epsilon)) throw violated(0, "d(T^k(x), p) >= epsilon");
  if (!(sys.distance(iterate(sys, y, -w.l), w.q) < epsilon)) throw violated(1, "d(T^-l(y), q) >= epsilon");
  if (w.m == 0) {
    if (!(sys.distance(sys.apply(w.p), q_prev) < epsilon)) throw violated(2, "d(T(p), T^-1(q)) >= epsilon");
  } else {
    if (!(sys.distance(w.z, sys.apply(w.p)) < epsilon)) throw violated(2, "d(z, T(p)) >= epsilon");
    if (!(sys.distance(iterate(sys, w.z, w.m), q_prev) < epsilon)) throw violated(3, "d(T^m(z), T^-1(q)) >= epsilon");
  }
  std::vector<point_t<S>> nodes;
  auto xs = orbit(sys, x, w.k - 1);
  nodes.insert(nodes.end(), xs.begin(), xs.end());
  nodes.push_back(w.p);
  if (w.m > 0) {
    auto zs = orbit(sys, w.z, w.m - 1);
    nodes.insert(nodes.end(), zs.begin(), zs.end());
  }
  nodes.push_back(q_prev);
  auto ys = orbit(sys, iterate(sys, y, -w.l), w.l);
  nodes.insert(nodes.end(), ys.begin(), ys.end());
  return make_chain(sys, std::move(nodes), epsilon);
}

template <class Point>
struct recurrence_witness {
  Point v;
  std::int64_t n = 1, m = 1;
};

// Endpoint data of the su-path chain construction: d(T^k(x), z_0) < ε and
// d(T^{-ℓ}(y), T(z_last)) < ε.
struct supath_endpoints {
  std::int64_t k = 1, l = 1;
};

// The chain x..T^{k-1}x, z_0..T^{n_1-1}z_0, v_1, T^{-m_1}z_1..z_1, ..., z_m,
// T^{-ℓ}y..y. Hypothesis indices: 0 for the x end, 2i-1 / 2i for the two
// recurrence inequalities of step i, 2m+1 for the y end.
template <dynamical_system S>
chain<point_t<S>> assemble_supath_chain(const S& sys, const point_t<S>& x, const point_t<S>& y, double epsilon,
                                        const std::vector<point_t<S>>& su_path,
                                        const std::vector<recurrence_witness<point_t<S>>>& witnesses,
                                        supath_endpoints ends) {
  if (su_path.empty()) throw error(errc::invalid_argument, "empty su-path");
  if (witnesses.size() + 1 != su_path.size())
    throw error(errc::invalid_argument, "need one recurrence witness per su-path step");
  if (ends.k < 1 || ends.l < 1) throw error(errc::invalid_argument, "k and l must be positive");
  auto violated = [](std::size_t idx, const std::string& what) {
    return error(errc::witness_inequality_violated, what, idx);
  };
  const std::size_t steps = witnesses.size();
  if (!(sys.distance(iterate(sys, x, ends.k), su_path.front()) < epsilon)) throw violated(0, "d(T^k(x), z_0) >= epsilon");
  for (std::size_t i = 1; i <= steps; ++i) {
    const auto& w = witnesses[i - 1];
    if (w.n < 1 || w.m < 1) throw error(errc::invalid_argument, "recurrence times must be positive", i);
    if (!(sys.distance(iterate(sys, su_path[i - 1], w.n), w.v) < epsilon))
      throw violated(2 * i - 1, "d(T^n_i(z_{i-1}), v_i) >= epsilon at step " + std::to_string(i));
    if (!(sys.distance(iterate(sys, su_path[i], -w.m), sys.apply(w.v)) < epsilon))
      throw violated(2 * i, "d(T^-m_i(z_i), T(v_i)) >= epsilon at step " + std::to_string(i));
  }
  if (!(sys.distance(iterate(sys, y, -ends.l), sys.apply(su_path.back())) < epsilon))
    throw violated(2 * steps + 1, "d(T^-l(y), T(z_m)) >= epsilon");
  std::vector<point_t<S>> nodes;
  auto xs = orbit(sys, x, ends.k - 1);
  nodes.insert(nodes.end(), xs.begin(), xs.end());
  for (std::size_t i = 1; i <= steps; ++i) {
    const auto& w = witnesses[i - 1];
    auto zs = orbit(sys, su_path[i - 1], w.n - 1);
    nodes.insert(nodes.end(), zs.begin(), zs.end());
    nodes.push_back(w.v);
    auto back = orbit(sys, iterate(sys, su_path[i], -w.m), w.m - 1);
    nodes.insert(nodes.end(), back.begin(), back.end());
  }
  nodes.push_back(su_path.back());
  auto ys = orbit(sys, iterate(sys, y, -ends.l), ends.l);
  nodes.insert(nodes.end(), ys.begin(), ys.end());
  return make_chain(sys, std::move(nodes), epsilon);
}

}  // namespace topodyn
