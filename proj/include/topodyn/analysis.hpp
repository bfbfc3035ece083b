#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "catalog.hpp"
#include "chain.hpp"
#include "config.hpp"
#include "properties.hpp"

namespace topodyn {

using json = nlohmann::json;

// holds_up_to_horizon: every instance checked up to a horizon or on a finite
// sample passed; *_at_resolution: the statement concerns a finite grid or a
// truncation of the space.
enum class verdict { holds, fails, holds_up_to_horizon, holds_at_resolution, fails_at_resolution };

inline const char* verdict_name(verdict v) {
  switch (v) {
    case verdict::holds: return "holds";
    case verdict::fails: return "fails";
    case verdict::holds_up_to_horizon: return "holds_up_to_horizon";
    case verdict::holds_at_resolution: return "holds_at_resolution";
    case verdict::fails_at_resolution: return "fails_at_resolution";
  }
  return "fails";
}

inline verdict verdict_from_name(std::string_view s) {
  for (auto v : {verdict::holds, verdict::fails, verdict::holds_up_to_horizon, verdict::holds_at_resolution, verdict::fails_at_resolution})
    if (s == verdict_name(v)) return v;
  throw error(errc::parse_error, "unknown verdict '" + std::string(s) + "'");
}

inline bool positive(verdict v) { return v == verdict::holds || v == verdict::holds_up_to_horizon || v == verdict::holds_at_resolution; }

struct property_record {
  std::string task;
  std::string property;
  verdict result = verdict::fails;
  std::string method;
  run_params params;
  std::string anchor;
  json witness = json::object();

  bool operator==(const property_record&) const = default;
};

// Parameters used by facts-regression, per kind.
inline run_params regression_params(system_kind k) {
  switch (k) {
    case system_kind::example3_sft:
    case system_kind::full_shift:
    case system_kind::golden_mean_sft:
    case system_kind::sft:
      return {0.02, 0.04, 0.125, 20, 10000};
    case system_kind::cat_map:
    case system_kind::toral:
      return {0.05, 0.1, 0.1, 200, 10000};
    case system_kind::ladder:
      return {0.02, 0.04, 0.2, 200, 10000};
    default:
      return {0.02, 0.04, 0.05, 200, 10000};
  }
}

// ---- point payloads ----

inline json point_json(const shift_system& sys, const ep_point& x) { return to_string(x, sys.sft().first_label()); }
inline json point_json(const ladder_system&, const ladder_point& x) {
  auto [n, d] = x.rational();
  return std::to_string(n) + "/" + std::to_string(d);
}
inline json point_json(const circle_map_system&, double x) { return x; }
inline json point_json(const cantor_identity_system&, double x) { return x; }
inline json point_json(const toral_system<precise_real>&, const torus_point<precise_real>& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x(i).str(40));
  return a;
}

inline ep_point point_from_json(const shift_system& sys, const json& j) { return parse_system_point(sys, j.get<std::string>()); }
inline ladder_point point_from_json(const ladder_system& sys, const json& j) { return parse_system_point(sys, j.get<std::string>()); }
inline double point_from_json(const circle_map_system&, const json& j) { return j.get<double>(); }
inline double point_from_json(const cantor_identity_system&, const json& j) { return j.get<double>(); }
inline torus_point<precise_real> point_from_json(const toral_system<precise_real>&, const json& j) {
  torus_point<precise_real> v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = precise_real(j[i].get<std::string>());
  return v;
}

template <class S>
json barycenter_json(const S& sys, const barycenter_witness<point_t<S>>& w) {
  return {{"type", "barycenter"}, {"p", point_json(sys, w.p)}, {"q", point_json(sys, w.q)}, {"epsilon", w.epsilon},
          {"n1", w.n1},           {"n2", w.n2},                 {"m", w.m},                    {"N", w.N},
          {"x0", point_json(sys, w.x0)}};
}

template <class S>
barycenter_witness<point_t<S>> barycenter_from_json(const S& sys, const json& j) {
  return {point_from_json(sys, j.at("p")), point_from_json(sys, j.at("q")), j.at("epsilon").get<double>(), j.at("n1").get<std::int64_t>(),
          j.at("n2").get<std::int64_t>(),  j.at("m").get<std::int64_t>(),  j.at("N").get<std::int64_t>(),     point_from_json(sys, j.at("x0"))};
}

template <class S>
json gluing_json(const S& sys, const gluing_witness<point_t<S>>& g) {
  json pts = json::array();
  for (const auto& p : g.points) pts.push_back(point_json(sys, p));
  return {{"type", "gluing"}, {"points", pts}, {"lengths", g.lengths}, {"gaps", g.gaps},
          {"x", point_json(sys, g.x)}, {"epsilon", g.epsilon}, {"N", g.N}};
}

template <class S>
gluing_witness<point_t<S>> gluing_from_json(const S& sys, const json& j) {
  gluing_witness<point_t<S>> g;
  for (const auto& p : j.at("points")) g.points.push_back(point_from_json(sys, p));
  g.lengths = j.at("lengths").get<std::vector<std::int64_t>>();
  g.gaps = j.at("gaps").get<std::vector<std::int64_t>>();
  g.x = point_from_json(sys, j.at("x"));
  g.epsilon = j.at("epsilon").get<double>();
  g.N = j.at("N").get<std::int64_t>();
  return g;
}

// ---- helpers ----

namespace detail {

class sampler {
 public:
  explicit sampler(std::uint64_t seed) : g_(seed) {}
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(g_() % n); }

 private:
  std::mt19937_64 g_;
};

inline std::uint64_t property_seed(std::uint64_t seed, std::string_view property) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : property) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return seed * 0x9E3779B97F4A7C15ULL ^ h;
}

inline property_record record(std::string property, verdict v, std::string method, const run_params& p, json witness) {
  property_record r;
  r.property = std::move(property);
  r.result = v;
  r.method = std::move(method);
  r.params = p;
  r.witness = std::move(witness);
  return r;
}

// Random admissible word of length n (uniform first symbol, uniform successors).
inline word random_walk(const sft_system& sft, std::size_t n, sampler& rng, std::optional<int> first = std::nullopt) {
  word w;
  int cur = first ? *first : static_cast<int>(rng.below(sft.alphabet_size()));
  w.push_back(cur);
  while (w.size() < n) {
    std::vector<int> next;
    for (int b = 0; b < static_cast<int>(sft.alphabet_size()); ++b)
      if (sft.allowed(cur, b)) next.push_back(b);
    cur = next[rng.below(next.size())];
    w.push_back(cur);
  }
  return w;
}

inline std::vector<torus_point<precise_real>> rational_periodic_points(std::size_t dim, long long max_den) {
  std::vector<torus_point<precise_real>> out;
  for (long long den = 1; den <= max_den; ++den) {
    std::vector<long long> num(dim, 0);
    while (true) {
      long long g = den;
      for (auto v : num) g = std::gcd(g, v);
      if (g == 1) {
        torus_point<precise_real> v(static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = precise_real(num[i]) / precise_real(den);
        out.push_back(v);
      }
      std::size_t i = 0;
      while (i < dim && ++num[i] == den) num[i++] = 0;
      if (i == dim) break;
    }
  }
  return out;
}

inline torus_point<precise_real> random_torus_point(std::size_t dim, sampler& rng) {
  torus_point<precise_real> v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = precise_real(rng.uniform());
  return v;
}

}  // namespace detail

// ---- shift shadowing: z_n = (x_n)_0 ----

// For an eps-pseudo-orbit (consecutive points agree on [-K, K] after one
// shift), the sequence of zeroth symbols is admissible and its n-th shift agrees
// with x_n on [-K, K].
inline ep_point sft_shadow(const shift_system& sys, const std::vector<ep_point>& po) {
  if (po.empty()) throw error(errc::invalid_argument, "empty pseudo-orbit");
  const auto L = static_cast<std::int64_t>(po.size()) - 1;
  const ep_point& first = po.front();
  const ep_point& last = po.back();
  const std::int64_t A = std::min<std::int64_t>(0, first.offset());
  const std::int64_t R = std::max<std::int64_t>(L + 1, L + last.right_start());
  auto z_at = [&](std::int64_t j) {
    if (j < 0) return first.at(j);
    if (j <= L) return po[static_cast<std::size_t>(j)].at(0);
    return last.at(j - L);
  };
  word left = first.window(A - static_cast<std::int64_t>(first.left().size()), first.left().size());
  word right(last.right().size());
  for (std::size_t i = 0; i < right.size(); ++i) right[i] = last.at(R - L + static_cast<std::int64_t>(i));
  word core;
  for (std::int64_t j = A; j < R; ++j) core.push_back(z_at(j));
  ep_point z(left, core, right, A, sys.sft().alphabet_size());
  require_admissible(sys.sft(), z);
  return z;
}

// ---- per-system property computations ----

struct analysis_context {
  const system_spec& spec;
  run_params params;
  std::uint64_t seed;
  std::optional<transitivity_result> transitivity;  // shared by transitive / mixing
};

namespace detail {

// ------------- shadowing -------------

inline std::optional<property_record> shadowing(const shift_system& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "shadowing"));
  const double eps = cx.params.epsilon;
  const std::int64_t K = shift_system::agreement_radius(eps);
  const std::size_t runs = 20, length = 50;
  double worst = 0;
  json example;
  for (std::size_t r = 0; r < runs; ++r) {
    std::vector<ep_point> po{sys.extend(random_walk(sys.sft(), static_cast<std::size_t>(2 * K + 1), rng), -K)};
    for (std::size_t n = 1; n <= length; ++n) {
      word w = po.back().window(1 - K, static_cast<std::size_t>(2 * K + 1));
      word tail = random_walk(sys.sft(), 1 + rng.below(3), rng, w.back());
      w.insert(w.end(), tail.begin() + 1, tail.end());
      po.push_back(sys.extend(w, -K));
      if (!(sys.distance(sys.apply(po[n - 1]), po[n]) < eps)) throw error(errc::chain_step_violated, "generated step too large", n);
    }
    auto z = sft_shadow(sys, po);
    for (std::size_t n = 0; n < po.size(); ++n) worst = std::max(worst, sys.distance(sys.iterate(z, static_cast<std::int64_t>(n)), po[n]));
    if (r == 0) {
      json pts = json::array();
      for (const auto& p : po) pts.push_back(point_json(sys, p));
      example = {{"pseudo_orbit", pts}, {"z", point_json(sys, z)}};
    }
  }
  const bool ok = worst < eps;
  json w = {{"type", "sft_shadow"}, {"delta", eps},       {"epsilon", eps},  {"radius", K},
            {"runs", runs},         {"length", length},   {"max_error", worst}, {"example", example}};
  return record("shadowing", ok ? verdict::holds : verdict::fails, "constructive: zeroth symbols of the pseudo-orbit", cx.params, w);
}

inline std::optional<property_record> shadowing(const toral_system<precise_real>& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "shadowing"));
  const auto& t = sys.automorphism();
  const double C = t.shadowing_constant();
  const double delta = std::min(cx.params.delta, 0.9 * cx.params.epsilon / C);
  const std::size_t runs = 10, length = std::min<std::size_t>(cx.params.horizon, 500);
  double worst = 0;
  bool all = true;
  json example;
  for (std::size_t r = 0; r < runs; ++r) {
    std::vector<torus_point<precise_real>> pts{random_torus_point(sys.dim(), rng)};
    for (std::size_t n = 1; n < length; ++n) {
      torus_point<precise_real> e(static_cast<Eigen::Index>(sys.dim()));
      for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = precise_real(2 * rng.uniform() - 1);
      const double norm = to_double(precise_real(e.norm()));
      const double radius = 0.99 * delta * rng.uniform();
      if (norm > 0) e *= precise_real(radius / norm);
      pts.push_back(toral_auto<precise_real>::reduce(t.apply(pts.back()) + e));
    }
    auto po = pseudo_orbit<precise_real>::make(t, pts, delta);
    auto s = shadow(t, po);
    all = all && verify_shadow(t, po, s) && s.max_error < cx.params.epsilon;
    worst = std::max(worst, s.max_error);
    if (r == 0) {
      json xs = json::array(), zs = json::array();
      for (std::size_t n = 0; n < pts.size(); ++n) {
        xs.push_back(point_json(sys, pts[n]));
        zs.push_back(point_json(sys, s.orbit[n]));
      }
      example = {{"pseudo_orbit", xs}, {"shadow_orbit", zs}, {"bound", s.bound}};
    }
  }
  json w = {{"type", "toral_shadow"},  {"shadowing_constant", C}, {"expansivity_constant", t.expansivity_constant()},
            {"delta", delta},          {"bound", C * delta},      {"runs", runs},
            {"length", length},        {"max_error", worst},      {"example", example}};
  return record("shadowing", all ? verdict::holds : verdict::fails, "constructive: bounded solution of the linearized error equation",
                cx.params, w);
}

// delta = eps^2/4: below the spacing of the space wherever it is farther than
// eps from the fixed points, so a pseudo-orbit can only hover eps-close to 0 or 1.
inline std::optional<property_record> shadowing(const ladder_system& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "shadowing"));
  const double eps = cx.params.epsilon, delta = eps * eps / 4;
  const auto pool = sys.enumerate();
  const std::size_t runs = 20, length = std::min<std::size_t>(cx.params.horizon, 200);
  const std::int64_t reach = static_cast<std::int64_t>(length) + sys.n_max() + 2;
  std::vector<ladder_point> candidates{ladder_point::at_zero(), ladder_point::at_one()};
  for (std::int64_t k = -reach; k <= reach; ++k) candidates.push_back(ladder_point::orbit_point(k));
  double worst_best = 0;
  json counterexample;
  for (std::size_t r = 0; r < runs; ++r) {
    std::vector<ladder_point> po{pool[rng.below(pool.size())]};
    for (std::size_t n = 1; n < length; ++n) {
      auto img = sys.apply(po.back());
      std::vector<ladder_point> near;
      for (const auto& p : pool)
        if (sys.distance(img, p) < delta) near.push_back(p);
      po.push_back(near.empty() ? img : near[rng.below(near.size())]);
    }
    double best = INFINITY;
    for (const auto& c : candidates) {
      double e = 0;
      auto y = c;
      for (std::size_t n = 0; n < po.size() && e < best; ++n, y = sys.apply(y)) e = std::max(e, sys.distance(y, po[n]));
      best = std::min(best, e);
    }
    worst_best = std::max(worst_best, best);
    if (!(best < eps) && counterexample.is_null()) {
      json pts = json::array();
      for (const auto& p : po) pts.push_back(point_json(sys, p));
      counterexample = pts;
    }
  }
  json w = {{"type", "ladder_shadow"},
            {"delta", delta},
            {"runs", runs},
            {"length", length},
            {"candidates", candidates.size()},
            {"max_best_error", worst_best}};
  if (!counterexample.is_null()) w["counterexample"] = counterexample;
  return record("shadowing", worst_best < eps ? verdict::holds_at_resolution : verdict::fails_at_resolution,
                "random pseudo-orbits on the truncated space, exhaustive shadow search over all orbits that reach it", cx.params, w);
}

inline std::optional<property_record> shadowing(const circle_map_system& sys, analysis_context& cx) {
  if (sys.kind() != circle_map_system::rotation) return std::nullopt;
  const double delta = std::min(cx.params.delta, 1e-3), drift = 0.9 * delta, eps = cx.params.epsilon;
  const auto L = static_cast<std::size_t>(std::ceil(4 * eps / drift)) + 1;
  std::vector<double> seq{0.0};
  for (std::size_t n = 1; n < L; ++n) {
    double x = sys.apply(seq.back()) + drift;
    seq.push_back(x - std::floor(x));
  }
  auto s = search_rotation_shadow(sys, seq, 1e-4);
  const bool none = s.certified_none(eps);
  json w = {{"type", "rotation_shadow_search"}, {"delta", delta}, {"drift", drift},        {"length", L},
            {"resolution", s.resolution},      {"best_y", s.best_y}, {"best_error", s.best_error}};
  return record("shadowing", none ? verdict::fails_at_resolution : verdict::holds_at_resolution,
                "drifting pseudo-orbit, grid search over initial points with the isometry bound", cx.params, w);
}

// delta = 2·3^-depth is the smallest distance between stage points, so every
// delta-pseudo-orbit of the stage is constant.
inline std::optional<property_record> shadowing(const cantor_identity_system& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "shadowing"));
  const auto& pts = sys.points();
  const double delta = 2 * sys.gap();
  double worst = 0;
  for (std::size_t r = 0; r < 20; ++r) {
    std::vector<double> po{pts[rng.below(pts.size())]};
    for (std::size_t n = 1; n < 50; ++n) {
      std::vector<double> near;
      for (double p : pts)
        if (sys.distance(po.back(), p) < delta) near.push_back(p);
      po.push_back(near[rng.below(near.size())]);
    }
    double best = INFINITY;
    for (double y : pts) {
      double e = 0;
      for (double x : po) e = std::max(e, sys.distance(y, x));
      best = std::min(best, e);
    }
    worst = std::max(worst, best);
  }
  json w = {{"type", "cantor_shadow"}, {"delta", delta}, {"runs", 20}, {"length", 50}, {"max_best_error", worst}};
  return record("shadowing", worst < cx.params.epsilon ? verdict::holds_at_resolution : verdict::fails_at_resolution,
                "random pseudo-orbits on the Cantor stage, exhaustive shadow search", cx.params, w);
}

// ------------- transitivity and mixing -------------

template <class S>
const transitivity_result& transitivity(const S& sys, analysis_context& cx) {
  if (!cx.transitivity) cx.transitivity = empirical_transitivity(sys, cx.params.mesh, cx.params.horizon);
  return *cx.transitivity;
}

inline json transitivity_json(const transitivity_result& t) {
  json w = {{"type", "transitivity"}, {"cells", t.cells},     {"occupied", t.occupied},
            {"mesh", t.mesh},         {"horizon", t.horizon}, {"transitive_at_mesh", t.transitive_at_mesh},
            {"one_sided_at_mesh", t.one_sided_at_mesh},       {"mixing_at_mesh", t.mixing_at_mesh},
            {"sampling", t.method}};
  if (t.mixing_from) w["mixing_from"] = *t.mixing_from;
  return w;
}

template <class S>
std::optional<property_record> transitive(const S& sys, analysis_context& cx) {
  if constexpr (std::is_same_v<S, shift_system>) {
    auto st = sft_structure(sys.sft());
    json w = {{"type", "sft_structure"}, {"irreducible", st.irreducible}};
    if (st.period) w["period"] = *st.period;
    return record("transitive", st.transitive ? verdict::holds : verdict::fails, "constructive: irreducibility of the matrix", cx.params, w);
  } else {
    const auto& t = transitivity(sys, cx);
    return record("transitive", t.transitive_at_mesh ? verdict::holds_up_to_horizon : verdict::fails_at_resolution,
                  "empirical: cell crossings at mesh up to the horizon", cx.params, transitivity_json(t));
  }
}

template <class S>
std::optional<property_record> mixing(const S& sys, analysis_context& cx) {
  if constexpr (std::is_same_v<S, shift_system>) {
    auto st = sft_structure(sys.sft());
    json w = {{"type", "sft_structure"}, {"irreducible", st.irreducible}};
    if (st.period) w["period"] = *st.period;
    if (auto mt = mixing_time(sys.sft())) w["mixing_time"] = *mt;
    return record("mixing", st.mixing ? verdict::holds : verdict::fails, "constructive: aperiodicity of the matrix", cx.params, w);
  } else {
    const auto& t = transitivity(sys, cx);
    return record("mixing", t.mixing_at_mesh ? verdict::holds_up_to_horizon : verdict::fails_at_resolution,
                  "empirical: cell crossings at mesh for every n from mixing_from to the horizon", cx.params, transitivity_json(t));
  }
}

// ------------- chain transitivity -------------

inline grid_system analysis_grid(const toral_system<precise_real>& sys, double mesh) { return sys.grid(mesh); }
inline grid_system analysis_grid(const circle_map_system& sys, double mesh) { return sys.grid(mesh); }
inline grid_system analysis_grid(const ladder_system& sys, double) { return sys.grid(); }
inline grid_system analysis_grid(const cantor_identity_system& sys, double) { return sys.grid(); }

template <class S>
std::optional<property_record> chain_transitive(const S& sys, analysis_context& cx) {
  if constexpr (std::is_same_v<S, shift_system>) {
    auto st = sft_structure(sys.sft());
    return record("chain_transitive", st.irreducible ? verdict::holds : verdict::fails,
                  "constructive: an SFT is chain transitive iff its graph is irreducible", cx.params,
                  {{"type", "sft_structure"}, {"irreducible", st.irreducible}});
  } else {
    auto cg = build_chain_graph(analysis_grid(sys, cx.params.mesh), cx.params.delta);
    auto a = chain_analysis(cg);
    json w = {{"type", "chain_graph"},
              {"nodes", cg.size()},
              {"edges", cg.edge_count()},
              {"grid_mesh", cg.base().mesh()},
              {"delta", cg.delta()},
              {"chain_recurrent_nodes", chain_recurrent_nodes(cg).size()}};
    if (a.cycle_gcd) w["cycle_gcd"] = *a.cycle_gcd;
    if (auto td = cg.true_space_delta()) w["true_space_delta"] = *td;
    if (a.chain_transitive && cg.size() <= 5000) w["chain_bound"] = chain_bound(cg);
    return record("chain_transitive", a.chain_transitive ? verdict::holds_at_resolution : verdict::fails_at_resolution,
                  "grid chain graph: strong connectivity", cx.params, w);
  }
}

// ------------- barycenter on periodic points -------------

template <class S, class Check>
property_record barycenter_pairs(const S& sys, analysis_context& cx, const std::vector<point_t<S>>& per, Check check,
                                 const std::string& pool_name) {
  std::size_t pairs = 0, found = 0;
  std::int64_t max_m = 0;
  bool exhaustive_failure = false, any_failure = false;
  json failure, example;
  for (const auto& p : per)
    for (const auto& q : per) {
      if (pairs >= cx.params.caps) break;
      ++pairs;
      auto r = check(p, q);
      if (r.witness && verify_barycenter_witness(sys, *r.witness)) {
        ++found;
        max_m = std::max(max_m, r.witness->m);
        if (example.is_null() && r.witness->m > 0) example = barycenter_json(sys, *r.witness);
        continue;
      }
      any_failure = true;
      if (failure.is_null() || (r.exhaustive && !exhaustive_failure)) {
        failure = {{"p", point_json(sys, p)}, {"q", point_json(sys, q)}, {"exhaustive", r.exhaustive},
                   {"candidates", r.candidates}, {"n_cap", r.n_cap}, {"method", r.method}};
        exhaustive_failure = exhaustive_failure || r.exhaustive;
      }
    }
  json w = {{"type", "barycenter_pairs"}, {"pool", pool_name}, {"pairs", pairs}, {"found", found}, {"max_m", max_m}};
  if (!example.is_null()) w["example"] = example;
  if (any_failure) {
    w["counterexample"] = failure;
    return record("barycenter_on_Per", exhaustive_failure ? verdict::fails : verdict::fails_at_resolution,
                  exhaustive_failure ? "exhaustion certificate for a pair of periodic points" : "grid search found no witness",
                  cx.params, w);
  }
  return record("barycenter_on_Per", verdict::holds_up_to_horizon, "witness for every checked pair, each verified", cx.params, w);
}

inline std::int64_t bary_horizon(const analysis_context& cx) { return std::min<std::int64_t>(static_cast<std::int64_t>(cx.params.horizon), 20); }

inline std::optional<property_record> barycenter_on_per(const shift_system& sys, analysis_context& cx) {
  const auto n = bary_horizon(cx);
  const auto cap = std::min<std::int64_t>(static_cast<std::int64_t>(cx.params.caps), 1000);
  return barycenter_pairs(
      sys, cx, enumerate_periodic(sys.sft(), 4),
      [&](const ep_point& p, const ep_point& q) { return check_barycenter(sys, p, q, cx.params.epsilon, n, n, cap); },
      "periodic points of period <= 4");
}

inline std::optional<property_record> barycenter_on_per(const toral_system<precise_real>& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "barycenter_on_Per"));
  auto all = rational_periodic_points(sys.dim(), 3);
  std::vector<torus_point<precise_real>> per;
  for (std::size_t i = 0; i < 4; ++i) per.push_back(all[rng.below(all.size())]);
  toral_gluer<precise_real> gluer(sys, cx.params.epsilon);
  const auto n = bary_horizon(cx);
  auto r = barycenter_pairs(
      sys, cx, per, [&](const auto& p, const auto& q) { return check_barycenter(gluer, p, q, n, n); },
      "4 random rational points with denominator <= 3");
  r.witness["N"] = gluer.bound();
  return r;
}

inline std::optional<property_record> barycenter_on_per(const ladder_system& sys, analysis_context& cx) {
  const auto n = bary_horizon(cx);
  return barycenter_pairs(
      sys, cx, sys.periodic_points(),
      [&](const auto& p, const auto& q) {
        return check_barycenter(sys, p, q, cx.params.epsilon, n, n, static_cast<std::int64_t>(cx.params.caps));
      },
      "fixed points 0 and 1");
}

inline std::optional<property_record> barycenter_on_per(const circle_map_system& sys, analysis_context& cx) {
  if (sys.kind() != circle_map_system::morse_smale) return std::nullopt;
  const auto n = bary_horizon(cx);
  return barycenter_pairs(
      sys, cx, sys.fixed_points(), [&](double p, double q) { return check_barycenter(sys, p, q, cx.params.epsilon, n, n, 200); },
      "fixed points");
}

// Per = X for the identity: the two extreme stage points.
inline std::optional<property_record> barycenter_on_per(const cantor_identity_system& sys, analysis_context& cx) {
  const auto& pts = sys.points();
  return barycenter_pairs(
      sys, cx, std::vector<double>{pts.front(), pts.back()},
      [&](double p, double q) { return check_barycenter(sys, p, q, cx.params.epsilon, 1, 1, 1000); }, "extreme stage points");
}

// ------------- su-intersection -------------

template <class S, class Verify>
property_record su_pairs(const S& sys, analysis_context& cx, const std::string& property, const std::vector<std::pair<point_t<S>, point_t<S>>>& pairs,
                         Verify verify, const std::string& method_found, const std::string& method_none, const std::string& pool) {
  std::size_t found = 0;
  json failure;
  for (const auto& [a, b] : pairs) {
    auto z = sys.su_witness(a, b);
    if (z) {
      if (!verify(a, b, *z)) throw error(errc::witness_inequality_violated, property + ": su witness failed verification");
      ++found;
    } else if (failure.is_null()) {
      failure = {{"a", point_json(sys, a)}, {"b", point_json(sys, b)}};
    }
  }
  json w = {{"type", "su_pairs"}, {"pool", pool}, {"pairs", pairs.size()}, {"found", found}};
  if (!failure.is_null()) {
    w["counterexample"] = failure;
    return record(property, verdict::fails, method_none, cx.params, w);
  }
  return record(property, verdict::holds, method_found, cx.params, w);
}

inline bool verify_sft_su(const shift_system& sys, const ep_point& a, const ep_point& b, const ep_point& z) {
  return sys.stable_related(z, a) && sys.unstable_related(z, b);
}

template <class P>
std::vector<std::pair<P, P>> all_pairs(const std::vector<P>& pts, std::size_t cap) {
  std::vector<std::pair<P, P>> out;
  for (const auto& a : pts)
    for (const auto& b : pts)
      if (out.size() < cap) out.emplace_back(a, b);
  return out;
}

inline std::optional<property_record> su_on_per(const shift_system& sys, analysis_context& cx) {
  auto r = su_pairs(
      sys, cx, "su_intersecting_on_Per", all_pairs(enumerate_periodic(sys.sft(), 4), cx.params.caps),
      [&](const auto& a, const auto& b, const auto& z) { return verify_sft_su(sys, a, b, z); },
      "constructive: product-graph search, every witness verified", "certified: product-graph search exhausted",
      "periodic points of period <= 4");
  if (r.result == verdict::holds) r.result = verdict::holds_up_to_horizon;
  return r;
}

inline std::optional<property_record> su_on_per(const toral_system<precise_real>& sys, analysis_context& cx) {
  auto pts = rational_periodic_points(sys.dim(), 3);
  const auto& t = sys.automorphism();
  return su_pairs(
      sys, cx, "su_intersecting_on_Per", all_pairs(pts, cx.params.caps),
      [&](const auto& a, const auto& b, const auto& z) { return verify_su_witness(t, a, b, z).ok(); },
      "constructive: closed-form intersection of stable and unstable lines, decay verified", "closed form returned none",
      "rational points with denominator <= 3");
}

inline std::optional<property_record> su_on_per(const ladder_system& sys, analysis_context& cx) {
  return su_pairs(
      sys, cx, "su_intersecting_on_Per", all_pairs(sys.periodic_points(), cx.params.caps),
      [&](const auto& a, const auto& b, const auto& z) { return sys.stable_related(z, a) && sys.unstable_related(z, b); },
      "exact relations", "certified: exact stable and unstable sets are disjoint", "fixed points 0 and 1");
}

inline std::optional<property_record> su_on_per(const circle_map_system& sys, analysis_context& cx) {
  if (sys.kind() != circle_map_system::morse_smale) return std::nullopt;
  return su_pairs(
      sys, cx, "su_intersecting_on_Per", all_pairs(sys.fixed_points(), cx.params.caps),
      [&](double a, double b, double z) { return sys.stable_related(z, a) && sys.unstable_related(z, b); }, "exact basins",
      "certified: basins of the fixed points", "fixed points");
}

inline std::optional<property_record> su_on_x(const shift_system& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "su_intersecting_on_X"));
  auto pts = sys.sample(2);
  std::vector<std::pair<ep_point, ep_point>> pairs;
  for (std::size_t i = 0; i < std::min<std::size_t>(200, cx.params.caps); ++i)
    pairs.emplace_back(pts[rng.below(pts.size())], pts[rng.below(pts.size())]);
  auto r = su_pairs(
      sys, cx, "su_intersecting_on_X", pairs, [&](const auto& a, const auto& b, const auto& z) { return verify_sft_su(sys, a, b, z); },
      "constructive: product-graph search, every witness verified", "certified: product-graph search exhausted",
      "200 random pairs of extended cylinder points (radius 2)");
  if (r.result == verdict::holds) r.result = verdict::holds_up_to_horizon;
  return r;
}

inline std::optional<property_record> su_on_x(const toral_system<precise_real>& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "su_intersecting_on_X"));
  std::vector<std::pair<torus_point<precise_real>, torus_point<precise_real>>> pairs;
  for (std::size_t i = 0; i < std::min<std::size_t>(200, cx.params.caps); ++i) {
    auto a = random_torus_point(sys.dim(), rng);
    pairs.emplace_back(a, random_torus_point(sys.dim(), rng));
  }
  const auto& t = sys.automorphism();
  return su_pairs(
      sys, cx, "su_intersecting_on_X", pairs, [&](const auto& a, const auto& b, const auto& z) { return verify_su_witness(t, a, b, z).ok(); },
      "constructive: closed-form intersection of stable and unstable lines, decay verified", "closed form returned none",
      "200 random pairs");
}

inline std::optional<property_record> su_on_x(const cantor_identity_system& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "su_intersecting_on_X"));
  const auto& pts = sys.points();
  std::vector<std::pair<double, double>> pairs;
  while (pairs.size() < std::min<std::size_t>(100, cx.params.caps)) {
    double a = pts[rng.below(pts.size())], b = pts[rng.below(pts.size())];
    if (a != b) pairs.emplace_back(a, b);
  }
  return su_pairs(
      sys, cx, "su_intersecting_on_X", pairs, [](double, double, double) { return true; }, "exact relations",
      "certified: stable and unstable sets of the identity are singletons", "100 random distinct pairs");
}

// ------------- expansivity -------------

inline std::optional<property_record> expansive(const shift_system& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "expansive"));
  auto pts = sys.sample(3);
  std::size_t pairs = 0;
  bool ok = true;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& a = pts[rng.below(pts.size())];
    const auto& b = pts[rng.below(pts.size())];
    if (a == b) continue;
    ++pairs;
    bool separated = false;
    for (std::int64_t n = -8; n <= 8 && !separated; ++n) separated = sys.distance(sys.iterate(a, n), sys.iterate(b, n)) > 0.5;
    ok = ok && separated;
  }
  return record("expansive", ok ? verdict::holds : verdict::fails, "constructive: distinct sequences differ at some coordinate",
                cx.params, {{"type", "expansivity"}, {"constant", 0.5}, {"pairs_checked", pairs}});
}

inline std::optional<property_record> expansive(const toral_system<precise_real>& sys, analysis_context& cx) {
  sampler rng(property_seed(cx.seed, "expansive"));
  const auto& t = sys.automorphism();
  const double c = t.expansivity_constant();
  std::size_t separated = 0, max_steps = 0;
  const std::size_t pairs = 200;
  for (std::size_t i = 0; i < pairs; ++i) {
    auto a = random_torus_point(sys.dim(), rng);
    torus_point<precise_real> e(static_cast<Eigen::Index>(sys.dim()));
    for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = precise_real(2 * rng.uniform() - 1);
    e *= precise_real(std::pow(10.0, -1 - 7 * rng.uniform()) * c / std::max(1e-300, to_double(precise_real(e.norm()))));
    auto b = toral_auto<precise_real>::reduce(a + e);
    auto fa = a, fb = b, ba = a, bb = b;
    for (std::size_t n = 0; n <= 60; ++n) {
      if (toral_auto<precise_real>::distance(fa, fb) > c || toral_auto<precise_real>::distance(ba, bb) > c) {
        ++separated;
        max_steps = std::max(max_steps, n);
        break;
      }
      fa = t.apply(fa), fb = t.apply(fb), ba = t.apply_inverse(ba), bb = t.apply_inverse(bb);
    }
  }
  return record("expansive", separated == pairs ? verdict::holds : verdict::fails,
                "constructive: expansivity constant, separation verified on random close pairs", cx.params,
                {{"type", "expansivity"}, {"constant", c}, {"pairs_checked", pairs}, {"separated", separated}, {"max_steps", max_steps}});
}

inline std::optional<property_record> isometry_not_expansive(const std::string& why, double a, double b, double drift, const run_params& p) {
  return record("expansive", verdict::fails, why, p,
                {{"type", "non_expansive_pair"}, {"x", a}, {"y", b}, {"initial_distance", std::abs(b - a)}, {"max_drift", drift}});
}

inline std::optional<property_record> expansive(const circle_map_system& sys, analysis_context& cx) {
  if (sys.kind() != circle_map_system::rotation) return std::nullopt;
  // any candidate constant c: the pair (0, c/2) keeps its distance forever
  const double c = cx.params.epsilon, x0 = 0, y0 = c / 2;
  double x = x0, y = y0, drift = 0;
  for (int n = 0; n < 1000; ++n, x = sys.apply(x), y = sys.apply(y)) drift = std::max(drift, std::abs(sys.distance(x, y) - c / 2));
  return isometry_not_expansive("certified: rotations are isometries, d(T^n x, T^n y) = d(x, y)", x0, y0, drift, cx.params);
}

inline std::optional<property_record> expansive(const cantor_identity_system& sys, analysis_context& cx) {
  const auto& pts = sys.points();
  return isometry_not_expansive("certified: the identity never separates two points", pts[0], pts[1], 0.0, cx.params);
}

template <class S>
std::optional<property_record> shadowing(const S&, analysis_context&) {
  return std::nullopt;
}
template <class S>
std::optional<property_record> barycenter_on_per(const S&, analysis_context&) {
  return std::nullopt;
}
template <class S>
std::optional<property_record> su_on_per(const S&, analysis_context&) {
  return std::nullopt;
}
template <class S>
std::optional<property_record> su_on_x(const S&, analysis_context&) {
  return std::nullopt;
}
template <class S>
std::optional<property_record> expansive(const S&, analysis_context&) {
  return std::nullopt;
}

}  // namespace detail

// Properties computed by `analyze` for a kind: the fact-sheet entries, or the
// full list for user-supplied shifts.
inline std::vector<std::string> analysis_properties(const system_spec& spec) {
  if (spec.kind == system_kind::sft) return fact_properties();
  std::vector<std::string> out;
  for (const auto& f : expected_facts(spec).facts) out.push_back(f.property);
  return out;
}

inline std::optional<property_record> compute_property(const any_system& sys, analysis_context& cx, const std::string& property) {
  auto r = std::visit(
      [&](const auto& s) -> std::optional<property_record> {
        if (property == "shadowing") return detail::shadowing(s, cx);
        if (property == "transitive") return detail::transitive(s, cx);
        if (property == "mixing") return detail::mixing(s, cx);
        if (property == "chain_transitive") return detail::chain_transitive(s, cx);
        if (property == "barycenter_on_Per") return detail::barycenter_on_per(s, cx);
        if (property == "su_intersecting_on_Per") return detail::su_on_per(s, cx);
        if (property == "su_intersecting_on_X") return detail::su_on_x(s, cx);
        if (property == "expansive") return detail::expansive(s, cx);
        throw error(errc::invalid_argument, "unknown property '" + property + "'");
      },
      sys);
  if (r) {
    auto sheet = expected_facts(cx.spec);
    if (const fact* f = sheet.find(property)) r->anchor = f->anchor;
  }
  return r;
}

inline std::vector<property_record> analyze_system(const any_system& sys, const system_spec& spec, const run_params& params,
                                                   std::uint64_t seed, const std::vector<std::string>& properties) {
  analysis_context cx{spec, params, seed, std::nullopt};
  std::vector<property_record> out;
  for (const auto& p : properties)
    if (auto r = compute_property(sys, cx, p)) out.push_back(std::move(*r));
  return out;
}

}  // namespace topodyn
