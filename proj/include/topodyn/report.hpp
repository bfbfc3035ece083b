#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"

namespace topodyn {

inline constexpr int report_schema_version = 1;

struct task_error {
  std::string task;
  std::string code;
  std::string message;

  bool operator==(const task_error&) const = default;
};

struct regression_entry {
  std::string property;
  bool expected = false;
  std::string observed;  // verdict name, or "not computed"
  bool matched = false;
  std::string basis;
  std::string anchor;

  bool operator==(const regression_entry&) const = default;
};

struct property_report {
  int schema_version = report_schema_version;
  std::string system_id;
  std::string system_kind;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::vector<std::string> notes;
  std::vector<property_record> verdicts;
  std::vector<task_error> errors;
  std::vector<regression_entry> regression;

  bool regression_matched() const {
    for (const auto& r : regression)
      if (!r.matched) return false;
    return true;
  }
  bool operator==(const property_report&) const = default;
};

// 0 success, 2 regression mismatch, 3 precondition violation, 4 I/O.
inline int exit_code(const property_report& r) {
  bool io = false;
  for (const auto& e : r.errors) io |= e.code == errc_name(errc::io_error);
  if (io) return 4;
  if (!r.errors.empty()) return 3;
  if (!r.regression_matched()) return 2;
  return 0;
}

// ---- JSON ----

inline json params_json(const run_params& p) {
  return {{"mesh", p.mesh}, {"delta", p.delta}, {"epsilon", p.epsilon}, {"horizon", p.horizon}, {"caps", p.caps}};
}

inline run_params params_from_json(const json& j) {
  return {j.at("mesh").get<double>(), j.at("delta").get<double>(), j.at("epsilon").get<double>(), j.at("horizon").get<std::size_t>(),
          j.at("caps").get<std::size_t>()};
}

inline json to_json(const property_report& r) {
  json verdicts = json::array(), errors = json::array(), regression = json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"task", v.task},
                        {"property", v.property},
                        {"verdict", verdict_name(v.result)},
                        {"method", v.method},
                        {"parameters", params_json(v.params)},
                        {"anchor", v.anchor},
                        {"witness", v.witness}});
  for (const auto& e : r.errors) errors.push_back({{"task", e.task}, {"code", e.code}, {"message", e.message}});
  for (const auto& g : r.regression)
    regression.push_back({{"property", g.property}, {"expected", g.expected}, {"observed", g.observed}, {"matched", g.matched},
                          {"basis", g.basis}, {"anchor", g.anchor}});
  return {{"schema_version", r.schema_version},
          {"system", {{"id", r.system_id}, {"kind", r.system_kind}}},
          {"seed", r.seed},
          {"timestamp", r.timestamp},
          {"notes", r.notes},
          {"verdicts", verdicts},
          {"errors", errors},
          {"regression", regression}};
}

inline property_report report_from_json(const json& j) {
  property_report r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != report_schema_version)
    throw error(errc::parse_error, "unsupported report schema version " + std::to_string(r.schema_version));
  r.system_id = j.at("system").at("id").get<std::string>();
  r.system_kind = j.at("system").at("kind").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.timestamp = j.at("timestamp").get<std::string>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& v : j.at("verdicts")) {
    property_record p;
    p.task = v.at("task").get<std::string>();
    p.property = v.at("property").get<std::string>();
    p.result = verdict_from_name(v.at("verdict").get<std::string>());
    p.method = v.at("method").get<std::string>();
    p.params = params_from_json(v.at("parameters"));
    p.anchor = v.at("anchor").get<std::string>();
    p.witness = v.at("witness");
    r.verdicts.push_back(std::move(p));
  }
  for (const auto& e : j.at("errors"))
    r.errors.push_back({e.at("task").get<std::string>(), e.at("code").get<std::string>(), e.at("message").get<std::string>()});
  for (const auto& g : j.at("regression"))
    r.regression.push_back({g.at("property").get<std::string>(), g.at("expected").get<bool>(), g.at("observed").get<std::string>(),
                            g.at("matched").get<bool>(), g.at("basis").get<std::string>(), g.at("anchor").get<std::string>()});
  return r;
}

// ---- task dispatch ----

struct dump_file {
  std::string name;
  std::string content;
};

struct run_result {
  property_report report;
  std::vector<dump_file> dumps;
};

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// T on plain coordinates, for re-checking grid chains.
inline std::vector<double> double_map(const toral_system<precise_real>& s, const std::vector<double>& x) { return s.apply_double(x); }
inline std::vector<double> double_map(const circle_map_system& s, const std::vector<double>& x) { return {s.apply(x.at(0))}; }
inline std::vector<double> double_map(const cantor_identity_system&, const std::vector<double>& x) { return x; }
inline std::vector<double> double_map(const ladder_system& s, const std::vector<double>& x) {
  for (const auto& p : s.sorted())
    if (p.value() == x.at(0)) return {s.apply(p).value()};
  throw error(errc::invalid_argument, "not a point of the truncated ladder");
}
inline ambient double_ambient(const toral_system<precise_real>&) { return ambient::torus; }
inline ambient double_ambient(const circle_map_system&) { return ambient::torus; }
inline ambient double_ambient(const cantor_identity_system&) { return ambient::euclidean; }
inline ambient double_ambient(const ladder_system&) { return ambient::euclidean; }

inline std::string orbit_csv(const std::vector<std::vector<double>>& pts, const std::vector<double>& err, const std::string& err_name) {
  std::ostringstream os;
  os << "n";
  for (std::size_t k = 0; k < (pts.empty() ? 0 : pts.front().size()); ++k) os << ",x" << k;
  os << "," << err_name << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << i;
    for (double v : pts[i]) os << ',' << v;
    os << ',';
    if (i < err.size()) os << err[i];
    os << '\n';
  }
  return os.str();
}

template <class S>
property_record run_chain_task(const S& sys, const chain_task& c, const run_params& params, std::vector<dump_file>& dumps,
                               const std::string& task) {
  if constexpr (std::is_same_v<S, shift_system>) {
    throw error(errc::invalid_argument, "chain search needs a grid-backed system");
  } else {
    auto cg = build_chain_graph(analysis_grid(sys, params.mesh), c.delta);
    const grid_system& g = cg.base();
    auto nearest = [&](const std::vector<double>& x) {
      std::uint32_t best = 0;
      double bd = INFINITY;
      for (std::size_t i = 0; i < g.size(); ++i) {
        double d = g.distance(g.point(i), x);
        if (d < bd) bd = d, best = static_cast<std::uint32_t>(i);
      }
      return best;
    };
    const auto from = nearest(c.from), to = nearest(c.to);
    auto found = find_chain(cg, from, to);
    run_params p = params;
    p.delta = c.delta;
    json w = {{"type", "chain"}, {"delta", c.delta}, {"grid_mesh", g.mesh()}, {"from_node", from}, {"to_node", to}, {"nodes_in_grid", g.size()}};
    if (!found) return record("chain", verdict::fails_at_resolution, "breadth-first search in the grid chain graph", p, w);
    w["nodes"] = found->path.nodes;
    w["step_errors"] = found->path.step_errors;
    std::ostringstream csv, edges;
    write_chain_csv(csv, found->path);
    write_edge_list(edges, cg);
    dumps.push_back({task + "_chain.csv", csv.str()});
    dumps.push_back({task + "_graph.txt", edges.str()});
    return record("chain", verdict::holds_at_resolution, "shortest chain in the grid chain graph", p, w);
  }
}

inline property_record run_shadow_task(const toral_system<precise_real>& sys, const shadow_task& st, const run_params& params,
                                       std::uint64_t seed, std::vector<dump_file>& dumps, const std::string& task) {
  const auto& t = sys.automorphism();
  sampler rng(property_seed(seed, task));
  std::vector<pseudo_orbit<precise_real>> runs;
  if (!st.orbit_file.empty()) {
    std::ifstream in(st.orbit_file);
    if (!in) throw error(errc::io_error, "cannot read " + st.orbit_file);
    std::vector<torus_point<precise_real>> pts;
    for (const auto& row : read_points_csv(in)) {
      if (row.size() != sys.dim()) throw error(errc::param_out_of_range, "orbit file dimension mismatch");
      pts.push_back(sys.from_doubles(row));
    }
    double worst = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) worst = std::max(worst, toral_auto<precise_real>::distance(t.apply(pts[i]), pts[i + 1]));
    runs.push_back(pseudo_orbit<precise_real>::make(t, pts, std::max(st.delta, std::nextafter(worst, INFINITY))));
  } else {
    for (std::size_t r = 0; r < st.count; ++r) {
      std::vector<torus_point<precise_real>> pts{random_torus_point(sys.dim(), rng)};
      for (std::size_t n = 1; n < st.length; ++n) {
        torus_point<precise_real> e(static_cast<Eigen::Index>(sys.dim()));
        for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = precise_real(2 * rng.uniform() - 1);
        const double norm = to_double(precise_real(e.norm()));
        if (norm > 0) e *= precise_real(0.99 * st.delta * rng.uniform() / norm);
        pts.push_back(toral_auto<precise_real>::reduce(t.apply(pts.back()) + e));
      }
      runs.push_back(pseudo_orbit<precise_real>::make(t, pts, st.delta));
    }
  }
  double worst = 0;
  bool ok = true;
  json examples = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    auto s = shadow(t, runs[r]);
    ok = ok && verify_shadow(t, runs[r], s);
    worst = std::max(worst, s.max_error);
    json xs = json::array(), zs = json::array();
    std::vector<std::vector<double>> xd, zd;
    for (std::size_t n = 0; n < s.orbit.size(); ++n) {
      xs.push_back(point_json(sys, runs[r].points[n]));
      zs.push_back(point_json(sys, s.orbit[n]));
      xd.push_back(toral_system<precise_real>::to_doubles(runs[r].points[n]));
      zd.push_back(toral_system<precise_real>::to_doubles(s.orbit[n]));
    }
    examples.push_back({{"pseudo_orbit", xs}, {"shadow_orbit", zs}, {"bound", s.bound}});
    const std::string tag = runs.size() > 1 ? "_" + std::to_string(r) : "";
    dumps.push_back({task + tag + "_pseudo_orbit.csv", orbit_csv(xd, runs[r].step_errors, "step_error")});
    dumps.push_back({task + tag + "_shadow.csv", orbit_csv(zd, s.errors, "error")});
  }
  run_params p = params;
  p.delta = runs.front().delta;
  p.horizon = runs.front().points.size();
  json w = {{"type", "toral_shadow"}, {"shadowing_constant", t.shadowing_constant()}, {"delta", p.delta}, {"bound", t.shadowing_constant() * p.delta},
            {"runs", runs.size()},    {"max_error", worst},                           {"examples", examples}};
  return record("shadow", ok ? verdict::holds : verdict::fails, "constructive: bounded solution of the linearized error equation", p, w);
}

template <class S>
auto barycenter_search_for(const S& sys, const point_t<S>& p, const point_t<S>& q, const barycenter_task& b) {
  if constexpr (std::is_same_v<S, toral_system<precise_real>>)
    return check_barycenter(sys, p, q, b.epsilon, b.n1, b.n2);
  else if constexpr (std::is_same_v<S, circle_map_system>)
    return check_barycenter(sys, p, q, b.epsilon, b.n1, b.n2, b.n_cap, b.resolution);
  else
    return check_barycenter(sys, p, q, b.epsilon, b.n1, b.n2, b.n_cap);
}

template <class S>
property_record run_barycenter_task(const S& sys, const barycenter_task& b, const run_params& params) {
  const auto p = parse_system_point(sys, b.p);
  const auto q = parse_system_point(sys, b.q);
  auto r = barycenter_search_for(sys, p, q, b);
  run_params rp = params;
  rp.epsilon = b.epsilon;
  rp.horizon = static_cast<std::size_t>(std::max(b.n1, b.n2));
  if (r.witness) {
    if (!verify_barycenter_witness(sys, *r.witness)) throw error(errc::witness_inequality_violated, "barycenter witness failed verification");
    json w = barycenter_json(sys, *r.witness);
    w["search"] = r.method;
    w["uniform"] = r.uniform;
    return record("barycenter", verdict::holds, r.method, rp, w);
  }
  json w = {{"type", "barycenter_none"}, {"p", point_json(sys, p)}, {"q", point_json(sys, q)}, {"epsilon", b.epsilon},
            {"n1", b.n1},                 {"n2", b.n2},                {"n_cap", r.n_cap},        {"candidates", r.candidates},
            {"exhaustive", r.exhaustive}};
  return record("barycenter", r.exhaustive ? verdict::fails : verdict::fails_at_resolution,
                r.exhaustive ? "exhaustion certificate: " + r.method : r.method, rp, w);
}

template <class S>
property_record run_glue_task(const S& sys, const glue_task& g, const run_params& params) {
  if constexpr (!std::is_same_v<S, shift_system> && !std::is_same_v<S, toral_system<precise_real>>) {
    throw error(errc::not_shadowing_capable, "gluing needs a shift or toral system");
  } else {
    std::vector<segment<point_t<S>>> segs;
    for (const auto& [x, n] : g.segments) segs.push_back({parse_system_point(sys, x), n});
    auto w = gluing_orbit(sys, segs, g.epsilon);
    if (!verify_gluing_witness(sys, w)) throw error(errc::witness_inequality_violated, "gluing witness failed verification");
    run_params rp = params;
    rp.epsilon = g.epsilon;
    return record("glue", verdict::holds, "constructive gluing, gaps bounded by N(epsilon)", rp, gluing_json(sys, w));
  }
}

}  // namespace detail

// Re-checks the payload of a record with the verify operations. nullopt when
// the record carries nothing re-checkable.
inline std::optional<bool> revalidate(const any_system& sys, const property_record& rec) {
  const json& w = rec.witness;
  if (!w.contains("type")) return std::nullopt;
  const std::string type = w.at("type").get<std::string>();
  return std::visit(
      [&](const auto& s) -> std::optional<bool> {
        using S = std::decay_t<decltype(s)>;
        if (type == "barycenter") return verify_barycenter_witness(s, barycenter_from_json(s, w));
        if (type == "barycenter_pairs") {
          if (!w.contains("example")) return std::nullopt;
          return verify_barycenter_witness(s, barycenter_from_json(s, w.at("example")));
        }
        if (type == "gluing") {
          auto g = gluing_from_json(s, w);
          if (static_cast<std::int64_t>(g.gaps.size()) + 1 != static_cast<std::int64_t>(g.points.size())) return false;
          return verify_gluing_witness(s, g);
        }
        if constexpr (!std::is_same_v<S, shift_system>) {
          if (type == "chain") {
            if (!w.contains("nodes")) return std::nullopt;
            auto nodes = w.at("nodes").get<std::vector<std::vector<double>>>();
            const double delta = w.at("delta").get<double>();
            for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
              if (!(ambient_distance(detail::double_ambient(s), detail::double_map(s, nodes[i]), nodes[i + 1]) < delta)) return false;
            return true;
          }
        }
        if constexpr (std::is_same_v<S, toral_system<precise_real>>) {
          if (type == "toral_shadow") {
            const auto& t = s.automorphism();
            std::vector<json> ex;
            if (w.contains("examples"))
              for (const auto& e : w.at("examples")) ex.push_back(e);
            if (w.contains("example")) ex.push_back(w.at("example"));
            for (const auto& e : ex) {
              const double bound = e.at("bound").get<double>();
              const auto& xs = e.at("pseudo_orbit");
              const auto& zs = e.at("shadow_orbit");
              if (xs.size() != zs.size()) return false;
              for (std::size_t n = 0; n < xs.size(); ++n) {
                auto x = point_from_json(s, xs[n]);
                auto z = point_from_json(s, zs[n]);
                if (toral_auto<precise_real>::distance(x, z) > bound) return false;
                if (n + 1 < xs.size() && toral_auto<precise_real>::distance(t.apply(z), point_from_json(s, zs[n + 1])) > 1e-12) return false;
              }
            }
            return true;
          }
        }
        if constexpr (std::is_same_v<S, shift_system>) {
          if (type == "sft_shadow") {
            const auto& e = w.at("example");
            auto z = point_from_json(s, e.at("z"));
            const double eps = w.at("epsilon").get<double>();
            std::int64_t n = 0;
            for (const auto& x : e.at("pseudo_orbit"))
              if (!(s.distance(s.iterate(z, n++), point_from_json(s, x)) < eps)) return false;
            return true;
          }
        }
        return std::nullopt;
      },
      sys);
}

inline run_result run_analysis(const run_config& cfg) {
  run_result out;
  property_report& rep = out.report;
  rep.system_id = cfg.system.id();
  rep.system_kind = kind_name(cfg.system.kind);
  rep.seed = cfg.seed;
  rep.timestamp = detail::utc_timestamp();
  if (cfg.system.kind == system_kind::rotation)
    rep.notes.push_back(cfg.system.alpha_from_float ? "rotation number given as a decimal, used as its exact rational value"
                                                    : "rotation number is an exact rational; irrational rotations are proxied by large denominators");
  std::optional<any_system> sys;
  auto fail = [&](const std::string& task, const error& e) { rep.errors.push_back({task, errc_name(e.code()), e.what()}); };
  try {
    sys = make_system(cfg.system);
  } catch (const error& e) {
    fail("system", e);
    return out;
  }
  for (const auto& t : cfg.tasks) {
    const std::string name = t.name();
    try {
      std::vector<property_record> recs;
      if (t.kind == "analyze") {
        recs = analyze_system(*sys, cfg.system, cfg.params, cfg.seed, analysis_properties(cfg.system));
      } else if (t.kind == "facts-regression") {
        auto sheet = expected_facts(cfg.system);
        std::vector<std::string> props;
        for (const auto& f : sheet.facts) props.push_back(f.property);
        recs = analyze_system(*sys, cfg.system, regression_params(cfg.system.kind), cfg.seed, props);
        for (const auto& f : sheet.facts) {
          regression_entry e{f.property, f.expected, "not computed", false, f.basis, f.anchor};
          for (const auto& r : recs)
            if (r.property == f.property) {
              e.observed = verdict_name(r.result);
              e.matched = positive(r.result) == f.expected;
            }
          rep.regression.push_back(e);
        }
      } else if (t.kind == "chain") {
        auto c = parse_chain_task(t, cfg);
        recs.push_back(std::visit([&](const auto& s) { return detail::run_chain_task(s, c, cfg.params, out.dumps, name); }, *sys));
      } else if (t.kind == "shadow") {
        auto st = parse_shadow_task(t, cfg);
        const auto* ts = std::get_if<toral_system<precise_real>>(&*sys);
        if (!ts) throw error(errc::not_shadowing_capable, "shadowing needs a toral system");
        recs.push_back(detail::run_shadow_task(*ts, st, cfg.params, cfg.seed, out.dumps, name));
      } else if (t.kind == "barycenter") {
        auto b = parse_barycenter_task(t, cfg);
        recs.push_back(std::visit([&](const auto& s) { return detail::run_barycenter_task(s, b, cfg.params); }, *sys));
      } else if (t.kind == "glue") {
        auto g = parse_glue_task(t, cfg);
        recs.push_back(std::visit([&](const auto& s) { return detail::run_glue_task(s, g, cfg.params); }, *sys));
      } else {
        throw error(errc::unknown_kind, "unknown task '" + t.kind + "'");
      }
      for (auto& r : recs) {
        r.task = name;
        rep.verdicts.push_back(std::move(r));
      }
    } catch (const error& e) {
      fail(name, e);
    }
  }
  return out;
}

// Output directory: TOPODYN_OUT_DIR when set, else the config's.
inline std::filesystem::path output_directory(const run_config& cfg) {
  if (const char* env = std::getenv("TOPODYN_OUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

inline std::filesystem::path emit_outputs(const run_result& res, const run_config& cfg, bool write_dumps) {
  const auto dir = output_directory(cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw error(errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
  auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    os << text;
    os.close();
    if (!os) throw error(errc::io_error, "cannot write " + p.string());
  };
  const auto report_path = dir / cfg.report_name;
  write(report_path, to_json(res.report).dump(2) + "\n");
  if (write_dumps)
    for (const auto& d : res.dumps) write(dir / d.name, d.content);
  return report_path;
}

}  // namespace topodyn
