#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"

namespace topodyn {

struct run_params {
  double mesh = 0.02;
  double delta = 0.04;
  double epsilon = 0.05;
  std::size_t horizon = 200;
  std::size_t caps = 10000;

  bool operator==(const run_params&) const = default;
};

// A task named by its kind, optionally labelled (`[barycenter:back]`), with
// raw string parameters validated against the system when the config is parsed.
struct task_spec {
  std::string kind;
  std::string label;
  std::map<std::string, std::string> params;

  std::string name() const { return label.empty() ? kind : kind + ":" + label; }
  bool operator==(const task_spec&) const = default;
};

struct run_config {
  system_spec system;
  std::uint64_t seed = 1;
  run_params params;
  bool delta_given = false;
  std::vector<task_spec> tasks;
  std::string output_dir = ".";
  std::string report_name = "report.json";

  bool operator==(const run_config&) const = default;
};

inline const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> k{"analyze", "chain", "shadow", "barycenter", "glue", "facts-regression"};
  return k;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && (s[i] == '[' || s[i] == '(')) ++depth;
    if (i < s.size() && (s[i] == ']' || s[i] == ')')) --depth;
    if (i == s.size() || (s[i] == sep && depth == 0)) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) return std::nullopt;
  return v;
}

struct rational {
  long long num = 0, den = 1;
  bool from_decimal = false;
};

// "a/b", an integer, or a plain decimal (kept as its exact decimal fraction).
inline std::optional<rational> parse_rational(std::string_view s) {
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto n = parse_number<long long>(trim(s.substr(0, slash)));
    auto d = parse_number<long long>(trim(s.substr(slash + 1)));
    if (!n || !d || *d == 0) return std::nullopt;
    long long g = std::gcd(*n, *d);
    long long sign = *d < 0 ? -1 : 1;
    return rational{sign * *n / g, sign * *d / g, false};
  }
  std::string t(s);
  bool neg = !t.empty() && t[0] == '-';
  if (neg) t.erase(0, 1);
  auto dot = t.find('.');
  std::string ip = dot == std::string::npos ? t : t.substr(0, dot);
  std::string fp = dot == std::string::npos ? "" : t.substr(dot + 1);
  if (ip.empty() && fp.empty()) return std::nullopt;
  if (fp.size() > 17 || ip.size() > 17) return std::nullopt;
  for (char c : ip + fp)
    if (c < '0' || c > '9') return std::nullopt;
  long long den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  long long num = (ip.empty() ? 0 : std::stoll(ip)) * den + (fp.empty() ? 0 : std::stoll(fp));
  if (neg) num = -num;
  long long g = std::gcd(num, den);
  if (g == 0) g = 1;
  return rational{num / g, den / g, !fp.empty()};
}

// [[a,b],[c,d]]
inline std::optional<std::vector<std::vector<long long>>> parse_matrix(std::string_view s) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') return std::nullopt;
  std::vector<std::vector<long long>> out;
  for (const auto& row : split(std::string_view(t).substr(1, t.size() - 2), ',')) {
    if (row.size() < 2 || row.front() != '[' || row.back() != ']') return std::nullopt;
    std::vector<long long> r;
    for (const auto& e : split(std::string_view(row).substr(1, row.size() - 2), ',')) {
      auto v = parse_number<long long>(e);
      if (!v) return std::nullopt;
      r.push_back(*v);
    }
    out.push_back(std::move(r));
  }
  if (out.empty()) return std::nullopt;
  return out;
}

// shortest text that reads back to the same double
inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace detail

// Reads "name" or "name(args)" into `spec`; parameters not in the argument
// keep their current values (they may also come from separate keys).
inline void parse_system_value(std::string_view text, system_spec& spec, std::size_t line) {
  std::string t = detail::trim(text);
  std::string name = t, arg;
  if (auto open = t.find('('); open != std::string::npos) {
    if (t.back() != ')') throw error(errc::parse_error, "line " + std::to_string(line) + ": unbalanced parentheses", line);
    name = detail::trim(std::string_view(t).substr(0, open));
    arg = detail::trim(std::string_view(t).substr(open + 1, t.size() - open - 2));
  }
  auto kind = kind_from_name(name);
  if (!kind) throw error(errc::unknown_kind, "unknown system kind '" + name + "'", line);
  spec.kind = *kind;
  if (arg.empty()) return;
  auto bad = [&] { return error(errc::parse_error, "line " + std::to_string(line) + ": bad argument '" + arg + "'", line); };
  switch (*kind) {
    case system_kind::full_shift: {
      auto v = detail::parse_number<int>(arg);
      if (!v) throw bad();
      spec.symbols = *v;
      break;
    }
    case system_kind::sft: {
      auto m = detail::parse_matrix(arg);
      if (!m) throw bad();
      spec.adjacency.clear();
      for (auto& r : *m) spec.adjacency.emplace_back(r.begin(), r.end());
      break;
    }
    case system_kind::toral: {
      auto m = detail::parse_matrix(arg);
      if (!m) throw bad();
      spec.matrix = *m;
      break;
    }
    case system_kind::rotation: {
      auto r = detail::parse_rational(arg);
      if (!r) throw bad();
      spec.alpha_num = r->num;
      spec.alpha_den = r->den;
      spec.alpha_from_float = r->from_decimal;
      break;
    }
    case system_kind::morse_smale_circle: {
      auto v = detail::parse_number<int>(arg);
      if (!v) throw bad();
      spec.k = *v;
      break;
    }
    case system_kind::cantor_identity: {
      auto v = detail::parse_number<int>(arg);
      if (!v) throw bad();
      spec.depth = *v;
      break;
    }
    case system_kind::ladder: {
      auto v = detail::parse_number<std::int64_t>(arg);
      if (!v) throw bad();
      spec.n_max = *v;
      break;
    }
    default:
      throw bad();
  }
}

// ---- points and task parameters ----

namespace detail {

inline std::vector<std::string> coordinate_tokens(std::string_view text) {
  std::string t(text);
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline rational require_rational(const std::string& tok) {
  auto r = parse_rational(tok);
  if (!r) {
    auto d = parse_number<double>(tok);
    if (!d) throw error(errc::parse_error, "not a number: '" + tok + "'");
    // exponent notation: fall back to the double's value at 1e-17 resolution
    return rational{static_cast<long long>(std::llround(*d * 1e17)), 100000000000000000LL, true};
  }
  return *r;
}

inline double rational_value(const rational& r) { return static_cast<double>(r.num) / static_cast<double>(r.den); }

}  // namespace detail

// "x y" or "x, y": fractions or decimals, each read exactly into the precise type.
inline std::vector<double> parse_coordinates(std::string_view text) {
  std::vector<double> out;
  for (const auto& tok : detail::coordinate_tokens(text)) out.push_back(detail::rational_value(detail::require_rational(tok)));
  if (out.empty()) throw error(errc::parse_error, "empty coordinate list");
  return out;
}

inline ep_point parse_system_point(const shift_system& sys, const std::string& text) { return parse_point(sys.sft(), text); }

inline torus_point<precise_real> parse_system_point(const toral_system<precise_real>& sys, const std::string& text) {
  auto toks = detail::coordinate_tokens(text);
  if (toks.size() != sys.dim())
    throw error(errc::param_out_of_range, "point '" + text + "' needs " + std::to_string(sys.dim()) + " coordinates");
  torus_point<precise_real> v(static_cast<Eigen::Index>(toks.size()));
  for (std::size_t i = 0; i < toks.size(); ++i) {
    auto r = detail::require_rational(toks[i]);
    v(static_cast<Eigen::Index>(i)) = precise_real(r.num) / precise_real(r.den);
  }
  return toral_auto<precise_real>::reduce(v);
}

// 0, 1, 1/n or (n-1)/n, written as exact fractions.
inline ladder_point parse_system_point(const ladder_system&, const std::string& text) {
  auto r = detail::require_rational(detail::trim(text));
  if (r.num == 0) return ladder_point::at_zero();
  if (r.num == r.den) return ladder_point::at_one();
  if (r.num == 1 && r.den >= 2) return ladder_point::orbit_point(2 - r.den);
  if (r.num == r.den - 1 && r.den >= 3) return ladder_point::orbit_point(r.den - 2);
  throw error(errc::param_out_of_range, "'" + text + "' is not a point of the ladder space");
}

inline double parse_system_point(const circle_map_system&, const std::string& text) {
  double x = detail::rational_value(detail::require_rational(detail::trim(text)));
  if (x < 0 || x >= 1) throw error(errc::param_out_of_range, "circle points lie in [0, 1)");
  return x;
}

inline double parse_system_point(const cantor_identity_system& sys, const std::string& text) {
  double x = detail::rational_value(detail::require_rational(detail::trim(text)));
  for (double p : sys.points())
    if (std::abs(p - x) < 1e-12) return p;
  throw error(errc::param_out_of_range, "'" + text + "' is not a point of the Cantor stage");
}

struct chain_task {
  std::vector<double> from, to;
  double delta = 0;
};

struct barycenter_task {
  std::string p, q;
  double epsilon = 0;
  std::int64_t n1 = 20, n2 = 20, n_cap = 0;
  double resolution = 1e-3;
};

struct glue_task {
  std::vector<std::pair<std::string, std::int64_t>> segments;
  double epsilon = 0;
};

struct shadow_task {
  std::string orbit_file;  // empty: generate
  std::size_t length = 200;
  std::size_t count = 1;
  double delta = 0;
};

namespace detail {

inline void allow_keys(const task_spec& t, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : t.params) {
    bool ok = false;
    for (const char* a : keys) ok |= k == a;
    if (!ok) throw error(errc::parse_error, "task [" + t.name() + "]: unknown parameter '" + k + "'");
  }
}

inline double task_number(const task_spec& t, const std::string& key, double fallback) {
  auto it = t.params.find(key);
  if (it == t.params.end()) return fallback;
  auto r = parse_rational(it->second);
  std::optional<double> v = r ? std::optional<double>(rational_value(*r)) : parse_number<double>(it->second);
  if (!v) throw error(errc::parse_error, "task [" + t.name() + "]: '" + key + "' is not a number");
  return *v;
}

inline std::int64_t task_count(const task_spec& t, const std::string& key, std::int64_t fallback) {
  auto it = t.params.find(key);
  if (it == t.params.end()) return fallback;
  auto v = parse_number<std::int64_t>(it->second);
  if (!v || *v < 0) throw error(errc::parse_error, "task [" + t.name() + "]: '" + key + "' is not a non-negative integer");
  return *v;
}

inline const std::string& task_text(const task_spec& t, const std::string& key) {
  auto it = t.params.find(key);
  if (it == t.params.end()) throw error(errc::parse_error, "task [" + t.name() + "]: missing '" + key + "'");
  return it->second;
}

inline void positive(const task_spec& t, const char* what, double v) {
  if (!(v > 0)) throw error(errc::param_out_of_range, "task [" + t.name() + "]: " + what + " must be positive");
}

}  // namespace detail

inline chain_task parse_chain_task(const task_spec& t, const run_config& cfg) {
  detail::allow_keys(t, {"from", "to", "delta"});
  chain_task c{parse_coordinates(detail::task_text(t, "from")), parse_coordinates(detail::task_text(t, "to")),
               detail::task_number(t, "delta", cfg.params.delta)};
  detail::positive(t, "delta", c.delta);
  return c;
}

inline barycenter_task parse_barycenter_task(const task_spec& t, const run_config& cfg) {
  detail::allow_keys(t, {"p", "q", "epsilon", "n1", "n2", "n_cap", "resolution"});
  barycenter_task b;
  b.p = detail::task_text(t, "p");
  b.q = detail::task_text(t, "q");
  b.epsilon = detail::task_number(t, "epsilon", cfg.params.epsilon);
  b.n1 = detail::task_count(t, "n1", 20);
  b.n2 = detail::task_count(t, "n2", 20);
  b.n_cap = detail::task_count(t, "n_cap", static_cast<std::int64_t>(cfg.params.caps));
  b.resolution = detail::task_number(t, "resolution", 1e-3);
  detail::positive(t, "epsilon", b.epsilon);
  detail::positive(t, "resolution", b.resolution);
  if (b.n1 < 1 || b.n2 < 1) throw error(errc::param_out_of_range, "task [" + t.name() + "]: n1 and n2 must be at least 1");
  return b;
}

// segments = x0 : n0 | x1 : n1 | ...
inline glue_task parse_glue_task(const task_spec& t, const run_config& cfg) {
  detail::allow_keys(t, {"segments", "epsilon"});
  glue_task g;
  g.epsilon = detail::task_number(t, "epsilon", cfg.params.epsilon);
  detail::positive(t, "epsilon", g.epsilon);
  for (const auto& part : detail::split(detail::task_text(t, "segments"), '|')) {
    auto colon = part.rfind(':');
    if (colon == std::string::npos) throw error(errc::parse_error, "task [" + t.name() + "]: segment '" + part + "' needs 'point : length'");
    auto n = detail::parse_number<std::int64_t>(detail::trim(std::string_view(part).substr(colon + 1)));
    if (!n || *n < 0) throw error(errc::parse_error, "task [" + t.name() + "]: bad segment length in '" + part + "'");
    g.segments.emplace_back(detail::trim(std::string_view(part).substr(0, colon)), *n);
  }
  if (g.segments.empty()) throw error(errc::param_out_of_range, "task [" + t.name() + "]: no segments");
  return g;
}

inline shadow_task parse_shadow_task(const task_spec& t, const run_config& cfg) {
  detail::allow_keys(t, {"orbit_file", "length", "count", "delta"});
  shadow_task s;
  if (auto it = t.params.find("orbit_file"); it != t.params.end()) s.orbit_file = it->second;
  s.length = static_cast<std::size_t>(detail::task_count(t, "length", 200));
  s.count = static_cast<std::size_t>(detail::task_count(t, "count", 1));
  s.delta = detail::task_number(t, "delta", 1e-4);
  detail::positive(t, "delta", s.delta);
  if (s.delta >= 0.25) throw error(errc::param_out_of_range, "task [" + t.name() + "]: delta must stay below 1/4");
  if (s.length < 1 || s.count < 1) throw error(errc::param_out_of_range, "task [" + t.name() + "]: length and count must be positive");
  (void)cfg;
  return s;
}

// Every task's parameters parsed against the constructed system.
inline void validate_tasks(const run_config& cfg) {
  if (cfg.tasks.empty()) return;
  const any_system sys = make_system(cfg.system);
  for (const auto& t : cfg.tasks) {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          constexpr bool is_shift = std::is_same_v<S, shift_system>;
          constexpr bool is_toral = std::is_same_v<S, toral_system<precise_real>>;
          if (t.kind == "analyze" || t.kind == "facts-regression") {
            detail::allow_keys(t, {});
          } else if (t.kind == "chain") {
            auto c = parse_chain_task(t, cfg);
            if constexpr (is_shift) {
              throw error(errc::invalid_argument, "task [" + t.name() + "]: chain search needs a grid-backed system");
            } else {
              std::size_t dim = 1;
              if constexpr (is_toral) dim = s.dim();
              if (c.from.size() != dim || c.to.size() != dim)
                throw error(errc::param_out_of_range, "task [" + t.name() + "]: endpoints need " + std::to_string(dim) + " coordinates");
            }
          } else if (t.kind == "shadow") {
            parse_shadow_task(t, cfg);
            if constexpr (!is_toral) throw error(errc::not_shadowing_capable, "task [" + t.name() + "]: shadowing needs a toral system");
          } else if (t.kind == "barycenter") {
            auto b = parse_barycenter_task(t, cfg);
            parse_system_point(s, b.p);
            parse_system_point(s, b.q);
          } else if (t.kind == "glue") {
            auto g = parse_glue_task(t, cfg);
            if constexpr (!is_shift && !is_toral) {
              throw error(errc::not_shadowing_capable, "task [" + t.name() + "]: gluing needs a shift or toral system");
            } else {
              for (const auto& [x, n] : g.segments) parse_system_point(s, x);
            }
          }
        },
        sys);
  }
}

// Flat `key = value` statements separated by newlines or ';'; `#` starts a
// comment; a bare `[kind]` or `[kind:label]` opens the parameter section of a
// task. `tasks = [a, b]` fixes the order; sections not listed are appended.
inline run_config parse_config(std::string_view text) {
  run_config cfg;
  bool have_system = false;
  std::optional<std::vector<std::string>> listed;
  std::vector<task_spec> sections;
  std::optional<std::size_t> current;  // index into sections
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto perr = [&](const std::string& m) { return error(errc::parse_error, "line " + std::to_string(line_no) + ": " + m, line_no); };
  auto range = [&](const std::string& m) { return error(errc::param_out_of_range, "line " + std::to_string(line_no) + ": " + m, line_no); };
  auto number = [&](const std::string& v) {
    auto d = detail::parse_number<double>(v);
    if (!d) throw perr("expected a number, got '" + v + "'");
    return *d;
  };
  auto count = [&](const std::string& v) {
    auto d = detail::parse_number<double>(v);
    if (!d || *d < 0 || *d != std::floor(*d) || *d > 9e15) throw perr("expected a non-negative integer, got '" + v + "'");
    return static_cast<std::uint64_t>(*d);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    for (const auto& stmt : detail::split(raw, ';')) {
      if (stmt.empty()) continue;
      const auto eq = stmt.find('=');
      if (eq == std::string::npos) {
        if (stmt.front() != '[' || stmt.back() != ']') throw perr("expected 'key = value' or '[task]'");
        std::string name = detail::trim(std::string_view(stmt).substr(1, stmt.size() - 2));
        task_spec t;
        auto colon = name.find(':');
        t.kind = detail::trim(std::string_view(name).substr(0, colon));
        if (colon != std::string::npos) t.label = detail::trim(std::string_view(name).substr(colon + 1));
        if (std::find(task_kinds().begin(), task_kinds().end(), t.kind) == task_kinds().end())
          throw error(errc::unknown_kind, "line " + std::to_string(line_no) + ": unknown task '" + t.kind + "'", line_no);
        for (auto& s : sections)
          if (s.name() == t.name()) throw perr("duplicate section [" + t.name() + "]");
        sections.push_back(t);
        current = sections.size() - 1;
        continue;
      }
      std::string key = detail::trim(std::string_view(stmt).substr(0, eq));
      std::string val = detail::trim(std::string_view(stmt).substr(eq + 1));
      if (key.empty()) throw perr("empty key");
      if (current) {
        auto& params = sections[*current].params;
        if (params.count(key)) throw perr("duplicate key '" + key + "'");
        params[key] = val;
        continue;
      }
      if (key == "system") {
        parse_system_value(val, cfg.system, line_no);
        have_system = true;
      } else if (key == "tasks") {
        std::string body = val;
        if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
        std::vector<std::string> names;
        for (auto& n : detail::split(body, ','))
          if (!n.empty()) names.push_back(n);
        listed = names;
      } else if (key == "seed") {
        cfg.seed = count(val);
      } else if (key == "mesh") {
        cfg.params.mesh = number(val);
      } else if (key == "delta") {
        cfg.params.delta = number(val);
        cfg.delta_given = true;
      } else if (key == "epsilon") {
        cfg.params.epsilon = number(val);
      } else if (key == "horizon") {
        cfg.params.horizon = count(val);
      } else if (key == "caps") {
        cfg.params.caps = count(val);
      } else if (key == "output_dir") {
        cfg.output_dir = val;
      } else if (key == "report") {
        cfg.report_name = val;
      } else if (key == "alpha") {
        auto r = detail::parse_rational(val);
        if (!r) throw perr("alpha must be a fraction a/b or a decimal");
        cfg.system.alpha_num = r->num;
        cfg.system.alpha_den = r->den;
        cfg.system.alpha_from_float = r->from_decimal;
      } else if (key == "k") {
        auto v = detail::parse_number<int>(val);
        if (!v) throw perr("k must be an integer");
        cfg.system.k = *v;
      } else if (key == "depth") {
        auto v = detail::parse_number<int>(val);
        if (!v) throw perr("depth must be an integer");
        cfg.system.depth = *v;
      } else if (key == "n_max") {
        auto v = detail::parse_number<std::int64_t>(val);
        if (!v) throw perr("n_max must be an integer");
        cfg.system.n_max = *v;
      } else if (key == "symbols") {
        auto v = detail::parse_number<int>(val);
        if (!v) throw perr("symbols must be an integer");
        cfg.system.symbols = *v;
      } else if (key == "matrix") {
        auto m = detail::parse_matrix(val);
        if (!m) throw perr("matrix must be a list of integer rows");
        if (cfg.system.kind == system_kind::sft) {
          cfg.system.adjacency.clear();
          for (auto& r : *m) cfg.system.adjacency.emplace_back(r.begin(), r.end());
        } else {
          cfg.system.matrix = *m;
        }
      } else {
        throw perr("unknown key '" + key + "'");
      }
    }
  }
  if (!have_system) throw error(errc::parse_error, "missing 'system'", 0);
  if (!cfg.delta_given) cfg.params.delta = 2 * cfg.params.mesh;
  if (!(cfg.params.mesh > 0) || cfg.params.mesh > 1) throw range("mesh must lie in (0, 1]");
  if (!(cfg.params.delta > 0)) throw range("delta must be positive");
  if (!(cfg.params.epsilon > 0) || cfg.params.epsilon > 1) throw range("epsilon must lie in (0, 1]");
  if (cfg.params.horizon < 1) throw range("horizon must be at least 1");
  if (cfg.params.caps < 1) throw range("caps must be at least 1");
  validate(cfg.system);

  if (listed) {
    for (const auto& n : *listed) {
      task_spec t;
      auto colon = n.find(':');
      t.kind = detail::trim(std::string_view(n).substr(0, colon));
      if (colon != std::string::npos) t.label = detail::trim(std::string_view(n).substr(colon + 1));
      if (std::find(task_kinds().begin(), task_kinds().end(), t.kind) == task_kinds().end())
        throw error(errc::unknown_kind, "unknown task '" + t.kind + "'");
      for (auto& s : sections)
        if (s.name() == t.name()) t.params = s.params;
      cfg.tasks.push_back(t);
    }
  }
  for (auto& s : sections) {
    bool present = false;
    for (auto& t : cfg.tasks) present |= t.name() == s.name();
    if (!present) cfg.tasks.push_back(s);
  }
  validate_tasks(cfg);
  return cfg;
}

// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const run_config& cfg) {
  std::ostringstream os;
  os << "system = " << cfg.system.id() << "\n";
  if (cfg.system.kind == system_kind::rotation && cfg.system.alpha_from_float) {
    // a decimal alpha keeps its flag: write it back as a decimal
    long long scale = 1;
    int digits = 0;
    while (scale % cfg.system.alpha_den != 0 && digits < 18) scale *= 10, ++digits;
    std::string num = std::to_string(cfg.system.alpha_num * (scale / cfg.system.alpha_den));
    while (static_cast<int>(num.size()) <= digits) num = "0" + num;
    os << "alpha = " << num.substr(0, num.size() - static_cast<std::size_t>(digits)) << "."
       << num.substr(num.size() - static_cast<std::size_t>(digits)) << "\n";
  }
  os << "seed = " << cfg.seed << "\n";
  os << "mesh = " << detail::format_double(cfg.params.mesh) << "\n";
  if (cfg.delta_given) os << "delta = " << detail::format_double(cfg.params.delta) << "\n";
  os << "epsilon = " << detail::format_double(cfg.params.epsilon) << "\n";
  os << "horizon = " << cfg.params.horizon << "\n";
  os << "caps = " << cfg.params.caps << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";
  os << "report = " << cfg.report_name << "\n";
  os << "tasks = [";
  for (std::size_t i = 0; i < cfg.tasks.size(); ++i) os << (i ? ", " : "") << cfg.tasks[i].name();
  os << "]\n";
  for (const auto& t : cfg.tasks) {
    if (t.params.empty()) continue;
    os << "\n[" << t.name() << "]\n";
    for (const auto& [k, v] : t.params) os << k << " = " << v << "\n";
  }
  return os.str();
}

}  // namespace topodyn
