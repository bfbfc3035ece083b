#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "systems.hpp"

namespace topodyn {

enum class system_kind {
  example3_sft,
  full_shift,
  golden_mean_sft,
  sft,
  ladder,
  cat_map,
  toral,
  rotation,
  morse_smale_circle,
  cantor_identity,
};

inline const char* kind_name(system_kind k) {
  switch (k) {
    case system_kind::example3_sft: return "example3_sft";
    case system_kind::full_shift: return "full_shift";
    case system_kind::golden_mean_sft: return "golden_mean_sft";
    case system_kind::sft: return "sft";
    case system_kind::ladder: return "ladder";
    case system_kind::cat_map: return "cat_map";
    case system_kind::toral: return "toral";
    case system_kind::rotation: return "rotation";
    case system_kind::morse_smale_circle: return "morse_smale_circle";
    case system_kind::cantor_identity: return "cantor_identity";
  }
  return "unknown";
}

inline std::optional<system_kind> kind_from_name(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(system_kind::cantor_identity); ++i) {
    auto k = static_cast<system_kind>(i);
    if (s == kind_name(k)) return k;
  }
  return std::nullopt;
}

// Only the fields relevant to `kind` are read.
struct system_spec {
  system_kind kind = system_kind::cat_map;
  int symbols = 2;                              // full_shift
  std::vector<std::vector<int>> adjacency;      // sft
  int_matrix matrix;                            // toral
  long long alpha_num = 0, alpha_den = 1;       // rotation
  bool alpha_from_float = false;                // alpha given as a decimal, kept as its exact rational value
  int k = 1;                                    // morse_smale_circle
  int depth = 7;                                // cantor_identity
  std::int64_t n_max = 64;                      // ladder

  bool operator==(const system_spec&) const = default;

  std::string id() const {
    auto mat = [](const auto& m) {
      std::string s = "[";
      for (std::size_t i = 0; i < m.size(); ++i) {
        s += i ? ",[" : "[";
        for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? "," : "") + std::to_string(m[i][j]);
        s += "]";
      }
      return s + "]";
    };
    std::string name = kind_name(kind);
    switch (kind) {
      case system_kind::full_shift: return name + "(" + std::to_string(symbols) + ")";
      case system_kind::sft: return name + "(" + mat(adjacency) + ")";
      case system_kind::toral: return name + "(" + mat(matrix) + ")";
      case system_kind::rotation: return name + "(" + std::to_string(alpha_num) + "/" + std::to_string(alpha_den) + ")";
      case system_kind::morse_smale_circle: return name + "(" + std::to_string(k) + ")";
      case system_kind::cantor_identity: return name + "(" + std::to_string(depth) + ")";
      case system_kind::ladder: return n_max == 64 ? name : name + "(" + std::to_string(n_max) + ")";
      default: return name;
    }
  }
};

inline std::vector<std::vector<int>> example3_matrix() { return {{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}}; }
inline int_matrix cat_matrix() { return {{2, 1}, {1, 1}}; }

// Range checks; structural problems of matrices surface from make_system.
inline void validate(const system_spec& s) {
  auto bad = [](const std::string& m) { throw error(errc::param_out_of_range, m); };
  switch (s.kind) {
    case system_kind::full_shift:
      if (s.symbols < 1 || s.symbols > 62) bad("full_shift needs 1..62 symbols");
      break;
    case system_kind::rotation:
      if (s.alpha_den <= 0 || s.alpha_num < 0 || s.alpha_num >= s.alpha_den) bad("rotation alpha must lie in [0, 1)");
      break;
    case system_kind::morse_smale_circle:
      if (s.k < 1 || s.k > 1000) bad("morse_smale_circle k must be a positive integer (<= 1000)");
      break;
    case system_kind::cantor_identity:
      if (s.depth < 1 || s.depth > 20) bad("cantor_identity depth must lie in 1..20");
      break;
    case system_kind::ladder:
      if (s.n_max < 3 || s.n_max > 1'000'000) bad("ladder n_max must lie in 3..1e6");
      break;
    default:
      break;
  }
}

using any_system = std::variant<shift_system, toral_system<precise_real>, ladder_system, circle_map_system, cantor_identity_system>;

inline any_system make_system(const system_spec& s) {
  try {
    validate(s);
    switch (s.kind) {
      case system_kind::example3_sft:
        return shift_system(sft_system::build(example3_matrix(), 1), "example3_sft");
      case system_kind::full_shift:
        return shift_system(
            sft_system::build(std::vector<std::vector<int>>(static_cast<std::size_t>(s.symbols), std::vector<int>(static_cast<std::size_t>(s.symbols), 1))),
            s.id());
      case system_kind::golden_mean_sft:
        return shift_system(sft_system::build({{1, 1}, {1, 0}}), "golden_mean_sft");
      case system_kind::sft:
        return shift_system(sft_system::build(s.adjacency), s.id());
      case system_kind::cat_map:
        return toral_system<precise_real>(toral_auto<precise_real>::build(cat_matrix()), "cat_map");
      case system_kind::toral:
        return toral_system<precise_real>(toral_auto<precise_real>::build(s.matrix), s.id());
      case system_kind::ladder:
        return ladder_system(s.n_max);
      case system_kind::rotation:
        return circle_map_system::make_rotation(s.alpha_num, s.alpha_den);
      case system_kind::morse_smale_circle:
        return circle_map_system::make_morse_smale(s.k);
      case system_kind::cantor_identity:
        return cantor_identity_system(s.depth);
    }
  } catch (const error& e) {
    if (e.code() == errc::param_out_of_range) throw;
    throw error(errc::invalid_spec, s.id() + ": " + e.what(), e.index());
  }
  throw error(errc::invalid_spec, "unhandled kind");
}

// ---- expected property profiles ----

struct fact {
  std::string property;
  bool expected = false;
  std::string basis;   // "stated" when the example asserts it, "classical", or "derived" (computed here)
  std::string anchor;  // where the claim comes from, in plain words
};

struct fact_sheet {
  std::string system;
  std::vector<fact> facts;

  const fact* find(std::string_view property) const {
    for (const auto& f : facts)
      if (f.property == property) return &f;
    return nullptr;
  }
};

inline const std::vector<std::string>& fact_properties() {
  static const std::vector<std::string> names{"shadowing",       "transitive",        "mixing",
                                              "chain_transitive", "barycenter_on_Per", "su_intersecting_on_Per",
                                              "su_intersecting_on_X", "expansive"};
  return names;
}

inline fact_sheet expected_facts(const system_spec& s) {
  validate(s);
  fact_sheet out{s.id(), {}};
  auto add = [&](std::string p, bool v, std::string basis, std::string anchor) {
    out.facts.push_back({std::move(p), v, std::move(basis), std::move(anchor)});
  };
  switch (s.kind) {
    case system_kind::example3_sft:
      add("shadowing", true, "stated", "example3: shifts of finite type shadow");
      add("transitive", true, "stated", "example3: the 4x4 matrix is irreducible");
      add("mixing", false, "stated", "example3: the shift is not topologically mixing");
      add("chain_transitive", true, "classical", "irreducible SFT is chain transitive");
      add("barycenter_on_Per", true, "stated", "example3: barycenter holds on periodic points");
      add("su_intersecting_on_Per", false, "derived", "example3: period-2 points of opposite parity");
      add("su_intersecting_on_X", false, "stated", "example3: su-intersection fails on the whole shift");
      add("expansive", true, "classical", "every SFT is expansive with constant 1/2");
      break;
    case system_kind::full_shift:
    case system_kind::golden_mean_sft:
      add("shadowing", true, "classical", "shifts of finite type shadow");
      add("transitive", true, "classical", "irreducible adjacency matrix");
      add("mixing", true, "classical", "aperiodic adjacency matrix");
      add("chain_transitive", true, "classical", "irreducible SFT is chain transitive");
      add("barycenter_on_Per", true, "classical", "mixing SFT has specification");
      add("su_intersecting_on_Per", true, "classical", "mixing SFT: any two points are su-connected");
      add("su_intersecting_on_X", true, "classical", "mixing SFT: any two points are su-connected");
      add("expansive", true, "classical", "every SFT is expansive with constant 1/2");
      break;
    case system_kind::sft:
      break;
    case system_kind::cat_map:
    case system_kind::toral:
      add("shadowing", true, "classical", "hyperbolic toral automorphisms are Anosov");
      add("transitive", true, "classical", "hyperbolic toral automorphisms are transitive");
      add("mixing", true, "classical", "hyperbolic toral automorphisms are mixing");
      add("chain_transitive", true, "classical", "transitive Anosov maps are chain transitive");
      add("barycenter_on_Per", true, "classical", "transitive Anosov maps have the barycenter property");
      add("su_intersecting_on_Per", true, "classical", "stable and unstable leaves are dense lines");
      add("su_intersecting_on_X", true, "classical", "stable and unstable leaves are dense lines");
      add("expansive", true, "classical", "Anosov maps are expansive");
      break;
    case system_kind::ladder:
      add("shadowing", true, "stated", "ladder example: shadowing holds");
      add("transitive", true, "stated", "ladder example: topologically transitive");
      add("mixing", false, "derived", "ladder: the isolated point 1/2 returns to itself only at time 0");
      add("chain_transitive", false, "derived", "ladder: points near 1/2 are spaced wider than small delta, no chain from 1 back to 0");
      add("barycenter_on_Per", false, "stated", "ladder example: barycenter fails on the fixed points");
      add("su_intersecting_on_Per", false, "derived", "ladder: W^s(0) = {0} misses W^u(1) = {1}");
      break;
    case system_kind::rotation:
      add("shadowing", false, "stated", "irrational rotation: no shadowing");
      add("transitive", true, "classical", "irrational rotation has dense orbits (rational proxy at mesh)");
      add("mixing", false, "classical", "rotations are isometries");
      add("chain_transitive", true, "stated", "irrational rotation: chain recurrent set is the circle");
      add("expansive", false, "classical", "isometries are not expansive");
      break;
    case system_kind::morse_smale_circle:
      add("transitive", false, "classical", "north-south dynamics has no dense orbit");
      add("mixing", false, "classical", "north-south dynamics has no dense orbit");
      add("chain_transitive", false, "classical", "chain recurrent set is the finite set of fixed points");
      add("barycenter_on_Per", false, "stated", "Morse-Smale example: barycenter fails");
      add("su_intersecting_on_Per", false, "derived", "W^s(repeller) and W^u(attractor) are single points");
      break;
    case system_kind::cantor_identity:
      add("shadowing", true, "stated", "identity shadows iff the space is totally disconnected");
      add("transitive", false, "classical", "identity on more than one point");
      add("mixing", false, "classical", "identity on more than one point");
      add("chain_transitive", false, "classical", "the Cantor set is not connected");
      add("barycenter_on_Per", false, "derived", "identity: an orbit cannot be near two distinct points");
      add("su_intersecting_on_X", false, "stated", "distal systems fail su-intersection");
      add("expansive", false, "classical", "identity on an infinite space");
      break;
  }
  return out;
}

}  // namespace topodyn
