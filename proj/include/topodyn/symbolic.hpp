#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace topodyn {

using word = std::vector<int>;
using bool_matrix = std::vector<std::vector<std::uint8_t>>;

namespace detail {

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline word primitive_root(const word& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return w;
}

// Rotate so that the result's element 0 is w[shift mod |w|].
inline word rotate_by(const word& w, std::int64_t shift) {
  word out(w.size());
  const auto n = static_cast<std::int64_t>(w.size());
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(floor_mod(i + shift, n))];
  return out;
}

inline bool_matrix bool_product(const bool_matrix& a, const bool_matrix& b) {
  const std::size_t n = a.size();
  bool_matrix c(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < n; ++j) c[i][j] |= b[k][j];
  return c;
}

inline bool all_positive(const bool_matrix& a) {
  for (auto& row : a)
    for (auto v : row)
      if (!v) return false;
  return true;
}

inline char symbol_char(int label) {
  if (label >= 0 && label < 10) return static_cast<char>('0' + label);
  if (label >= 10 && label < 36) return static_cast<char>('a' + label - 10);
  return '?';
}

inline int char_label(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

}  // namespace detail

// Shift of finite type over symbols 0..s-1. `first_label` only affects how
// symbols are printed and parsed (Example 3 of the paper numbers them 1..4).
class sft_system {
 public:
  static sft_system build(const std::vector<std::vector<int>>& matrix, int first_label = 0) {
    const std::size_t s = matrix.size();
    if (s == 0) throw error(errc::non_square, "empty matrix");
    for (auto& row : matrix)
      if (row.size() != s) throw error(errc::non_square, "adjacency matrix must be square");
    sft_system out;
    out.adj_.assign(s, std::vector<std::uint8_t>(s, 0));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        int v = matrix[i][j];
        if (v != 0 && v != 1) throw error(errc::invalid_argument, "adjacency entries must be 0 or 1");
        out.adj_[i][j] = static_cast<std::uint8_t>(v);
      }
    for (std::size_t i = 0; i < s; ++i) {
      bool row = false, col = false;
      for (std::size_t j = 0; j < s; ++j) {
        row |= out.adj_[i][j] != 0;
        col |= out.adj_[j][i] != 0;
      }
      if (!row || !col)
        throw error(errc::empty_row_or_column, "symbol " + std::to_string(i) + " has an empty row or column", i);
    }
    out.first_label_ = first_label;
    return out;
  }

  std::size_t alphabet_size() const { return adj_.size(); }
  int first_label() const { return first_label_; }
  const bool_matrix& adjacency() const { return adj_; }
  bool allowed(int a, int b) const { return adj_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0; }

  digraph graph() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::size_t i = 0; i < adj_.size(); ++i)
      for (std::size_t j = 0; j < adj_.size(); ++j)
        if (adj_[i][j]) e.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    return digraph(adj_.size(), std::move(e));
  }

  bool operator==(const sft_system&) const = default;

 private:
  bool_matrix adj_;
  int first_label_ = 0;
};

// Eventually periodic bi-infinite sequence, always held in canonical form:
// positions < offset repeat `left` (position offset-1 is left.back()),
// positions offset .. offset+|core|-1 are `core`, and from offset+|core| on the
// sequence repeats `right`. Purely periodic points have empty core, left == right
// and offset 0.
class ep_point {
 public:
  ep_point() = default;

  ep_point(word left, word core, word right, std::int64_t offset, std::size_t alphabet)
      : left_(std::move(left)), core_(std::move(core)), right_(std::move(right)), offset_(offset), alphabet_(alphabet) {
    if (left_.empty() || right_.empty()) throw error(errc::invalid_argument, "periodic tails must be nonempty");
    for (const word* w : {&left_, &core_, &right_})
      for (int c : *w)
        if (c < 0 || static_cast<std::size_t>(c) >= alphabet_)
          throw error(errc::alphabet_mismatch, "symbol outside alphabet");
    canonicalize();
  }

  static ep_point periodic(const word& w, std::size_t alphabet) { return ep_point(w, {}, w, 0, alphabet); }

  int at(std::int64_t k) const {
    const std::int64_t start = right_start();
    if (k >= start) return right_[static_cast<std::size_t>(detail::floor_mod(k - start, static_cast<std::int64_t>(right_.size())))];
    if (k >= offset_) return core_[static_cast<std::size_t>(k - offset_)];
    return left_[static_cast<std::size_t>(detail::floor_mod(k - offset_, static_cast<std::int64_t>(left_.size())))];
  }

  const word& left() const { return left_; }
  const word& core() const { return core_; }
  const word& right() const { return right_; }
  std::int64_t offset() const { return offset_; }
  std::int64_t right_start() const { return offset_ + static_cast<std::int64_t>(core_.size()); }
  std::size_t alphabet_size() const { return alphabet_; }
  bool is_periodic() const { return core_.empty() && left_ == right_; }

  // Period of a periodic point (length of the primitive word), 0 otherwise.
  std::size_t period() const { return is_periodic() ? right_.size() : 0; }

  // Word w with w[i] = x_{from + i}, i < n.
  word window(std::int64_t from, std::size_t n) const {
    word w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = at(from + static_cast<std::int64_t>(i));
    return w;
  }

  bool operator==(const ep_point& o) const {
    return alphabet_ == o.alphabet_ && offset_ == o.offset_ && left_ == o.left_ && core_ == o.core_ && right_ == o.right_;
  }

 private:
  void canonicalize() {
    left_ = detail::primitive_root(left_);
    right_ = detail::primitive_root(right_);
    while (!core_.empty() && core_.back() == right_.back()) {
      right_ = detail::rotate_by(right_, -1);
      core_.pop_back();
    }
    while (!core_.empty() && core_.front() == left_.front()) {
      left_ = detail::rotate_by(left_, 1);
      core_.erase(core_.begin());
      ++offset_;
    }
    if (!core_.empty()) return;
    if (left_ == right_) {
      right_ = detail::rotate_by(right_, -offset_);
      left_ = right_;
      offset_ = 0;
      return;
    }
    // Move the junction as far left as the right tail reaches. Terminates because
    // the two primitive words differ as periodic sequences.
    while (left_.back() == right_.back()) {
      left_ = detail::rotate_by(left_, -1);
      right_ = detail::rotate_by(right_, -1);
      --offset_;
    }
  }

  word left_, core_, right_;
  std::int64_t offset_ = 0;
  std::size_t alphabet_ = 0;
};

// ---- admissibility and text form ----

inline bool admissible(const sft_system& sft, const ep_point& x) {
  if (x.alphabet_size() != sft.alphabet_size()) return false;
  const std::int64_t lo = x.offset() - static_cast<std::int64_t>(x.left().size()) - 1;
  const std::int64_t hi = x.right_start() + static_cast<std::int64_t>(x.right().size()) + 1;
  for (std::int64_t k = lo; k < hi; ++k)
    if (!sft.allowed(x.at(k), x.at(k + 1))) return false;
  return true;
}

inline void require_admissible(const sft_system& sft, const ep_point& x) {
  if (x.alphabet_size() != sft.alphabet_size()) throw error(errc::alphabet_mismatch, "point built for another alphabet");
  if (!admissible(sft, x)) throw error(errc::not_admissible, "point contains a forbidden transition");
}

inline std::string word_to_string(const word& w, int first_label) {
  std::string s;
  for (int c : w) s.push_back(detail::symbol_char(c + first_label));
  return s;
}

// `(left)^inf.core.(right)^inf`, followed by `@offset` when the first core
// letter (first right letter for an empty core) is not at position 0.
inline std::string to_string(const ep_point& x, int first_label = 0) {
  std::string out = "(" + word_to_string(x.left(), first_label) + ")^inf." + word_to_string(x.core(), first_label) + ".(" +
                    word_to_string(x.right(), first_label) + ")^inf";
  if (x.offset() != 0) out += "@" + std::to_string(x.offset());
  return out;
}

inline word parse_word(std::string_view s, int first_label, std::size_t alphabet) {
  word w;
  for (char c : s) {
    int label = detail::char_label(c);
    int sym = label - first_label;
    if (label < 0 || sym < 0 || static_cast<std::size_t>(sym) >= alphabet)
      throw error(errc::alphabet_mismatch, std::string("symbol '") + c + "' not in alphabet");
    w.push_back(sym);
  }
  return w;
}

// Accepts `(L)^inf.C.(R)^inf`, optionally followed by `@offset`, and the
// shorthand `(W)^inf` for a periodic point with W starting at position 0.
inline ep_point parse_point(const sft_system& sft, std::string_view text) {
  auto fail = [&] { return error(errc::parse_error, "malformed point '" + std::string(text) + "'"); };
  std::int64_t offset = 0;
  std::string_view body = text;
  if (auto at = body.find('@'); at != std::string_view::npos) {
    try {
      offset = std::stoll(std::string(body.substr(at + 1)));
    } catch (...) {
      throw fail();
    }
    body = body.substr(0, at);
  }
  auto take_tail = [&](std::string_view& s) -> std::string_view {
    if (s.empty() || s.front() != '(') throw fail();
    auto close = s.find(")^inf");
    if (close == std::string_view::npos) throw fail();
    auto inner = s.substr(1, close - 1);
    s.remove_prefix(close + 5);
    return inner;
  };
  const std::size_t s = sft.alphabet_size();
  const int fl = sft.first_label();
  auto left = take_tail(body);
  if (body.empty()) {
    auto x = ep_point(parse_word(left, fl, s), {}, parse_word(left, fl, s), 0, s);
    if (offset != 0) throw fail();
    require_admissible(sft, x);
    return x;
  }
  if (body.front() != '.') throw fail();
  body.remove_prefix(1);
  auto dot = body.find('.');
  if (dot == std::string_view::npos) throw fail();
  auto core = body.substr(0, dot);
  body.remove_prefix(dot + 1);
  auto right = take_tail(body);
  if (!body.empty()) throw fail();
  ep_point x(parse_word(left, fl, s), parse_word(core, fl, s), parse_word(right, fl, s), offset, s);
  require_admissible(sft, x);
  return x;
}

// ---- structure ----

struct sft_structure_result {
  bool irreducible = false;
  std::optional<std::uint64_t> period;
  bool mixing = false;
  bool transitive = false;
};

inline sft_structure_result sft_structure(const sft_system& sft) {
  sft_structure_result r;
  auto g = sft.graph();
  r.irreducible = strongly_connected(g);
  if (r.irreducible) r.period = cycle_gcd(g);
  r.mixing = r.irreducible && r.period == 1u;
  r.transitive = r.irreducible;
  return r;
}

inline std::optional<std::size_t> mixing_time(const sft_system& sft) {
  if (!sft_structure(sft).mixing) return std::nullopt;
  const std::size_t s = sft.alphabet_size();
  const std::size_t wielandt = s * s - 2 * s + 2;
  bool_matrix power = sft.adjacency();
  for (std::size_t n = 1; n <= wielandt; ++n) {
    if (detail::all_positive(power)) return n;
    power = detail::bool_product(power, sft.adjacency());
  }
  return std::nullopt;  // unreachable for primitive matrices
}

// ---- metric and shift ----

inline void require_same_alphabet(const ep_point& x, const ep_point& y) {
  if (x.alphabet_size() != y.alphabet_size()) throw error(errc::alphabet_mismatch, "points over different alphabets");
}

// Smallest |k| with x_k != y_k; nullopt when x == y.
inline std::optional<std::int64_t> first_difference(const ep_point& x, const ep_point& y) {
  require_same_alphabet(x, y);
  if (x == y) return std::nullopt;
  for (std::int64_t k = 0;; ++k)
    if (x.at(k) != y.at(k) || x.at(-k) != y.at(-k)) return k;
}

inline double sft_distance(const ep_point& x, const ep_point& y) {
  auto k = first_difference(x, y);
  return k ? std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(*k, 1000))) : 0.0;
}

inline ep_point shift_apply(const ep_point& x, std::int64_t n) {
  return ep_point(x.left(), x.core(), x.right(), x.offset() - n, x.alphabet_size());
}

// ---- periodic points ----

inline std::vector<ep_point> enumerate_periodic(const sft_system& sft, std::size_t max_period) {
  std::vector<ep_point> out;
  const int s = static_cast<int>(sft.alphabet_size());
  for (std::size_t p = 1; p <= max_period; ++p) {
    word w(p, 0);
    // depth-first enumeration of admissible words of length p closing into a loop
    std::vector<int> next(p, 0);
    std::size_t depth = 0;
    next[0] = 0;
    while (true) {
      if (next[depth] >= s) {
        if (depth == 0) break;
        --depth;
        ++next[depth];
        continue;
      }
      int c = next[depth];
      if (depth > 0 && !sft.allowed(w[depth - 1], c)) {
        ++next[depth];
        continue;
      }
      w[depth] = c;
      if (depth + 1 == p) {
        if (sft.allowed(c, w[0]) && detail::primitive_root(w).size() == p) out.push_back(ep_point::periodic(w, sft.alphabet_size()));
        ++next[depth];
      } else {
        ++depth;
        next[depth] = 0;
      }
    }
  }
  return out;
}

// ---- asymptotic relations ----

enum class direction { forward, backward };

// Smallest K >= 0 with x_k = y_k for all k >= K (forward) or k <= -K (backward).
inline std::optional<std::int64_t> asymptotic_related(const ep_point& x, const ep_point& y, direction dir) {
  require_same_alphabet(x, y);
  const bool fwd = dir == direction::forward;
  auto xs = [&](std::int64_t k) { return fwd ? x.at(k) : x.at(-k); };
  auto ys = [&](std::int64_t k) { return fwd ? y.at(k) : y.at(-k); };
  // Beyond M both sequences are periodic with periods px, py.
  std::int64_t M;
  std::int64_t px, py;
  if (fwd) {
    M = std::max(x.right_start(), y.right_start());
    px = static_cast<std::int64_t>(x.right().size());
    py = static_cast<std::int64_t>(y.right().size());
  } else {
    M = std::max(-x.offset() + 1, -y.offset() + 1);
    px = static_cast<std::int64_t>(x.left().size());
    py = static_cast<std::int64_t>(y.left().size());
  }
  const std::int64_t l = std::lcm(px, py);
  for (std::int64_t k = M; k < M + l; ++k)
    if (xs(k) != ys(k)) return std::nullopt;
  for (std::int64_t k = M - 1; k >= 0; --k)
    if (xs(k) != ys(k)) return k + 1;
  return 0;
}

// ---- exact-length reachability ----

// Interior symbols of the lexicographically smallest admissible path with
// exactly `length` edges from `from` to `to`.
inline std::optional<word> bridge_word(const sft_system& sft, int from, int to, std::size_t length) {
  const std::size_t s = sft.alphabet_size();
  // can[t][v]: `to` reachable from v in exactly t steps
  std::vector<std::vector<std::uint8_t>> can(length + 1, std::vector<std::uint8_t>(s, 0));
  can[0][static_cast<std::size_t>(to)] = 1;
  for (std::size_t t = 1; t <= length; ++t)
    for (std::size_t v = 0; v < s; ++v)
      for (std::size_t w = 0; w < s; ++w)
        if (sft.allowed(static_cast<int>(v), static_cast<int>(w)) && can[t - 1][w]) {
          can[t][v] = 1;
          break;
        }
  if (!can[length][static_cast<std::size_t>(from)]) return std::nullopt;
  word out;
  int cur = from;
  for (std::size_t i = 1; i < length; ++i) {
    for (int w = 0; w < static_cast<int>(s); ++w)
      if (sft.allowed(cur, w) && can[length - i][static_cast<std::size_t>(w)]) {
        cur = w;
        break;
      }
    out.push_back(cur);
  }
  return out;
}

// ---- su-intersection ----

struct su_search_result {
  std::optional<ep_point> z;
  std::size_t residue_modulus = 0;   // lcm(left period of b, right period of a)
  std::size_t states_searched = 0;   // bound on the (symbol, residue) product graph
};

// z agreeing with b far to the left and with a far to the right. Breadth-first
// search over (symbol, position mod P): a walk leaving b's left tail and landing
// on the periodic continuation of a's right tail is exactly a witness, and every
// witness produces such a walk, so exhaustion certifies emptiness.
inline su_search_result su_intersect_search(const sft_system& sft, const ep_point& a, const ep_point& b) {
  require_same_alphabet(a, b);
  require_admissible(sft, a);
  require_admissible(sft, b);
  su_search_result res;
  const auto pa = static_cast<std::int64_t>(a.right().size());
  const auto pb = static_cast<std::int64_t>(b.left().size());
  const std::int64_t P = std::lcm(pa, pb);
  const std::size_t s = sft.alphabet_size();
  res.residue_modulus = static_cast<std::size_t>(P);
  res.states_searched = s * static_cast<std::size_t>(P);
  if (a == b) {
    res.z = a;
    return res;
  }
  auto ext_a = [&](std::int64_t k) {
    return a.right()[static_cast<std::size_t>(detail::floor_mod(k - a.right_start(), pa))];
  };
  const std::size_t n_states = s * static_cast<std::size_t>(P);
  auto id = [&](int sym, std::int64_t r) { return static_cast<std::size_t>(sym) * static_cast<std::size_t>(P) + static_cast<std::size_t>(r); };
  std::vector<std::int64_t> parent(n_states, -2);  // -2 unseen, -1 source
  std::vector<std::int64_t> source_pos(n_states, 0);
  std::vector<std::size_t> queue;
  for (std::int64_t j = b.offset() - P; j < b.offset(); ++j) {
    auto st = id(b.at(j), detail::floor_mod(j, P));
    if (parent[st] != -2) continue;
    parent[st] = -1;
    source_pos[st] = j;
    queue.push_back(st);
  }
  std::optional<std::size_t> hit;
  for (std::size_t h = 0; h < queue.size() && !hit; ++h) {
    auto st = queue[h];
    int sym = static_cast<int>(st / static_cast<std::size_t>(P));
    auto r = static_cast<std::int64_t>(st % static_cast<std::size_t>(P));
    if (ext_a(r) == sym) {
      hit = st;
      break;
    }
    for (int w = 0; w < static_cast<int>(s); ++w) {
      if (!sft.allowed(sym, w)) continue;
      auto nx = id(w, (r + 1) % P);
      if (parent[nx] != -2) continue;
      parent[nx] = static_cast<std::int64_t>(st);
      queue.push_back(nx);
    }
  }
  if (!hit) return res;
  // Recover the walk w_0 .. w_t; w_0 sits at the source position j.
  std::vector<std::size_t> states{*hit};
  while (parent[states.back()] >= 0) states.push_back(static_cast<std::size_t>(parent[states.back()]));
  std::reverse(states.begin(), states.end());
  const std::int64_t j = source_pos[states.front()];
  const auto t = static_cast<std::int64_t>(states.size()) - 1;
  word core;
  for (std::size_t i = 1; i < states.size(); ++i) core.push_back(static_cast<int>(states[i] / static_cast<std::size_t>(P)));
  // z = b on (-inf, j], walk on [j+1, j+t], continuation of a afterwards
  word left = b.window(j + 1 - pb, static_cast<std::size_t>(pb));
  word right(static_cast<std::size_t>(pa));
  for (std::int64_t m = 0; m < pa; ++m) right[static_cast<std::size_t>(m)] = ext_a(j + t + 1 + m);
  res.z = ep_point(left, core, right, j + 1, s);
  return res;
}

inline std::optional<ep_point> su_intersect(const sft_system& sft, const ep_point& a, const ep_point& b) {
  return su_intersect_search(sft, a, b).z;
}

// ---- specification ----

struct orbit_segment_spec {
  ep_point base;
  std::int64_t start = 0;
  std::int64_t end = 0;
};

namespace detail {

// Point agreeing with every segment's base on [start, end]: the first base on
// everything up to its end, the last base on everything from its start, and
// consecutive segments joined by the smallest bridge word of exact length.
inline ep_point trace_segments(const sft_system& sft, const std::vector<orbit_segment_spec>& segments) {
  if (segments.empty()) throw error(errc::invalid_argument, "no segments");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].start > segments[i].end) throw error(errc::invalid_argument, "segment with start > end", i);
    require_admissible(sft, segments[i].base);
    if (i > 0 && segments[i].start <= segments[i - 1].end)
      throw error(errc::gap_too_small, "segments " + std::to_string(i - 1) + " and " + std::to_string(i) + " overlap", i);
  }
  const auto& first = segments.front();
  const auto& last = segments.back();
  const std::int64_t lo = std::min(first.start, first.base.offset());
  const std::int64_t hi = std::max(last.end + 1, last.base.right_start());
  word core;
  core.reserve(static_cast<std::size_t>(hi - lo));
  for (std::int64_t k = lo; k <= first.end; ++k) core.push_back(first.base.at(k));
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const auto& prev = segments[i - 1];
    const auto& cur = segments[i];
    auto bridge = bridge_word(sft, prev.base.at(prev.end), cur.base.at(cur.start), static_cast<std::size_t>(cur.start - prev.end));
    if (!bridge) throw error(errc::chain_not_found, "no admissible bridge between segments " + std::to_string(i - 1) + " and " + std::to_string(i), i);
    core.insert(core.end(), bridge->begin(), bridge->end());
    for (std::int64_t k = cur.start; k <= cur.end; ++k) core.push_back(cur.base.at(k));
  }
  for (std::int64_t k = last.end + 1; k < hi; ++k) core.push_back(last.base.at(k));
  const auto pl = static_cast<std::int64_t>(first.base.left().size());
  word left = first.base.window(lo - pl, static_cast<std::size_t>(pl));
  word right = last.base.window(hi, last.base.right().size());
  ep_point z(left, core, right, lo, sft.alphabet_size());
  require_admissible(sft, z);
  return z;
}

}  // namespace detail

// Specification tracing on a mixing shift: gaps of at least the mixing time
// always admit a bridge, so the traced point agrees exactly with every segment.
inline ep_point specification_trace(const sft_system& sft, const std::vector<orbit_segment_spec>& segments, std::int64_t gap) {
  auto mt = mixing_time(sft);
  if (!mt) throw error(errc::not_mixing, "specification tracing needs a mixing shift");
  if (segments.empty()) throw error(errc::invalid_argument, "no segments");
  if (gap < static_cast<std::int64_t>(*mt)) throw error(errc::gap_too_small, "gap below mixing time " + std::to_string(*mt));
  for (std::size_t i = 1; i < segments.size(); ++i)
    if (segments[i].start - segments[i - 1].end < gap)
      throw error(errc::gap_too_small, "segments " + std::to_string(i - 1) + " and " + std::to_string(i) + " closer than gap", i);
  return detail::trace_segments(sft, segments);
}

}  // namespace topodyn
