#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace topodyn {

// A homeomorphism of a compact metric space with an exact (or high-precision)
// evaluator for T and its inverse.
template <class S>
concept dynamical_system = requires(const S& s, const typename S::point_type& x) {
  { s.apply(x) } -> std::convertible_to<typename S::point_type>;
  { s.apply_inverse(x) } -> std::convertible_to<typename S::point_type>;
  { s.distance(x, x) } -> std::convertible_to<double>;
};

template <class S>
using point_t = typename S::point_type;

// T^n(x) for any integer n; systems may provide a faster `iterate`.
template <dynamical_system S>
point_t<S> iterate(const S& sys, point_t<S> x, std::int64_t n) {
  if constexpr (requires { sys.iterate(x, n); }) {
    return sys.iterate(x, n);
  } else {
    for (; n > 0; --n) x = sys.apply(x);
    for (; n < 0; ++n) x = sys.apply_inverse(x);
    return x;
  }
}

// x, T(x), ..., T^n(x)  (or backwards for negative n)
template <dynamical_system S>
std::vector<point_t<S>> orbit(const S& sys, point_t<S> x, std::int64_t n) {
  std::vector<point_t<S>> out{x};
  for (std::int64_t i = 0; i < n; ++i) out.push_back(x = sys.apply(x));
  for (std::int64_t i = 0; i > n; --i) out.push_back(x = sys.apply_inverse(x));
  return out;
}

// Systems that decide the asymptotic relations exactly or at a stated scale.
template <class S>
concept has_relation_oracle = dynamical_system<S> && requires(const S& s, const point_t<S>& x) {
  { s.stable_related(x, x) } -> std::convertible_to<bool>;
  { s.unstable_related(x, x) } -> std::convertible_to<bool>;
};

// δ-chain: d(T(nodes[i]), nodes[i+1]) < delta for every step, checked when built.
template <class Point>
struct chain {
  std::vector<Point> nodes;
  std::vector<double> step_errors;
  double delta = 0;

  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

template <dynamical_system S>
chain<point_t<S>> make_chain(const S& sys, std::vector<point_t<S>> nodes, double delta) {
  if (nodes.empty()) throw error(errc::invalid_argument, "a chain needs at least one node");
  chain<point_t<S>> c;
  c.delta = delta;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double e = sys.distance(sys.apply(nodes[i]), nodes[i + 1]);
    if (!(e < delta))
      throw error(errc::chain_step_violated,
                  "step " + std::to_string(i) + " has error " + std::to_string(e) + " >= " + std::to_string(delta), i);
    c.step_errors.push_back(e);
  }
  c.nodes = std::move(nodes);
  return c;
}

// Independent re-check of a chain against the system.
template <dynamical_system S>
bool chain_valid(const S& sys, const chain<point_t<S>>& c) {
  if (c.nodes.empty()) return false;
  for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
    if (!(sys.distance(sys.apply(c.nodes[i]), c.nodes[i + 1]) < c.delta)) return false;
  return true;
}

}  // namespace topodyn
