#pragma once

// Exact brute-force oracles: maximum independent set with loops, maximum
// t-town families, minimum op(F) at a fixed family size, and maximum
// single-distance point sets. All searches are deterministic: vertex orders
// and tie-breaks depend only on the input.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "etlab/errors.hpp"
#include "etlab/graph.hpp"
#include "etlab/modring.hpp"
#include "etlab/spectral.hpp"

namespace etlab {

inline constexpr std::uint64_t kDefaultSearchBudget = 100'000'000;

struct SearchResult {
  std::int64_t optimum = 0;
  std::vector<std::size_t> vertices;   // witness as vertex ids, when the search ran on a graph
  std::optional<ModFamily> family;     // witness as vectors, when there is an ambient (k, n)
  std::uint64_t nodes = 0;
  bool exhaustive = true;
  std::string method;
};

inline nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json j = {{"optimum", r.optimum}, {"exhaustive", r.exhaustive}, {"nodes", r.nodes}, {"method", r.method}};
  if (r.family)
    j["witness"] = family_to_json(*r.family);
  else
    j["witness"] = r.vertices;
  return j;
}

namespace detail {

/// Maximum clique by branch and bound with greedy colouring bounds.
class MaxClique {
 public:
  MaxClique(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {}

  /// `order` is the initial candidate order; the first clique found at the
  /// optimum size is kept.
  void run(const std::vector<std::size_t>& order) {
    current_.clear();
    expand(order);
  }

  const std::vector<std::size_t>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }

 private:
  void colour_sort(const std::vector<std::size_t>& cand, std::vector<std::size_t>& out, std::vector<std::size_t>& colour) {
    std::vector<std::vector<std::size_t>> classes;
    for (auto v : cand) {
      std::size_t c = 0;
      for (; c < classes.size(); ++c) {
        bool clash = false;
        for (auto u : classes[c])
          if (g_.neighbours(v).test(u)) {
            clash = true;
            break;
          }
        if (!clash) break;
      }
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(v);
    }
    out.clear();
    colour.clear();
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (auto v : classes[c]) {
        out.push_back(v);
        colour.push_back(c + 1);
      }
  }

  void expand(const std::vector<std::size_t>& cand) {
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (cand.empty()) {
      if (current_.size() > best_.size()) best_ = current_;
      return;
    }
    std::vector<std::size_t> order, colour;
    colour_sort(cand, order, colour);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current_.size() + colour[i] <= best_.size()) return;
      const auto v = order[i];
      std::vector<std::size_t> next;
      for (std::size_t j = 0; j < i; ++j)
        if (g_.neighbours(v).test(order[j])) next.push_back(order[j]);
      current_.push_back(v);
      expand(next);
      current_.pop_back();
      if (aborted_) return;
    }
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
};

/// Candidate order: descending degree in `g`, ties by vertex id.
inline std::vector<std::size_t> degree_order(const Graph& g, const std::vector<std::size_t>& vs) {
  auto order = vs;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return g.degree(a) > g.degree(b); });
  return order;
}

inline SearchResult clique_search(const Graph& compat, const std::vector<std::size_t>& vertices, std::uint64_t budget,
                                  std::string method) {
  MaxClique solver(compat, budget);
  solver.run(degree_order(compat, vertices));
  SearchResult r;
  r.vertices = solver.best();
  std::sort(r.vertices.begin(), r.vertices.end());
  r.optimum = static_cast<std::int64_t>(r.vertices.size());
  r.nodes = solver.nodes();
  r.exhaustive = !solver.aborted();
  r.method = std::move(method);
  return r;
}

}  // namespace detail

/// Maximum independent set of `g`; looped vertices are never candidates.
inline SearchResult max_independent_set(const Graph& g, std::uint64_t budget = kDefaultSearchBudget) {
  std::vector<std::size_t> loop_free;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (!g.has_loop(v)) loop_free.push_back(v);

  // Complement restricted to loop-free vertices, in local ids.
  Graph compat(loop_free.size());
  for (std::size_t i = 0; i < loop_free.size(); ++i)
    for (std::size_t j = i + 1; j < loop_free.size(); ++j)
      if (!g.adjacent(loop_free[i], loop_free[j])) compat.add_edge(i, j);
  std::vector<std::size_t> local(loop_free.size());
  std::iota(local.begin(), local.end(), std::size_t{0});

  auto r = detail::clique_search(compat, local, budget, "branch-and-bound");
  for (auto& v : r.vertices) v = loop_free[v];
  std::sort(r.vertices.begin(), r.vertices.end());
  return r;
}

/// Independent-set oracle on an orthogonality graph, with the witness as vectors.
inline SearchResult max_independent_set(const OrthogonalityGraph& g, std::uint64_t budget = kDefaultSearchBudget,
                                        std::uint64_t cap = kDefaultDenseCap) {
  auto r = max_independent_set(g.explicit_graph(cap), budget);
  std::vector<ResidueVector> vs;
  for (auto v : r.vertices) vs.push_back(g.vertex(v));
  r.family = ModFamily(g.k(), g.n(), std::move(vs));
  return r;
}

/// Largest subgroup of (Z/kZ)^n on which every scalar product vanishes. For
/// t = 0 the span of any town is again a town, so this equals the maximum
/// 0-town size; it is an independent route to the plain search.
inline SearchResult max_town_subgroup(std::int64_t k, int n, std::uint64_t budget = kDefaultSearchBudget,
                                      std::uint64_t cap = kDefaultDenseCap) {
  auto total = space_size(k, n);
  if (!total || *total > cap) throw ResourceError("max_town_subgroup: k^n exceeds cap");
  const auto size = static_cast<std::size_t>(*total);
  std::vector<ResidueVector> vs(size);
  for (std::size_t i = 0; i < size; ++i) vs[i] = decode(i, k, n);

  std::vector<std::size_t> isotropic;
  for (std::size_t i = 1; i < size; ++i)
    if (dot(vs[i], vs[i], k) == 0) isotropic.push_back(i);

  auto add_index = [&](std::size_t a, std::size_t b) {
    ResidueVector w(static_cast<std::size_t>(n));
    for (std::size_t c = 0; c < w.size(); ++c) w[c] = mod(vs[a][c] + vs[b][c], k);
    return static_cast<std::size_t>(encode(w, k));
  };

  SearchResult best;
  best.method = "subgroup";
  VertexSet zero(size);
  zero.set(0);
  best.optimum = 1;
  best.vertices = {0};

  std::set<std::vector<std::size_t>> seen;
  std::uint64_t nodes = 0;
  bool aborted = false;

  // Each subgroup is expanded once; its subtree depends only on the subgroup.
  auto dfs = [&](auto&& self, const VertexSet& group, std::size_t group_size,
                 const std::vector<std::size_t>& generators) -> void {
    if (aborted) return;
    if (++nodes > budget) {
      aborted = true;
      return;
    }
    if (static_cast<std::int64_t>(group_size) > best.optimum) {
      best.optimum = static_cast<std::int64_t>(group_size);
      best.vertices = group.members();
    }
    std::vector<std::size_t> cand;
    for (auto v : isotropic) {
      if (group.test(v)) continue;
      bool orth = true;
      for (auto gidx : generators)
        if (dot(vs[v], vs[gidx], k) != 0) {
          orth = false;
          break;
        }
      if (orth) cand.push_back(v);
    }
    // A larger subgroup lies inside group + candidates and its order is a multiple of group_size.
    const std::size_t reach = (group_size + cand.size()) / group_size * group_size;
    if (static_cast<std::int64_t>(reach) <= best.optimum) return;
    const std::vector<std::size_t> members = group.members();
    for (auto v : cand) {
      VertexSet next = group;
      std::size_t next_size = group_size;
      // Add the cosets group + c v until the multiples of v cycle back into the group.
      std::size_t step = v;
      while (!next.test(step)) {
        for (auto m : members) {
          auto w = add_index(m, step);
          if (!next.test(w)) {
            next.set(w);
            ++next_size;
          }
        }
        step = add_index(step, v);
      }
      if (!seen.insert(next.members()).second) continue;
      auto gens = generators;
      gens.push_back(v);
      self(self, next, next_size, gens);
      if (aborted) return;
    }
  };
  dfs(dfs, zero, 1, {});

  best.nodes = nodes;
  best.exhaustive = !aborted;
  std::vector<ResidueVector> fam;
  for (auto v : best.vertices) fam.push_back(vs[v]);
  best.family = ModFamily(k, n, std::move(fam));
  return best;
}

/// Maximum |F| in (Z/kZ)^n with every ordered product (self-products included) equal to t.
inline SearchResult max_town(std::int64_t k, int n, Residue t, std::uint64_t budget = kDefaultSearchBudget,
                             std::uint64_t cap = kDefaultDenseCap) {
  auto r = max_independent_set(OrthogonalityGraph(k, n, t), budget, cap);
  r.method = "independent-set";
  return r;
}

/// op(F) for subsets given as bitmasks: unordered distinct pairs with odd intersection.
inline std::int64_t op_of_masks(const std::vector<std::uint32_t>& masks) {
  std::int64_t op = 0;
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j) op += std::popcount(masks[i] & masks[j]) & 1;
  return op;
}

/// Minimum op(F) over eventown-type families: exactly `size` distinct
/// even-size subsets of [n]. Odd-size members would make op(F) = 0 possible
/// beyond 2^{n/2} (singletons are pairwise disjoint), so they are excluded.
/// Families are enumerated in increasing bitmask order; a partial family is
/// dropped when a coordinate permutation maps it to a lexicographically
/// smaller sorted prefix, so only orbit-minimal families are completed.
inline SearchResult min_op_at_size(int n, std::int64_t size, std::uint64_t budget = kDefaultSearchBudget) {
  if (n < 1 || n > 16) throw ParameterError("min_op_at_size: n must lie in [1, 16]");
  const std::uint32_t universe = 1U << n;
  std::vector<std::uint32_t> even;
  for (std::uint32_t m = 0; m < universe; ++m)
    if (std::popcount(m) % 2 == 0) even.push_back(m);
  if (size < 0 || size > static_cast<std::int64_t>(even.size()))
    throw ParameterError("min_op_at_size: size must lie in [0, 2^(n-1)]");
  const auto candidates = static_cast<std::uint32_t>(even.size());

  std::vector<std::vector<std::uint32_t>> perm_maps;
  if (n <= 6) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool identity = std::is_sorted(perm.begin(), perm.end());
      if (identity) continue;
      std::vector<std::uint32_t> map(universe);
      for (std::uint32_t m = 0; m < universe; ++m) {
        std::uint32_t img = 0;
        for (int b = 0; b < n; ++b)
          if (m >> b & 1U) img |= 1U << perm[static_cast<std::size_t>(b)];
        map[m] = img;
      }
      perm_maps.push_back(std::move(map));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  SearchResult best;
  best.method = perm_maps.empty() ? "branch-and-bound" : "branch-and-bound+isomorph-rejection";
  std::int64_t best_op = std::numeric_limits<std::int64_t>::max();
  std::vector<std::uint32_t> best_family;
  std::vector<std::uint32_t> chosen;
  std::uint64_t nodes = 0;
  bool aborted = false;
  std::vector<std::uint32_t> image;

  auto prefix_is_canonical = [&] {
    for (const auto& map : perm_maps) {
      image.clear();
      for (auto m : chosen) image.push_back(map[m]);
      std::sort(image.begin(), image.end());
      if (std::lexicographical_compare(image.begin(), image.end(), chosen.begin(), chosen.end())) return false;
    }
    return true;
  };

  auto dfs = [&](auto&& self, std::uint32_t next, std::int64_t partial) -> void {
    if (aborted) return;
    if (++nodes > budget) {
      aborted = true;
      return;
    }
    if (static_cast<std::int64_t>(chosen.size()) == size) {
      if (partial < best_op) {
        best_op = partial;
        best_family = chosen;
      }
      return;
    }
    const auto need = static_cast<std::uint32_t>(size - static_cast<std::int64_t>(chosen.size()));
    for (std::uint32_t idx = next; idx + need <= candidates; ++idx) {
      const std::uint32_t m = even[idx];
      std::int64_t added = 0;
      for (auto c : chosen) added += std::popcount(c & m) & 1;
      if (partial + added >= best_op) continue;
      chosen.push_back(m);
      if (prefix_is_canonical()) self(self, idx + 1, partial + added);
      chosen.pop_back();
      if (aborted) return;
      if (best_op == 0) return;
    }
  };
  dfs(dfs, 0, 0);

  best.nodes = nodes;
  best.exhaustive = !aborted;
  best.optimum = best_family.size() == static_cast<std::size_t>(size) ? best_op : -1;
  std::vector<ResidueVector> fam;
  for (auto m : best_family) {
    ResidueVector v(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) v[static_cast<std::size_t>(b)] = (m >> b) & 1U;
    fam.push_back(std::move(v));
  }
  best.family = ModFamily(2, n, std::move(fam));
  return best;
}

/// Squared "distance" sum (x_i - y_i)^2 mod k.
inline Residue distance(std::span<const Residue> x, std::span<const Residue> y, std::int64_t k) {
  if (x.size() != y.size()) throw DimensionError("distance: length mismatch");
  __int128 acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const __int128 d = x[i] - y[i];
    acc += d * d;
  }
  return mod(static_cast<std::int64_t>(acc % k), k);
}

/// Distances realized between distinct points of E.
inline std::set<Residue> distance_set(const ModFamily& points) {
  std::set<Residue> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) out.insert(distance(points[i], points[j], points.k()));
  return out;
}

/// Maximum |E| with E containing the origin and at most one distance value.
/// For each candidate distance d, the other points lie on the sphere |x|^2 = d
/// and must be pairwise at distance d: a clique problem per d.
inline SearchResult max_single_distance_set(std::int64_t k, int n, std::uint64_t budget = kDefaultSearchBudget,
                                            std::uint64_t cap = kDefaultDenseCap) {
  if (!is_prime(k) || k == 2) throw ParameterError("max_single_distance_set: k must be an odd prime");
  auto total = space_size(k, n);
  if (!total || *total > cap) throw ResourceError("max_single_distance_set: k^n exceeds cap");
  const auto size = static_cast<std::size_t>(*total);
  const ResidueVector origin(static_cast<std::size_t>(n), 0);

  SearchResult best;
  best.method = "sphere-clique";
  best.optimum = 1;
  best.vertices = {0};
  std::uint64_t nodes = 0;
  bool exhaustive = true;

  for (Residue d = 0; d < k; ++d) {
    std::vector<std::size_t> sphere;
    std::vector<ResidueVector> pts;
    for (std::size_t i = 1; i < size; ++i) {
      auto v = decode(i, k, n);
      if (distance(v, origin, k) == d) {
        sphere.push_back(i);
        pts.push_back(std::move(v));
      }
    }
    Graph compat(sphere.size());
    for (std::size_t a = 0; a < sphere.size(); ++a)
      for (std::size_t b = a + 1; b < sphere.size(); ++b)
        if (distance(pts[a], pts[b], k) == d) compat.add_edge(a, b);
    std::vector<std::size_t> local(sphere.size());
    std::iota(local.begin(), local.end(), std::size_t{0});
    auto r = detail::clique_search(compat, local, budget > nodes ? budget - nodes : 0, "sphere-clique");
    nodes += r.nodes;
    exhaustive = exhaustive && r.exhaustive;
    if (r.optimum + 1 > best.optimum) {
      best.optimum = r.optimum + 1;
      best.vertices = {0};
      for (auto v : r.vertices) best.vertices.push_back(sphere[v]);
    }
  }
  best.nodes = nodes;
  best.exhaustive = exhaustive;
  std::vector<ResidueVector> fam;
  for (auto v : best.vertices) fam.push_back(decode(v, k, n));
  best.family = ModFamily(k, n, std::move(fam));
  return best;
}

}  // namespace etlab
