#include "malnorm/stallings.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace malnorm {

namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  // Keeps a as the representative.
  void unite(std::int32_t a, std::int32_t b) { parent[find(b)] = find(a); }
};

struct RawEdge {
  std::int32_t u;
  int g;
  std::int32_t v;
};

void require_same_rank(int a, int b) {
  if (a != b)
    throw std::invalid_argument("rank mismatch: " + std::to_string(a) +
                                " vs " + std::to_string(b));
}

}  // namespace

SubgroupGraph SubgroupGraph::fold(int rank,
                                  std::initializer_list<Word> generators) {
  return fold(rank, std::span<const Word>(generators.begin(),
                                          generators.size()));
}

SubgroupGraph SubgroupGraph::fold(int rank,
                                  std::span<const Word> generators) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  std::vector<RawEdge> edges;
  std::int32_t next = 1;  // 0 is the basepoint
  for (const Word& w : generators) {
    require_same_rank(w.rank(), rank);
    if (w.empty()) continue;
    std::int32_t cur = 0;
    for (std::size_t i = 0; i < w.length(); ++i) {
      const std::int32_t tgt = (i + 1 == w.length()) ? 0 : next++;
      const std::int32_t letter = w.letter(i);
      if (letter > 0)
        edges.push_back({cur, letter, tgt});
      else
        edges.push_back({tgt, -letter, cur});
      cur = tgt;
    }
  }

  // Fold: repeatedly identify targets of same-labelled edges at a vertex
  // (and sources dually) until the edge set is deterministic both ways.
  UnionFind uf(next);
  for (bool merged = true; merged;) {
    merged = false;
    std::unordered_map<std::int64_t, std::int32_t> out, in;
    out.reserve(edges.size() * 2);
    in.reserve(edges.size() * 2);
    for (const RawEdge& e : edges) {
      const std::int32_t u = uf.find(e.u);
      const std::int32_t v = uf.find(e.v);
      const std::int64_t uk = static_cast<std::int64_t>(u) * rank + e.g - 1;
      const std::int64_t vk = static_cast<std::int64_t>(v) * rank + e.g - 1;
      if (auto [it, fresh] = out.try_emplace(uk, v); !fresh) {
        if (uf.find(it->second) != v) {
          uf.unite(uf.find(it->second), v);
          merged = true;
          break;
        }
        continue;  // duplicate edge
      }
      if (auto [it, fresh] = in.try_emplace(vk, u); !fresh) {
        if (uf.find(it->second) != u) {
          uf.unite(uf.find(it->second), u);
          merged = true;
          break;
        }
      }
    }
  }

  // Compact representatives, basepoint first.
  std::vector<std::int32_t> id(next, -1);
  const std::int32_t base_rep = uf.find(0);
  id[base_rep] = 0;
  std::int32_t count = 1;
  for (std::int32_t v = 0; v < next; ++v) {
    const std::int32_t r = uf.find(v);
    if (id[r] == -1) id[r] = count++;
  }
  SubgroupGraph g(rank, static_cast<std::size_t>(count));
  for (const RawEdge& e : edges) {
    const std::int32_t u = id[uf.find(e.u)];
    const std::int32_t v = id[uf.find(e.v)];
    g.fwd(u, e.g) = v;
    g.bwd(v, e.g) = u;
  }
  g.normalize();
  return g;
}

SubgroupGraph SubgroupGraph::from_edges(
    int rank, std::size_t vertices, std::size_t basepoint,
    std::span<const std::tuple<std::size_t, int, std::size_t>> edges) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (basepoint >= vertices)
    throw std::invalid_argument("basepoint out of range");
  SubgroupGraph g(rank, vertices);
  for (const auto& [u, gen, v] : edges) {
    if (u >= vertices || v >= vertices || gen < 1 || gen > rank)
      throw std::invalid_argument("edge out of range");
    if (g.fwd(u, gen) != -1 || g.bwd(v, gen) != -1)
      throw std::invalid_argument("edge list is not folded");
    g.fwd(u, gen) = static_cast<std::int32_t>(v);
    g.bwd(v, gen) = static_cast<std::int32_t>(u);
  }
  if (basepoint != 0) {  // swap so the basepoint is vertex 0
    for (std::size_t v = 0; v < vertices; ++v)
      for (int gen = 1; gen <= rank; ++gen) {
        for (std::int32_t* slot : {&g.fwd(v, gen), &g.bwd(v, gen)}) {
          if (*slot == static_cast<std::int32_t>(basepoint))
            *slot = 0;
          else if (*slot == 0)
            *slot = static_cast<std::int32_t>(basepoint);
        }
      }
    for (int gen = 1; gen <= rank; ++gen) {
      std::swap(g.fwd(0, gen), g.fwd(basepoint, gen));
      std::swap(g.bwd(0, gen), g.bwd(basepoint, gen));
    }
  }
  g.normalize();
  return g;
}

void SubgroupGraph::normalize() {
  // Trim to the based core: repeatedly delete non-basepoint vertices
  // incident to at most one edge-end.
  std::vector<int> degree(nv_, 0);
  for (std::size_t v = 0; v < nv_; ++v)
    for (int g = 1; g <= rank_; ++g) {
      if (fwd(v, g) != -1) ++degree[v];
      if (bwd(v, g) != -1) ++degree[v];
    }
  std::deque<std::size_t> queue;
  std::vector<bool> dead(nv_, false);
  for (std::size_t v = 1; v < nv_; ++v)
    if (degree[v] <= 1) queue.push_back(v);
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (dead[v] || degree[v] > 1) continue;
    dead[v] = true;
    for (int g = 1; g <= rank_; ++g) {
      if (const std::int32_t t = fwd(v, g); t != -1) {
        fwd(v, g) = -1;
        bwd(t, g) = -1;
        if (--degree[t], --degree[v]; t != 0 && !dead[t] && degree[t] <= 1)
          queue.push_back(t);
      }
      if (const std::int32_t s = bwd(v, g); s != -1) {
        bwd(v, g) = -1;
        fwd(s, g) = -1;
        if (--degree[s], --degree[v]; s != 0 && !dead[s] && degree[s] <= 1)
          queue.push_back(s);
      }
    }
  }

  // Canonical renumbering: BFS from the basepoint, per vertex exploring
  // x_1 out, x_1 in, x_2 out, x_2 in, ...
  std::vector<std::int32_t> order(nv_, -1);
  std::vector<std::size_t> bfs{0};
  order[0] = 0;
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    const std::size_t v = bfs[head];
    for (int g = 1; g <= rank_; ++g)
      for (const std::int32_t t : {fwd(v, g), bwd(v, g)})
        if (t != -1 && order[t] == -1) {
          order[t] = static_cast<std::int32_t>(bfs.size());
          bfs.push_back(t);
        }
  }
  for (std::size_t v = 0; v < nv_; ++v)
    if (!dead[v] && order[v] == -1)
      throw std::invalid_argument("graph is not connected");

  const std::size_t n = bfs.size();
  std::vector<std::int32_t> nf(n * rank_, -1), nb(n * rank_, -1);
  for (std::size_t v = 0; v < nv_; ++v) {
    if (order[v] == -1) continue;
    for (int g = 1; g <= rank_; ++g) {
      if (const std::int32_t t = fwd(v, g); t != -1)
        nf[order[v] * rank_ + g - 1] = order[t];
      if (const std::int32_t s = bwd(v, g); s != -1)
        nb[order[v] * rank_ + g - 1] = order[s];
    }
  }
  nv_ = n;
  fwd_ = std::move(nf);
  bwd_ = std::move(nb);
}

std::size_t SubgroupGraph::edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(fwd_.begin(), fwd_.end(),
                    [](std::int32_t t) { return t != -1; }));
}

std::optional<std::size_t> SubgroupGraph::step(std::size_t v,
                                               std::int32_t letter) const {
  const std::int32_t t = letter > 0 ? fwd(v, letter) : bwd(v, -letter);
  if (t == -1) return std::nullopt;
  return static_cast<std::size_t>(t);
}

std::optional<std::size_t> SubgroupGraph::trace(std::size_t v,
                                                const Word& w) const {
  require_same_rank(w.rank(), rank_);
  for (const std::int32_t letter : w.letters()) {
    const auto next = step(v, letter);
    if (!next) return std::nullopt;
    v = *next;
  }
  return v;
}

bool SubgroupGraph::contains(const Word& w) const {
  return trace(basepoint(), w) == basepoint();
}

std::optional<std::size_t> SubgroupGraph::finite_index() const {
  const bool complete =
      std::none_of(fwd_.begin(), fwd_.end(),
                   [](std::int32_t t) { return t == -1; });
  if (!complete) return std::nullopt;
  return nv_;
}

namespace {

// Shortlex BFS spanning tree data shared by basis(), express() and
// path_from_base(). Canonical numbering makes parents trivially computable:
// the tree edge into v is the first edge from a smaller vertex reaching v.
struct SpanningTree {
  std::vector<std::int32_t> parent;         // parent vertex, -1 at base
  std::vector<std::int32_t> parent_letter;  // signed letter parent -> v
  std::vector<bool> tree_fwd;               // flat (u, g) slots on the tree
  std::vector<std::int32_t> basis_id;       // 1-based id per non-tree slot
  std::size_t basis_count = 0;
};

SpanningTree make_tree(const SubgroupGraph& g) {
  const int rank = g.rank();
  const std::size_t n = g.vertex_count();
  SpanningTree t;
  t.parent.assign(n, -1);
  t.parent_letter.assign(n, 0);
  t.tree_fwd.assign(n * rank, false);
  t.basis_id.assign(n * rank, 0);
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::size_t v = 0; v < n; ++v) {
    for (int gen = 1; gen <= rank; ++gen) {
      for (const std::int32_t letter : {gen, -gen}) {
        const auto to = g.step(v, letter);
        if (to && !seen[*to]) {
          seen[*to] = true;
          t.parent[*to] = static_cast<std::int32_t>(v);
          t.parent_letter[*to] = letter;
          const std::size_t u = letter > 0 ? v : *to;
          t.tree_fwd[u * rank + std::abs(letter) - 1] = true;
        }
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    for (int gen = 1; gen <= rank; ++gen) {
      const std::size_t slot = v * rank + gen - 1;
      if (g.step(v, gen) && !t.tree_fwd[slot])
        t.basis_id[slot] = static_cast<std::int32_t>(++t.basis_count);
    }
  return t;
}

Word tree_path(const SubgroupGraph& g, const SpanningTree& t,
               std::size_t v) {
  std::vector<std::int32_t> letters;
  for (std::size_t cur = v; t.parent[cur] != -1;
       cur = static_cast<std::size_t>(t.parent[cur]))
    letters.push_back(t.parent_letter[cur]);
  std::reverse(letters.begin(), letters.end());
  return Word::from_reduced(g.rank(), std::move(letters));
}

}  // namespace

Word SubgroupGraph::path_from_base(std::size_t v) const {
  return tree_path(*this, make_tree(*this), v);
}

std::vector<Word> SubgroupGraph::basis() const {
  const SpanningTree t = make_tree(*this);
  std::vector<Word> paths(nv_);
  for (std::size_t v = 0; v < nv_; ++v) paths[v] = tree_path(*this, t, v);
  std::vector<Word> out;
  out.reserve(t.basis_count);
  for (std::size_t v = 0; v < nv_; ++v)
    for (int g = 1; g <= rank_; ++g) {
      const std::size_t slot = v * rank_ + g - 1;
      if (t.basis_id[slot] == 0) continue;
      const auto to = static_cast<std::size_t>(fwd(v, g));
      Word gen = Word::from_reduced(rank_, {g});
      out.push_back(multiply(paths[v], multiply(gen, invert(paths[to]))));
    }
  return out;
}

std::optional<std::vector<std::int32_t>> SubgroupGraph::express(
    const Word& w) const {
  const SpanningTree t = make_tree(*this);
  std::vector<std::int32_t> out;
  std::size_t cur = basepoint();
  for (const std::int32_t letter : w.letters()) {
    const auto next = step(cur, letter);
    if (!next) return std::nullopt;
    const std::size_t u = letter > 0 ? cur : *next;
    const std::size_t slot = u * rank_ + std::abs(letter) - 1;
    if (const std::int32_t id = t.basis_id[slot]; id != 0)
      out.push_back(letter > 0 ? id : -id);
    cur = *next;
  }
  if (cur != basepoint()) return std::nullopt;
  return out;
}

bool SubgroupGraph::reads_path(const Word& w) const {
  for (std::size_t v = 0; v < nv_; ++v)
    if (trace(v, w)) return true;
  return false;
}

bool SubgroupGraph::conjugate_into(const Word& w) const {
  if (w.empty()) throw hypothesis_error("conjugate_into: trivial word");
  const Word core = cyclic_reduce(w).core.word();
  for (std::size_t v = 0; v < nv_; ++v)
    if (trace(v, core) == v) return true;
  return false;
}

std::optional<std::size_t> SubgroupGraph::power_conjugate_into(
    const Word& w) const {
  if (w.empty())
    throw hypothesis_error("power_conjugate_into: trivial word");
  const Word core = cyclic_reduce(w).core.word();
  // sigma(v) = v . core is a partial injection; qualifying powers are the
  // cycle lengths of its functional graph.
  std::vector<std::optional<std::size_t>> sigma(nv_);
  for (std::size_t v = 0; v < nv_; ++v) sigma[v] = trace(v, core);

  std::optional<std::size_t> best;
  std::vector<int> state(nv_, 0);  // 0 unvisited, 2 done
  std::vector<std::size_t> walk;
  for (std::size_t start = 0; start < nv_; ++start) {
    if (state[start] != 0) continue;
    walk.clear();
    std::vector<std::size_t> pos(nv_, SIZE_MAX);
    std::size_t v = start;
    while (state[v] == 0 && pos[v] == SIZE_MAX) {
      pos[v] = walk.size();
      walk.push_back(v);
      const auto next = sigma[v];
      if (!next) break;
      v = *next;
    }
    if (pos[v] != SIZE_MAX && state[v] == 0 && sigma[walk.back()]) {
      const std::size_t cycle = walk.size() - pos[v];
      if (!best || cycle < *best) best = cycle;
    }
    for (const std::size_t u : walk) state[u] = 2;
  }
  return best;
}

std::string SubgroupGraph::to_text() const {
  if (rank_ > 26)
    throw std::invalid_argument("text export limited to rank <= 26");
  std::ostringstream os;
  os << "basepoint v0\n";
  for (std::size_t v = 0; v < nv_; ++v)
    for (int g = 1; g <= rank_; ++g)
      if (const std::int32_t t = fwd(v, g); t != -1)
        os << 'v' << v << " --" << static_cast<char>('a' + g - 1) << "--> v"
           << t << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Fiber product

namespace {

struct ProductView {
  const SubgroupGraph& a;
  const SubgroupGraph& b;
  std::size_t nb;

  std::size_t pair_index(std::size_t i, std::size_t j) const {
    return i * nb + j;
  }
  std::pair<std::size_t, std::size_t> unpair(std::size_t p) const {
    return {p / nb, p % nb};
  }
  std::optional<std::size_t> step(std::size_t p, std::int32_t letter) const {
    const auto [i, j] = unpair(p);
    const auto ti = a.step(i, letter);
    if (!ti) return std::nullopt;
    const auto tj = b.step(j, letter);
    if (!tj) return std::nullopt;
    return pair_index(*ti, *tj);
  }
};

// Vertices of the product surviving repeated deletion of degree-<=1
// vertices; empty iff the product is a forest.
std::vector<bool> cyclic_core_mask(const ProductView& pv) {
  const std::size_t n = pv.a.vertex_count() * pv.nb;
  const int rank = pv.a.rank();
  std::vector<int> degree(n, 0);
  for (std::size_t p = 0; p < n; ++p)
    for (int g = 1; g <= rank; ++g)
      if (pv.step(p, g)) {
        ++degree[p];
        ++degree[*pv.step(p, g)];
      }
  std::vector<bool> alive(n, true);
  std::deque<std::size_t> queue;
  for (std::size_t p = 0; p < n; ++p)
    if (degree[p] <= 1) queue.push_back(p);
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    if (!alive[p] || degree[p] > 1) continue;
    alive[p] = false;
    for (int g = 1; g <= rank; ++g)
      for (const std::int32_t sign : {1, -1})
        if (const auto q = pv.step(p, sign * g); q && alive[*q]) {
          --degree[*q];
          --degree[p];
          if (degree[*q] <= 1) queue.push_back(*q);
        }
  }
  return alive;
}

}  // namespace

std::vector<PullbackComponent> pullback(const SubgroupGraph& g1,
                                        const SubgroupGraph& g2) {
  require_same_rank(g1.rank(), g2.rank());
  const int rank = g1.rank();
  const ProductView pv{g1, g2, g2.vertex_count()};
  const std::size_t n = g1.vertex_count() * g2.vertex_count();
  const bool self = g1 == g2;

  UnionFind uf(n);
  for (std::size_t p = 0; p < n; ++p)
    for (int g = 1; g <= rank; ++g)
      if (const auto q = pv.step(p, g))
        uf.unite(static_cast<std::int32_t>(p), static_cast<std::int32_t>(*q));

  const std::vector<bool> alive = cyclic_core_mask(pv);

  // Bucket surviving pairs per component (cycle-containing components only).
  std::map<std::int32_t, std::vector<std::size_t>> cores;
  for (std::size_t p = 0; p < n; ++p)
    if (alive[p]) cores[uf.find(static_cast<std::int32_t>(p))].push_back(p);

  const std::int32_t diag_root =
      self && n > 0 ? uf.find(static_cast<std::int32_t>(pv.pair_index(0, 0)))
                    : -1;

  const SpanningTree t1 = make_tree(g1);
  const SpanningTree t2 = make_tree(g2);
  std::vector<std::optional<Word>> p1(g1.vertex_count()),
      p2(g2.vertex_count());
  const auto path1 = [&](std::size_t v) -> const Word& {
    if (!p1[v]) p1[v] = tree_path(g1, t1, v);
    return *p1[v];
  };
  const auto path2 = [&](std::size_t v) -> const Word& {
    if (!p2[v]) p2[v] = tree_path(g2, t2, v);
    return *p2[v];
  };

  std::vector<PullbackComponent> out;
  for (auto& [root, pairs] : cores) {
    PullbackComponent comp;
    comp.is_diagonal = (root == diag_root);

    // Canonical representative: shortlex-least z over the core pairs.
    std::optional<Word> best;
    std::size_t base_pair = pairs.front();
    for (const std::size_t p : pairs) {
      const auto [i, j] = pv.unpair(p);
      Word z = multiply(path1(i), invert(path2(j)));
      if (!best || shortlex_less(z, *best)) {
        best = std::move(z);
        base_pair = p;
      }
    }
    comp.representative = *best;

    // Loop basis of the component at the chosen base pair, then conjugate
    // into the ambient group to get the intersection subgroup itself.
    std::unordered_map<std::size_t, std::size_t> index;
    std::vector<std::size_t> bfs{base_pair};
    index.emplace(base_pair, 0);
    std::vector<Word> paths{Word(rank)};
    std::vector<Word> loops;
    for (std::size_t head = 0; head < bfs.size(); ++head) {
      const std::size_t p = bfs[head];
      for (int g = 1; g <= rank; ++g)
        for (const std::int32_t sign : {1, -1}) {
          const std::int32_t letter = sign * g;
          const auto q = pv.step(p, letter);
          if (!q || !alive[*q]) continue;
          Word extended = multiply(
              paths[index[p]], Word::from_reduced(rank, {letter}));
          if (auto [it, fresh] = index.try_emplace(*q, bfs.size()); fresh) {
            bfs.push_back(*q);
            paths.push_back(std::move(extended));
          } else if (sign > 0) {  // non-tree edge, forward orientation only
            loops.push_back(
                multiply(extended, invert(paths[it->second])));
          }
        }
    }
    // A forward tree edge would be re-seen here too; drop identity loops.
    std::erase_if(loops, [](const Word& w) { return w.empty(); });

    const auto [bi, bj] = pv.unpair(base_pair);
    std::vector<Word> gens;
    gens.reserve(loops.size());
    for (const Word& k : loops) gens.push_back(conjugate(k, path1(bi)));
    comp.intersection = SubgroupGraph::fold(rank, gens);

    comp.vertex_pairs.reserve(pairs.size());
    for (const std::size_t p : pairs) comp.vertex_pairs.push_back(pv.unpair(p));

    out.push_back(std::move(comp));
  }

  std::sort(out.begin(), out.end(),
            [](const PullbackComponent& a, const PullbackComponent& b) {
              if (a.is_diagonal != b.is_diagonal) return a.is_diagonal;
              if (a.representative != b.representative)
                return shortlex_less(a.representative, b.representative);
              return a.vertex_pairs < b.vertex_pairs;
            });
  return out;
}

MalnormalityReport is_malnormal(const SubgroupGraph& graph) {
  if (graph.is_trivial()) throw hypothesis_error("trivial subgroup");
  MalnormalityReport report;
  report.verdict = true;
  for (const PullbackComponent& comp : pullback(graph, graph)) {
    if (comp.is_diagonal) continue;
    report.verdict = false;
    const std::vector<Word> basis = comp.intersection.basis();
    assert(!basis.empty());
    // z h z^-1 = h' with h' a basis element of H and z H z^-1.
    const Word& h_prime = basis.front();
    report.violations.push_back(
        {comp.representative,
         conjugate(h_prime, invert(comp.representative)), h_prime});
  }
  return report;
}

bool conjugacy_disjoint(const SubgroupGraph& g1, const SubgroupGraph& g2) {
  require_same_rank(g1.rank(), g2.rank());
  const ProductView pv{g1, g2, g2.vertex_count()};
  const std::vector<bool> alive = cyclic_core_mask(pv);
  return std::none_of(alive.begin(), alive.end(), [](bool a) { return a; });
}

std::vector<DoubleCosetViolation> violating_double_cosets(
    const SubgroupGraph& graph) {
  if (graph.is_trivial()) throw hypothesis_error("trivial subgroup");
  std::vector<DoubleCosetViolation> out;
  for (const PullbackComponent& comp : pullback(graph, graph)) {
    if (comp.is_diagonal) continue;
    out.push_back({comp.representative, comp.intersection.basis()});
  }
  return out;
}

}  // namespace malnorm
