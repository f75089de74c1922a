#include "loadmatch/balance.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "loadmatch/error.hpp"
#include "loadmatch/flow.hpp"

namespace loadmatch {

Rational LoadProfile::max_load() const { return blocks.empty() ? Rational(0) : blocks.front().density; }

Rational ft_value(const Graph& g, const Rational& t, const VertexSet& u) {
  if (t <= Rational(0)) throw Error(ErrorCode::kNonPositiveT, "t must be positive, got " + t.to_string());
  const auto e = static_cast<std::int64_t>(count_edges_within(g, u));
  return t * Rational(e) - Rational(static_cast<std::int64_t>(u.size()));
}

namespace detail {

std::vector<char> maximal_maximizer(const Graph& local, const std::vector<std::int64_t>& bonus, std::int64_t p,
                                    std::int64_t q) {
  const std::size_t k = local.num_vertices();
  const std::size_t m = local.num_edges();
  // Nodes: 0 source, 1 sink, 2..2+m edge gadgets, then vertices.
  FlowNetwork net;
  net.node_count = 2 + m + k;
  net.source = 0;
  net.sink = 1;
  net.arcs.reserve(3 * m + 2 * k);
  const std::size_t vbase = 2 + m;
  for (std::size_t i = 0; i < m; ++i) {
    const Edge& e = local.edges()[i];
    net.add_arc(0, 2 + i, q);
    net.add_arc(2 + i, vbase + e.u, FlowNetwork::kUnbounded);
    net.add_arc(2 + i, vbase + e.v, FlowNetwork::kUnbounded);
  }
  for (std::size_t x = 0; x < k; ++x) {
    if (!bonus.empty() && bonus[x] > 0) net.add_arc(0, vbase + x, q * bonus[x]);
    net.add_arc(vbase + x, 1, p);
  }
  const CutResult cut = solve_max_flow(net);
  std::vector<char> in(k, 0);
  for (const std::size_t node : cut.source_side_max) {
    if (node >= vbase) in[node - vbase] = 1;
  }
  return in;
}

}  // namespace detail

VertexSet ft_max_set(const Graph& g, const Rational& t) {
  if (t <= Rational(0)) throw Error(ErrorCode::kNonPositiveT, "t must be positive, got " + t.to_string());
  // t|E(W)| - |W| scaled by the denominator b of t = a/b.
  const auto in = detail::maximal_maximizer(g, {}, t.den(), t.num());
  std::vector<Vertex> out;
  for (Vertex v = 0; v < in.size(); ++v) {
    if (in[v]) out.push_back(v);
  }
  return VertexSet::from_sorted(std::move(out));
}

namespace {

// Local graph on `members` (parent ids, ascending) reusing a parent-sized scratch index.
Graph local_graph(const Graph& g, const std::vector<Vertex>& members, std::vector<std::int64_t>& scratch) {
  for (std::size_t i = 0; i < members.size(); ++i) scratch[members[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (const Vertex w : g.neighbors(members[i])) {
      const std::int64_t j = scratch[w];
      if (j > static_cast<std::int64_t>(i)) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j)});
    }
  }
  for (const Vertex v : members) scratch[v] = -1;
  return graph_from_canonical_edges(members.size(), std::move(edges));
}

struct Piece {
  std::vector<Vertex> members;  // parent ids, ascending
  std::vector<std::int64_t> bonus;
};

// Splits a piece into the connected components of its induced subgraph.
std::vector<Piece> split_components(const Graph& local, const Piece& piece) {
  std::size_t count = 0;
  const auto comp = connected_components(local, &count);
  std::vector<Piece> out(count);
  for (std::size_t i = 0; i < piece.members.size(); ++i) {
    out[comp[i]].members.push_back(piece.members[i]);
    out[comp[i]].bonus.push_back(piece.bonus[i]);
  }
  return out;
}

}  // namespace

// Divide and conquer on the density decomposition. For a piece S with an
// external bonus b (edges already credited from heavier regions), the maximal
// maximizer of (|E(W)| + b(W)) - d|W| at the average density d is exactly the
// set of vertices with load >= d; when it is all of S the piece is uniform.
LoadProfile balanced_loads(const Graph& g) {
  const std::size_t n = g.num_vertices();
  LoadProfile prof;
  prof.loads.assign(n, Rational(0));
  if (n == 0) return prof;

  std::vector<std::int64_t> scratch(n, -1);
  std::vector<std::pair<Rational, std::vector<Vertex>>> found;
  std::vector<Piece> work;
  {
    Piece all;
    all.members.resize(n);
    for (Vertex v = 0; v < n; ++v) all.members[v] = v;
    all.bonus.assign(n, 0);
    work.push_back(std::move(all));
  }
  while (!work.empty()) {
    Piece piece = std::move(work.back());
    work.pop_back();
    Graph local = local_graph(g, piece.members, scratch);
    auto parts = split_components(local, piece);
    if (parts.size() > 1) {
      for (auto& part : parts) work.push_back(std::move(part));
      continue;
    }
    const std::size_t k = piece.members.size();
    std::int64_t mass = static_cast<std::int64_t>(local.num_edges());
    for (const auto b : piece.bonus) mass += b;
    const Rational d(mass, static_cast<std::int64_t>(k));
    if (mass == 0) {
      found.emplace_back(d, piece.members);
      continue;
    }
    const auto upper = detail::maximal_maximizer(local, piece.bonus, d.num(), d.den());
    const auto up_count = static_cast<std::size_t>(std::count(upper.begin(), upper.end(), 1));
    if (up_count == k) {
      found.emplace_back(d, piece.members);
      continue;
    }
    if (up_count == 0) throw Error(ErrorCode::kInternal, "empty upper level set in decomposition");
    // Edges between the two sides are credited to the lighter side.
    for (const Edge& e : local.edges()) {
      if (upper[e.u] != upper[e.v]) ++piece.bonus[upper[e.u] ? e.v : e.u];
    }
    Piece hi;
    Piece lo;
    for (std::size_t i = 0; i < k; ++i) {
      Piece& dst = upper[i] ? hi : lo;
      dst.members.push_back(piece.members[i]);
      dst.bonus.push_back(piece.bonus[i]);
    }
    work.push_back(std::move(hi));
    work.push_back(std::move(lo));
  }

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < found.size();) {
    const Rational density = found[i].first;
    if (density.den() > static_cast<std::int64_t>(n)) {
      throw Error(ErrorCode::kInternal, "load denominator " + density.to_string() + " exceeds vertex count");
    }
    std::vector<Vertex> merged;
    for (; i < found.size() && found[i].first == density; ++i) {
      merged.insert(merged.end(), found[i].second.begin(), found[i].second.end());
    }
    for (const Vertex v : merged) prof.loads[v] = density;
    prof.blocks.push_back({density, VertexSet::from_unsorted(std::move(merged))});
  }
  return prof;
}

VertexSet load_level_set(const LoadProfile& profile, const Rational& threshold, bool strict) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < profile.loads.size(); ++v) {
    const auto& l = profile.loads[v];
    if (strict ? l > threshold : l >= threshold) out.push_back(v);
  }
  return VertexSet::from_sorted(std::move(out));
}

std::vector<Rational> allocation_loads(const Graph& g, const Allocation& alloc) {
  std::vector<Rational> loads(g.num_vertices(), Rational(0));
  std::size_t seen = 0;
  for (const Edge& e : g.edges()) {
    const auto fwd = alloc.theta.find({e.u, e.v});
    const auto bwd = alloc.theta.find({e.v, e.u});
    if (fwd == alloc.theta.end() || bwd == alloc.theta.end()) {
      throw Error(ErrorCode::kDomainMismatch,
                  "allocation missing edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    loads[e.v] += fwd->second;
    loads[e.u] += bwd->second;
    seen += 2;
  }
  if (seen != alloc.theta.size()) throw Error(ErrorCode::kDomainMismatch, "allocation has entries off the edge set");
  return loads;
}

BalanceCheck is_balanced(const Graph& g, const Allocation& alloc) {
  const auto loads = allocation_loads(g, alloc);
  BalanceCheck out;
  for (const auto& [xy, share] : alloc.theta) {
    const auto [x, y] = xy;
    if (loads[x] < loads[y] && share != Rational(0)) {
      out.balanced = false;
      out.witness = xy;
      return out;
    }
  }
  return out;
}

Allocation reconstruct_allocation(const Graph& g, const LoadProfile& profile) {
  const std::size_t n = g.num_vertices();
  if (profile.loads.size() != n) throw Error(ErrorCode::kSizeMismatch, "profile does not match graph");
  Allocation alloc;
  std::vector<std::int64_t> credited(n, 0);
  for (const Edge& e : g.edges()) {
    const auto& lu = profile.loads[e.u];
    const auto& lv = profile.loads[e.v];
    if (lu == lv) continue;
    const Vertex light = lu < lv ? e.u : e.v;
    const Vertex heavy = light == e.u ? e.v : e.u;
    alloc.theta[{heavy, light}] = Rational(1);
    alloc.theta[{light, heavy}] = Rational(0);
    ++credited[light];
  }
  std::vector<std::int64_t> local(n, -1);
  for (const LoadBlock& block : profile.blocks) {
    const auto& members = block.vertices.members();
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<std::int64_t>(i);
    std::vector<Edge> inner;
    for (const Vertex v : members) {
      for (const Vertex w : g.neighbors(v)) {
        if (w > v && local[w] >= 0) inner.push_back({v, w});
      }
    }
    const std::int64_t p = block.density.num();
    const std::int64_t q = block.density.den();
    FlowNetwork net;
    net.node_count = 2 + inner.size() + members.size();
    const std::size_t vbase = 2 + inner.size();
    for (std::size_t i = 0; i < inner.size(); ++i) {
      net.add_arc(0, 2 + i, q);
      net.add_arc(2 + i, vbase + static_cast<std::size_t>(local[inner[i].u]), q);
      net.add_arc(2 + i, vbase + static_cast<std::size_t>(local[inner[i].v]), q);
    }
    for (const Vertex v : members) {
      const std::int64_t need = p - q * credited[v];
      if (need < 0) throw Error(ErrorCode::kInternal, "profile is not a balanced load profile");
      net.add_arc(vbase + static_cast<std::size_t>(local[v]), 1, need);
    }
    const CutResult cut = solve_max_flow(net);
    if (cut.flow_value != q * static_cast<std::int64_t>(inner.size())) {
      throw Error(ErrorCode::kInternal, "block allocation flow is not saturating");
    }
    for (std::size_t i = 0; i < inner.size(); ++i) {
      const Edge& e = inner[i];
      alloc.theta[{e.u, e.v}] = Rational(cut.arc_flow[3 * i + 2], q);
      alloc.theta[{e.v, e.u}] = Rational(cut.arc_flow[3 * i + 1], q);
    }
    for (const Vertex v : members) local[v] = -1;
  }
  return alloc;
}

Rational stability_delta(const Rational& t, const Rational& r, const Rational& eps) {
  if (r >= t) throw Error(ErrorCode::kBadOrder, "need r < t");
  if (r <= Rational(0)) throw Error(ErrorCode::kNonPositive, "r must be positive");
  if (eps <= Rational(0)) throw Error(ErrorCode::kNonPositive, "eps must be positive");
  return (t - r) * eps / (Rational(2) * r);
}

void write_profile(std::ostream& out, const LoadProfile& profile) {
  out << "loads " << profile.loads.size() << '\n';
  for (std::size_t v = 0; v < profile.loads.size(); ++v) out << v << ' ' << profile.loads[v].to_string() << '\n';
  out << "blocks " << profile.blocks.size() << '\n';
  for (const auto& b : profile.blocks) {
    out << b.density.to_string();
    for (const Vertex v : b.vertices) out << ' ' << v;
    out << '\n';
  }
}

LoadProfile read_profile(std::istream& in) {
  LoadProfile prof;
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != "loads") throw Error(ErrorCode::kParse, "expected 'loads <n>' header");
  prof.loads.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = 0;
    std::string value;
    if (!(in >> v >> value) || v != i) throw Error(ErrorCode::kParse, "bad load line " + std::to_string(i));
    prof.loads[i] = Rational::parse(value);
  }
  std::size_t k = 0;
  if (!(in >> tag >> k) || tag != "blocks") throw Error(ErrorCode::kParse, "expected 'blocks <k>' header");
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "truncated block table");
    std::istringstream row(line);
    std::string density;
    row >> density;
    std::vector<Vertex> members;
    Vertex v = 0;
    while (row >> v) members.push_back(v);
    prof.blocks.push_back({Rational::parse(density), VertexSet::from_unsorted(std::move(members))});
  }
  return prof;
}

}  // namespace loadmatch
