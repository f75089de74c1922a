#include "loadmatch/intersect.hpp"

#include <numeric>
#include <string>

#include "loadmatch/balance.hpp"
#include "loadmatch/error.hpp"

namespace loadmatch {

Matching::Matching(std::vector<Vertex> image) : image_(std::move(image)) {
  std::vector<char> hit(image_.size(), 0);
  for (const Vertex v : image_) {
    if (v >= image_.size() || hit[v]) throw Error(ErrorCode::kInvalidArgument, "matching is not a permutation");
    hit[v] = 1;
  }
}

Matching Matching::identity(std::size_t n) {
  std::vector<Vertex> image(n);
  std::iota(image.begin(), image.end(), Vertex{0});
  Matching m;
  m.image_ = std::move(image);
  return m;
}

Matching Matching::inverse() const {
  std::vector<Vertex> inv(image_.size());
  for (Vertex i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  Matching m;
  m.image_ = std::move(inv);
  return m;
}

Matching operator*(const Matching& a, const Matching& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kSizeMismatch, "composing matchings of different size");
  std::vector<Vertex> out(a.size());
  for (Vertex i = 0; i < a.size(); ++i) out[i] = a(b(i));
  Matching m;
  m.image_ = std::move(out);
  return m;
}

PartialMatching PartialMatching::restrict(const Matching& pi, const VertexSet& domain) {
  PartialMatching out(pi.size());
  for (const Vertex i : domain) {
    if (i >= pi.size()) throw Error(ErrorCode::kOutOfRange, "domain vertex outside matching");
    out.image_[i] = pi(i);
  }
  return out;
}

void PartialMatching::assign(Vertex i, Vertex j) {
  if (i >= image_.size() || j >= image_.size()) throw Error(ErrorCode::kOutOfRange, "partial matching index");
  if (image_[i] != kUnset) throw Error(ErrorCode::kInvalidArgument, "vertex already matched");
  for (const Vertex v : image_) {
    if (v == j) throw Error(ErrorCode::kInvalidArgument, "image already used");
  }
  image_[i] = j;
}

VertexSet PartialMatching::domain() const {
  std::vector<Vertex> out;
  for (Vertex i = 0; i < image_.size(); ++i) {
    if (image_[i] != kUnset) out.push_back(i);
  }
  return VertexSet::from_sorted(std::move(out));
}

VertexSet PartialMatching::range() const {
  std::vector<Vertex> out;
  for (const Vertex v : image_) {
    if (v != kUnset) out.push_back(v);
  }
  return VertexSet::from_unsorted(std::move(out));
}

Matching PartialMatching::lowest_extension() const {
  std::vector<char> used(image_.size(), 0);
  for (const Vertex v : image_) {
    if (v != kUnset) used[v] = 1;
  }
  std::vector<Vertex> out = image_;
  Vertex next = 0;
  for (auto& v : out) {
    if (v != kUnset) continue;
    while (used[next]) ++next;
    v = next++;
  }
  return Matching(std::move(out));
}

bool PartialMatching::agrees_with(const Matching& pi) const {
  if (pi.size() != image_.size()) return false;
  for (Vertex i = 0; i < image_.size(); ++i) {
    if (image_[i] != kUnset && image_[i] != pi(i)) return false;
  }
  return true;
}

namespace {

void require_same_size(const Graph& g1, const Graph& g2, std::size_t n) {
  if (g1.num_vertices() != n || g2.num_vertices() != n) {
    throw Error(ErrorCode::kDomainMismatch, "graphs and matching disagree on n");
  }
}

template <class Map>
Graph collect(const Graph& g1, const Graph& g2, const std::vector<char>& in, Map&& partner) {
  std::vector<Edge> edges;
  for (const Edge& e : g1.edges()) {
    if (in[e.u] && in[e.v] && g2.has_edge(partner(e.u), partner(e.v))) edges.push_back(e);
  }
  return graph_from_canonical_edges(g1.num_vertices(), std::move(edges));
}

}  // namespace

Graph intersection_graph(const Graph& g1, const Graph& g2, const Matching& pi, const VertexSet& domain,
                         Convention convention) {
  const std::size_t n = pi.size();
  require_same_size(g1, g2, n);
  const auto in = domain.mask(n);
  if (convention == Convention::kForward) return collect(g1, g2, in, [&](Vertex i) { return pi(i); });
  const Matching inv = pi.inverse();
  return collect(g1, g2, in, [&](Vertex i) { return inv(i); });
}

Graph intersection_graph(const Graph& g1, const Graph& g2, const Matching& pi, Convention convention) {
  return intersection_graph(g1, g2, pi, VertexSet::range(pi.size()), convention);
}

Graph intersection_graph(const Graph& g1, const Graph& g2, const PartialMatching& pi, const VertexSet& domain) {
  const std::size_t n = pi.size();
  require_same_size(g1, g2, n);
  const auto in = domain.mask(n);
  for (const Vertex i : domain) {
    if (!pi.defined(i)) throw Error(ErrorCode::kDomainMismatch, "vertex " + std::to_string(i) + " is unmatched");
  }
  return collect(g1, g2, in, [&](Vertex i) { return pi(i); });
}

Rational ft_pi(const Graph& g1, const Graph& g2, const Matching& pi, const Rational& t, const VertexSet& u,
               Convention convention) {
  return ft_value(intersection_graph(g1, g2, pi, convention), t, u);
}

std::size_t overlap(const Matching& a, const Matching& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kSizeMismatch, "overlap of matchings of different size");
  std::size_t count = 0;
  for (Vertex i = 0; i < a.size(); ++i) count += a(i) == b(i) ? 1 : 0;
  return count;
}

}  // namespace loadmatch
