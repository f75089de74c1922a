#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "loadmatch/graph.hpp"
#include "loadmatch/rational.hpp"

namespace loadmatch {

// Permutation of {0..n-1}; image[i] is the image of i.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<Vertex> image);  // throws InvalidArgument unless bijective
  static Matching identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  Vertex operator()(Vertex i) const { return image_[i]; }
  const std::vector<Vertex>& image() const noexcept { return image_; }

  Matching inverse() const;
  // (a * b)(i) = a(b(i)).
  friend Matching operator*(const Matching& a, const Matching& b);
  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<Vertex> image_;
};

// Injection from a subset of {0..n-1} into {0..n-1}.
class PartialMatching {
 public:
  static constexpr Vertex kUnset = std::numeric_limits<Vertex>::max();

  PartialMatching() = default;
  explicit PartialMatching(std::size_t n) : image_(n, kUnset) {}
  static PartialMatching restrict(const Matching& pi, const VertexSet& domain);

  std::size_t size() const noexcept { return image_.size(); }
  bool defined(Vertex i) const { return image_[i] != kUnset; }
  Vertex operator()(Vertex i) const { return image_[i]; }
  const std::vector<Vertex>& raw() const noexcept { return image_; }

  // Throws InvalidArgument when i is already mapped or j is already used.
  void assign(Vertex i, Vertex j);
  VertexSet domain() const;
  VertexSet range() const;

  // Completion to a full matching: unmapped vertices take the unused images
  // in ascending order.
  Matching lowest_extension() const;
  bool agrees_with(const Matching& pi) const;  // pi extends this

  friend bool operator==(const PartialMatching&, const PartialMatching&) = default;

 private:
  std::vector<Vertex> image_;
};

// Which pair of G2 an edge (i, j) of G1 is compared with.
enum class Convention {
  kForward,  // (pi(i), pi(j)) in G2
  kInverse,  // (pi^-1(i), pi^-1(j)) in G2
};

// Edges (i, j) of G1 with both ends in `domain` whose partner pair lies in G2.
// Partial matchings only support the forward convention, which needs pi on
// the domain alone; throws DomainMismatch otherwise.
Graph intersection_graph(const Graph& g1, const Graph& g2, const Matching& pi, const VertexSet& domain,
                         Convention convention = Convention::kForward);
Graph intersection_graph(const Graph& g1, const Graph& g2, const Matching& pi,
                         Convention convention = Convention::kForward);
Graph intersection_graph(const Graph& g1, const Graph& g2, const PartialMatching& pi, const VertexSet& domain);

// f_t evaluated on the intersection graph.
Rational ft_pi(const Graph& g1, const Graph& g2, const Matching& pi, const Rational& t, const VertexSet& u,
               Convention convention = Convention::kForward);

std::size_t overlap(const Matching& a, const Matching& b);

}  // namespace loadmatch
