#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "polysym/perm.hpp"

namespace polysym::perm {

struct ChainOptions {
  // Exact order, when the caller can prove it (regular representations,
  // orders produced by an exhaustive search). Construction stops as soon as
  // the chain reaches it; reaching past it is an error.
  std::optional<BigInt> known_order;
  // Upper bound on the order (e.g. the order of an overgroup). Reaching it
  // ends construction early; otherwise the deterministic pass runs.
  std::optional<BigInt> order_bound;
  std::vector<Point> base_prefix;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// Permutation group with a stabiliser chain (base, strong generators, Schreier
// vectors). Randomised Schreier-Sims followed by a pass sifting every Schreier
// generator, so the chain is exact unless ChainOptions::known_order is given.
class PermGroup {
 public:
  PermGroup() = default;
  explicit PermGroup(std::size_t degree);

  static PermGroup build(std::vector<Perm> generators, std::size_t degree,
                         const ChainOptions& options = {});
  // Degree taken from the generators, which must be non-empty.
  static PermGroup build(std::vector<Perm> generators, const ChainOptions& options = {});

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return generators_; }
  BigInt order() const;

  std::size_t base_length() const { return levels_.size(); }
  std::vector<Point> base() const;
  const std::vector<Point>& basic_orbit(std::size_t level) const { return levels_[level].orbit; }
  const std::vector<Perm>& strong_generators(std::size_t level) const { return levels_[level].gens; }

  bool contains(const Perm& p) const;
  bool is_trivial() const { return levels_.empty(); }

  // Orbit of x under the generators, in breadth-first order.
  std::vector<Point> orbit(Point x) const;

  std::vector<Point> base_images(const Perm& p) const;
  // The unique element with the given base images, if one exists.
  std::optional<Perm> element_from_base_images(std::span<const Point> images) const;

  // Image of x under the transversal element carrying base point `level` to `gamma`.
  Point transversal_image(std::size_t level, Point gamma, Point x) const;
  Perm transversal_element(std::size_t level, Point gamma) const;

  // Visits every element once; the callback returns false to stop early.
  // Throws LimitExceeded if the order exceeds `budget`.
  void for_each_element(const std::function<bool(const Perm&)>& visit,
                        std::size_t budget = 1'000'000) const;

  // Same group, chain rebuilt so that the base starts with `prefix`.
  PermGroup with_base(std::vector<Point> prefix) const;

  // Order of the pointwise stabiliser of `points`.
  BigInt pointwise_stabiliser_order(std::vector<Point> points) const;
  PermGroup pointwise_stabiliser(std::vector<Point> points) const;

  // Uniform random element via the chain.
  Perm random_element(std::mt19937_64& rng) const;

 private:
  struct Level {
    Point base = 0;
    std::vector<Perm> gens;
    std::vector<Perm> inverses;
    // -1: not in orbit, -2: the base point, 2k: reached by gens[k],
    // 2k+1: reached by inverses[k].
    std::vector<std::int32_t> label;
    std::vector<Point> orbit;
  };

  void new_level(Point base);
  void rebuild_orbit(std::size_t level);
  void add_strong_generator(const Perm& h, std::size_t level);
  // Returns the residue and the level at which sifting failed (base_length() if
  // it fell off the bottom).
  std::pair<Perm, std::size_t> strip(Perm g, std::size_t from_level = 0) const;
  Perm apply_inverse_transversal(std::size_t level, Point gamma, Perm g) const;
  std::vector<std::int32_t> path_to(std::size_t level, Point gamma) const;
  bool verify_chain(const ChainOptions& options);
  BigInt chain_order() const;

  std::size_t degree_ = 0;
  std::vector<Perm> generators_;
  std::vector<Level> levels_;
};

// Intersection by scanning the elements of the smaller group against the
// larger one's chain. `budget` caps the number of scanned elements.
PermGroup intersect(const PermGroup& a, const PermGroup& b, std::size_t budget = 1'000'000);

// Group acting semiregularly (any subgroup of a regular group): its order is
// the orbit length of point 0.
PermGroup semiregular_group(std::vector<Perm> generators, std::size_t degree);

// Images of `generators` (elements of g) in the right regular representation
// of g. Point 0 is the identity; points are numbered in breadth-first order.
std::vector<Perm> regular_representation(const PermGroup& g, const std::vector<Perm>& generators,
                                         std::size_t budget = 2'000'000);

struct TupleHash {
  std::size_t operator()(const std::vector<Point>& t) const noexcept;
};
using TupleMap = std::unordered_map<std::vector<Point>, std::vector<Point>, TupleHash>;

// Assignment domain[i] -> images[i] of generators.
struct GenMap {
  std::vector<Perm> domain;
  std::vector<Perm> images;
};

// Proof that a generator assignment extends to an automorphism of `ambient`:
// the orbit of the doubled base tuple under the diagonal group
// <(domain[i], images[i])>, which has exactly |ambient| elements.
class AutomorphismWitness {
 public:
  AutomorphismWitness(std::shared_ptr<const PermGroup> ambient, GenMap map,
                      TupleMap table,
                      std::vector<Point> flat);

  const PermGroup& ambient() const { return *ambient_; }
  const GenMap& map() const { return map_; }

  // Image of an element of the ambient group.
  Perm apply(const Perm& g) const;
  // For a base of length one: the image of the base point under phi(g) for the
  // element g carrying the base point to x.
  Point apply_to_base_point(Point x) const;
  // phi(phi(x_i)) == x_i for every generator.
  bool is_involution() const;

 private:
  std::vector<Point> image_base(const std::vector<Point>& base_image) const;

  std::shared_ptr<const PermGroup> ambient_;
  GenMap map_;
  TupleMap table_;
  std::vector<Point> flat_;  // used when the base has length one
};

// Fiber-product test: returns a witness iff domain[i] -> images[i] extends to
// an automorphism of `ambient`. Throws InvalidArgument if the domain
// generators do not generate `ambient`.
std::optional<AutomorphismWitness> extend_generator_map(const GenMap& m, const PermGroup& ambient);

}  // namespace polysym::perm
