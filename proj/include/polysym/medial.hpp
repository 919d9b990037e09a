#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polysym/graphsym.hpp"
#include "polysym/polytope.hpp"

namespace polysym::medial {

// Incidence graph of the two middle ranks. Vertices are the lower-rank faces
// (part 1) followed by the upper-rank faces (part 2).
struct MedialGraph {
  graph::SymGraph graph;
  std::vector<int> part;
  std::size_t lower_rank = 0;
  std::size_t lower_count = 0;
};

MedialGraph medial_layer_graph(const poly::FaceLattice& lat);
// `v part=k` per vertex.
void write_parts(std::ostream& os, const MedialGraph& m);

// <sigma_1, sigma_2, sigma_3, delta> in its right regular representation on
// 2|rotation group| points: point x < N is the rotation element x, point
// N + x is x * delta.
struct ExtendedRotationGroup {
  std::shared_ptr<const perm::PermGroup> group;
  std::vector<perm::Perm> sigma;
  perm::Perm delta;
  // Lifted reflections, for non-orientably regular systems.
  std::vector<perm::Perm> rho;
  std::size_t p = 0;
  std::size_t rotation_order = 0;
  // The order was also confirmed by enumerating the extended presentation.
  bool presentation_checked = false;
};

// Requires a properly self-dual rank-4 system (the witness of the proper
// duality map). Throws InvalidArgument otherwise.
ExtendedRotationGroup build_extended_rotation_group(const poly::RotationSystem& sys,
                                                    const poly::SelfDualityResult& duality,
                                                    std::size_t limit = fp::kDefaultCosetLimit);

struct PolaritySet {
  std::vector<perm::Perm> deltas;  // delta_j = sigma_1^(1-j) delta sigma_1^(j-1)
  perm::PermGroup group;
};

PolaritySet polarity_set(const ExtendedRotationGroup& ext);

struct CayleyGraph {
  graph::SymGraph graph;
  std::vector<Point> point_of_vertex;   // vertex -> point of the extended group
  std::vector<std::uint32_t> vertex_of_point;  // UINT32_MAX off the subgroup
};

// Vertices g ~ g * delta_i, in the element order of the stabiliser chain.
CayleyGraph cayley_graph(const ExtendedRotationGroup& ext, const PolaritySet& ps);

struct CoveringData {
  std::vector<std::uint32_t> nu;  // Cayley vertex -> medial vertex
  std::size_t multiplicity = 0;
  BigInt m_value;  // |G meet the rotation stabiliser of the base 2-face|
};

// The map g -> g F_2 onto the medial graph, verified to be a locally
// injective homomorphism with equal fibres, with 1 <= m <= 2p, and with
// multiplicity m unless the system is non-orientably regular.
CoveringData covering_map(const poly::RotationSystem& sys, const poly::FaceLattice& lat, const MedialGraph& medial,
                          const ExtendedRotationGroup& ext, const PolaritySet& ps, const CayleyGraph& cayley);

// `v fibre=k`: the medial vertex under nu of each Cayley vertex.
void write_fibres(std::ostream& os, const CoveringData& cov);

// h, p (conjugation by sigma_1 and by sigma_1 sigma_2 sigma_3) and a (the
// automorphism moving 1 to delta_1) acting on the Cayley graph.
struct CayleyTwoArcGroup {
  perm::Perm h, p, a;
  perm::PermGroup group;
};
CayleyTwoArcGroup cayley_two_arc_group(const ExtendedRotationGroup& ext, const CayleyGraph& cayley);

// The extended group <rotation group, duality D> acting on the medial
// vertices. For self-dual rank-4 systems of either kind.
perm::PermGroup medial_extended_group(const poly::RotationSystem& sys, const poly::FaceLattice& lat,
                                      const MedialGraph& medial, const perm::Perm& base_duality);

struct IdentityCheck {
  std::string name;
  bool holds = true;
  std::string detail;  // first failing subscripts
};

struct DeltaIdentityReport {
  std::vector<IdentityCheck> checks;
  bool printed_d_holds = false;    // sigma_3 delta_j delta_3^-1 = ...
  bool conjugate_d_holds = false;  // sigma_3 delta_j sigma_3^-1 = ...
  std::string d_reading() const;
  bool all_hold() const;  // every identity, with (d) under its winning reading
};

DeltaIdentityReport verify_delta_identities(const ExtendedRotationGroup& ext);

}  // namespace polysym::medial
