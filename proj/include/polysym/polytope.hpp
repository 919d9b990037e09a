#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polysym/fpgroup.hpp"
#include "polysym/permgroup.hpp"

namespace polysym::poly {

// Group generated by sigma_1..sigma_{n-1} satisfying the rotation relations,
// held in its right regular representation (point 0 is the identity).
struct RotationSystem {
  std::shared_ptr<const perm::PermGroup> group;
  std::vector<perm::Perm> sigma;
  std::vector<long long> schlafli;
  fp::Presentation source;
  // False when `source` only lists the rotation relations and does not
  // present the group (systems derived from reflection groups).
  bool presented = true;
  // The reflections, when they lie in the group (non-orientably regular).
  std::vector<perm::Perm> rho;

  std::size_t rank() const { return sigma.size() + 1; }
  std::size_t order() const { return group->degree(); }
};

// Group generated by involutions rho_0..rho_{n-1} with string Coxeter relations.
// `regular` is true when the action is the right regular representation.
struct ReflectionSystem {
  std::shared_ptr<const perm::PermGroup> group;
  std::vector<perm::Perm> rho;
  std::vector<long long> schlafli;
  fp::Presentation source;
  bool regular = true;

  std::size_t rank() const { return rho.size(); }
};

// Enumerates the presentation (generators taken in order as sigma_1, ...)
// and checks the rotation relations and smoothness for `schlafli`.
RotationSystem build_rotation_system(const fp::Presentation& pres, std::vector<long long> schlafli,
                                     std::size_t limit = fp::kDefaultCosetLimit);
ReflectionSystem build_reflection_system(const fp::Presentation& pres, std::vector<long long> schlafli,
                                         std::size_t limit = fp::kDefaultCosetLimit);
// Checks relations and smoothness of explicit involutions on any point set.
ReflectionSystem reflection_system_from_perms(std::vector<perm::Perm> rho);

// sigma_i = rho_{i-1} rho_i in the regular representation of the even subgroup.
RotationSystem rotation_subsystem(const ReflectionSystem& sys);

struct IntersectionResult {
  bool ok = true;
  // First failing pair: generator index sets (rho indices, sigma index sets
  // for rank 4, or chain index sets in {-1..n} otherwise).
  std::vector<int> first;
  std::vector<int> second;
  std::string detail;
};

IntersectionResult check_intersection_conditions(const RotationSystem& sys,
                                                 std::size_t budget = 1'000'000);
// The general chain-set form for any rank (used for rank != 4 and in tests).
IntersectionResult check_chain_intersection_conditions(const RotationSystem& sys,
                                                       std::size_t budget = 1'000'000);
IntersectionResult check_intersection_conditions(const ReflectionSystem& sys,
                                                 std::size_t budget = 1'000'000);

enum class Orientation { directly_regular, chiral, non_orientably_regular };
std::string to_string(Orientation o);

Orientation classify_orientation(const RotationSystem& sys);
Orientation classify_orientation(const ReflectionSystem& sys);

// The generator maps that decide regularity and self-duality.
perm::GenMap regularity_map(const RotationSystem& sys);
perm::GenMap proper_duality_map(const RotationSystem& sys);
perm::GenMap improper_duality_map(const RotationSystem& sys);

enum class SelfDuality { not_self_dual, properly_self_dual, improperly_self_dual };
std::string to_string(SelfDuality k);

struct SelfDualityResult {
  SelfDuality kind = SelfDuality::not_self_dual;
  bool proper_extends = false;
  bool improper_extends = false;
  std::optional<perm::AutomorphismWitness> witness;  // of the winning map
  std::string warning;
};

// Rank 4 only. The improper map is tried only for chiral systems.
SelfDualityResult classify_self_duality(const RotationSystem& sys);
// rho_j -> rho_{n-1-j}.
std::optional<perm::AutomorphismWitness> reflection_duality(const ReflectionSystem& sys);

// Ranked poset of proper faces with consecutive-rank incidences; the least
// and greatest faces are implicit. When built from a group, face f of rank j
// is the orbit of the stabiliser of the base j-face on the regular points,
// numbered by smallest point.
class FaceLattice {
 public:
  FaceLattice() = default;
  // Explicit lattice: incidences[j] lists (rank j face, rank j+1 face).
  FaceLattice(std::vector<std::size_t> counts,
              std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> incidences);

  std::size_t rank() const { return counts_.size(); }
  const std::vector<std::size_t>& f_vector() const { return counts_; }
  std::size_t total_faces() const;
  // Offset of rank j in the concatenated face numbering.
  std::size_t offset(std::size_t j) const;

  const std::vector<std::uint32_t>& up(std::size_t j, std::uint32_t f) const { return up_[j][f]; }
  const std::vector<std::uint32_t>& down(std::size_t j, std::uint32_t f) const { return down_[j][f]; }
  bool incident(std::size_t j, std::uint32_t f, std::uint32_t g) const;  // f rank j, g rank j+1

  // Only for lattices built from a group.
  bool has_points() const { return !face_of_point_.empty(); }
  std::uint32_t face_of_point(std::size_t j, Point x) const { return face_of_point_[j][x]; }
  Point representative(std::size_t j, std::uint32_t f) const { return representative_[j][f]; }
  std::size_t point_count() const { return has_points() ? face_of_point_[0].size() : 0; }

  // Removes one incidence (for building invalid fixtures).
  void remove_incidence(std::size_t j, std::uint32_t f, std::uint32_t g);

  void write(std::ostream& os) const;

  // Builds from per-rank orbit labels on regular points.
  static FaceLattice from_point_partitions(std::vector<std::vector<std::uint32_t>> face_of_point,
                                           std::vector<std::vector<Point>> representative);

 private:
  void index_incidences(std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> incidences);

  std::vector<std::size_t> counts_;
  std::vector<std::vector<std::vector<std::uint32_t>>> up_;
  std::vector<std::vector<std::vector<std::uint32_t>>> down_;
  std::vector<std::vector<std::uint32_t>> face_of_point_;
  std::vector<std::vector<Point>> representative_;
};

// Face stabiliser generators of the base flag, rank by rank.
std::vector<std::vector<perm::Perm>> face_stabiliser_generators(const RotationSystem& sys);
std::vector<std::vector<perm::Perm>> face_stabiliser_generators(const ReflectionSystem& sys);

FaceLattice build_face_lattice(const RotationSystem& sys, std::size_t face_budget = 100'000);
FaceLattice build_face_lattice(const ReflectionSystem& sys, std::size_t face_budget = 100'000);

struct ValidationReport {
  bool diamond = true;
  bool chains_full = true;
  bool flag_connected = true;
  std::size_t flags = 0;
  std::string first_violation;
  std::vector<std::int64_t> witness;  // rank/face data of the first violation

  bool ok() const { return diamond && chains_full && flag_connected; }
};

// Strong flag connectivity is checked for every section of rank >= 2.
ValidationReport validate_polytope(const FaceLattice& lat, std::size_t flag_budget = 5'000'000);

// Every flag as the list of its faces of ranks 0..n-1.
std::vector<std::vector<std::uint32_t>> enumerate_flags(const FaceLattice& lat,
                                                        std::size_t budget = 5'000'000);

struct DualityReport {
  SelfDuality kind = SelfDuality::not_self_dual;
  bool polarity_exists = false;
  std::map<std::size_t, std::size_t> order_histogram;
  std::size_t total = 0;

  void write(std::ostream& os) const;
};

// Face permutations (concatenated numbering) induced by left multiplication
// by the given generators.
std::vector<perm::Perm> face_action(const FaceLattice& lat, const std::vector<perm::Perm>& regular_gens);

// The duality induced by an automorphism witness of a rank-4 rotation
// system; verifies that it reverses incidence.
perm::Perm base_duality(const RotationSystem& sys, const FaceLattice& lat,
                        const perm::AutomorphismWitness& witness);

// Histogram of orders of all dualities D*g, g in the group.
DualityReport enumerate_dualities(const RotationSystem& sys, const FaceLattice& lat,
                                  const SelfDualityResult& duality);

// The point map of a group automorphism on the regular points.
std::vector<Point> automorphism_on_points(const std::vector<perm::Perm>& regular_gens,
                                          const std::vector<perm::Perm>& images);
// Left multiplication by the element whose point is `element`.
perm::Perm left_multiplication(const std::vector<perm::Perm>& regular_gens, const perm::Perm& element);

}  // namespace polysym::poly
