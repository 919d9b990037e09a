#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "polysym/graphsym.hpp"
#include "polysym/polytope.hpp"

namespace polysym::families {

// Coxeter [6,q,6] with ((x1 x2)^2 x3)^2, ((x3 x4)^2 x2)^2 and (x2 x3)^q.
// q must be a positive multiple of 3; the order is checked to be 72q.
fp::Presentation six_q_six_presentation(long long q);
poly::ReflectionSystem build_six_q_six(long long q, std::size_t limit = fp::kDefaultCosetLimit);

// Coxeter [4,6t,4] with the five extra relators; t >= 1.
fp::Presentation four_q_four_presentation(long long t);
poly::ReflectionSystem build_four_q_four(long long t, std::size_t limit = fp::kDefaultCosetLimit);

// Vertices (i, v1..vs) numbered i * p^s + (v1 p^(s-1) + ... + vs);
// (i, v1..vs) ~ (i+1, v2..vs u) for every u. Needs p >= 2, r >= 3, 1 <= s < r.
graph::SymGraph praeger_xu(std::size_t p, std::size_t r, std::size_t s);
// (i, v) -> (i+1, v).
perm::Perm praeger_xu_shift(std::size_t p, std::size_t r, std::size_t s);
// Adds 1 to the letter of v sitting at layer position `position` (v_k at
// layer i has position i + k - 1 mod r).
perm::Perm praeger_xu_translation(std::size_t p, std::size_t r, std::size_t s, std::size_t position);

struct Claim {
  std::string name;
  std::string expected;
  std::string observed;
  bool holds = false;
  bool asserted = true;  // false: recorded only
};

struct FamilyReport {
  long long q = 0;
  std::vector<Claim> claims;
  bool all_hold() const;
  void write(std::ostream& os) const;
};

struct FamilyOptions {
  graph::SearchOptions search;
  bool automorphisms = true;
  std::size_t limit = fp::kDefaultCosetLimit;
};

// Medial graph and Cayley cover of the {6,q,6} polytope against the
// Praeger-Xu graphs and the automorphism order formulas. Claims are asserted
// for odd q only.
FamilyReport verify_family_claims(long long q, const FamilyOptions& options = {});

}  // namespace polysym::families
