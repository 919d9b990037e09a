#include <doctest.h>

#include <sstream>

#include "polysym/error.hpp"
#include "polysym/families.hpp"
#include "polysym/graphsym.hpp"

using namespace polysym;
using namespace polysym::families;

TEST_CASE("six_q_six orders") {
  auto s3 = build_six_q_six(3);
  CHECK(s3.group->order() == 216);
  CHECK(poly::check_intersection_conditions(s3).ok);
  CHECK(poly::classify_orientation(s3) == poly::Orientation::directly_regular);
  CHECK(poly::reflection_duality(s3).has_value());
  auto lat = poly::build_face_lattice(s3);
  CHECK(poly::validate_polytope(lat).flags == 216);
  auto f = lat.f_vector();
  CHECK(std::equal(f.begin(), f.end(), f.rbegin()));

  CHECK(build_six_q_six(9).group->order() == 648);
  CHECK_THROWS_AS(build_six_q_six(4), InvalidArgument);
  CHECK_THROWS_AS(build_six_q_six(0), InvalidArgument);
}

TEST_CASE("four_q_four") {
  auto t1 = build_four_q_four(1);
  CHECK(t1.group->order() == 192);
  CHECK(t1.schlafli == std::vector<long long>{4, 6, 4});
  CHECK(poly::classify_orientation(t1) == poly::Orientation::non_orientably_regular);
  auto t2 = build_four_q_four(2);
  CHECK(t2.schlafli == std::vector<long long>{4, 12, 4});
  CHECK(poly::classify_orientation(t2) == poly::Orientation::non_orientably_regular);
  CHECK(poly::check_intersection_conditions(t2).ok);
  MESSAGE("four_q_four t=2 order " << t2.group->order().str());
  CHECK_THROWS_AS(build_four_q_four(0), InvalidArgument);
}

TEST_CASE("Praeger-Xu graphs") {
  struct P {
    std::size_t p, r, s;
  };
  for (auto [p, r, s] : {P{3, 6, 1}, P{3, 12, 2}, P{2, 6, 2}, P{2, 5, 4}, P{4, 3, 2}, P{2, 3, 1}}) {
    auto g = praeger_xu(p, r, s);
    std::size_t n = r;
    for (std::size_t k = 0; k < s; ++k) n *= p;
    CHECK(g.order() == n);
    CHECK(g.regular_degree() == 2 * p);
    CHECK(graph::is_connected(g));
    std::vector<perm::Perm> gens{praeger_xu_shift(p, r, s)};
    for (std::size_t i = 0; i < r; ++i) gens.push_back(praeger_xu_translation(p, r, s, i));
    for (const auto& x : gens) CHECK(graph::is_automorphism(g, x));
    auto grp = perm::PermGroup::build(gens, n);
    CHECK(grp.orbit(0).size() == n);
  }
  CHECK(praeger_xu(2, 9, 2).order() == 36);
  CHECK_THROWS_AS(praeger_xu(1, 4, 1), InvalidArgument);
  CHECK_THROWS_AS(praeger_xu(2, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(praeger_xu(2, 4, 4), InvalidArgument);
  // The well-known small case: C(2,r,1) is the wreath graph C_r[2K_1].
  CHECK(graph::automorphism_group(praeger_xu(2, 5, 1)).group.order() == 32 * 10);
}

TEST_CASE("family claims at q = 3") {
  auto rep = verify_family_claims(3);
  std::ostringstream os;
  rep.write(os);
  for (const auto& c : rep.claims) CHECK_MESSAGE(c.holds, c.name << " expected " << c.expected << " got " << c.observed);
  CHECK(rep.all_hold());
  CHECK(os.str().find("medial_aut_order=559872 ok") != std::string::npos);
}
