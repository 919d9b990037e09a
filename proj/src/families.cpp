#include "polysym/families.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "polysym/error.hpp"
#include "polysym/medial.hpp"

namespace polysym::families {

using perm::Perm;

namespace {

fp::Presentation coxeter_with(const std::vector<long long>& schlafli, const std::vector<std::string>& extra) {
  std::string text = "gens x1 x2 x3 x4\ncoxeter";
  for (auto p : schlafli) text += " " + std::to_string(p);
  text += "\n";
  for (const auto& r : extra) text += "rel " + r + "\n";
  return fp::parse_presentation(text);
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

BigInt bpow(long long b, long long e) {
  BigInt r = 1;
  while (e-- > 0) r *= b;
  return r;
}

struct PxIndex {
  std::size_t p, r, s, block;
  PxIndex(std::size_t p_, std::size_t r_, std::size_t s_) : p(p_), r(r_), s(s_), block(ipow(p_, s_)) {
    if (p < 2 || r < 3 || s < 1 || s >= r) throw InvalidArgument("Praeger-Xu parameters need p >= 2, r >= 3, 1 <= s < r");
  }
  std::vector<std::size_t> word(std::size_t x) const {
    std::vector<std::size_t> v(s);
    for (std::size_t k = s; k-- > 0;) {
      v[k] = x % p;
      x /= p;
    }
    return v;
  }
  std::size_t code(const std::vector<std::size_t>& v) const {
    std::size_t x = 0;
    for (auto c : v) x = x * p + c;
    return x;
  }
};

}  // namespace

fp::Presentation six_q_six_presentation(long long q) {
  if (q <= 0 || q % 3 != 0) throw InvalidArgument("q must be a positive multiple of 3");
  return coxeter_with({6, q, 6}, {"((x1 x2)^2 x3)^2", "((x3 x4)^2 x2)^2"});
}

poly::ReflectionSystem build_six_q_six(long long q, std::size_t limit) {
  auto sys = poly::build_reflection_system(six_q_six_presentation(q), {6, q, 6}, limit);
  if (sys.group->order() != 72 * q) {
    throw InvariantViolation("six_q_six order " + sys.group->order().str() + ", expected " + std::to_string(72 * q));
  }
  return sys;
}

fp::Presentation four_q_four_presentation(long long t) {
  if (t < 1) throw InvalidArgument("t must be at least 1");
  std::string last = "(x1 x2 x3)^3";
  if (t > 1) last += " (x2 x3)^" + std::to_string(3 * t - 3);
  return coxeter_with({4, 6 * t, 4}, {"[x1, x2 x3 x2 x3 x2]", "[x4, x3 x2 x3 x2 x3]", "(x2 x1 x2 x3 x4 x3)^2",
                                      "x1 x2 x3 (x1 x2)^2 x4 x3 x2 (x3 x4)^2", last});
}

poly::ReflectionSystem build_four_q_four(long long t, std::size_t limit) {
  return poly::build_reflection_system(four_q_four_presentation(t), {4, 6 * t, 4}, limit);
}

graph::SymGraph praeger_xu(std::size_t p, std::size_t r, std::size_t s) {
  PxIndex ix(p, r, s);
  std::vector<graph::Edge> edges;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t x = 0; x < ix.block; ++x) {
      // Drop the leading letter, append u.
      std::size_t tail = (x % (ix.block / p)) * p;
      for (std::size_t u = 0; u < p; ++u) {
        edges.emplace_back(static_cast<Point>(i * ix.block + x), static_cast<Point>(((i + 1) % r) * ix.block + tail + u));
      }
    }
  }
  return graph::SymGraph::from_edges(r * ix.block, edges);
}

Perm praeger_xu_shift(std::size_t p, std::size_t r, std::size_t s) {
  PxIndex ix(p, r, s);
  std::vector<Point> img(r * ix.block);
  for (std::size_t x = 0; x < img.size(); ++x) img[x] = static_cast<Point>((x + ix.block) % img.size());
  return Perm(std::move(img));
}

Perm praeger_xu_translation(std::size_t p, std::size_t r, std::size_t s, std::size_t position) {
  PxIndex ix(p, r, s);
  std::vector<Point> img(r * ix.block);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t x = 0; x < ix.block; ++x) {
      auto v = ix.word(x);
      for (std::size_t k = 0; k < s; ++k) {
        if ((i + k) % r == position % r) v[k] = (v[k] + 1) % p;
      }
      img[i * ix.block + x] = static_cast<Point>(i * ix.block + ix.code(v));
    }
  }
  return Perm(std::move(img));
}

bool FamilyReport::all_hold() const {
  for (const auto& c : claims) {
    if (c.asserted && !c.holds) return false;
  }
  return true;
}

void FamilyReport::write(std::ostream& os) const {
  os << "q=" << q << '\n';
  for (const auto& c : claims) {
    os << c.name << '=' << c.observed;
    if (c.asserted) {
      os << (c.holds ? " ok" : " MISMATCH expected " + c.expected);
    } else {
      os << " recorded";
    }
    os << '\n';
  }
}

FamilyReport verify_family_claims(long long q, const FamilyOptions& options) {
  FamilyReport rep;
  rep.q = q;
  const bool odd = q % 2 != 0;
  auto claim = [&](std::string name, const auto& expected, const auto& observed) {
    Claim c;
    c.name = std::move(name);
    std::ostringstream e, o;
    e << expected;
    o << observed;
    c.expected = e.str();
    c.observed = o.str();
    c.holds = c.expected == c.observed;
    c.asserted = odd;
    rep.claims.push_back(std::move(c));
  };
  auto flag = [&](std::string name, bool value) { claim(std::move(name), "yes", value ? "yes" : "no"); };

  auto refl = build_six_q_six(q, options.limit);
  claim("group_order", 72 * q, refl.group->order());
  flag("directly_regular", poly::classify_orientation(refl) == poly::Orientation::directly_regular);
  flag("self_dual", poly::reflection_duality(refl).has_value());

  auto sys = poly::rotation_subsystem(refl);
  auto lat = poly::build_face_lattice(sys);
  auto f = lat.f_vector();
  flag("palindromic_f_vector", std::equal(f.begin(), f.end(), f.rbegin()));
  auto medial = medial::medial_layer_graph(lat);
  auto sd = poly::classify_self_duality(sys);
  auto ext = medial::build_extended_rotation_group(sys, sd, options.limit);
  auto ps = medial::polarity_set(ext);
  auto cayley = medial::cayley_graph(ext, ps);
  claim("medial_order", 6 * q, medial.graph.order());
  claim("cayley_order", 36 * q, cayley.graph.order());
  auto cov = medial::covering_map(sys, lat, medial, ext, ps, cayley);
  claim("covering_multiplicity", 6, cov.multiplicity);

  const auto pxg = praeger_xu(3, static_cast<std::size_t>(2 * q), 1);
  const auto pxc = praeger_xu(3, static_cast<std::size_t>(4 * q), 2);
  flag("medial_is_C(3,2q,1)", graph::isomorphic(medial.graph, pxg, options.search).has_value());
  flag("cayley_is_C(3,4q,2)", graph::isomorphic(cayley.graph, pxc, options.search).has_value());

  if (options.automorphisms) {
    auto ag = graph::automorphism_group(medial.graph, options.search);
    auto ac = graph::automorphism_group(cayley.graph, options.search);
    flag("medial_aut_complete", ag.complete);
    flag("cayley_aut_complete", ac.complete);
    BigInt og = ag.group.order(), oc = ac.group.order();
    claim("medial_aut_order", bpow(2, 2 * q + 2) * bpow(3, 2 * q) * q, og);
    claim("cayley_aut_order", bpow(2, 4 * q + 3) * bpow(3, 4 * q) * q, oc);
    BigInt sg = og / medial.graph.order(), sc = oc / cayley.graph.order();
    claim("medial_stabiliser", bpow(2, 2 * q + 1) * bpow(3, 2 * q - 1), sg);
    claim("cayley_stabiliser", bpow(2, 4 * q + 1) * bpow(3, 4 * q - 2), sc);
    flag("cayley_stabiliser_larger", sc > sg);
  }
  return rep;
}

}  // namespace polysym::families
