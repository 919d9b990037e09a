#include "polysym/medial.hpp"

#include <algorithm>
#include <ostream>

#include "polysym/error.hpp"

namespace polysym::medial {

using perm::Perm;
using perm::PermGroup;

MedialGraph medial_layer_graph(const poly::FaceLattice& lat) {
  const std::size_t n = lat.rank();
  if (n % 2 != 0 || n < 2) throw InvalidArgument("medial layer graph needs an even rank");
  MedialGraph m;
  m.lower_rank = (n - 2) / 2;
  m.lower_count = lat.f_vector()[m.lower_rank];
  const std::size_t upper = lat.f_vector()[m.lower_rank + 1];
  std::vector<graph::Edge> edges;
  for (std::uint32_t f = 0; f < m.lower_count; ++f) {
    for (auto g : lat.up(m.lower_rank, f)) edges.emplace_back(f, static_cast<Point>(m.lower_count + g));
  }
  m.graph = graph::SymGraph::from_edges(m.lower_count + upper, edges);
  m.part.assign(m.lower_count, 1);
  m.part.resize(m.lower_count + upper, 2);
  return m;
}

void write_parts(std::ostream& os, const MedialGraph& m) {
  for (std::size_t v = 0; v < m.part.size(); ++v) os << v << " part=" << m.part[v] << '\n';
}

void write_fibres(std::ostream& os, const CoveringData& cov) {
  for (std::size_t v = 0; v < cov.nu.size(); ++v) os << v << " fibre=" << cov.nu[v] << '\n';
}

ExtendedRotationGroup build_extended_rotation_group(const poly::RotationSystem& sys,
                                                    const poly::SelfDualityResult& duality, std::size_t limit) {
  if (sys.rank() != 4) throw InvalidArgument("extended rotation group needs rank 4");
  if (duality.kind != poly::SelfDuality::properly_self_dual || !duality.witness) {
    throw InvalidArgument("extended rotation group needs a properly self-dual polytope");
  }
  const auto& w = *duality.witness;
  const std::size_t n = sys.order();
  // sigma acts on x * delta as d(sigma) on x.
  auto lift = [&](const Perm& r) {
    Perm image = w.apply(r);
    std::vector<Point> pts(2 * n);
    for (Point x = 0; x < n; ++x) {
      pts[x] = r[x];
      pts[n + x] = static_cast<Point>(n + image[x]);
    }
    return Perm(std::move(pts));
  };
  ExtendedRotationGroup ext;
  for (const auto& s : sys.sigma) ext.sigma.push_back(lift(s));
  for (const auto& r : sys.rho) ext.rho.push_back(lift(r));
  std::vector<Point> swap(2 * n);
  for (Point x = 0; x < n; ++x) {
    swap[x] = static_cast<Point>(n + x);
    swap[n + x] = x;
  }
  ext.delta = Perm(std::move(swap));
  ext.p = static_cast<std::size_t>(sys.schlafli[0]);
  ext.rotation_order = n;

  std::vector<Perm> gens = ext.sigma;
  gens.push_back(ext.delta);
  if (perm::semiregular_group(gens, 2 * n).order() != 2 * n) {
    throw InvariantViolation("extended group is not regular on its points");
  }
  const Perm& d = ext.delta;
  if (!(d * ext.sigma[0] * d == ext.sigma[2].inverse()) || !(d * ext.sigma[1] * d == ext.sigma[1].inverse())) {
    throw InvariantViolation("duality relations fail in the extended group");
  }
  perm::ChainOptions opts;
  opts.known_order = BigInt(2 * n);
  ext.group = std::make_shared<const PermGroup>(PermGroup::build(gens, 2 * n, opts));

  if (sys.presented) {
    fp::Presentation pres = sys.source;
    std::string name = "d";
    while (std::any_of(pres.alphabet.begin(), pres.alphabet.end(), [&](const fp::GenSymbol& g) { return g.name == name; })) {
      name += "_";
    }
    const std::size_t k = pres.generator_count();
    pres.alphabet.push_back({name, k});
    using fp::letter;
    pres.add_relator({letter(k), letter(k)});
    pres.add_relator({letter(k, true), letter(0), letter(k), letter(2)});
    pres.add_relator({letter(k, true), letter(1), letter(k), letter(1)});
    std::size_t count = fp::coset_enumerate(pres, {}, limit).count();
    if (count != 2 * n) {
      throw InvariantViolation("extended presentation has order " + std::to_string(count) + ", expected " +
                               std::to_string(2 * n));
    }
    ext.presentation_checked = true;
  }
  return ext;
}

PolaritySet polarity_set(const ExtendedRotationGroup& ext) {
  PolaritySet ps;
  const Perm& s1 = ext.sigma[0];
  for (std::size_t j = 1; j <= ext.p; ++j) {
    const long long e = static_cast<long long>(j) - 1;
    Perm dj = s1.pow(-e) * ext.delta * s1.pow(e);
    if (dj.is_identity() || !(dj * dj).is_identity()) throw InvariantViolation("polarity is not an involution");
    if (std::find(ps.deltas.begin(), ps.deltas.end(), dj) != ps.deltas.end()) {
      throw InvariantViolation("polarities delta_j are not distinct");
    }
    ps.deltas.push_back(std::move(dj));
  }
  ps.group = perm::semiregular_group(ps.deltas, ext.group->degree());
  std::vector<Perm> gens = ext.sigma;
  gens.push_back(ext.delta);
  for (const auto& x : gens) {
    for (const auto& dj : ps.deltas) {
      if (!ps.group.contains(x.inverse() * dj * x)) throw InvariantViolation("polarity group is not normal");
    }
  }
  return ps;
}

CayleyGraph cayley_graph(const ExtendedRotationGroup& ext, const PolaritySet& ps) {
  CayleyGraph c;
  const std::size_t deg = ext.group->degree();
  c.vertex_of_point.assign(deg, UINT32_MAX);
  ps.group.for_each_element(
      [&](const Perm& g) {
        c.vertex_of_point[g[0]] = static_cast<std::uint32_t>(c.point_of_vertex.size());
        c.point_of_vertex.push_back(g[0]);
        return true;
      },
      10'000'000);
  std::vector<graph::Edge> edges;
  for (std::uint32_t v = 0; v < c.point_of_vertex.size(); ++v) {
    for (const auto& dj : ps.deltas) {
      std::uint32_t w = c.vertex_of_point[dj[c.point_of_vertex[v]]];
      if (w == UINT32_MAX) throw InvariantViolation("polarity leaves the polarity group");
      if (v < w) edges.emplace_back(v, w);
    }
  }
  c.graph = graph::SymGraph::from_edges(c.point_of_vertex.size(), edges);
  return c;
}

CoveringData covering_map(const poly::RotationSystem& sys, const poly::FaceLattice& lat, const MedialGraph& medial,
                          const ExtendedRotationGroup& ext, const PolaritySet& ps, const CayleyGraph& cayley) {
  if (lat.rank() != 4 || !lat.has_points() || medial.lower_rank != 1) {
    throw InvalidArgument("covering map needs the rank-4 lattice of the rotation system");
  }
  const std::size_t n = ext.rotation_order;
  if (lat.point_count() != n || sys.order() != n) throw InvalidArgument("lattice and extended group disagree");
  if (BigInt(cayley.point_of_vertex.size()) != ps.group.order()) throw InvalidArgument("Cayley graph of another group");
  CoveringData cov;
  // Elements x go to the 2-face x F_2; elements x delta to the edge x F_1.
  for (Point y : cayley.point_of_vertex) {
    if (y < n) {
      cov.nu.push_back(static_cast<std::uint32_t>(medial.lower_count + lat.face_of_point(2, y)));
    } else {
      cov.nu.push_back(lat.face_of_point(1, static_cast<Point>(y - n)));
    }
  }
  const auto& c = cayley.graph;
  std::vector<std::size_t> fibre(medial.graph.order(), 0);
  for (Point v = 0; v < c.order(); ++v) {
    ++fibre[cov.nu[v]];
    std::vector<std::uint32_t> images;
    for (Point u : c.neighbors(v)) {
      if (!medial.graph.adjacent(cov.nu[v], cov.nu[u])) throw InvariantViolation("covering map is not a homomorphism");
      images.push_back(cov.nu[u]);
    }
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
      throw InvariantViolation("covering map is not injective on a neighbourhood");
    }
  }
  if (std::any_of(fibre.begin(), fibre.end(), [&](std::size_t f) { return f != fibre.front(); })) {
    throw InvariantViolation("covering map has unequal fibres");
  }
  cov.multiplicity = fibre.front();

  std::vector<Perm> stab;
  if (ext.rho.empty()) {
    stab = {ext.sigma[0], ext.sigma[1] * ext.sigma[2]};
  } else {
    stab = {ext.rho[0], ext.rho[1], ext.rho[3]};
  }
  std::vector<bool> in_stab(ext.group->degree(), false);
  for (Point x : perm::semiregular_group(stab, ext.group->degree()).orbit(0)) in_stab[x] = true;
  std::size_t meet = 0;
  for (Point y : cayley.point_of_vertex) meet += in_stab[y] ? 1 : 0;
  cov.m_value = meet;
  if (cov.m_value < 1 || cov.m_value > 2 * ext.p) throw InvariantViolation("meet with the 2-face stabiliser out of range");
  if (ext.rho.empty() && cov.m_value != cov.multiplicity) {
    throw InvariantViolation("covering multiplicity " + std::to_string(cov.multiplicity) + " differs from m = " +
                             cov.m_value.str());
  }
  return cov;
}

CayleyTwoArcGroup cayley_two_arc_group(const ExtendedRotationGroup& ext, const CayleyGraph& cayley) {
  std::vector<Perm> gens = ext.sigma;
  gens.push_back(ext.delta);
  const std::size_t nv = cayley.point_of_vertex.size();
  auto on_vertices = [&](const Perm& point_map) {
    std::vector<Point> img(nv);
    for (std::uint32_t v = 0; v < nv; ++v) {
      std::uint32_t w = cayley.vertex_of_point[point_map[cayley.point_of_vertex[v]]];
      if (w == UINT32_MAX) throw InvariantViolation("map leaves the polarity group");
      img[v] = w;
    }
    return Perm(std::move(img));
  };
  // g -> s^-1 g s
  auto conjugation = [&](const Perm& s) { return on_vertices(poly::left_multiplication(gens, s.inverse()) * s); };
  CayleyTwoArcGroup t;
  t.h = conjugation(ext.sigma[0]);
  t.p = conjugation(ext.sigma[0] * ext.sigma[1] * ext.sigma[2]);
  t.a = on_vertices(poly::left_multiplication(gens, ext.delta));
  t.group = PermGroup::build({t.h, t.p, t.a}, nv);
  return t;
}

PermGroup medial_extended_group(const poly::RotationSystem& sys, const poly::FaceLattice& lat, const MedialGraph& medial,
                                const Perm& base_duality) {
  auto faces = poly::face_action(lat, sys.sigma);
  faces.push_back(base_duality);
  const std::size_t lower = lat.offset(medial.lower_rank);
  const std::size_t nv = medial.graph.order();
  auto vertex_of_face = [&](Point f) -> Point {
    if (f >= lower && f < lower + nv) return static_cast<Point>(f - lower);
    throw InvariantViolation("extended group does not preserve the middle ranks");
  };
  std::vector<Perm> gens;
  for (const auto& f : faces) {
    std::vector<Point> img(nv);
    for (Point v = 0; v < nv; ++v) img[v] = vertex_of_face(f[static_cast<Point>(lower + v)]);
    gens.emplace_back(std::move(img));
  }
  perm::ChainOptions opts;
  opts.order_bound = BigInt(2 * sys.order());
  return PermGroup::build(gens, nv, opts);
}

std::string DeltaIdentityReport::d_reading() const {
  if (printed_d_holds && conjugate_d_holds) return "both";
  if (printed_d_holds) return "as-printed";
  if (conjugate_d_holds) return "conjugation";
  return "neither";
}

bool DeltaIdentityReport::all_hold() const {
  for (const auto& c : checks) {
    if (c.name.rfind("d ", 0) == 0) continue;
    if (!c.holds) return false;
  }
  return printed_d_holds || conjugate_d_holds;
}

DeltaIdentityReport verify_delta_identities(const ExtendedRotationGroup& ext) {
  const long long p = static_cast<long long>(ext.p);
  if (p < 3) throw InvalidArgument("delta identities need p >= 3");
  const Perm& s1 = ext.sigma[0];
  const Perm& s2 = ext.sigma[1];
  const Perm& s3 = ext.sigma[2];
  auto delta = [&](long long j) {
    long long e = ((j - 1) % p + p) % p;
    return s1.pow(-e) * ext.delta * s1.pow(e);
  };
  DeltaIdentityReport rep;
  auto record = [&](std::string name, auto&& test) {
    IdentityCheck c;
    c.name = std::move(name);
    for (long long j = 1; j <= p && c.holds; ++j) {
      for (long long k = 0; k < p && c.holds; ++k) {
        if (!test(j, k)) {
          c.holds = false;
          c.detail = "j=" + std::to_string(j) + " k=" + std::to_string(k);
        }
      }
    }
    rep.checks.push_back(std::move(c));
    return rep.checks.back().holds;
  };
  record("a", [&](long long j, long long k) { return delta(j + k) == s1.pow(-k) * delta(j) * s1.pow(k); });
  record("b", [&](long long j, long long k) {
    return delta(j) * delta(k) == s1.pow(1 - j) * s3.pow(k - j) * s1.pow(k - 1);
  });
  record("c", [&](long long, long long) { return s2 * s2 == delta(2) * delta(3) * delta(2) * delta(1); });
  auto d_rhs = [&](long long j) { return delta(1) * delta(2) * delta(j + 1) * delta(2) * delta(1); };
  rep.printed_d_holds =
      record("d as printed", [&](long long j, long long) { return s3 * delta(j) * delta(3).inverse() == d_rhs(j); });
  rep.conjugate_d_holds =
      record("d conjugation", [&](long long j, long long) { return s3 * delta(j) * s3.inverse() == d_rhs(j); });
  record("e", [&](long long j, long long) { return (s2 * s3).inverse() * delta(j) * s2 * s3 == delta(3 - j); });
  record("f", [&](long long j, long long) {
    return s2.inverse() * delta(j) * s2 == delta(1) * delta(2) * delta(4 - j) * delta(2) * delta(1) &&
           s2 * delta(j) * s2.inverse() == delta(2) * delta(3) * delta(4 - j) * delta(3) * delta(2);
  });
  return rep;
}

}  // namespace polysym::medial
