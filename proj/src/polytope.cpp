#include "polysym/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "polysym/error.hpp"

namespace polysym::poly {

using perm::Perm;
using perm::PermGroup;

namespace {

Perm product(const std::vector<Perm>& gens, std::size_t from, std::size_t to) {
  Perm p = gens[from];
  for (std::size_t k = from + 1; k <= to; ++k) p *= gens[k];
  return p;
}

std::string set_string(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

PermGroup subgroup(const std::vector<Perm>& gens, std::size_t degree, bool regular) {
  if (regular) return perm::semiregular_group(gens, degree);
  if (gens.empty()) return PermGroup(degree);
  return PermGroup::build(gens, degree);
}

std::shared_ptr<const PermGroup> regular_group(const std::vector<Perm>& gens, std::size_t order) {
  perm::ChainOptions opts;
  opts.known_order = BigInt(order);
  if (order == 1) return std::make_shared<const PermGroup>(1);
  return std::make_shared<const PermGroup>(PermGroup::build(gens, order, opts));
}

fp::Presentation named_presentation(const std::string& prefix, std::size_t count, std::size_t first,
                                    std::vector<fp::Word> relators) {
  fp::Presentation p;
  for (std::size_t i = 0; i < count; ++i) p.alphabet.push_back({prefix + std::to_string(first + i), i});
  for (auto& r : relators) p.add_relator(std::move(r));
  return p;
}

// In a regular action an element is fixed by where it sends 0, so two
// subgroups meet in as many elements as their orbits of 0 share.
BigInt meet_order(const PermGroup& a, const PermGroup& b, bool regular, std::size_t budget) {
  if (!regular) return perm::intersect(a, b, budget).order();
  std::vector<bool> in_a(a.degree(), false);
  for (Point x : a.orbit(0)) in_a[x] = true;
  std::size_t count = 0;
  for (Point x : b.orbit(0)) count += in_a[x] ? 1 : 0;
  return BigInt(count);
}

}  // namespace

RotationSystem build_rotation_system(const fp::Presentation& pres, std::vector<long long> schlafli,
                                     std::size_t limit) {
  if (pres.generator_count() != schlafli.size() || schlafli.empty()) {
    throw InvalidArgument("rotation system needs one generator per Schlafli entry");
  }
  auto table = fp::coset_enumerate(pres, {}, limit);
  auto rep = fp::perm_rep(table, pres);
  for (const auto& w : fp::rotation_relators(schlafli)) {
    if (!fp::evaluate_word(w, rep).is_identity()) {
      throw InvalidArgument("rotation relation " + pres.format(w) + " does not hold");
    }
  }
  for (std::size_t j = 0; j < rep.size(); ++j) {
    BigInt ord = perm::element_order(rep[j]);
    if (ord != schlafli[j]) {
      throw InvalidArgument("quotient is not smooth: generator " + pres.alphabet[j].name + " has order " +
                            ord.str() + ", expected " + std::to_string(schlafli[j]));
    }
  }
  RotationSystem sys;
  sys.group = regular_group(rep, table.count());
  sys.sigma = std::move(rep);
  sys.schlafli = std::move(schlafli);
  sys.source = pres;
  return sys;
}

ReflectionSystem build_reflection_system(const fp::Presentation& pres, std::vector<long long> schlafli,
                                         std::size_t limit) {
  if (pres.generator_count() != schlafli.size() + 1) {
    throw InvalidArgument("reflection system needs one more generator than Schlafli entries");
  }
  auto table = fp::coset_enumerate(pres, {}, limit);
  auto rep = fp::perm_rep(table, pres);
  for (const auto& w : fp::coxeter_relators(schlafli)) {
    if (!fp::evaluate_word(w, rep).is_identity()) {
      throw InvalidArgument("Coxeter relation " + pres.format(w) + " does not hold");
    }
  }
  for (std::size_t i = 0; i < rep.size(); ++i) {
    if (rep[i].is_identity()) throw InvalidArgument("generator " + pres.alphabet[i].name + " is trivial");
  }
  for (std::size_t i = 0; i + 1 < rep.size(); ++i) {
    BigInt ord = perm::element_order(rep[i] * rep[i + 1]);
    if (ord != schlafli[i]) {
      throw InvalidArgument("quotient is not smooth: " + pres.alphabet[i].name + "*" + pres.alphabet[i + 1].name +
                            " has order " + ord.str() + ", expected " + std::to_string(schlafli[i]));
    }
  }
  ReflectionSystem sys;
  sys.group = regular_group(rep, table.count());
  sys.rho = std::move(rep);
  sys.schlafli = std::move(schlafli);
  sys.source = pres;
  sys.regular = true;
  return sys;
}

ReflectionSystem reflection_system_from_perms(std::vector<Perm> rho) {
  if (rho.size() < 2) throw InvalidArgument("reflection system needs at least two generators");
  const std::size_t n = rho.size();
  std::vector<long long> schlafli;
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i].is_identity() || !(rho[i] * rho[i]).is_identity()) {
      throw InvalidArgument("generator " + std::to_string(i) + " is not an involution");
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      Perm c = rho[i] * rho[j];
      if (!(c * c).is_identity()) {
        throw InvalidArgument("generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
      }
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    schlafli.push_back(static_cast<long long>(perm::element_order(rho[i] * rho[i + 1])));
  }
  ReflectionSystem sys;
  sys.group = std::make_shared<const PermGroup>(PermGroup::build(rho));
  sys.rho = std::move(rho);
  sys.source = named_presentation("r", n, 0, fp::coxeter_relators(schlafli));
  sys.schlafli = std::move(schlafli);
  sys.regular = false;
  return sys;
}

RotationSystem rotation_subsystem(const ReflectionSystem& sys) {
  const std::size_t n = sys.rank();
  std::vector<Perm> sigma;
  for (std::size_t i = 1; i < n; ++i) sigma.push_back(sys.rho[i - 1] * sys.rho[i]);
  PermGroup even = subgroup(sigma, sys.group->degree(), sys.regular);
  const bool everything = even.order() == sys.group->order();
  std::vector<Perm> gens = sigma;
  if (everything) gens.insert(gens.end(), sys.rho.begin(), sys.rho.end());
  auto regular = perm::regular_representation(even, gens);
  RotationSystem out;
  out.group = regular_group(regular, static_cast<std::size_t>(even.order()));
  out.sigma.assign(regular.begin(), regular.begin() + static_cast<std::ptrdiff_t>(n - 1));
  if (everything) out.rho.assign(regular.begin() + static_cast<std::ptrdiff_t>(n - 1), regular.end());
  out.schlafli = sys.schlafli;
  out.source = named_presentation("s", n - 1, 1, fp::rotation_relators(sys.schlafli));
  out.presented = false;
  return out;
}

IntersectionResult check_intersection_conditions(const RotationSystem& sys, std::size_t budget) {
  if (sys.rank() != 4) return check_chain_intersection_conditions(sys, budget);
  const std::size_t deg = sys.group->degree();
  const auto& s = sys.sigma;
  struct Case {
    std::vector<int> a, b, c;
  };
  // Index sets into sigma (1-based in reports).
  const std::vector<Case> cases = {{{1}, {2}, {}}, {{2}, {3}, {}}, {{1, 2}, {2, 3}, {2}}};
  auto gens = [&](const std::vector<int>& idx) {
    std::vector<Perm> out;
    for (int i : idx) out.push_back(s[static_cast<std::size_t>(i - 1)]);
    return out;
  };
  for (const auto& c : cases) {
    PermGroup a = perm::semiregular_group(gens(c.a), deg);
    PermGroup b = perm::semiregular_group(gens(c.b), deg);
    PermGroup expected = perm::semiregular_group(gens(c.c), deg);
    BigInt meet = meet_order(a, b, true, budget);
    if (meet != expected.order()) {
      IntersectionResult r;
      r.ok = false;
      r.first = c.a;
      r.second = c.b;
      r.detail = "rotation subgroups " + set_string(c.a) + " and " + set_string(c.b) + " meet in order " +
                 meet.str() + ", expected " + expected.order().str();
      return r;
    }
  }
  return {};
}

IntersectionResult check_chain_intersection_conditions(const RotationSystem& sys, std::size_t budget) {
  const int n = static_cast<int>(sys.rank());
  const std::size_t deg = sys.group->degree();
  // Chain elements for 0 <= i <= j <= n; identity cases dropped.
  auto chain_element = [&](int i, int j) -> std::optional<Perm> {
    if (i == j && 0 < i && i < n) return sys.sigma[static_cast<std::size_t>(i - 1)];
    if (i == 0 || j == n || i >= j) return std::nullopt;
    return product(sys.sigma, static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  };
  const int m = n + 2;  // members -1..n
  std::vector<PermGroup> groups(static_cast<std::size_t>(1) << m);
  auto members = [&](unsigned mask) {
    std::vector<int> out;
    for (int b = 0; b < m; ++b) {
      if (mask & (1u << b)) out.push_back(b - 1);
    }
    return out;
  };
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> set = members(mask);
    std::vector<Perm> gens;
    for (int s : set) {
      for (int t : set) {
        if (s + 1 > t) continue;
        if (auto e = chain_element(s + 1, t)) gens.push_back(*e);
      }
    }
    groups[mask] = perm::semiregular_group(gens, deg);
  }
  for (unsigned a = 0; a < (1u << m); ++a) {
    for (unsigned b = a + 1; b < (1u << m); ++b) {
      if ((a & b) == a || (a & b) == b) continue;
      BigInt meet = meet_order(groups[a], groups[b], true, budget);
      if (meet != groups[a & b].order()) {
        IntersectionResult r;
        r.ok = false;
        r.first = members(a);
        r.second = members(b);
        r.detail = "chain subgroups " + set_string(r.first) + " and " + set_string(r.second) + " meet in order " +
                   meet.str() + ", expected " + groups[a & b].order().str();
        return r;
      }
    }
  }
  return {};
}

IntersectionResult check_intersection_conditions(const ReflectionSystem& sys, std::size_t budget) {
  const std::size_t n = sys.rank();
  const std::size_t deg = sys.group->degree();
  std::vector<PermGroup> groups(static_cast<std::size_t>(1) << n);
  auto members = [&](unsigned mask) {
    std::vector<int> out;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (1u << b)) out.push_back(static_cast<int>(b));
    }
    return out;
  };
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Perm> gens;
    for (int i : members(mask)) gens.push_back(sys.rho[static_cast<std::size_t>(i)]);
    groups[mask] = subgroup(gens, deg, sys.regular);
  }
  for (unsigned a = 0; a < (1u << n); ++a) {
    for (unsigned b = a + 1; b < (1u << n); ++b) {
      if ((a & b) == a || (a & b) == b) continue;
      BigInt meet = meet_order(groups[a], groups[b], sys.regular, budget);
      if (meet != groups[a & b].order()) {
        IntersectionResult r;
        r.ok = false;
        r.first = members(a);
        r.second = members(b);
        r.detail = "reflection subgroups " + set_string(r.first) + " and " + set_string(r.second) +
                   " meet in order " + meet.str() + ", expected " + groups[a & b].order().str();
        return r;
      }
    }
  }
  return {};
}

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::directly_regular:
      return "directly-regular";
    case Orientation::chiral:
      return "chiral";
    case Orientation::non_orientably_regular:
      return "non-orientably-regular";
  }
  return "unknown";
}

std::string to_string(SelfDuality k) {
  switch (k) {
    case SelfDuality::not_self_dual:
      return "not-self-dual";
    case SelfDuality::properly_self_dual:
      return "properly-self-dual";
    case SelfDuality::improperly_self_dual:
      return "improperly-self-dual";
  }
  return "unknown";
}

perm::GenMap regularity_map(const RotationSystem& sys) {
  perm::GenMap m;
  m.domain = sys.sigma;
  m.images = sys.sigma;
  m.images[0] = sys.sigma[0].inverse();
  if (sys.sigma.size() >= 2) m.images[1] = sys.sigma[0] * sys.sigma[0] * sys.sigma[1];
  return m;
}

perm::GenMap proper_duality_map(const RotationSystem& sys) {
  const std::size_t k = sys.sigma.size();
  perm::GenMap m;
  m.domain = sys.sigma;
  for (std::size_t i = 0; i < k; ++i) m.images.push_back(sys.sigma[k - 1 - i].inverse());
  return m;
}

perm::GenMap improper_duality_map(const RotationSystem& sys) {
  const std::size_t k = sys.sigma.size();  // n - 1
  if (k < 2) throw InvalidArgument("improper duality map needs rank at least 3");
  const auto& s = sys.sigma;
  perm::GenMap m;
  m.domain = s;
  for (std::size_t i = 0; i + 2 < k; ++i) m.images.push_back(s[k - 1 - i].inverse());
  m.images.push_back(s[0] * s[1] * s[0].inverse());
  m.images.push_back(s[0]);
  return m;
}

Orientation classify_orientation(const RotationSystem& sys) {
  if (!sys.rho.empty()) return Orientation::non_orientably_regular;
  auto w = perm::extend_generator_map(regularity_map(sys), *sys.group);
  return (w && w->is_involution()) ? Orientation::directly_regular : Orientation::chiral;
}

Orientation classify_orientation(const ReflectionSystem& sys) {
  std::vector<Perm> sigma;
  for (std::size_t i = 1; i < sys.rank(); ++i) sigma.push_back(sys.rho[i - 1] * sys.rho[i]);
  PermGroup even = subgroup(sigma, sys.group->degree(), sys.regular);
  BigInt index = sys.group->order() / even.order();
  if (index == 2) return Orientation::directly_regular;
  if (index == 1) return Orientation::non_orientably_regular;
  throw InvariantViolation("rotation subgroup has index " + index.str());
}

SelfDualityResult classify_self_duality(const RotationSystem& sys) {
  if (sys.rank() != 4) throw InvalidArgument("self-duality classification supports rank 4 only");
  SelfDualityResult r;
  auto proper = perm::extend_generator_map(proper_duality_map(sys), *sys.group);
  r.proper_extends = proper && proper->is_involution();
  std::optional<perm::AutomorphismWitness> improper;
  if (classify_orientation(sys) == Orientation::chiral) {
    improper = perm::extend_generator_map(improper_duality_map(sys), *sys.group);
    r.improper_extends = improper.has_value();
  }
  if (r.proper_extends) {
    r.kind = SelfDuality::properly_self_dual;
    r.witness = std::move(proper);
    if (r.improper_extends) r.warning = "both the proper and the improper duality maps extend";
  } else if (r.improper_extends) {
    r.kind = SelfDuality::improperly_self_dual;
    r.witness = std::move(improper);
  }
  return r;
}

std::optional<perm::AutomorphismWitness> reflection_duality(const ReflectionSystem& sys) {
  perm::GenMap m;
  m.domain = sys.rho;
  m.images.assign(sys.rho.rbegin(), sys.rho.rend());
  return perm::extend_generator_map(m, *sys.group);
}

// ---- face lattice ----

FaceLattice::FaceLattice(std::vector<std::size_t> counts,
                         std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> incidences)
    : counts_(std::move(counts)) {
  if (incidences.size() + 1 != counts_.size() && !(counts_.empty() && incidences.empty())) {
    throw InvalidArgument("need one incidence list per consecutive rank pair");
  }
  index_incidences(std::move(incidences));
}

void FaceLattice::index_incidences(std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> incidences) {
  const std::size_t n = counts_.size();
  up_.assign(n, {});
  down_.assign(n, {});
  for (std::size_t j = 0; j < n; ++j) {
    up_[j].assign(counts_[j], {});
    down_[j].assign(counts_[j], {});
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    auto& list = incidences[j];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (auto [f, g] : list) {
      if (f >= counts_[j] || g >= counts_[j + 1]) throw InvalidArgument("incidence refers to a missing face");
      up_[j][f].push_back(g);
      down_[j + 1][g].push_back(f);
    }
  }
  for (auto& rank : down_) {
    for (auto& l : rank) std::sort(l.begin(), l.end());
  }
}

std::size_t FaceLattice::total_faces() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }

std::size_t FaceLattice::offset(std::size_t j) const {
  return std::accumulate(counts_.begin(), counts_.begin() + static_cast<std::ptrdiff_t>(j), std::size_t{0});
}

bool FaceLattice::incident(std::size_t j, std::uint32_t f, std::uint32_t g) const {
  const auto& l = up_[j][f];
  return std::binary_search(l.begin(), l.end(), g);
}

void FaceLattice::remove_incidence(std::size_t j, std::uint32_t f, std::uint32_t g) {
  auto& u = up_[j][f];
  auto& d = down_[j + 1][g];
  auto it = std::find(u.begin(), u.end(), g);
  if (it == u.end()) throw InvalidArgument("no such incidence");
  u.erase(it);
  d.erase(std::find(d.begin(), d.end(), f));
}

void FaceLattice::write(std::ostream& os) const {
  os << "rank " << rank() << '\n';
  os << "f_vector";
  for (auto c : counts_) os << ' ' << c;
  os << '\n';
  for (std::size_t j = 0; j + 1 < rank(); ++j) {
    for (std::uint32_t f = 0; f < counts_[j]; ++f) {
      for (auto g : up_[j][f]) os << "incidence " << j << ' ' << f << ' ' << g << '\n';
    }
  }
}

FaceLattice FaceLattice::from_point_partitions(std::vector<std::vector<std::uint32_t>> face_of_point,
                                               std::vector<std::vector<Point>> representative) {
  const std::size_t n = face_of_point.size();
  std::vector<std::size_t> counts;
  for (const auto& r : representative) counts.push_back(r.size());
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> inc(n ? n - 1 : 0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    std::vector<std::uint64_t> keys;
    keys.reserve(face_of_point[j].size());
    for (std::size_t x = 0; x < face_of_point[j].size(); ++x) {
      keys.push_back((std::uint64_t{face_of_point[j][x]} << 32) | face_of_point[j + 1][x]);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (auto k : keys) inc[j].emplace_back(static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k));
  }
  FaceLattice lat(std::move(counts), std::move(inc));
  lat.face_of_point_ = std::move(face_of_point);
  lat.representative_ = std::move(representative);
  return lat;
}

std::vector<std::vector<Perm>> face_stabiliser_generators(const RotationSystem& sys) {
  const std::size_t n = sys.rank();
  const auto& s = sys.sigma;
  std::vector<std::vector<Perm>> out(n);
  if (!sys.rho.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) out[i].push_back(sys.rho[j]);
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      for (std::size_t j = 2; j <= n - 1; ++j) out[i].push_back(s[j - 1]);
    } else if (i == n - 1) {
      for (std::size_t j = 1; j <= n - 2; ++j) out[i].push_back(s[j - 1]);
    } else {
      for (std::size_t j = 1; j <= n - 1; ++j) {
        if (j != i && j != i + 1) out[i].push_back(s[j - 1]);
      }
      out[i].push_back(s[i - 1] * s[i]);
    }
  }
  return out;
}

std::vector<std::vector<Perm>> face_stabiliser_generators(const ReflectionSystem& sys) {
  const std::size_t n = sys.rank();
  std::vector<std::vector<Perm>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) out[i].push_back(sys.rho[j]);
    }
  }
  return out;
}

namespace {

FaceLattice lattice_from_stabilisers(const std::vector<std::vector<Perm>>& stabs, std::size_t points,
                                     std::size_t face_budget) {
  std::vector<std::vector<std::uint32_t>> face_of_point;
  std::vector<std::vector<Point>> reps;
  for (const auto& gens : stabs) {
    std::vector<std::uint32_t> label(points, UINT32_MAX);
    std::vector<Point> rep;
    std::vector<Point> queue;
    for (Point x = 0; x < points; ++x) {
      if (label[x] != UINT32_MAX) continue;
      if (rep.size() >= face_budget) throw LimitExceeded("face budget exceeded");
      auto id = static_cast<std::uint32_t>(rep.size());
      rep.push_back(x);
      label[x] = id;
      queue.assign(1, x);
      for (std::size_t h = 0; h < queue.size(); ++h) {
        for (const auto& g : gens) {
          Point y = g[queue[h]];
          if (label[y] == UINT32_MAX) {
            label[y] = id;
            queue.push_back(y);
          }
        }
      }
    }
    face_of_point.push_back(std::move(label));
    reps.push_back(std::move(rep));
  }
  return FaceLattice::from_point_partitions(std::move(face_of_point), std::move(reps));
}

}  // namespace

FaceLattice build_face_lattice(const RotationSystem& sys, std::size_t face_budget) {
  return lattice_from_stabilisers(face_stabiliser_generators(sys), sys.group->degree(), face_budget);
}

FaceLattice build_face_lattice(const ReflectionSystem& sys, std::size_t face_budget) {
  if (sys.regular) {
    return lattice_from_stabilisers(face_stabiliser_generators(sys), sys.group->degree(), face_budget);
  }
  ReflectionSystem reg = sys;
  reg.rho = perm::regular_representation(*sys.group, sys.rho);
  reg.group = regular_group(reg.rho, static_cast<std::size_t>(sys.group->order()));
  reg.regular = true;
  return lattice_from_stabilisers(face_stabiliser_generators(reg), reg.group->degree(), face_budget);
}

std::vector<std::vector<std::uint32_t>> enumerate_flags(const FaceLattice& lat, std::size_t budget) {
  const std::size_t n = lat.rank();
  std::vector<std::vector<std::uint32_t>> flags;
  if (n == 0) return flags;
  std::vector<std::uint32_t> chain(n);
  auto extend = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      if (flags.size() >= budget) throw LimitExceeded("flag budget exceeded");
      flags.push_back(chain);
      return;
    }
    for (auto g : lat.up(j - 1, chain[j - 1])) {
      chain[j] = g;
      self(self, j + 1);
    }
  };
  for (std::uint32_t f = 0; f < lat.f_vector()[0]; ++f) {
    chain[0] = f;
    extend(extend, 1);
  }
  return flags;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

ValidationReport validate_polytope(const FaceLattice& lat, std::size_t flag_budget) {
  ValidationReport rep;
  const std::size_t n = lat.rank();
  const auto& f = lat.f_vector();
  auto violation = [&](bool& flag, std::string what, std::vector<std::int64_t> witness) {
    if (flag) {
      flag = false;
      if (rep.first_violation.empty()) {
        rep.first_violation = std::move(what);
        rep.witness = std::move(witness);
      }
    }
  };

  // Every face has a cover above and below, so all maximal chains are flags.
  for (std::size_t j = 0; j < n && rep.chains_full; ++j) {
    for (std::uint32_t a = 0; a < f[j]; ++a) {
      if (j > 0 && lat.down(j, a).empty()) {
        violation(rep.chains_full, "face " + std::to_string(a) + " of rank " + std::to_string(j) + " has no face below",
                  {static_cast<std::int64_t>(j), a});
        break;
      }
      if (j + 1 < n && lat.up(j, a).empty()) {
        violation(rep.chains_full, "face " + std::to_string(a) + " of rank " + std::to_string(j) + " has no face above",
                  {static_cast<std::int64_t>(j), a});
        break;
      }
    }
  }

  // Diamond condition: -1 and n stand for the least and greatest faces.
  auto diamond_fail = [&](std::size_t j, std::int64_t a, std::int64_t b, std::size_t count) {
    violation(rep.diamond,
              "diamond condition fails at rank " + std::to_string(j) + " between faces " + std::to_string(a) + " and " +
                  std::to_string(b) + " (" + std::to_string(count) + " middle faces)",
              {static_cast<std::int64_t>(j), a, b, static_cast<std::int64_t>(count)});
  };
  if (n == 1 && f[0] != 2) diamond_fail(0, -1, -1, f[0]);
  for (std::size_t j = 0; j < n && rep.diamond; ++j) {
    if (n == 1) break;
    if (j == 0) {
      for (std::uint32_t b = 0; b < f[1] && rep.diamond; ++b) {
        if (lat.down(1, b).size() != 2) diamond_fail(0, -1, b, lat.down(1, b).size());
      }
    } else if (j == n - 1) {
      for (std::uint32_t a = 0; a < f[n - 2] && rep.diamond; ++a) {
        if (lat.up(n - 2, a).size() != 2) diamond_fail(n - 1, a, -1, lat.up(n - 2, a).size());
      }
    } else {
      std::unordered_map<std::uint32_t, std::size_t> middle;
      for (std::uint32_t a = 0; a < f[j - 1] && rep.diamond; ++a) {
        middle.clear();
        for (auto c : lat.up(j - 1, a)) {
          for (auto b : lat.up(j, c)) ++middle[b];
        }
        std::vector<std::pair<std::uint32_t, std::size_t>> sorted(middle.begin(), middle.end());
        std::sort(sorted.begin(), sorted.end());
        for (auto [b, count] : sorted) {
          if (count != 2) {
            diamond_fail(j, a, b, count);
            break;
          }
        }
      }
    }
  }

  if (!rep.diamond || !rep.chains_full) {
    rep.flag_connected = false;
    return rep;
  }

  auto flags = enumerate_flags(lat, flag_budget);
  rep.flags = flags.size();
  // Flags sharing all faces except rank i are i-adjacent; bucket them.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order(flags.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key_less = [&](std::size_t a, std::size_t b) {
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        if (flags[a][r] != flags[b][r]) return flags[a][r] < flags[b][r];
      }
      return false;
    };
    std::sort(order.begin(), order.end(), key_less);
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (!key_less(order[k - 1], order[k])) adjacency[i].emplace_back(order[k - 1], order[k]);
    }
  }
  // Sections between ranks lo < hi (lo = -1 and hi = n for the extremes)
  // of rank >= 2 must have connected flag graphs.
  for (int lo = -1; lo <= static_cast<int>(n) - 3 && rep.flag_connected; ++lo) {
    for (int hi = lo + 3; hi <= static_cast<int>(n) && rep.flag_connected; ++hi) {
      UnionFind uf(flags.size());
      std::size_t components = flags.size();
      for (int i = lo + 1; i < hi; ++i) {
        for (auto [a, b] : adjacency[static_cast<std::size_t>(i)]) components -= uf.unite(a, b) ? 1 : 0;
      }
      // Flags agreeing outside the open interval must form one component.
      std::vector<std::vector<std::uint32_t>> sections;
      sections.reserve(flags.size());
      for (const auto& fl : flags) {
        std::vector<std::uint32_t> outside;
        for (int r = 0; r < static_cast<int>(n); ++r) {
          if (r <= lo || r >= hi) outside.push_back(fl[static_cast<std::size_t>(r)]);
        }
        sections.push_back(std::move(outside));
      }
      std::sort(sections.begin(), sections.end());
      std::size_t distinct = static_cast<std::size_t>(std::unique(sections.begin(), sections.end()) - sections.begin());
      if (components != distinct) {
        violation(rep.flag_connected,
                  "flag graph of a section between ranks " + std::to_string(lo) + " and " + std::to_string(hi) +
                      " is disconnected (" + std::to_string(components) + " components, " + std::to_string(distinct) +
                      " sections)",
                  {lo, hi, static_cast<std::int64_t>(components), static_cast<std::int64_t>(distinct)});
      }
    }
  }
  return rep;
}

// ---- dualities ----

perm::Perm left_multiplication(const std::vector<Perm>& regular_gens, const Perm& element) {
  const std::size_t deg = element.degree();
  std::vector<Point> img(deg, static_cast<Point>(-1));
  img[0] = element[0];
  std::vector<Point> queue{0};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    Point y = queue[h];
    for (const auto& t : regular_gens) {
      Point z = t[y];
      if (img[z] == static_cast<Point>(-1)) {
        img[z] = t[img[y]];
        queue.push_back(z);
      }
    }
  }
  if (queue.size() != deg) throw InvalidArgument("generators are not transitive on the regular points");
  return Perm(std::move(img));
}

std::vector<Point> automorphism_on_points(const std::vector<Perm>& regular_gens, const std::vector<Perm>& images) {
  const std::size_t deg = regular_gens.front().degree();
  std::vector<Point> map(deg, static_cast<Point>(-1));
  map[0] = 0;
  std::vector<Point> queue{0};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    Point y = queue[h];
    for (std::size_t k = 0; k < regular_gens.size(); ++k) {
      Point z = regular_gens[k][y];
      Point w = images[k][map[y]];
      if (map[z] == static_cast<Point>(-1)) {
        map[z] = w;
        queue.push_back(z);
      } else if (map[z] != w) {
        throw InvalidArgument("generator images do not define a homomorphism");
      }
    }
  }
  if (queue.size() != deg) throw InvalidArgument("generators are not transitive on the regular points");
  return map;
}

std::vector<Perm> face_action(const FaceLattice& lat, const std::vector<Perm>& regular_gens) {
  if (!lat.has_points()) throw InvalidArgument("lattice has no point data");
  std::vector<Perm> out;
  for (const auto& s : regular_gens) {
    Perm left = left_multiplication(regular_gens, s);
    std::vector<Point> img;
    img.reserve(lat.total_faces());
    for (std::size_t j = 0; j < lat.rank(); ++j) {
      std::size_t off = lat.offset(j);
      for (std::uint32_t fc = 0; fc < lat.f_vector()[j]; ++fc) {
        img.push_back(static_cast<Point>(off + lat.face_of_point(j, left[lat.representative(j, fc)])));
      }
    }
    out.emplace_back(std::move(img));
  }
  return out;
}

perm::Perm base_duality(const RotationSystem& sys, const FaceLattice& lat, const perm::AutomorphismWitness& witness) {
  const std::size_t n = lat.rank();
  if (n != 4 || sys.rank() != 4) throw InvalidArgument("base duality supports rank 4 only");
  if (!lat.has_points()) throw InvalidArgument("lattice has no point data");
  const auto& group = *sys.group;
  if (group.base().empty() || group.base().front() != 0) throw InvariantViolation("regular chain must be based at 0");
  const std::vector<Point> dmap = automorphism_on_points(sys.sigma, witness.map().images);
  const auto stabs = face_stabiliser_generators(sys);

  // candidates[j]: faces c of rank n-1-j with c^-1 d(H_j) c inside H_{n-1-j}.
  std::vector<std::vector<std::uint32_t>> candidates(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t t = n - 1 - j;
    std::vector<Perm> lefts;
    for (const auto& h : stabs[j]) lefts.push_back(left_multiplication(sys.sigma, witness.apply(h)));
    for (std::uint32_t c = 0; c < lat.f_vector()[t]; ++c) {
      Point x = lat.representative(t, c);
      bool ok = std::all_of(lefts.begin(), lefts.end(),
                            [&](const Perm& l) { return lat.face_of_point(t, l[x]) == c; });
      if (ok) candidates[j].push_back(c);
    }
  }
  // Choose one candidate per rank so that the images form a flag.
  std::vector<std::uint32_t> chosen(n);
  auto search = [&](auto&& self, std::size_t j) -> bool {
    if (j == n) return true;
    for (auto c : candidates[j]) {
      if (j > 0 && !lat.incident(n - 1 - j, c, chosen[j - 1])) continue;
      chosen[j] = c;
      if (self(self, j + 1)) return true;
    }
    return false;
  };
  if (!search(search, 0)) throw InvariantViolation("no base duality: stabiliser images do not form a flag");

  std::vector<Point> img(lat.total_faces(), static_cast<Point>(-1));
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t t = n - 1 - j;
    const Perm shift = group.transversal_element(0, lat.representative(t, chosen[j]));
    const std::size_t src = lat.offset(j), dst = lat.offset(t);
    for (Point x = 0; x < lat.point_count(); ++x) {
      auto face = lat.face_of_point(j, x);
      auto image = static_cast<Point>(dst + lat.face_of_point(t, shift[dmap[x]]));
      Point& slot = img[src + face];
      if (slot == static_cast<Point>(-1)) {
        slot = image;
      } else if (slot != image) {
        throw InvariantViolation("duality is not well defined on faces");
      }
    }
  }
  std::vector<bool> hit(img.size(), false);
  for (Point y : img) {
    if (y == static_cast<Point>(-1) || hit[y]) throw InvariantViolation("duality is not a bijection on faces");
    hit[y] = true;
  }
  Perm d(std::move(img));
  // Incidence must be reversed.
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::uint32_t a = 0; a < lat.f_vector()[j]; ++a) {
      for (auto b : lat.up(j, a)) {
        auto da = static_cast<std::uint32_t>(d[static_cast<Point>(lat.offset(j) + a)] - lat.offset(n - 1 - j));
        auto db = static_cast<std::uint32_t>(d[static_cast<Point>(lat.offset(j + 1) + b)] - lat.offset(n - 2 - j));
        if (!lat.incident(n - 2 - j, db, da)) throw InvariantViolation("duality does not reverse incidence");
      }
    }
  }
  return d;
}

DualityReport enumerate_dualities(const RotationSystem& sys, const FaceLattice& lat, const SelfDualityResult& duality) {
  if (duality.kind == SelfDuality::not_self_dual || !duality.witness) {
    throw InvalidArgument("dualities requested for a system without a duality witness");
  }
  Perm d = base_duality(sys, lat, *duality.witness);
  auto gens = face_action(lat, sys.sigma);
  perm::ChainOptions opts;
  opts.known_order = BigInt(sys.order());
  PermGroup faces = PermGroup::build(gens, lat.total_faces(), opts);
  if (!faces.contains(d * d)) throw InvariantViolation("square of the duality is not an automorphism");

  DualityReport rep;
  rep.kind = duality.kind;
  faces.for_each_element(
      [&](const Perm& g) {
        auto ord = static_cast<std::size_t>(perm::element_order(d * g));
        ++rep.order_histogram[ord];
        ++rep.total;
        return true;
      },
      10'000'000);
  rep.polarity_exists = rep.order_histogram.count(2) > 0;
  return rep;
}

void DualityReport::write(std::ostream& os) const {
  os << "kind=" << to_string(kind) << '\n';
  os << "polarity=" << (polarity_exists ? "yes" : "no") << '\n';
  os << "dualities=" << total << '\n';
  for (auto [k, v] : order_histogram) os << "order." << k << '=' << v << '\n';
}

}  // namespace polysym::poly
