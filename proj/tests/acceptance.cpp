// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "polysym/error.hpp"
#include "polysym/families.hpp"
#include "polysym/fpgroup.hpp"
#include "polysym/graphsym.hpp"
#include "polysym/medial.hpp"
#include "polysym/polytope.hpp"
#include "polysym/presets.hpp"

using namespace polysym;
using graph::SymGraph;
using perm::Perm;
using perm::PermGroup;

namespace {

bool g_deep = false;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int g_failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) o.require(false, "over time budget " + std::to_string(budget_s) + " s");
  if (!o.pass) ++g_failures;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << secs << " s)";
  if (!o.detail.empty()) line << " -- " << o.detail;
  std::cout << line.str() << std::endl;
}

std::size_t coxeter_order(const std::string& diagram) {
  auto pres = fp::parse_presentation("gens r0 r1 r2 r3\ncoxeter " + diagram + "\n");
  return fp::coset_enumerate(pres, {}).count();
}

const std::vector<presets::Preset>& catalog() {
  static const auto cat = presets::load_catalog(POLYSYM_DATA_DIR "/presets");
  return cat;
}

// Preset runs are shared between criteria.
const presets::PresetReport& preset(const std::string& name) {
  static std::map<std::string, presets::PresetReport> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    presets::RunOptions o;
    o.deep = g_deep;
    it = cache.emplace(name, presets::run_preset(presets::find_preset(catalog(), name), o)).first;
  }
  return it->second;
}

void expect_value(Outcome& o, const presets::PresetReport& r, const std::string& key, const std::string& want) {
  const std::string* v = r.value(key);
  o.require(v && *v == want, r.name + " " + key + "=" + (v ? *v : "missing") + " (want " + want + ")");
}

void expect_preset_ok(Outcome& o, const presets::PresetReport& r) {
  o.require(!r.failed_stage, r.name + " failed at " + r.failed_stage.value_or("") + ": " + r.failure);
  for (const auto& d : r.deviations) o.require(false, r.name + " " + d.key + "=" + d.observed + " (want " + d.expected + ")");
}

poly::RotationSystem rotation(const std::string& text, std::vector<long long> schlafli) {
  return poly::build_rotation_system(fp::parse_presentation(text), std::move(schlafli));
}

bool has_involutory_reverser(const SymGraph& g, const PermGroup& a) {
  const Point u = 0, v = g.neighbors(0).front();
  bool found = false;
  a.for_each_element(
      [&](const Perm& x) {
        if (x[u] == v && x[v] == u && (x * x).is_identity()) found = true;
        return !found;
      },
      10'000'000);
  return found;
}

// Searches for a subgroup acting regularly on 2-arcs or on 3-arcs. Such a subgroup is
// generated by its vertex stabiliser (order 6 or 12, 2-generated) and one
// arc reverser.
bool small_type_subgroup_exists(const SymGraph& g, const PermGroup& aut) {
  const Point v = 0, w = g.neighbors(0).front();
  std::vector<Perm> stab;
  aut.pointwise_stabiliser({v}).for_each_element([&](const Perm& x) {
    stab.push_back(x);
    return true;
  });
  PermGroup chain = aut.with_base({v, w});
  Perm g0 = chain.transversal_element(0, w);
  Perm rev = chain.transversal_element(1, g0.inverse()[v]) * g0;
  std::vector<Perm> reversers;
  aut.pointwise_stabiliser({v, w}).for_each_element([&](const Perm& x) {
    reversers.push_back(x * rev);
    return true;
  });
  std::set<std::vector<Point>> seen;
  const BigInt a2 = graph::count_s_arcs(g, 2), a3 = graph::count_s_arcs(g, 3);
  for (std::size_t i = 0; i < stab.size(); ++i) {
    for (std::size_t j = i; j < stab.size(); ++j) {
      PermGroup hv = PermGroup::build({stab[i], stab[j]}, g.order());
      if (hv.order() != 6 && hv.order() != 12) continue;
      std::vector<Point> key;
      hv.for_each_element([&](const Perm& x) {
        key.insert(key.end(), x.images().begin(), x.images().end());
        return true;
      });
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      for (const auto& r : reversers) {
        PermGroup h = PermGroup::build({stab[i], stab[j], r}, g.order());
        if (h.order() == a2 || h.order() == a3) return true;
      }
    }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--deep") == 0) g_deep = true;
  }

  criterion(1, "Coxeter group orders", 2.0, [](Outcome& o) {
    for (auto [diagram, want] : {std::pair{"3 3 3", 120u}, std::pair{"3 4 3", 1152u}}) {
      auto t0 = std::chrono::steady_clock::now();
      std::size_t got = coxeter_order(diagram);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      o.require(got == want, std::string("[") + diagram + "] order " + std::to_string(got));
      o.require(secs < 1.0, std::string("[") + diagram + "] took " + std::to_string(secs) + " s");
    }
  });

  criterion(2, "chiral {3,6,3} of order 18522", 300.0, [](Outcome& o) {
    const auto& r = preset("chiral-3-6-3");
    expect_preset_ok(o, r);
    expect_value(o, r, "group_order", "18522");
    expect_value(o, r, "regularity_map_extends", "no");
    expect_value(o, r, "orientation", "chiral");
    expect_value(o, r, "proper_duality_extends", "no");
    expect_value(o, r, "improper_duality_extends", "yes");
    expect_value(o, r, "self_duality", "improperly-self-dual");
    expect_value(o, r, "f_vector", "147,3087,3087,147");
    expect_value(o, r, "duality_histogram", "4:6174,12:12348");
    expect_value(o, r, "polarity", "no");
    expect_value(o, r, "medial_order", "6174");
    expect_value(o, r, "medial_degree", "3");
    expect_value(o, r, "medial_bipartite", "yes");
  });

  criterion(3, "chiral {3,18,3} of order 39366", 600.0, [](Outcome& o) {
    const auto& r = preset("chiral-3-18-3");
    expect_preset_ok(o, r);
    BigInt want = 2;
    for (int i = 0; i < 9; ++i) want *= 3;
    expect_value(o, r, "group_order", want.str());
    expect_value(o, r, "f_vector", "81,6561,6561,81");
    expect_value(o, r, "duality_histogram", "4:4374,12:8748,36:26244");
    expect_value(o, r, "medial_order", "13122");
    if (const auto* k = r.value("normal_subgroup_order")) o.detail = "normal subgroup of order " + *k + " found";
  });

  criterion(4, "5-cell medial graph and Cayley cover", 30.0, [](Outcome& o) {
    auto sys = rotation("gens s1 s2 s3\nrotation 3 3 3\n", {3, 3, 3});
    auto lat = poly::build_face_lattice(sys);
    auto med = medial::medial_layer_graph(lat);
    o.require(med.graph.order() == 20, "medial order");
    auto gm = graph::analyze_graph(med.graph);
    o.require(gm.aut_order == 240, "medial |Aut| " + gm.aut_order.str());
    o.require(gm.s_regular == 3, "medial not 3-arc-regular");
    o.require(gm.dm_class && graph::to_string(*gm.dm_class) == "3", "medial class");
    auto ext = medial::build_extended_rotation_group(sys, poly::classify_self_duality(sys));
    auto ps = medial::polarity_set(ext);
    auto cay = medial::cayley_graph(ext, ps);
    o.require(cay.graph.order() == 120, "Cayley order");
    auto gc = graph::analyze_graph(cay.graph);
    o.require(gc.aut_order == 720, "Cayley |Aut| " + gc.aut_order.str());
    o.require(gc.s_regular == 2, "Cayley not 2-arc-regular");
    auto cov = medial::covering_map(sys, lat, med, ext, ps, cay);
    o.require(cov.multiplicity == 6, "multiplicity " + std::to_string(cov.multiplicity));
    o.require(gc.s_transitive <= gm.s_transitive, "cover more arc-transitive than the medial graph");
    o.detail = "s(cover)=" + std::to_string(gc.s_transitive) + " <= s(medial)=" + std::to_string(gm.s_transitive);
  });

  criterion(5, "24-cell medial graph and Cayley cover", 120.0, [](Outcome& o) {
    auto sys = rotation("gens s1 s2 s3\nrotation 3 4 3\n", {3, 4, 3});
    auto lat = poly::build_face_lattice(sys);
    auto med = medial::medial_layer_graph(lat);
    auto ext = medial::build_extended_rotation_group(sys, poly::classify_self_duality(sys));
    auto ps = medial::polarity_set(ext);
    auto cay = medial::cayley_graph(ext, ps);
    o.require(med.graph.order() == 192 && cay.graph.order() == 192, "orders");
    auto iso = graph::isomorphic(cay.graph, med.graph);
    o.require(iso.has_value(), "no isomorphism");
    if (iso) {
      bool maps = true;
      for (auto [a, b] : cay.graph.edges()) maps = maps && med.graph.adjacent((*iso)[a], (*iso)[b]);
      o.require(maps, "isomorphism witness does not preserve edges");
    }
    for (const auto* g : {&med.graph, &cay.graph}) {
      auto r = graph::analyze_graph(*g);
      o.require(r.aut_order == 2304 && r.aut_order == 2 * 1152, "|Aut| " + r.aut_order.str());
      o.require(r.s_regular == 3, "not 3-arc-regular");
    }
    auto cov = medial::covering_map(sys, lat, med, ext, ps, cay);
    o.require(cov.multiplicity == 1, "multiplicity");
    auto t = medial::cayley_two_arc_group(ext, cay);
    o.require(t.group.order() == graph::count_s_arcs(cay.graph, 2), "constructed group not 2-arc-regular");
    o.require(graph::check_3ar_extension(t.group, t.h, t.p, t.a), "extension check false");
  });

  criterion(6, "arc-regularity of the medial graph follows regularity versus chirality", 600.0, [](Outcome& o) {
    std::string done;
    for (const auto& p : catalog()) {
      if (p.kind == presets::Kind::family || p.schlafli.size() != 3 || p.schlafli[0] != 3 || p.schlafli[2] != 3) continue;
      const auto& r = preset(p.name);
      if (r.skipped) continue;
      expect_preset_ok(o, r);
      const bool chiral = r.value("orientation") && *r.value("orientation") == "chiral";
      const std::string want = chiral ? "2" : "3";
      const auto* full = r.value("medial_s_regular");
      if (full) {
        o.require(*full == want, p.name + " medial s_regular=" + *full);
      } else {
        // Too large for a full search: the duality extension acts on
        // 2-arcs regularly and (h, p, a) -> (h, p, a p) does not extend.
        std::size_t n = std::stoul(*r.value("medial_order"));
        expect_value(o, r, "medial_ext_order", std::to_string(12 * n / 2));
        expect_value(o, r, "medial_ext_2arc_regular", "yes");
        expect_value(o, r, "medial_ext_3ar_extension", chiral ? "no" : "yes");
      }
      expect_value(o, r, "medial_arc_matches_orientation", "yes");
      if (full) expect_value(o, r, "medial_aut_is_twice_group", "yes");
      // s(cover) <= s(medial) wherever the cover exists and both are known.
      if (r.value("cayley_s_transitive") && full) expect_value(o, r, "cover_arc_bound", "yes");
      done += (done.empty() ? "" : ",") + p.name;
    }
    o.detail = done;
  });

  criterion(7, "{6,q,6} family at q = 3" + std::string(g_deep ? " and q = 9" : ""), g_deep ? 1800.0 : 300.0,
            [](Outcome& o) {
              std::vector<long long> qs{3};
              if (g_deep) qs.push_back(9);
              for (long long q : qs) {
                auto rep = families::verify_family_claims(q);
                for (const auto& c : rep.claims) {
                  o.require(c.holds, "q=" + std::to_string(q) + " " + c.name + "=" + c.observed + " (want " + c.expected + ")");
                }
              }
              auto rep = families::verify_family_claims(3);
              for (const auto& c : rep.claims) {
                if (c.name == "medial_aut_order") o.require(c.observed == "559872", "|Aut(G)| at q=3");
              }
              o.require(families::build_six_q_six(3).group->order() == 216, "order 216");
            });

  criterion(8, "automorphism and s-arc oracles", 60.0, [](Outcome& o) {
    std::vector<std::pair<std::string, SymGraph>> small{{"K4", graph::complete_graph(4)},
                                                        {"K3,3", graph::complete_bipartite(3, 3)},
                                                        {"C6", graph::cycle_graph(6)},
                                                        {"cube", graph::generalized_petersen(4, 1)}};
    for (const auto& [name, g] : small) {
      auto a = graph::automorphism_group(g).group.order();
      o.require(a == fixtures::brute_force_aut(g), name + " |Aut| " + a.str());
    }
    auto pet = graph::generalized_petersen(5, 2);
    o.require(graph::automorphism_group(pet).group.order() == 120, "Petersen |Aut|");
    o.require(fixtures::pruned_aut_count(pet) == 120, "Petersen pruned oracle");
    std::vector<SymGraph> arcs{pet, fixtures::heawood(), graph::complete_graph(5), graph::generalized_petersen(8, 3)};
    for (auto& [name, g] : small) arcs.push_back(g);
    for (const auto& g : arcs) {
      for (std::size_t s = 0; s <= 5; ++s) {
        o.require(graph::count_s_arcs(g, s) == fixtures::dfs_arcs(g, s), "s-arc count at s=" + std::to_string(s));
      }
    }
  });

  criterion(9, "Tutte bound and arc-reversing involutions on cubic fixtures", 120.0, [](Outcome& o) {
    std::vector<std::pair<std::string, SymGraph>> fx{
        {"K4", graph::complete_graph(4)},
        {"K3,3", graph::complete_bipartite(3, 3)},
        {"cube", graph::generalized_petersen(4, 1)},
        {"Petersen", graph::generalized_petersen(5, 2)},
        {"Moebius-Kantor", graph::generalized_petersen(8, 3)},
        {"dodecahedron", graph::generalized_petersen(10, 2)},
        {"Desargues", graph::generalized_petersen(10, 3)},
        {"Nauru", graph::generalized_petersen(12, 5)},
        {"Heawood", fixtures::heawood()},
        {"Pappus", fixtures::pappus()},
        {"Tutte 8-cage", fixtures::tutte_cage()}};
    std::string classes;
    for (const auto& [name, g] : fx) {
      auto aut = graph::automorphism_group(g);
      auto rep = graph::arc_transitivity(g, aut.group);
      if (rep.s_transitive < 1) continue;  // not arc-transitive, outside the statement
      const int s = rep.s_transitive;
      BigInt want = BigInt(g.order()) * 3;
      for (int i = 1; i < s; ++i) want *= 2;
      o.require(s <= 5 && rep.s_regular == s, name + " s=" + std::to_string(s));
      o.require(aut.group.order() == want, name + " |Aut| " + aut.group.order().str());
      auto c = graph::dm_class(g, aut.group);
      if (s % 2 == 1) o.require(has_involutory_reverser(g, aut.group), name + " has no involutory reverser");
      if (s >= 4) o.require(!small_type_subgroup_exists(g, aut.group), name + " has a 2- or 3-arc-regular subgroup");
      classes += (classes.empty() ? "" : " ") + name + ":" + graph::to_string(c);
    }
    // Control: the search does find the full group of a 3-arc-regular graph.
    auto pet = graph::generalized_petersen(5, 2);
    o.require(small_type_subgroup_exists(pet, graph::automorphism_group(pet).group), "subgroup search misses Petersen");
    o.detail = classes;
  });

  criterion(10, "polarity identities on properly self-dual presets", 300.0, [](Outcome& o) {
    std::string readings;
    for (const auto& p : catalog()) {
      const auto& r = preset(p.name);
      if (r.skipped || !r.value("self_duality") || *r.value("self_duality") != "properly-self-dual") continue;
      expect_value(o, r, "delta_identities", "ok");
      readings += (readings.empty() ? "" : " ") + p.name + ":" + *r.value("delta_identity_d_reading");
    }
    // Identity (e) for every subscript, directly.
    auto sys = rotation("gens s1 s2 s3\nrotation 3 4 3\n", {3, 4, 3});
    auto ext = medial::build_extended_rotation_group(sys, poly::classify_self_duality(sys));
    auto ids = medial::verify_delta_identities(ext);
    for (const auto& c : ids.checks) {
      if (c.name == "e") o.require(c.holds, "identity e fails at " + c.detail);
    }
    o.detail = "d reading " + readings;
  });

  criterion(11, "polytope axioms on accepted lattices and a mutated fixture", 300.0, [](Outcome& o) {
    for (const auto& p : catalog()) {
      const auto& r = preset(p.name);
      if (r.skipped) continue;
      expect_value(o, r, "polytope", "valid");
    }
    auto sys = poly::build_reflection_system(fp::parse_presentation("gens r0 r1 r2 r3\ncoxeter 3 3 3\n"), {3, 3, 3});
    auto lat = poly::build_face_lattice(sys);
    auto good = poly::validate_polytope(lat);
    o.require(good.ok() && good.flags == 120, "5-cell lattice");
    poly::FaceLattice bad = lat;
    auto g = bad.up(1, 0).front();
    bad.remove_incidence(1, 0, g);
    auto v = poly::validate_polytope(bad);
    o.require(!v.diamond && !v.ok(), "mutated lattice accepted");
    // Recount the middle faces of the reported pair.
    if (v.witness.size() == 4) {
      auto j = static_cast<std::size_t>(v.witness[0]);
      auto a = v.witness[1], b = v.witness[2];
      std::size_t count = 0;
      if (a < 0) {
        count = bad.down(j + 1, static_cast<std::uint32_t>(b)).size();
      } else if (b < 0) {
        count = bad.up(j - 1, static_cast<std::uint32_t>(a)).size();
      } else {
        for (auto c : bad.up(j - 1, static_cast<std::uint32_t>(a))) {
          count += bad.incident(j, c, static_cast<std::uint32_t>(b)) ? 1 : 0;
        }
      }
      o.require(count == static_cast<std::size_t>(v.witness[3]) && count != 2, "witness does not check out");
      o.detail = v.first_violation;
    } else {
      o.require(false, "witness missing");
    }
  });

  return g_failures == 0 ? 0 : 1;
}
