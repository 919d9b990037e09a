#include "polysym/presets.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "polysym/error.hpp"
#include "polysym/families.hpp"
#include "polysym/medial.hpp"

namespace polysym::presets {

using perm::Perm;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

long long to_int(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("expected an integer, got '" + s + "'", line, 1);
}

template <typename T>
std::string join(const std::vector<T>& v, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

}  // namespace

Preset parse_preset(std::istream& is, const std::filesystem::path& origin) {
  Preset p;
  std::string raw;
  std::size_t line_no = 0;
  bool in_block = false, saw_kind = false;
  while (std::getline(is, raw)) {
    ++line_no;
    if (in_block) {
      if (trim(raw) == "end") {
        in_block = false;
      } else {
        p.presentation += raw + "\n";
      }
      continue;
    }
    auto hash = raw.find('#');
    auto words = split(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (words.empty()) continue;
    const auto& w = words[0];
    auto need = [&](std::size_t n) {
      if (words.size() != n) throw ParseError("'" + w + "' takes " + std::to_string(n - 1) + " arguments", line_no, 1);
    };
    if (w == "name") {
      need(2);
      p.name = words[1];
    } else if (w == "kind") {
      if (words.size() < 2) throw ParseError("kind needs a value", line_no, 1);
      saw_kind = true;
      if (words[1] == "rotation" || words[1] == "reflection") {
        need(2);
        p.kind = words[1] == "rotation" ? Kind::rotation : Kind::reflection;
      } else if (words[1] == "family") {
        need(4);
        p.kind = Kind::family;
        p.family = words[2];
        p.parameter = to_int(words[3], line_no);
      } else if (words[1] == "external") {
        need(3);
        p.kind = Kind::rotation;
        p.external = origin.empty() ? std::filesystem::path(words[2]) : origin.parent_path() / words[2];
      } else {
        throw ParseError("unknown kind '" + words[1] + "'", line_no, 1);
      }
    } else if (w == "schlafli") {
      for (std::size_t i = 1; i < words.size(); ++i) p.schlafli.push_back(to_int(words[i], line_no));
    } else if (w == "presentation") {
      need(1);
      in_block = true;
    } else if (w == "option") {
      if (words.size() < 2) throw ParseError("option needs a name", line_no, 1);
      if (words[1] == "medial-px" || words[1] == "cayley-px") {
        need(5);
        std::array<std::size_t, 3> a{};
        for (int i = 0; i < 3; ++i) a[i] = static_cast<std::size_t>(to_int(words[2 + i], line_no));
        (words[1] == "medial-px" ? p.medial_px : p.cayley_px) = a;
      } else if (words[1] == "scan-normal") {
        need(3);
        p.scan_normal = static_cast<std::size_t>(to_int(words[2], line_no));
      } else {
        throw ParseError("unknown option '" + words[1] + "'", line_no, 1);
      }
    } else if (w == "expect" || w == "expect-deep") {
      need(4);
      p.expectations.push_back({words[1], words[2], words[3], w == "expect-deep"});
    } else {
      throw ParseError("unknown directive '" + w + "'", line_no, 1);
    }
  }
  if (in_block) throw ParseError("presentation block not closed", line_no, 1);
  if (p.name.empty()) throw ParseError("preset without a name", line_no, 1);
  if (!saw_kind) throw ParseError("preset without a kind", line_no, 1);
  if (p.kind == Kind::family) {
    if (p.family != "six-q-six" && p.family != "four-q-four") throw ParseError("unknown family " + p.family, line_no, 1);
  } else if (p.schlafli.empty()) {
    throw ParseError("preset without a Schlafli type", line_no, 1);
  }
  return p;
}

Preset load_preset(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  return parse_preset(in, file);
}

std::vector<Preset> load_catalog(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("no preset directory " + dir.string());
  std::vector<Preset> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".preset") out.push_back(load_preset(e.path()));
  }
  std::sort(out.begin(), out.end(), [](const Preset& a, const Preset& b) { return a.name < b.name; });
  return out;
}

const Preset& find_preset(const std::vector<Preset>& catalog, const std::string& name) {
  for (const auto& p : catalog) {
    if (p.name == name) return p;
  }
  throw InvalidArgument("no preset named " + name);
}

const std::string* PresetReport::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return &v;
  }
  return nullptr;
}

void PresetReport::write(std::ostream& os) const {
  os << "preset=" << name << '\n';
  if (skipped) {
    os << "status=skipped (" << failure << ")\n";
    return;
  }
  for (const auto& [k, v] : values) os << k << '=' << v << '\n';
  os << "stages=";
  for (std::size_t i = 0; i < stages.size(); ++i) os << (i ? "," : "") << stages[i];
  os << '\n';
  for (const auto& d : deviations) {
    os << "deviation " << d.key << " expected=" << d.expected << " observed=" << d.observed << " (" << d.provenance
       << ")\n";
  }
  if (failed_stage) {
    os << "status=failed at " << *failed_stage << ": " << failure << '\n';
  } else {
    os << "status=" << (deviations.empty() ? "ok" : "mismatch") << '\n';
  }
}

std::optional<NormalSubgroup> scan_normal_subgroup(const poly::RotationSystem& sys, std::size_t order,
                                                   std::size_t scan_budget) {
  const std::size_t n = sys.order();
  if (order == 0 || n % order != 0) return std::nullopt;
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;
  // Subgroups of a regular group are semiregular: |H| = |0^H| and
  // membership is decided by the image of 0. Returns the closure's points,
  // empty once it exceeds `order`.
  auto closure = [&](std::vector<Perm>& gens) {
    ++stamp;
    std::vector<Point> orbit{0};
    mark[0] = stamp;
    auto extend = [&]() {
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        for (const auto& h : gens) {
          Point y = h[orbit[i]];
          if (mark[y] == stamp) continue;
          mark[y] = stamp;
          orbit.push_back(y);
          if (orbit.size() > order) return false;
        }
      }
      return true;
    };
    if (!extend()) return std::vector<Point>{};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (const auto& s : sys.sigma) {
        Perm c = s.inverse() * gens[i] * s;
        if (mark[c[0]] == stamp) continue;
        gens.push_back(std::move(c));
        if (!extend()) return std::vector<Point>{};
      }
    }
    std::sort(orbit.begin(), orbit.end());
    return orbit;
  };

  std::vector<std::pair<std::vector<Point>, std::vector<Perm>>> seen;
  std::optional<NormalSubgroup> found;
  std::size_t scanned = 0;
  sys.group->for_each_element(
      [&](const Perm& x) {
        if (++scanned > scan_budget) return false;
        if (x.is_identity() || order % static_cast<std::size_t>(perm::element_order(x)) != 0) return true;
        for (const auto& [pts, g] : seen) {
          if (std::binary_search(pts.begin(), pts.end(), x[0])) return true;
        }
        std::vector<Perm> gens{x};
        auto pts = closure(gens);
        if (pts.empty()) return true;
        if (pts.size() == order) {
          found = NormalSubgroup{gens, order};
          return false;
        }
        seen.emplace_back(std::move(pts), std::move(gens));
        return true;
      },
      n);
  if (found) return found;
  // Products of two of the closures found are normal too.
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (std::size_t j = i + 1; j < seen.size(); ++j) {
      if (seen[i].first.size() * seen[j].first.size() < order) continue;
      std::vector<Perm> gens = seen[i].second;
      gens.insert(gens.end(), seen[j].second.begin(), seen[j].second.end());
      auto pts = closure(gens);
      if (pts.size() == order) return NormalSubgroup{gens, order};
    }
  }
  return std::nullopt;
}

poly::RotationSystem quotient_system(const poly::RotationSystem& sys, const NormalSubgroup& k) {
  const std::size_t n = sys.order();
  std::vector<std::uint32_t> block(n, UINT32_MAX);
  std::uint32_t count = 0;
  for (Point x = 0; x < n; ++x) {
    if (block[x] != UINT32_MAX) continue;
    std::vector<Point> stack{x};
    block[x] = count;
    while (!stack.empty()) {
      Point y = stack.back();
      stack.pop_back();
      for (const auto& g : k.generators) {
        if (block[g[y]] == UINT32_MAX) {
          block[g[y]] = count;
          stack.push_back(g[y]);
        }
      }
    }
    ++count;
  }
  poly::RotationSystem q;
  std::vector<Point> rep(count);
  for (Point x = n; x-- > 0;) rep[block[x]] = x;
  for (const auto& s : sys.sigma) {
    std::vector<Point> img(count);
    for (std::uint32_t b = 0; b < count; ++b) img[b] = block[s[rep[b]]];
    q.sigma.emplace_back(std::move(img));
    q.schlafli.push_back(static_cast<long long>(perm::element_order(q.sigma.back())));
  }
  perm::ChainOptions opts;
  opts.known_order = BigInt(count);
  q.group = std::make_shared<const perm::PermGroup>(perm::PermGroup::build(q.sigma, count, opts));
  q.presented = false;
  return q;
}

const std::vector<std::string>& stage_ids() {
  static const std::vector<std::string> ids{"build",     "intersection", "orientation", "self-duality",
                                            "lattice",   "dualities",    "medial",      "extension",
                                            "cayley",    "covering",     "normal-scan"};
  return ids;
}

PresetReport run_preset(const Preset& preset, const RunOptions& options) {
  if (!options.stop_after.empty() &&
      std::find(stage_ids().begin(), stage_ids().end(), options.stop_after) == stage_ids().end()) {
    throw InvalidArgument("unknown stage " + options.stop_after);
  }
  PresetReport rep;
  rep.name = preset.name;
  auto put = [&](const std::string& k, const std::string& v) { rep.values.emplace_back(k, v); };
  auto put_n = [&](const std::string& k, const auto& v) {
    std::ostringstream os;
    os << v;
    put(k, os.str());
  };

  std::optional<poly::ReflectionSystem> refl;
  poly::RotationSystem sys;
  poly::FaceLattice lat;
  poly::SelfDualityResult sd;
  poly::Orientation orientation{};
  medial::MedialGraph med;
  std::optional<graph::ArcReport> medial_arcs;
  std::optional<medial::ExtendedRotationGroup> ext;
  std::optional<medial::PolaritySet> ps;
  std::optional<medial::CayleyGraph> cayley;
  std::optional<graph::ArcReport> cayley_arcs;

  auto analyse = [&](const graph::SymGraph& g, const std::string& prefix) -> std::optional<graph::ArcReport> {
    if (!options.deep && g.order() > options.aut_budget) return std::nullopt;
    auto r = graph::analyze_graph(g, options.search);
    put(prefix + "_aut_order", r.aut_order.str() + (r.lower_bound ? "+" : ""));
    put_n(prefix + "_s_transitive", r.s_transitive);
    put(prefix + "_s_regular", r.s_regular ? std::to_string(*r.s_regular) : "none");
    if (r.dm_class) put(prefix + "_dm_class", graph::to_string(*r.dm_class));
    return r;
  };
  auto px_check = [&](const graph::SymGraph& g, const std::array<std::size_t, 3>& a, const std::string& key) {
    auto px = families::praeger_xu(a[0], a[1], a[2]);
    put(key, yes(graph::isomorphic(g, px, options.search).has_value()));
  };

  std::vector<std::pair<std::string, std::function<void()>>> stages;
  stages.emplace_back("build", [&] {
    switch (preset.kind) {
      case Kind::family:
        refl = preset.family == "six-q-six" ? families::build_six_q_six(preset.parameter, options.coset_limit)
                                            : families::build_four_q_four(preset.parameter, options.coset_limit);
        break;
      case Kind::reflection:
        refl = poly::build_reflection_system(fp::parse_presentation(preset.presentation), preset.schlafli,
                                             options.coset_limit);
        break;
      case Kind::rotation: {
        std::string text = preset.presentation;
        if (!preset.external.empty()) {
          std::ifstream in(preset.external);
          std::ostringstream ss;
          ss << in.rdbuf();
          text = ss.str();
        }
        sys = poly::build_rotation_system(fp::parse_presentation(text), preset.schlafli, options.coset_limit);
        break;
      }
    }
    if (refl) {
      sys = poly::rotation_subsystem(*refl);
      put_n("group_order", refl->group->order());
    } else {
      put_n("group_order", sys.group->order());
    }
    put_n("rotation_order", sys.order());
    put("schlafli", join(sys.schlafli));
  });
  stages.emplace_back("intersection", [&] {
    auto r = refl ? poly::check_intersection_conditions(*refl, 10'000'000)
                  : poly::check_intersection_conditions(sys, 10'000'000);
    put("intersection", r.ok ? "ok" : "fails");
    if (!r.ok) throw InvariantViolation("intersection condition fails for " + join(r.first) + " and " + join(r.second));
  });
  stages.emplace_back("orientation", [&] {
    orientation = refl ? poly::classify_orientation(*refl) : poly::classify_orientation(sys);
    put("orientation", poly::to_string(orientation));
    if (sys.rho.empty()) {
      auto w = perm::extend_generator_map(poly::regularity_map(sys), *sys.group);
      put("regularity_map_extends", yes(w && w->is_involution()));
    }
  });
  stages.emplace_back("self-duality", [&] {
    sd = poly::classify_self_duality(sys);
    put("self_duality", poly::to_string(sd.kind));
    put("proper_duality_extends", yes(sd.proper_extends));
    put("improper_duality_extends",
        orientation == poly::Orientation::chiral ? yes(sd.improper_extends) : std::string("untested"));
    if (!sd.warning.empty()) put("self_duality_warning", sd.warning);
  });
  stages.emplace_back("lattice", [&] {
    lat = poly::build_face_lattice(sys);
    put("f_vector", join(lat.f_vector()));
    auto v = poly::validate_polytope(lat);
    put_n("flags", v.flags);
    put("polytope", v.ok() ? "valid" : "invalid");
    if (!v.ok()) throw InvariantViolation("lattice is not a polytope: " + v.first_violation);
  });
  stages.emplace_back("dualities", [&] {
    if (sd.kind == poly::SelfDuality::not_self_dual) return;
    auto d = poly::enumerate_dualities(sys, lat, sd);
    std::string h;
    for (const auto& [o, c] : d.order_histogram) h += (h.empty() ? "" : ",") + std::to_string(o) + ":" + std::to_string(c);
    put("duality_histogram", h);
    put("polarity", yes(d.polarity_exists));
  });
  stages.emplace_back("medial", [&] {
    med = medial::medial_layer_graph(lat);
    rep.medial_graph = med.graph;
    rep.medial_parts = med.part;
    const auto& g = med.graph;
    put_n("medial_order", g.order());
    auto deg = g.regular_degree();
    put("medial_degree", deg ? std::to_string(*deg) : "irregular");
    put("medial_bipartite", yes(graph::is_bipartite(g)));
    put("medial_connected", yes(graph::is_connected(g)));
    medial_arcs = analyse(g, "medial");
    if (medial_arcs && !medial_arcs->lower_bound) {
      BigInt full = sys.order();
      if (orientation == poly::Orientation::directly_regular) full *= 2;
      put("medial_aut_is_twice_group", yes(medial_arcs->aut_order == 2 * full));
    }
    if (preset.medial_px) px_check(g, *preset.medial_px, "medial_px");
    if (sd.kind == poly::SelfDuality::not_self_dual || deg != 3u) return;
    // The rotation group extended by a duality, acting on the medial graph.
    auto d = poly::base_duality(sys, lat, *sd.witness);
    auto t = medial::medial_extended_group(sys, lat, med, d);
    put_n("medial_ext_order", t.order());
    auto arc = std::vector<Point>{0, g.neighbors(0)[0]};
    arc.push_back(g.neighbors(arc[1])[0] == 0 ? g.neighbors(arc[1])[1] : g.neighbors(arc[1])[0]);
    bool two_arc = t.order() == graph::count_s_arcs(g, 2) && t.pointwise_stabiliser_order(arc) == 1;
    put("medial_ext_2arc_regular", yes(two_arc));
    if (!two_arc) return;
    auto tri = graph::two_arc_triple(g, t);
    bool extends = graph::check_3ar_extension(t, tri.h, tri.p, tri.a);
    put("medial_ext_3ar_extension", yes(extends));
    // Regular polytopes give 3-arc-regular medial graphs, chiral ones 2-arc-regular.
    int s = medial_arcs && !medial_arcs->lower_bound && medial_arcs->s_regular ? *medial_arcs->s_regular
                                                                                 : (extends ? 3 : 2);
    put("medial_arc_regularity", std::to_string(s));
    bool chiral = orientation == poly::Orientation::chiral;
    put("medial_arc_matches_orientation", yes(chiral ? (s == 2 && !extends) : (s == 3 && extends)));
  });
  stages.emplace_back("extension", [&] {
    if (sd.kind != poly::SelfDuality::properly_self_dual) return;
    ext = medial::build_extended_rotation_group(sys, sd, options.coset_limit);
    put_n("ext_order", ext->group->order());
    put("ext_presentation_checked", yes(ext->presentation_checked));
    ps = medial::polarity_set(*ext);
    put_n("polarity_group_order", ps->group.order());
    auto ids = medial::verify_delta_identities(*ext);
    put("delta_identities", ids.all_hold() ? "ok" : "fail");
    put("delta_identity_d_reading", ids.d_reading());
    for (const auto& c : ids.checks) {
      if (!c.holds && c.name.rfind("d ", 0) != 0) put("delta_identity_failure", c.name + " " + c.detail);
    }
  });
  stages.emplace_back("cayley", [&] {
    if (!ext) return;
    cayley = medial::cayley_graph(*ext, *ps);
    rep.cayley_graph = cayley->graph;
    const auto& g = cayley->graph;
    put_n("cayley_order", g.order());
    auto deg = g.regular_degree();
    put("cayley_degree", deg ? std::to_string(*deg) : "irregular");
    put("cayley_connected", yes(graph::is_connected(g)));
    cayley_arcs = analyse(g, "cayley");
    if (preset.cayley_px) px_check(g, *preset.cayley_px, "cayley_px");
  });
  stages.emplace_back("covering", [&] {
    if (!cayley) return;
    auto cov = medial::covering_map(sys, lat, med, *ext, *ps, *cayley);
    put_n("covering_multiplicity", cov.multiplicity);
    put_n("covering_m", cov.m_value);
    rep.cayley_fibres = cov.nu;
    put("covering_is_m_fold", yes(cov.m_value == cov.multiplicity));
    put("covering_is_2p_fold", yes(cov.multiplicity == 2 * ext->p));
    if (cayley->graph.order() == med.graph.order()) {
      put("medial_cayley_isomorphic", yes(graph::isomorphic(cayley->graph, med.graph, options.search).has_value()));
    }
    if (medial_arcs && cayley_arcs) {
      put("cover_arc_bound", yes(cayley_arcs->s_transitive <= medial_arcs->s_transitive));
    }
    if (cayley->graph.regular_degree() == 3u) {
      auto t = medial::cayley_two_arc_group(*ext, *cayley);
      put_n("cayley_two_arc_group_order", t.group.order());
      put("cayley_3ar_extension", yes(graph::check_3ar_extension(t.group, t.h, t.p, t.a)));
    }
  });
  stages.emplace_back("normal-scan", [&] {
    if (!preset.scan_normal) return;
    auto k = scan_normal_subgroup(sys, *preset.scan_normal);
    if (!k) {
      put("normal_subgroup", "not found");
      return;
    }
    put_n("normal_subgroup_order", k->order);
    auto q = quotient_system(sys, *k);
    put_n("quotient_order", q.order());
    put("quotient_schlafli", join(q.schlafli));
    put("quotient_orientation", poly::to_string(poly::classify_orientation(q)));
  });

  if (!preset.external.empty() && !std::filesystem::exists(preset.external)) {
    rep.skipped = true;
    rep.failure = "presentation file " + preset.external.filename().string() + " not provided";
    return rep;
  }
  for (auto& [id, run] : stages) {
    try {
      run();
      rep.stages.push_back(id);
      if (id == options.stop_after) break;
    } catch (const std::exception& e) {
      rep.failed_stage = id;
      rep.failure = e.what();
      break;
    }
  }
  for (const auto& e : preset.expectations) {
    if (!options.stop_after.empty()) break;
    if (e.deep_only && !options.deep) continue;
    const std::string* v = rep.value(e.key);
    if (!v || *v != e.value) rep.deviations.push_back({e.key, e.value, v ? *v : "missing", e.provenance});
  }
  return rep;
}

}  // namespace polysym::presets
