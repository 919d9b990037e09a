#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polysym/error.hpp"
#include "polysym/families.hpp"
#include "polysym/fpgroup.hpp"
#include "polysym/graphsym.hpp"
#include "polysym/medial.hpp"
#include "polysym/presets.hpp"

using namespace polysym;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kMismatch = 2;

struct Common {
  std::size_t limit = fp::kDefaultCosetLimit;
  double timeout = 60.0;
  bool deep = false;
  std::string out;
  std::string presets = POLYSYM_DATA_DIR "/presets";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Report text goes to stdout, and to <out>/<name> when --out is set.
void emit(const Common& c, const std::string& name, const std::string& text) {
  std::cout << text;
  if (c.out.empty()) return;
  fs::create_directories(c.out);
  std::ofstream f(fs::path(c.out) / name);
  if (!f) throw Error("cannot write " + (fs::path(c.out) / name).string());
  f << text;
}

void emit_graph(const Common& c, const std::string& name, const graph::SymGraph& g) {
  if (c.out.empty()) return;
  fs::create_directories(c.out);
  std::ofstream f(fs::path(c.out) / name);
  if (!f) throw Error("cannot write " + name);
  g.write(f);
}

std::vector<long long> parse_schlafli(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      out.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw InvalidArgument("bad Schlafli type " + s);
    }
  }
  if (out.empty()) throw InvalidArgument("empty Schlafli type");
  return out;
}

presets::RunOptions run_options(const Common& c) {
  presets::RunOptions o;
  o.coset_limit = c.limit;
  o.search.timeout_seconds = c.timeout;
  o.deep = c.deep;
  return o;
}

int finish(const Common& c, const presets::PresetReport& r, const std::string& file) {
  std::ostringstream os;
  r.write(os);
  emit(c, file, os.str());
  if (r.medial_graph) emit_graph(c, "medial.edges", *r.medial_graph);
  if (!r.medial_parts.empty() && !c.out.empty()) {
    std::ofstream f(fs::path(c.out) / "medial.parts");
    for (std::size_t v = 0; v < r.medial_parts.size(); ++v) f << v << " part=" << r.medial_parts[v] << '\n';
  }
  if (r.cayley_graph) emit_graph(c, "cayley.edges", *r.cayley_graph);
  if (!r.cayley_fibres.empty() && !c.out.empty()) {
    std::ofstream f(fs::path(c.out) / "cayley.fibres");
    for (std::size_t v = 0; v < r.cayley_fibres.size(); ++v) f << v << " fibre=" << r.cayley_fibres[v] << '\n';
  }
  if (r.skipped) return kOk;
  return r.ok() ? kOk : kMismatch;
}

std::string certificate(const graph::SymGraph& g, const Common& c) {
  graph::SearchOptions so;
  so.timeout_seconds = c.timeout;
  auto rep = graph::analyze_graph(g, so);
  std::ostringstream os;
  graph::write_certificate(os, g, rep);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular and chiral polytopes, their medial graphs and symmetric covers"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--limit", c.limit, "coset enumeration limit")->check(CLI::PositiveNumber);
  app.add_option("--timeout", c.timeout, "automorphism search timeout in seconds")->check(CLI::PositiveNumber);
  app.add_flag("--deep", c.deep, "run the long verifications");
  app.add_option("--out", c.out, "directory for reports and graph files");
  app.add_option("--presets", c.presets, "preset catalog directory");

  std::string input, schlafli, subgroup;
  bool reflection = false;
  auto* group = app.add_subcommand("group", "enumerate a presentation");
  group->add_option("file", input)->required();
  group->add_option("--subgroup", subgroup, "comma-separated subgroup generators");

  auto polytope_like = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("file", input)->required();
    s->add_option("--schlafli", schlafli, "type, e.g. 3,6,3")->required();
    s->add_flag("--reflection", reflection, "generators are the reflections rho_0..rho_n-1");
    return s;
  };
  auto* polytope = polytope_like("polytope", "face lattice, orientation and duality of a presented group");
  auto* medial = polytope_like("medial", "medial layer graph of a presented rank-4 polytope");
  auto* cayley = polytope_like("cayley", "Cayley graph of the polarities and its covering of the medial graph");

  auto* graph_cmd = app.add_subcommand("graph", "classify a graph file");
  graph_cmd->add_option("file", input)->required();

  std::string family_id;
  std::vector<long long> params;
  auto* family = app.add_subcommand("family", "px p r s | six-q-six q | four-q-four t");
  family->add_option("id", family_id)->required()->check(CLI::IsMember({"px", "six-q-six", "four-q-four"}));
  family->add_option("params", params)->required();

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "run one catalog preset");
  preset->add_option("name", preset_name)->required();
  auto* preset_all = app.add_subcommand("preset-all", "run every catalog preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*group) {
      auto pres = fp::parse_presentation(slurp(input));
      std::vector<fp::Word> sub;
      std::stringstream ss(subgroup);
      for (std::string w; std::getline(ss, w, ',');) {
        if (!w.empty()) sub.push_back(pres.parse_word(w));
      }
      auto table = fp::coset_enumerate(pres, sub, c.limit);
      std::ostringstream os;
      os << "index=" << table.count() << '\n';
      if (sub.empty()) {
        auto gens = fp::perm_rep(table, pres);
        for (std::size_t i = 0; i < gens.size(); ++i) {
          os << "order." << pres.alphabet[i].name << '=' << perm::element_order(gens[i]).str() << '\n';
        }
      }
      emit(c, "group.txt", os.str());
      return kOk;
    }
    if (*polytope || *medial || *cayley) {
      presets::Preset p;
      p.name = fs::path(input).stem().string();
      p.kind = reflection ? presets::Kind::reflection : presets::Kind::rotation;
      p.presentation = slurp(input);
      p.schlafli = parse_schlafli(schlafli);
      auto o = run_options(c);
      o.stop_after = *polytope ? "dualities" : *medial ? "medial" : "covering";
      auto r = presets::run_preset(p, o);
      if (*polytope) r.medial_graph.reset();
      return finish(c, r, "report.txt");
    }
    if (*graph_cmd) {
      std::ifstream in(input);
      if (!in) throw Error("cannot open " + input);
      auto g = graph::SymGraph::read(in);
      emit(c, "certificate.txt", certificate(g, c));
      return kOk;
    }
    if (*family) {
      if (family_id == "px") {
        if (params.size() != 3) throw InvalidArgument("px takes p r s");
        for (auto v : params) if (v <= 0) throw InvalidArgument("px parameters must be positive");
        auto g = families::praeger_xu(params[0], params[1], params[2]);
        emit_graph(c, "graph.edges", g);
        emit(c, "certificate.txt", certificate(g, c));
        return kOk;
      }
      if (params.size() != 1) throw InvalidArgument(family_id + " takes one parameter");
      if (family_id == "six-q-six") {
        families::FamilyOptions fo;
        fo.limit = c.limit;
        fo.search.timeout_seconds = c.timeout;
        auto r = families::verify_family_claims(params[0], fo);
        std::ostringstream os;
        r.write(os);
        emit(c, "family.txt", os.str());
        return r.all_hold() ? kOk : kMismatch;
      }
      presets::Preset p;
      p.name = "four-q-four";
      p.kind = presets::Kind::family;
      p.family = family_id;
      p.parameter = params[0];
      return finish(c, presets::run_preset(p, run_options(c)), "report.txt");
    }
    auto catalog = presets::load_catalog(c.presets);
    if (*preset) return finish(c, presets::run_preset(presets::find_preset(catalog, preset_name), run_options(c)),
                               preset_name + ".txt");
    if (*preset_all) {
      int code = kOk;
      for (const auto& p : catalog) {
        Common sub = c;
        if (!sub.out.empty()) sub.out = (fs::path(c.out) / p.name).string();
        int r = finish(sub, presets::run_preset(p, run_options(c)), "report.txt");
        std::cout << '\n';
        if (r != kOk) code = kMismatch;
      }
      return code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
