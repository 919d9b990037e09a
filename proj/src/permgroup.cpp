#include "polysym/permgroup.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "polysym/error.hpp"

namespace polysym::perm {

namespace {

// Product-replacement generator of (nearly) uniform random elements.
class ProductReplacement {
 public:
  ProductReplacement(const std::vector<Perm>& gens, std::uint64_t seed) : rng_(seed) {
    while (slots_.size() < std::max<std::size_t>(10, gens.size())) {
      for (const auto& g : gens) slots_.push_back(g);
    }
    accumulator_ = Perm(gens.front().degree());
    for (int i = 0; i < 40; ++i) next();
  }

  const Perm& next() {
    std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
    std::size_t i = pick(rng_);
    std::size_t j = pick(rng_);
    while (j == i) j = pick(rng_);
    if (rng_() & 1u) {
      slots_[i] *= slots_[j];
    } else {
      slots_[i] = slots_[j] * slots_[i];
    }
    accumulator_ *= slots_[i];
    return accumulator_;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<Perm> slots_;
  Perm accumulator_;
};

constexpr int kConsecutiveSifts = 30;
constexpr std::size_t kKnownOrderRounds = 200'000;

}  // namespace

std::size_t TupleHash::operator()(const std::vector<Point>& t) const noexcept {
  std::size_t h = 0x84222325cbf29ce4ull;
  for (Point x : t) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

PermGroup::PermGroup(std::size_t degree) : degree_(degree) {}

PermGroup PermGroup::build(std::vector<Perm> generators, const ChainOptions& options) {
  if (generators.empty()) throw InvalidArgument("cannot infer degree from an empty generator list");
  std::size_t degree = generators.front().degree();
  return build(std::move(generators), degree, options);
}

PermGroup PermGroup::build(std::vector<Perm> generators, std::size_t degree,
                           const ChainOptions& options) {
  PermGroup g(degree);
  for (auto& p : generators) {
    if (p.degree() != degree) throw InvalidArgument("generator degree mismatch");
    if (!p.is_identity()) g.generators_.push_back(std::move(p));
  }
  for (Point b : options.base_prefix) {
    if (b >= degree) throw InvalidArgument("base point out of range");
    bool dup = std::any_of(g.levels_.begin(), g.levels_.end(),
                           [b](const Level& l) { return l.base == b; });
    if (!dup) g.new_level(b);
  }

  for (const auto& p : g.generators_) {
    auto [residue, level] = g.strip(p);
    if (!residue.is_identity()) g.add_strong_generator(residue, level);
  }

  std::optional<BigInt> target = options.known_order ? options.known_order : options.order_bound;
  auto reached = [&]() {
    if (!target) return false;
    BigInt current = g.chain_order();
    if (current > *target) {
      throw InvariantViolation("stabiliser chain exceeds the stated order bound");
    }
    return current == *target;
  };

  if (g.generators_.empty()) {
    if (options.known_order && *options.known_order != 1) {
      throw InvariantViolation("trivial group does not have the stated order");
    }
    return g;
  }
  if (reached()) return g;

  ProductReplacement random(g.generators_, options.seed);
  int consecutive = 0;
  std::size_t rounds = 0;
  while (true) {
    if (reached()) return g;
    if (!options.known_order && consecutive >= kConsecutiveSifts) break;
    if (options.known_order && ++rounds > kKnownOrderRounds) {
      throw InvariantViolation("random Schreier-Sims did not reach the stated order");
    }
    auto [residue, level] = g.strip(random.next());
    if (residue.is_identity()) {
      ++consecutive;
    } else {
      g.add_strong_generator(residue, level);
      consecutive = 0;
    }
  }
  g.verify_chain(options);
  return g;
}

void PermGroup::new_level(Point base) {
  Level l;
  l.base = base;
  l.label.assign(degree_, -1);
  l.label[base] = -2;
  l.orbit.push_back(base);
  levels_.push_back(std::move(l));
}

void PermGroup::rebuild_orbit(std::size_t level) {
  Level& l = levels_[level];
  std::fill(l.label.begin(), l.label.end(), -1);
  l.label[l.base] = -2;
  l.orbit.assign(1, l.base);
  for (std::size_t head = 0; head < l.orbit.size(); ++head) {
    Point x = l.orbit[head];
    for (std::size_t k = 0; k < l.gens.size(); ++k) {
      Point y = l.gens[k][x];
      if (l.label[y] == -1) {
        l.label[y] = static_cast<std::int32_t>(2 * k);
        l.orbit.push_back(y);
      }
      y = l.inverses[k][x];
      if (l.label[y] == -1) {
        l.label[y] = static_cast<std::int32_t>(2 * k + 1);
        l.orbit.push_back(y);
      }
    }
  }
}

void PermGroup::add_strong_generator(const Perm& h, std::size_t level) {
  if (level == levels_.size()) {
    Point moved = 0;
    while (h[moved] == moved) ++moved;
    new_level(moved);
  }
  Perm inv = h.inverse();
  for (std::size_t i = 0; i <= level; ++i) {
    levels_[i].gens.push_back(h);
    levels_[i].inverses.push_back(inv);
    rebuild_orbit(i);
  }
}

Perm PermGroup::apply_inverse_transversal(std::size_t level, Point gamma, Perm g) const {
  const Level& l = levels_[level];
  while (l.label[gamma] != -2) {
    std::int32_t e = l.label[gamma];
    std::size_t k = static_cast<std::size_t>(e >> 1);
    if (e & 1) {
      g *= l.gens[k];
      gamma = l.gens[k][gamma];
    } else {
      g *= l.inverses[k];
      gamma = l.inverses[k][gamma];
    }
  }
  return g;
}

std::pair<Perm, std::size_t> PermGroup::strip(Perm g, std::size_t from_level) const {
  for (std::size_t i = from_level; i < levels_.size(); ++i) {
    Point beta = g[levels_[i].base];
    if (levels_[i].label[beta] == -1) return {std::move(g), i};
    g = apply_inverse_transversal(i, beta, std::move(g));
  }
  return {std::move(g), levels_.size()};
}

std::vector<std::int32_t> PermGroup::path_to(std::size_t level, Point gamma) const {
  const Level& l = levels_[level];
  std::vector<std::int32_t> path;
  while (l.label[gamma] != -2) {
    std::int32_t e = l.label[gamma];
    path.push_back(e);
    std::size_t k = static_cast<std::size_t>(e >> 1);
    gamma = (e & 1) ? l.gens[k][gamma] : l.inverses[k][gamma];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Point PermGroup::transversal_image(std::size_t level, Point gamma, Point x) const {
  const Level& l = levels_[level];
  for (std::int32_t e : path_to(level, gamma)) {
    std::size_t k = static_cast<std::size_t>(e >> 1);
    x = (e & 1) ? l.inverses[k][x] : l.gens[k][x];
  }
  return x;
}

Perm PermGroup::transversal_element(std::size_t level, Point gamma) const {
  const Level& l = levels_[level];
  Perm u(degree_);
  for (std::int32_t e : path_to(level, gamma)) {
    std::size_t k = static_cast<std::size_t>(e >> 1);
    u *= (e & 1) ? l.inverses[k] : l.gens[k];
  }
  return u;
}

bool PermGroup::verify_chain(const ChainOptions& options) {
  bool changed_any = false;
  std::size_t i = levels_.size();
  while (i > 0) {
    --i;
    bool restarted = false;
    for (std::size_t oi = 0; oi < levels_[i].orbit.size() && !restarted; ++oi) {
      Point beta = levels_[i].orbit[oi];
      Perm u_beta = transversal_element(i, beta);
      for (std::size_t k = 0; k < levels_[i].gens.size(); ++k) {
        const Perm& s = levels_[i].gens[k];
        Point gamma = s[beta];
        // Skip tree edges: their Schreier generator is trivial.
        if (levels_[i].label[gamma] == static_cast<std::int32_t>(2 * k)) continue;
        if (levels_[i].label[beta] == static_cast<std::int32_t>(2 * k + 1)) continue;
        Perm h = apply_inverse_transversal(i, gamma, u_beta * s);
        if (h.is_identity()) continue;
        auto [residue, level] = strip(std::move(h), i + 1);
        if (!residue.is_identity()) {
          add_strong_generator(residue, level);
          changed_any = true;
          if (options.order_bound && chain_order() > *options.order_bound) {
            throw InvariantViolation("stabiliser chain exceeds the stated order bound");
          }
          i = level + 1;
          restarted = true;
          break;
        }
      }
    }
  }
  return changed_any;
}

BigInt PermGroup::chain_order() const {
  BigInt order = 1;
  for (const auto& l : levels_) order *= l.orbit.size();
  return order;
}

BigInt PermGroup::order() const { return chain_order(); }

std::vector<Point> PermGroup::base() const {
  std::vector<Point> b;
  b.reserve(levels_.size());
  for (const auto& l : levels_) b.push_back(l.base);
  return b;
}

std::vector<Point> PermGroup::orbit(Point x) const {
  if (x >= degree_) throw InvalidArgument("point out of range");
  std::vector<bool> seen(degree_, false);
  std::vector<Point> out{x};
  seen[x] = true;
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& g : generators_) {
      Point y = g[out[head]];
      if (!seen[y]) {
        seen[y] = true;
        out.push_back(y);
      }
    }
  }
  return out;
}

std::vector<Point> PermGroup::base_images(const Perm& p) const {
  std::vector<Point> out;
  out.reserve(levels_.size());
  for (const auto& l : levels_) out.push_back(p[l.base]);
  return out;
}

std::optional<Perm> PermGroup::element_from_base_images(std::span<const Point> images) const {
  if (images.size() != levels_.size()) throw InvalidArgument("base image length mismatch");
  std::vector<Point> targets(images.begin(), images.end());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level& l = levels_[i];
    Point c = targets[i];
    if (c >= degree_ || l.label[c] == -1) return std::nullopt;
    // Pull the remaining targets back through u_c^{-1}.
    Point gamma = c;
    while (l.label[gamma] != -2) {
      std::int32_t e = l.label[gamma];
      std::size_t k = static_cast<std::size_t>(e >> 1);
      const Perm& back = (e & 1) ? l.gens[k] : l.inverses[k];
      for (std::size_t j = i + 1; j < targets.size(); ++j) targets[j] = back[targets[j]];
      gamma = back[gamma];
    }
  }
  // targets[i] now holds the level-i transversal point.
  Perm g(degree_);
  for (std::size_t i = levels_.size(); i-- > 0;) {
    g *= transversal_element(i, targets[i]);
  }
  return g;
}

bool PermGroup::contains(const Perm& p) const {
  if (p.degree() != degree_) throw InvalidArgument("degree mismatch in membership test");
  std::vector<Point> targets = base_images(p);
  std::vector<std::vector<std::int32_t>> paths(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level& l = levels_[i];
    Point c = targets[i];
    if (l.label[c] == -1) return false;
    Point gamma = c;
    while (l.label[gamma] != -2) {
      std::int32_t e = l.label[gamma];
      std::size_t k = static_cast<std::size_t>(e >> 1);
      const Perm& back = (e & 1) ? l.gens[k] : l.inverses[k];
      for (std::size_t j = i + 1; j < targets.size(); ++j) targets[j] = back[targets[j]];
      gamma = back[gamma];
    }
    paths[i] = path_to(i, c);
  }
  for (Point x = 0; x < degree_; ++x) {
    Point y = x;
    for (std::size_t i = levels_.size(); i-- > 0;) {
      const Level& l = levels_[i];
      for (std::int32_t e : paths[i]) {
        std::size_t k = static_cast<std::size_t>(e >> 1);
        y = (e & 1) ? l.inverses[k][y] : l.gens[k][y];
      }
    }
    if (y != p[x]) return false;
  }
  return true;
}

void PermGroup::for_each_element(const std::function<bool(const Perm&)>& visit,
                                 std::size_t budget) const {
  if (order() > budget) throw LimitExceeded("group too large to enumerate");
  // Elements are u_{L-1} ... u_1 u_0; walk each Schreier tree depth-first.
  std::vector<std::vector<std::vector<std::pair<Point, std::int32_t>>>> children(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level& l = levels_[i];
    children[i].resize(degree_);
    for (Point y : l.orbit) {
      std::int32_t e = l.label[y];
      if (e == -2) continue;
      std::size_t k = static_cast<std::size_t>(e >> 1);
      Point parent = (e & 1) ? l.gens[k][y] : l.inverses[k][y];
      children[i][parent].emplace_back(y, e);
    }
  }
  bool stop = false;
  std::function<void(std::size_t, const Perm&)> descend = [&](std::size_t level, const Perm& prefix) {
    if (stop) return;
    if (level == 0) {
      if (!visit(prefix)) stop = true;
      return;
    }
    std::size_t i = level - 1;
    const Level& l = levels_[i];
    std::vector<std::pair<Point, Perm>> stack;
    stack.emplace_back(l.base, prefix);
    while (!stack.empty() && !stop) {
      auto [node, q] = std::move(stack.back());
      stack.pop_back();
      descend(i, q);
      for (auto [child, e] : children[i][node]) {
        std::size_t k = static_cast<std::size_t>(e >> 1);
        stack.emplace_back(child, q * ((e & 1) ? l.inverses[k] : l.gens[k]));
      }
    }
  };
  descend(levels_.size(), Perm(degree_));
}

PermGroup PermGroup::with_base(std::vector<Point> prefix) const {
  ChainOptions opts;
  opts.known_order = order();
  opts.base_prefix = std::move(prefix);
  std::vector<Perm> gens = generators_;
  if (gens.empty()) {
    PermGroup g(degree_);
    for (Point b : opts.base_prefix) {
      bool dup = std::any_of(g.levels_.begin(), g.levels_.end(),
                             [b](const Level& l) { return l.base == b; });
      if (!dup) g.new_level(b);
    }
    return g;
  }
  return build(std::move(gens), degree_, opts);
}

BigInt PermGroup::pointwise_stabiliser_order(std::vector<Point> points) const {
  std::vector<Point> unique;
  for (Point p : points) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  }
  PermGroup g = with_base(unique);
  BigInt order = 1;
  for (std::size_t i = unique.size(); i < g.levels_.size(); ++i) order *= g.levels_[i].orbit.size();
  return order;
}

PermGroup PermGroup::pointwise_stabiliser(std::vector<Point> points) const {
  std::vector<Point> unique;
  for (Point p : points) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  }
  PermGroup g = with_base(unique);
  if (unique.size() >= g.levels_.size()) return PermGroup(degree_);
  ChainOptions opts;
  opts.known_order = 1;
  for (std::size_t i = unique.size(); i < g.levels_.size(); ++i) *opts.known_order *= g.levels_[i].orbit.size();
  return build(g.levels_[unique.size()].gens, degree_, opts);
}

Perm PermGroup::random_element(std::mt19937_64& rng) const {
  Perm g(degree_);
  for (std::size_t i = levels_.size(); i-- > 0;) {
    const auto& orbit = levels_[i].orbit;
    std::uniform_int_distribution<std::size_t> pick(0, orbit.size() - 1);
    g *= transversal_element(i, orbit[pick(rng)]);
  }
  return g;
}

PermGroup intersect(const PermGroup& a, const PermGroup& b, std::size_t budget) {
  if (a.degree() != b.degree()) throw InvalidArgument("degree mismatch in intersection");
  const PermGroup& small = a.order() <= b.order() ? a : b;
  const PermGroup& large = a.order() <= b.order() ? b : a;
  if (small.order() > budget) throw LimitExceeded("intersection budget exceeded");

  std::vector<Perm> gens;
  PermGroup current(small.degree());
  std::size_t count = 0;
  ChainOptions partial;
  partial.order_bound = small.order();
  small.for_each_element(
      [&](const Perm& e) {
        if (!large.contains(e)) return true;
        ++count;
        // Positive answers from a partial chain are sound, so a missed
        // membership only costs a redundant generator.
        if (!current.contains(e)) {
          gens.push_back(e);
          current = PermGroup::build(gens, small.degree(), partial);
        }
        return true;
      },
      budget);
  ChainOptions exact;
  exact.known_order = BigInt(count);
  if (gens.empty()) return PermGroup(small.degree());
  return PermGroup::build(std::move(gens), small.degree(), exact);
}

PermGroup semiregular_group(std::vector<Perm> generators, std::size_t degree) {
  PermGroup probe(degree);
  std::vector<bool> seen(degree, false);
  std::vector<Point> orbit{0};
  seen[0] = true;
  for (std::size_t h = 0; h < orbit.size(); ++h) {
    for (const auto& g : generators) {
      Point y = g[orbit[h]];
      if (!seen[y]) {
        seen[y] = true;
        orbit.push_back(y);
      }
    }
  }
  bool trivial = std::all_of(generators.begin(), generators.end(), [](const Perm& g) { return g.is_identity(); });
  if (trivial) return probe;
  ChainOptions opts;
  opts.known_order = BigInt(orbit.size());
  return PermGroup::build(std::move(generators), degree, opts);
}

std::vector<Perm> regular_representation(const PermGroup& g, const std::vector<Perm>& generators,
                                         std::size_t budget) {
  if (g.order() > budget) throw LimitExceeded("group too large for a regular representation");
  const std::vector<Point> base = g.base();
  std::unordered_map<std::vector<Point>, Point, TupleHash> index;
  std::vector<std::vector<Point>> elements{base};
  index.emplace(base, 0);
  std::vector<std::vector<Point>> images(generators.size());
  for (std::size_t h = 0; h < elements.size(); ++h) {
    for (std::size_t k = 0; k < generators.size(); ++k) {
      std::vector<Point> next(base.size());
      for (std::size_t j = 0; j < base.size(); ++j) next[j] = generators[k][elements[h][j]];
      auto [it, inserted] = index.emplace(next, static_cast<Point>(elements.size()));
      if (inserted) elements.push_back(std::move(next));
      images[k].push_back(it->second);
    }
  }
  if (elements.size() != static_cast<std::size_t>(g.order())) {
    throw InvalidArgument("generators do not generate the group");
  }
  std::vector<Perm> out;
  for (auto& img : images) out.emplace_back(std::move(img));
  return out;
}

AutomorphismWitness::AutomorphismWitness(std::shared_ptr<const PermGroup> ambient, GenMap map,
                                         TupleMap table, std::vector<Point> flat)
    : ambient_(std::move(ambient)),
      map_(std::move(map)),
      table_(std::move(table)),
      flat_(std::move(flat)) {}

std::vector<Point> AutomorphismWitness::image_base(const std::vector<Point>& base_image) const {
  if (!flat_.empty()) return {flat_[base_image.front()]};
  auto it = table_.find(base_image);
  if (it == table_.end()) throw InvalidArgument("element is not in the ambient group");
  return it->second;
}

Perm AutomorphismWitness::apply(const Perm& g) const {
  if (!ambient_->contains(g)) throw InvalidArgument("element is not in the ambient group");
  auto image = ambient_->element_from_base_images(image_base(ambient_->base_images(g)));
  if (!image) throw InvariantViolation("witness table maps outside the ambient group");
  return *image;
}

Point AutomorphismWitness::apply_to_base_point(Point x) const {
  if (flat_.empty()) throw InvalidArgument("witness base is not a single point");
  return flat_[x];
}

bool AutomorphismWitness::is_involution() const {
  for (std::size_t i = 0; i < map_.domain.size(); ++i) {
    if (apply(map_.images[i]) != map_.domain[i]) return false;
  }
  return true;
}

std::optional<AutomorphismWitness> extend_generator_map(const GenMap& m, const PermGroup& ambient) {
  if (m.domain.size() != m.images.size()) throw InvalidArgument("generator map lengths differ");
  for (const auto& x : m.domain) {
    if (x.degree() != ambient.degree() || !ambient.contains(x)) {
      throw InvalidArgument("domain generator outside the ambient group");
    }
  }
  {
    ChainOptions opts;
    opts.order_bound = ambient.order();
    if (m.domain.empty() ? ambient.order() != 1
                         : PermGroup::build(m.domain, ambient.degree(), opts).order() != ambient.order()) {
      throw InvalidArgument("domain generators do not generate the ambient group");
    }
  }
  for (const auto& y : m.images) {
    if (y.degree() != ambient.degree() || !ambient.contains(y)) return std::nullopt;
  }
  if (ambient.order() > 50'000'000) throw LimitExceeded("ambient group too large for the fiber test");

  auto shared = std::make_shared<const PermGroup>(ambient);
  const std::vector<Point> base = ambient.base();
  const std::size_t expected = static_cast<std::size_t>(ambient.order());

  if (base.size() == 1) {
    // Flat table indexed by the image of the single base point.
    const Point b = base.front();
    std::vector<Point> flat(ambient.degree(), static_cast<Point>(-1));
    std::vector<bool> used(ambient.degree(), false);
    std::vector<Point> queue{b};
    flat[b] = b;
    used[b] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Point x = queue[head];
      Point y = flat[x];
      for (std::size_t i = 0; i < m.domain.size(); ++i) {
        Point nx = m.domain[i][x];
        Point ny = m.images[i][y];
        if (flat[nx] == static_cast<Point>(-1)) {
          if (used[ny]) return std::nullopt;  // not injective
          flat[nx] = ny;
          used[ny] = true;
          queue.push_back(nx);
        } else if (flat[nx] != ny) {
          return std::nullopt;
        }
      }
    }
    if (queue.size() != expected) throw InvariantViolation("fiber orbit size disagrees with the chain");
    return AutomorphismWitness(shared, m, {}, std::move(flat));
  }

  TupleMap table;
  std::unordered_set<std::vector<Point>, TupleHash> used;
  std::deque<std::vector<Point>> queue;
  table.emplace(base, base);
  used.insert(base);
  queue.push_back(base);
  std::vector<Point> nx(base.size()), ny(base.size());
  while (!queue.empty()) {
    std::vector<Point> x = std::move(queue.front());
    queue.pop_front();
    const std::vector<Point> y = table.at(x);
    for (std::size_t i = 0; i < m.domain.size(); ++i) {
      for (std::size_t j = 0; j < base.size(); ++j) {
        nx[j] = m.domain[i][x[j]];
        ny[j] = m.images[i][y[j]];
      }
      auto it = table.find(nx);
      if (it == table.end()) {
        if (!used.insert(ny).second) return std::nullopt;
        table.emplace(nx, ny);
        queue.push_back(nx);
      } else if (it->second != ny) {
        return std::nullopt;
      }
    }
  }
  if (table.size() != expected) throw InvariantViolation("fiber orbit size disagrees with the chain");
  return AutomorphismWitness(shared, m, std::move(table), {});
}

}  // namespace polysym::perm
