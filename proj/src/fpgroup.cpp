#include "polysym/fpgroup.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <sstream>

#include "polysym/error.hpp"

namespace polysym::fp {

Word free_reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == letter_inverse(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(Word w) {
  w = free_reduce(std::move(w));
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == letter_inverse(w[hi - 1])) {
    ++lo;
    --hi;
  }
  return Word(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = letter_inverse(l);
  return out;
}

Word power(const Word& w, long long k) {
  const Word base = k < 0 ? inverse(w) : w;
  unsigned long long n = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Word out;
  out.reserve(base.size() * n);
  for (unsigned long long i = 0; i < n; ++i) out.insert(out.end(), base.begin(), base.end());
  return free_reduce(std::move(out));
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(std::move(out));
}

Word commutator(const Word& a, const Word& b) {
  return concat(concat(inverse(a), inverse(b)), concat(a, b));
}

std::size_t Presentation::index_of(std::string_view name) const {
  for (const auto& g : alphabet) {
    if (g.name == name) return g.index;
  }
  throw InvalidArgument("unknown generator '" + std::string(name) + "'");
}

std::string Presentation::format(const Word& w) const {
  if (w.empty()) return "1";
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!first) os << '*';
    first = false;
    os << alphabet.at(letter_gen(w[i])).name;
    long long e = static_cast<long long>(j - i) * (letter_is_inverse(w[i]) ? -1 : 1);
    if (e != 1) os << '^' << e;
    i = j;
  }
  return os.str();
}

void Presentation::add_relator(Word w) {
  w = cyclic_reduce(std::move(w));
  if (!w.empty()) relators.push_back(std::move(w));
}

std::vector<Word> coxeter_relators(const std::vector<long long>& schlafli) {
  const std::size_t n = schlafli.size() + 1;
  std::vector<Word> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({letter(i), letter(i)});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      long long m = j == i + 1 ? schlafli[i] : 2;
      out.push_back(power({letter(i), letter(j)}, m));
    }
  }
  return out;
}

std::vector<Word> rotation_relators(const std::vector<long long>& schlafli) {
  const std::size_t n = schlafli.size();
  std::vector<Word> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(power({letter(j)}, schlafli[j]));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Word run;
      for (std::size_t k = i; k <= j; ++k) run.push_back(letter(k));
      out.push_back(power(run, 2));
    }
  }
  return out;
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class WordParser {
 public:
  WordParser(const Presentation& pres, std::string_view text, std::size_t line, std::size_t column)
      : pres_(pres), s_(text), line_(line), column_(column) {}

  // Comma-separated list of words or equations, consuming the whole text.
  std::vector<Word> relator_list() {
    std::vector<Word> out;
    while (true) {
      out.push_back(equation());
      skip_ws();
      if (at_end()) break;
      if (peek() != ',') fail("expected ',' or end of statement");
      ++pos_;
    }
    return out;
  }

  Word single_word() {
    Word w = equation();
    skip_ws();
    if (!at_end()) fail("unexpected character '" + std::string(1, peek()) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_ + pos_ + 1);
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  Word equation() {
    Word lhs = product();
    skip_ws();
    if (!at_end() && peek() == '=') {
      ++pos_;
      Word rhs = product();
      return concat(lhs, inverse(rhs));
    }
    return lhs;
  }

  Word product() {
    Word w;
    bool any = false;
    while (true) {
      skip_ws();
      if (at_end()) break;
      char c = peek();
      if (c == '*') {
        if (!any) fail("'*' without a left operand");
        ++pos_;
        skip_ws();
        if (at_end() || !starts_factor(peek())) fail("'*' without a right operand");
        continue;
      }
      if (!starts_factor(c)) break;
      Word f = factor();
      w.insert(w.end(), f.begin(), f.end());
      any = true;
    }
    if (!any) fail("expected a word");
    return free_reduce(std::move(w));
  }

  static bool starts_factor(char c) { return is_ident_start(c) || c == '(' || c == '[' || c == '1'; }

  Word factor() {
    Word base = atom();
    while (true) {
      skip_ws();
      if (at_end() || peek() != '^') break;
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      if (!at_end() && (peek() == '-' || peek() == '+')) ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      long long e = 0;
      std::string_view digits = s_.substr(start, pos_ - start);
      if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), e);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
        pos_ = start;
        fail("expected an integer exponent");
      }
      if (e == 0) {
        pos_ = start;
        fail("zero exponent");
      }
      if (e > 100000 || e < -100000) {
        pos_ = start;
        fail("exponent too large");
      }
      base = power(base, e);
    }
    return base;
  }

  Word atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Word w = product();
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      ++pos_;
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word acc = product();
      std::size_t parts = 1;
      while (true) {
        skip_ws();
        if (at_end()) fail("expected ']'");
        if (peek() == ']') break;
        if (peek() != ',') fail("expected ',' or ']'");
        ++pos_;
        acc = commutator(acc, product());
        ++parts;
      }
      if (parts < 2) fail("commutator needs two entries");
      ++pos_;
      return acc;
    }
    if (c == '1') {
      ++pos_;
      if (!at_end() && is_ident_char(peek())) fail("unexpected number");
      return {};
    }
    std::size_t start = pos_;
    while (!at_end() && is_ident_char(peek())) ++pos_;
    std::string_view name = s_.substr(start, pos_ - start);
    for (const auto& g : pres_.alphabet) {
      if (g.name == name) return {letter(g.index)};
    }
    pos_ = start;
    fail("unknown generator '" + std::string(name) + "'");
  }

  const Presentation& pres_;
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_;
};

struct Statement {
  std::string_view text;
  std::size_t line;
  std::size_t column;  // 0-based offset of text within the line
};

std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t s = 0;
    while (s <= line.size()) {
      std::size_t e = line.find(';', s);
      if (e == std::string_view::npos) e = line.size();
      std::string_view piece = line.substr(s, e - s);
      std::size_t lead = 0;
      while (lead < piece.size() && std::isspace(static_cast<unsigned char>(piece[lead]))) ++lead;
      std::size_t trail = piece.size();
      while (trail > lead && std::isspace(static_cast<unsigned char>(piece[trail - 1]))) --trail;
      if (trail > lead) out.push_back({piece.substr(lead, trail - lead), line_no, s + lead});
      s = e + 1;
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

std::vector<long long> parse_integers(std::string_view rest, const Statement& st, std::size_t offset) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < rest.size()) {
    while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
    if (i == rest.size()) break;
    std::size_t j = i;
    while (j < rest.size() && !std::isspace(static_cast<unsigned char>(rest[j]))) ++j;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(rest.data() + i, rest.data() + j, v);
    if (ec != std::errc() || ptr != rest.data() + j || v < 2) {
      throw ParseError("expected an integer >= 2", st.line, st.column + offset + i + 1);
    }
    out.push_back(v);
    i = j;
  }
  if (out.empty()) throw ParseError("expected at least one integer", st.line, st.column + offset + 1);
  return out;
}

}  // namespace

Word Presentation::parse_word(std::string_view text) const {
  return WordParser(*this, text, 1, 0).single_word();
}

Presentation parse_presentation(std::string_view text) {
  Presentation pres;
  bool have_gens = false;
  for (const auto& st : split_statements(text)) {
    std::size_t kw_end = 0;
    while (kw_end < st.text.size() && !std::isspace(static_cast<unsigned char>(st.text[kw_end]))) ++kw_end;
    std::string_view keyword = st.text.substr(0, kw_end);
    std::string_view rest = st.text.substr(kw_end);
    if (keyword == "gens") {
      if (have_gens) throw ParseError("duplicate 'gens' statement", st.line, st.column + 1);
      have_gens = true;
      std::size_t i = 0;
      while (i < rest.size()) {
        while (i < rest.size() && (std::isspace(static_cast<unsigned char>(rest[i])) || rest[i] == ',')) ++i;
        if (i == rest.size()) break;
        std::size_t j = i;
        while (j < rest.size() && !std::isspace(static_cast<unsigned char>(rest[j])) && rest[j] != ',') ++j;
        std::string name(rest.substr(i, j - i));
        std::size_t col = st.column + kw_end + i + 1;
        if (!is_ident_start(name.front()) ||
            !std::all_of(name.begin(), name.end(), [](char c) { return is_ident_char(c); })) {
          throw ParseError("invalid generator name '" + name + "'", st.line, col);
        }
        for (const auto& g : pres.alphabet) {
          if (g.name == name) throw ParseError("duplicate generator '" + name + "'", st.line, col);
        }
        pres.alphabet.push_back({name, pres.alphabet.size()});
        i = j;
      }
      if (pres.alphabet.empty()) throw ParseError("empty generator list", st.line, st.column + 1);
      continue;
    }
    if (!have_gens) throw ParseError("'gens' must come first", st.line, st.column + 1);
    if (keyword == "rel") {
      WordParser parser(pres, rest, st.line, st.column + kw_end);
      for (auto& w : parser.relator_list()) pres.add_relator(std::move(w));
    } else if (keyword == "coxeter" || keyword == "rotation") {
      auto schlafli = parse_integers(rest, st, kw_end);
      bool cox = keyword == "coxeter";
      std::size_t need = schlafli.size() + (cox ? 1 : 0);
      if (need != pres.alphabet.size()) {
        throw ParseError("'" + std::string(keyword) + "' needs " + std::to_string(need) +
                             " generators, presentation has " + std::to_string(pres.alphabet.size()),
                         st.line, st.column + 1);
      }
      for (auto& w : cox ? coxeter_relators(schlafli) : rotation_relators(schlafli)) {
        pres.add_relator(std::move(w));
      }
    } else {
      throw ParseError("unknown statement '" + std::string(keyword) + "'", st.line, st.column + 1);
    }
  }
  if (!have_gens) throw ParseError("missing 'gens' statement", 1, 1);
  return pres;
}

CosetTable::CosetTable(std::size_t generators, std::vector<Word> subgroup_generators,
                       std::vector<std::int32_t> rows, std::size_t count)
    : gens_(generators), subgroup_(std::move(subgroup_generators)), rows_(std::move(rows)), count_(count) {}

std::uint32_t CosetTable::trace(std::size_t coset, const Word& w) const {
  std::uint32_t c = static_cast<std::uint32_t>(coset);
  for (Letter l : w) c = image(c, l);
  return c;
}

namespace {

constexpr std::int32_t kUndefined = -1;

class Enumerator {
 public:
  Enumerator(const Presentation& pres, std::vector<Word> subgroup, std::size_t limit)
      : cols_(2 * pres.generator_count()), limit_(limit), subgroup_(std::move(subgroup)) {
    for (const auto& r : pres.relators) {
      if (!r.empty()) relators_.push_back(r);
    }
    new_coset();
  }

  CosetTable run(EnumerationStats* stats) {
    for (const auto& w : subgroup_) {
      while (!scan_and_fill(0, w)) make_room();
    }
    std::size_t c = 0;
    while (c < allocated()) {
      if (live(c)) process(c);
      ++c;
      if (dead_ > 4096 && dead_ > active_) c = compact(c);
    }
    compact(0);
    if (stats) {
      stats->max_active = max_active_;
      stats->total_defined = total_defined_;
    }
    std::vector<Word> sub = subgroup_;
    return CosetTable(cols_ / 2, std::move(sub), std::move(table_), active_);
  }

 private:
  std::size_t allocated() const { return parent_.size(); }
  bool live(std::size_t c) const { return parent_[c] == static_cast<std::int32_t>(c); }
  std::int32_t& at(std::size_t c, Letter x) { return table_[c * cols_ + x]; }

  std::int32_t new_coset() {
    auto id = static_cast<std::int32_t>(parent_.size());
    parent_.push_back(id);
    table_.resize(table_.size() + cols_, kUndefined);
    ++active_;
    ++total_defined_;
    max_active_ = std::max(max_active_, active_);
    return id;
  }

  // False if the coset limit blocks a definition.
  bool define(std::size_t c, Letter x) {
    if (active_ >= limit_) return false;
    std::int32_t d = new_coset();
    at(c, x) = d;
    at(static_cast<std::size_t>(d), letter_inverse(x)) = static_cast<std::int32_t>(c);
    return true;
  }

  void process(std::size_t c) {
    while (true) {
      bool blocked = false;
      for (const auto& r : relators_) {
        if (!scan_and_fill(c, r)) {
          blocked = true;
          break;
        }
        if (!live(c)) return;
      }
      if (!blocked) {
        for (Letter x = 0; x < cols_ && live(c); ++x) {
          if (at(c, x) == kUndefined && !define(c, x)) {
            blocked = true;
            break;
          }
        }
      }
      if (!blocked) return;
      make_room();
      if (!live(c)) return;
    }
  }

  // Runs one lookahead pass; throws if it frees nothing.
  void make_room() {
    std::size_t before = active_;
    for (const auto& w : subgroup_) scan_only(0, w);
    for (std::size_t e = 0; e < allocated(); ++e) {
      for (const auto& r : relators_) {
        if (!live(e)) break;
        scan_only(e, r);
      }
    }
    if (active_ >= before || active_ >= limit_) {
      throw LimitExceeded("coset enumeration exceeded " + std::to_string(limit_) + " cosets");
    }
  }

  // Scan w from c, defining cosets to complete it. False if blocked by the limit.
  bool scan_and_fill(std::size_t c, const Word& w) {
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();
    while (true) {
      while (i < j && at(f, w[i]) != kUndefined) f = static_cast<std::size_t>(at(f, w[i++]));
      if (i == j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j > i && at(b, letter_inverse(w[j - 1])) != kUndefined) {
        b = static_cast<std::size_t>(at(b, letter_inverse(w[--j])));
      }
      if (j == i) {
        coincidence(f, b);
        return true;
      }
      if (j == i + 1) {
        at(f, w[i]) = static_cast<std::int32_t>(b);
        at(b, letter_inverse(w[i])) = static_cast<std::int32_t>(f);
        return true;
      }
      if (!define(f, w[i])) return false;
    }
  }

  void scan_only(std::size_t c, const Word& w) {
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();
    while (i < j && at(f, w[i]) != kUndefined) f = static_cast<std::size_t>(at(f, w[i++]));
    if (i == j) {
      if (f != b) coincidence(f, b);
      return;
    }
    while (j > i && at(b, letter_inverse(w[j - 1])) != kUndefined) {
      b = static_cast<std::size_t>(at(b, letter_inverse(w[--j])));
    }
    if (j == i) {
      coincidence(f, b);
    } else if (j == i + 1) {
      at(f, w[i]) = static_cast<std::int32_t>(b);
      at(b, letter_inverse(w[i])) = static_cast<std::int32_t>(f);
    }
  }

  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != static_cast<std::int32_t>(r)) r = static_cast<std::size_t>(parent_[r]);
    while (parent_[c] != static_cast<std::int32_t>(r)) {
      std::size_t next = static_cast<std::size_t>(parent_[c]);
      parent_[c] = static_cast<std::int32_t>(r);
      c = next;
    }
    return r;
  }

  void merge(std::size_t k, std::size_t l) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    parent_[l] = static_cast<std::int32_t>(k);
    --active_;
    ++dead_;
    queue_.push_back(l);
  }

  void coincidence(std::size_t a, std::size_t b) {
    merge(a, b);
    while (!queue_.empty()) {
      std::size_t e = queue_.front();
      queue_.pop_front();
      for (Letter x = 0; x < cols_; ++x) {
        std::int32_t fv = at(e, x);
        if (fv == kUndefined) continue;
        auto f = static_cast<std::size_t>(fv);
        at(f, letter_inverse(x)) = kUndefined;
        std::size_t e1 = rep(e);
        std::size_t f1 = rep(f);
        if (at(e1, x) != kUndefined) {
          merge(f1, static_cast<std::size_t>(at(e1, x)));
        } else if (at(f1, letter_inverse(x)) != kUndefined) {
          merge(e1, static_cast<std::size_t>(at(f1, letter_inverse(x))));
        } else {
          at(e1, x) = static_cast<std::int32_t>(f1);
          at(f1, letter_inverse(x)) = static_cast<std::int32_t>(e1);
        }
      }
    }
  }

  // Renumbers live cosets in order; returns the new index of the first live
  // coset at or after `cursor`.
  std::size_t compact(std::size_t cursor) {
    std::vector<std::int32_t> renumber(allocated(), kUndefined);
    std::size_t next = 0;
    std::size_t new_cursor = 0;
    for (std::size_t c = 0; c < allocated(); ++c) {
      if (c == cursor) new_cursor = next;
      if (live(c)) renumber[c] = static_cast<std::int32_t>(next++);
    }
    if (cursor >= allocated()) new_cursor = next;
    std::vector<std::int32_t> table(next * cols_);
    for (std::size_t c = 0; c < allocated(); ++c) {
      if (renumber[c] == kUndefined) continue;
      for (Letter x = 0; x < cols_; ++x) {
        std::int32_t v = at(c, x);
        table[static_cast<std::size_t>(renumber[c]) * cols_ + x] =
            v == kUndefined ? kUndefined : renumber[static_cast<std::size_t>(v)];
      }
    }
    table_ = std::move(table);
    parent_.resize(next);
    for (std::size_t c = 0; c < next; ++c) parent_[c] = static_cast<std::int32_t>(c);
    dead_ = 0;
    return new_cursor;
  }

  std::size_t cols_;
  std::size_t limit_;
  std::vector<Word> subgroup_;
  std::vector<Word> relators_;
  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> parent_;
  std::deque<std::size_t> queue_;
  std::size_t active_ = 0;
  std::size_t dead_ = 0;
  std::size_t max_active_ = 0;
  std::size_t total_defined_ = 0;
};

}  // namespace

CosetTable coset_enumerate(const Presentation& pres, const std::vector<Word>& subgroup,
                           std::size_t limit, EnumerationStats* stats) {
  if (pres.alphabet.empty()) throw InvalidArgument("presentation has no generators");
  if (limit == 0) throw InvalidArgument("coset limit must be positive");
  for (const auto& w : subgroup) {
    for (Letter l : w) {
      if (letter_gen(l) >= pres.generator_count()) throw InvalidArgument("subgroup word uses an unknown generator");
    }
  }
  std::vector<Word> sub;
  for (const auto& w : subgroup) {
    Word r = free_reduce(w);
    if (!r.empty()) sub.push_back(std::move(r));
  }
  CosetTable table = Enumerator(pres, std::move(sub), limit).run(stats);
  for (std::size_t c = 0; c < table.count(); ++c) {
    for (const auto& r : pres.relators) {
      if (table.trace(c, r) != c) throw InvariantViolation("relator does not close in the coset table");
    }
  }
  for (const auto& w : table.subgroup_generators()) {
    if (table.trace(0, w) != 0) throw InvariantViolation("subgroup generator does not fix coset 0");
  }
  return table;
}

std::vector<perm::Perm> perm_rep(const CosetTable& table, const Presentation& pres) {
  std::vector<perm::Perm> out;
  out.reserve(table.generator_count());
  for (std::size_t g = 0; g < table.generator_count(); ++g) {
    std::vector<Point> img(table.count());
    for (std::size_t c = 0; c < table.count(); ++c) img[c] = table.image(c, letter(g));
    out.emplace_back(std::move(img));
  }
  for (const auto& r : pres.relators) {
    if (!evaluate_word(r, out).is_identity()) throw InvariantViolation("relator is not satisfied by the coset action");
  }
  return out;
}

perm::Perm evaluate_word(const Word& w, const std::vector<perm::Perm>& assignment) {
  if (assignment.empty()) throw InvalidArgument("empty generator assignment");
  perm::Perm out(assignment.front().degree());
  for (Letter l : w) {
    std::size_t g = letter_gen(l);
    if (g >= assignment.size()) throw InvalidArgument("word uses a generator outside the assignment");
    out *= letter_is_inverse(l) ? assignment[g].inverse() : assignment[g];
  }
  return out;
}

}  // namespace polysym::fp
