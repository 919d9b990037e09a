#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polysym/perm.hpp"

namespace polysym::fp {

// Letters are column codes: 2*g for generator g, 2*g+1 for its inverse.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

constexpr Letter letter(std::size_t gen, bool inverse = false) {
  return static_cast<Letter>(2 * gen + (inverse ? 1 : 0));
}
constexpr std::size_t letter_gen(Letter l) { return l >> 1; }
constexpr bool letter_is_inverse(Letter l) { return (l & 1u) != 0; }
constexpr Letter letter_inverse(Letter l) { return l ^ 1u; }

Word free_reduce(Word w);
// Free reduction followed by removal of cancelling first/last letters.
Word cyclic_reduce(Word w);
Word inverse(const Word& w);
Word power(const Word& w, long long k);
Word concat(const Word& a, const Word& b);
// a^-1 b^-1 a b
Word commutator(const Word& a, const Word& b);

struct GenSymbol {
  std::string name;
  std::size_t index = 0;
};

struct Presentation {
  std::vector<GenSymbol> alphabet;
  std::vector<Word> relators;

  std::size_t generator_count() const { return alphabet.size(); }
  // Throws InvalidArgument for an unknown name.
  std::size_t index_of(std::string_view name) const;
  // Word in this alphabet, same syntax as a relator.
  Word parse_word(std::string_view text) const;
  std::string format(const Word& w) const;
  // Appends the cyclic reduction of w; empty relators are dropped.
  void add_relator(Word w);
};

// Line-based source: `gens a b ...` once and first, then any number of
// `rel <word>[, <word>...]`, `coxeter p1 ... pk` and `rotation p1 ... pk`
// statements. Statements are separated by newlines or `;`; `#` starts a
// comment. Words use `*` or juxtaposition, `^k`, parentheses, `[u,v]`, `1`
// for the empty word, and `u = v` for the relator u v^-1.
Presentation parse_presentation(std::string_view text);

// Relators of the string Coxeter group [p1,...,pk] on k+1 involutions.
std::vector<Word> coxeter_relators(const std::vector<long long>& schlafli);
// Relators of its rotation subgroup on k generators: s_j^{p_j} and
// (s_i s_{i+1} ... s_j)^2 for i < j.
std::vector<Word> rotation_relators(const std::vector<long long>& schlafli);

constexpr std::size_t kDefaultCosetLimit = 2'000'000;

class CosetTable {
 public:
  CosetTable(std::size_t generators, std::vector<Word> subgroup_generators,
             std::vector<std::int32_t> rows, std::size_t count);

  std::size_t count() const { return count_; }
  std::size_t generator_count() const { return gens_; }
  const std::vector<Word>& subgroup_generators() const { return subgroup_; }
  // Image of `coset` under the letter's column.
  std::uint32_t image(std::size_t coset, Letter l) const {
    return static_cast<std::uint32_t>(rows_[coset * 2 * gens_ + l]);
  }
  std::uint32_t trace(std::size_t coset, const Word& w) const;

 private:
  std::size_t gens_;
  std::vector<Word> subgroup_;
  std::vector<std::int32_t> rows_;
  std::size_t count_;
};

struct EnumerationStats {
  std::size_t max_active = 0;
  std::size_t total_defined = 0;
};

// HLT enumeration with lookahead. Cosets are numbered in order of definition;
// coset 0 is the subgroup. Throws LimitExceeded if more than `limit` cosets
// are simultaneously live after a lookahead pass.
CosetTable coset_enumerate(const Presentation& pres, const std::vector<Word>& subgroup,
                           std::size_t limit = kDefaultCosetLimit,
                           EnumerationStats* stats = nullptr);

// Generator index -> permutation of the cosets; every relator is verified.
std::vector<perm::Perm> perm_rep(const CosetTable& table, const Presentation& pres);

// Left-to-right product of the letters' images.
perm::Perm evaluate_word(const Word& w, const std::vector<perm::Perm>& assignment);

}  // namespace polysym::fp
