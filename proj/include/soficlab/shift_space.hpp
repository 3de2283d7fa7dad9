#ifndef SOFICLAB_SHIFT_SPACE_HPP
#define SOFICLAB_SHIFT_SPACE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "soficlab/matrix.hpp"

namespace soficlab {

using Symbol = std::size_t;
using Word = std::vector<Symbol>;

/// Ordered set of symbol names. The order fixes matrix indexing and the
/// lexicographic order of words.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Symbol> find(std::string_view name) const;
  Symbol index(std::string_view name) const;  // throws Error when absent

  /// True when every name is one character, so words print without separators.
  bool single_char() const { return single_char_; }

  /// Words print as concatenated names for single-character alphabets and
  /// space-separated names otherwise.
  std::string format(const Word& w) const;

  /// Accepts whitespace/comma separated names, or a run of names matched by
  /// longest prefix. Throws Error on unknown or ambiguous input.
  Word parse(std::string_view text) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> lookup_;
  bool single_char_ = true;
};

/// An irreducible-or-not 1-step shift of finite type given by a 0/1
/// adjacency matrix. Every symbol has a successor and a predecessor.
class SftSpace {
 public:
  SftSpace() = default;

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  const Matrix<int>& adjacency() const { return adjacency_; }
  bool edge(Symbol i, Symbol j) const { return adjacency_(i, j) != 0; }
  std::vector<Symbol> successors(Symbol i) const;

  bool allows(const Word& w) const;

  friend bool operator==(const SftSpace&, const SftSpace&) = default;

 private:
  friend SftSpace build_sft(const Alphabet&, const Matrix<int>&);
  Alphabet alphabet_;
  Matrix<int> adjacency_;
};

/// Validates the adjacency and prunes symbols with no successor or no
/// predecessor until none remain. Throws Error("empty subshift") if nothing
/// survives.
SftSpace build_sft(const Alphabet& alphabet, const std::vector<std::vector<int>>& adjacency);
SftSpace build_sft(const Alphabet& alphabet, const Matrix<int>& adjacency);

/// Full shift on the given alphabet.
SftSpace full_shift(const Alphabet& alphabet);

bool is_irreducible(const SftSpace& x);

/// All allowed words of length n in lexicographic order; n = 0 gives {ε}.
std::vector<Word> words_of_length(const SftSpace& x, std::size_t n);

/// Allowed words of exactly length n over the alphabet, with no adjacency
/// constraint (all |A|^n of them), lexicographic.
std::vector<Word> all_words(std::size_t alphabet_size, std::size_t n);

/// Sliding-block code x -> y with (y)_i = table(x[i-m .. i+n]).
class BlockCode {
 public:
  BlockCode() = default;

  /// Throws Error if the table misses an allowed (m+n+1)-block of the domain
  /// or names a symbol outside the codomain.
  static BlockCode make(SftSpace domain, Alphabet codomain, std::size_t memory, std::size_t anticipation,
                        std::map<Word, Symbol> table);
  static BlockCode one_block(SftSpace domain, Alphabet codomain, std::vector<Symbol> image);

  const SftSpace& domain() const { return domain_; }
  const Alphabet& codomain() const { return codomain_; }
  std::size_t memory() const { return memory_; }
  std::size_t anticipation() const { return anticipation_; }
  std::size_t span() const { return memory_ + anticipation_ + 1; }
  bool is_one_block() const { return span() == 1; }
  const std::map<Word, Symbol>& table() const { return table_; }

  /// Symbol map of a 1-block code; throws InternalError otherwise.
  const std::vector<Symbol>& symbol_map() const;
  Symbol image_of(Symbol s) const { return symbol_map().at(s); }

  /// Image of a domain word: one output symbol per full window, so the
  /// result has length |w| - span + 1 (empty when |w| < span).
  Word apply(const Word& w) const;

  friend bool operator==(const BlockCode&, const BlockCode&) = default;

 private:
  SftSpace domain_;
  Alphabet codomain_;
  std::size_t memory_ = 0;
  std::size_t anticipation_ = 0;
  std::map<Word, Symbol> table_;
  std::vector<Symbol> symbol_map_;
};

/// X^[k] together with the 1-block code back to X reading the first symbol
/// of each block. blocks[s] is the k-block behind symbol s of the new space.
struct HigherBlock {
  SftSpace space;
  BlockCode to_base;
  std::vector<Word> blocks;
};
HigherBlock higher_block_presentation(const SftSpace& x, std::size_t k);

/// A block code of span k rewritten as a 1-block code on X^[k]. The
/// conjugacy X^[k] -> X reads the symbol at offset `memory` of each block, so
/// the recoded map agrees with the original coordinate by coordinate.
struct OneBlockRecoding {
  SftSpace space;
  BlockCode code;
  BlockCode conjugacy;
  std::vector<Word> blocks;
};
OneBlockRecoding recode_to_one_block(const BlockCode& code);

/// Number of domain words u with |u| = |w| and code(u) = w, by transfer
/// matrices. The code must be 1-block.
BigInt preimage_count(const BlockCode& code, const Word& w);

/// 0/1 matrix with U(i, b) = 1 iff the 1-block code sends i to b.
Matrix<int> incidence_matrix(const BlockCode& code);

}  // namespace soficlab

#endif
