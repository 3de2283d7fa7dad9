#include "soficlab/shift_space.hpp"

#include <algorithm>
#include <cctype>

#include "soficlab/error.hpp"
#include "soficlab/graph.hpp"

namespace soficlab {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (Symbol s = 0; s < names_.size(); ++s) {
    const auto& n = names_[s];
    if (n.empty()) throw Error("empty symbol name");
    for (char c : n)
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',')
        throw Error("symbol name \"" + n + "\" contains whitespace or a comma");
    if (!lookup_.emplace(n, s).second) throw Error("duplicate symbol \"" + n + "\"");
    if (n.size() != 1) single_char_ = false;
  }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::index(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw Error("unknown symbol \"" + std::string(name) + "\"");
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && !single_char_) out += ' ';
    out += name(w[i]);
  }
  return out;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  bool separated = false;
  for (char c : text)
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') separated = true;

  if (separated) {
    std::string token;
    auto flush = [&] {
      if (!token.empty()) w.push_back(index(token));
      token.clear();
    };
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',')
        flush();
      else
        token += c;
    }
    flush();
    return w;
  }

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::optional<Symbol> best;
    std::size_t best_len = 0;
    for (Symbol s = 0; s < names_.size(); ++s) {
      const auto& n = names_[s];
      if (n.size() > best_len && text.substr(pos, n.size()) == n) {
        best = s;
        best_len = n.size();
      }
    }
    if (!best) throw Error("cannot parse word \"" + std::string(text) + "\" at position " + std::to_string(pos));
    w.push_back(*best);
    pos += best_len;
  }
  return w;
}

// ---------------------------------------------------------------- SftSpace

std::vector<Symbol> SftSpace::successors(Symbol i) const {
  std::vector<Symbol> out;
  for (Symbol j = 0; j < size(); ++j)
    if (edge(i, j)) out.push_back(j);
  return out;
}

bool SftSpace::allows(const Word& w) const {
  for (auto s : w)
    if (s >= size()) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!edge(w[i], w[i + 1])) return false;
  return true;
}

SftSpace build_sft(const Alphabet& alphabet, const std::vector<std::vector<int>>& adjacency) {
  const std::size_t n = alphabet.size();
  if (adjacency.size() != n) throw Error("adjacency has " + std::to_string(adjacency.size()) +
                                         " rows for an alphabet of " + std::to_string(n) + " symbols");
  Matrix<int> a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n) throw Error("adjacency row " + std::to_string(i) + " is not of length " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) a(i, j) = adjacency[i][j];
  }
  return build_sft(alphabet, a);
}

SftSpace build_sft(const Alphabet& alphabet, const Matrix<int>& adjacency) {
  const std::size_t n = alphabet.size();
  if (adjacency.rows() != n || adjacency.cols() != n) throw Error("adjacency must be square over the alphabet");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adjacency(i, j) != 0 && adjacency(i, j) != 1)
        throw Error("adjacency entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not 0 or 1");

  std::vector<bool> alive(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      bool out = false, in = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (!alive[j]) continue;
        out = out || adjacency(i, j) != 0;
        in = in || adjacency(j, i) != 0;
      }
      if (!out || !in) {
        alive[i] = false;
        changed = true;
      }
    }
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) keep.push_back(i);
  if (keep.empty()) throw Error("empty subshift");

  std::vector<std::string> names;
  for (auto i : keep) names.push_back(alphabet.name(i));
  SftSpace x;
  x.alphabet_ = Alphabet(std::move(names));
  x.adjacency_ = Matrix<int>(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) x.adjacency_(i, j) = adjacency(keep[i], keep[j]);
  return x;
}

SftSpace full_shift(const Alphabet& alphabet) {
  return build_sft(alphabet, Matrix<int>(alphabet.size(), alphabet.size(), 1));
}

bool is_irreducible(const SftSpace& x) { return strongly_connected(support_graph(x.adjacency())); }

std::vector<Word> words_of_length(const SftSpace& x, std::size_t n) {
  std::vector<Word> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  Word w;
  w.reserve(n);
  auto extend = [&](auto&& self) -> void {
    if (w.size() == n) {
      out.push_back(w);
      return;
    }
    for (Symbol s = 0; s < x.size(); ++s) {
      if (!w.empty() && !x.edge(w.back(), s)) continue;
      w.push_back(s);
      self(self);
      w.pop_back();
    }
  };
  extend(extend);
  return out;
}

std::vector<Word> all_words(std::size_t alphabet_size, std::size_t n) {
  std::vector<Word> out;
  Word w(n, 0);
  if (alphabet_size == 0) return n == 0 ? std::vector<Word>{Word{}} : out;
  while (true) {
    out.push_back(w);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++w[pos] < alphabet_size) break;
      w[pos] = 0;
      if (pos == 0) return out;
    }
    if (n == 0) return out;
  }
}

// ---------------------------------------------------------------- BlockCode

BlockCode BlockCode::make(SftSpace domain, Alphabet codomain, std::size_t memory, std::size_t anticipation,
                          std::map<Word, Symbol> table) {
  BlockCode c;
  c.memory_ = memory;
  c.anticipation_ = anticipation;
  const std::size_t k = c.span();
  for (const auto& [block, sym] : table) {
    if (block.size() != k)
      throw Error("code table block \"" + domain.alphabet().format(block) + "\" has length " +
                  std::to_string(block.size()) + ", expected " + std::to_string(k));
    if (sym >= codomain.size()) throw Error("code table maps to a symbol outside the codomain");
  }
  std::map<Word, Symbol> restricted;
  for (const auto& block : words_of_length(domain, k)) {
    auto it = table.find(block);
    if (it == table.end())
      throw Error("code table is missing the allowed block \"" + domain.alphabet().format(block) + "\"");
    restricted.emplace(block, it->second);
  }
  c.table_ = std::move(restricted);
  if (k == 1) {
    c.symbol_map_.resize(domain.size());
    for (const auto& [block, sym] : c.table_) c.symbol_map_[block[0]] = sym;
  }
  c.domain_ = std::move(domain);
  c.codomain_ = std::move(codomain);
  return c;
}

BlockCode BlockCode::one_block(SftSpace domain, Alphabet codomain, std::vector<Symbol> image) {
  if (image.size() != domain.size()) throw Error("1-block code needs one image symbol per domain symbol");
  std::map<Word, Symbol> table;
  for (Symbol s = 0; s < image.size(); ++s) table.emplace(Word{s}, image[s]);
  return make(std::move(domain), std::move(codomain), 0, 0, std::move(table));
}

const std::vector<Symbol>& BlockCode::symbol_map() const {
  if (!is_one_block()) throw InternalError("symbol_map requested for a code of span > 1");
  return symbol_map_;
}

Word BlockCode::apply(const Word& w) const {
  const std::size_t k = span();
  Word out;
  if (w.size() < k) return out;
  Word window(k);
  for (std::size_t i = 0; i + k <= w.size(); ++i) {
    std::copy(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + k), window.begin());
    auto it = table_.find(window);
    if (it == table_.end()) throw Error("word \"" + domain_.alphabet().format(w) + "\" is not allowed in the domain");
    out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------- recodings

namespace {

std::string block_name(const Alphabet& a, const Word& block) {
  std::string s;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (i > 0 && !a.single_char()) s += '.';
    s += a.name(block[i]);
  }
  return s;
}

// Symbols of X^[k] and their adjacency: u -> v iff u[1..] == v[..k-1] and the
// (k+1)-block u v_k is allowed.
std::pair<SftSpace, std::vector<Word>> block_space(const SftSpace& x, std::size_t k) {
  std::vector<Word> blocks = words_of_length(x, k);
  std::vector<std::string> names;
  for (const auto& b : blocks) names.push_back(block_name(x.alphabet(), b));
  Matrix<int> adj(blocks.size(), blocks.size());
  for (std::size_t u = 0; u < blocks.size(); ++u)
    for (std::size_t v = 0; v < blocks.size(); ++v) {
      if (!std::equal(blocks[u].begin() + 1, blocks[u].end(), blocks[v].begin(), blocks[v].end() - 1)) continue;
      if (!x.edge(blocks[u].back(), blocks[v].back())) continue;
      adj(u, v) = 1;
    }
  SftSpace space = build_sft(Alphabet(std::move(names)), adj);
  if (space.size() != blocks.size()) throw InternalError("higher block presentation pruned a symbol");
  return {std::move(space), std::move(blocks)};
}

}  // namespace

HigherBlock higher_block_presentation(const SftSpace& x, std::size_t k) {
  if (k == 0) throw Error("block length must be positive");
  auto [space, blocks] = block_space(x, k);
  std::vector<Symbol> first;
  for (const auto& b : blocks) first.push_back(b.front());
  BlockCode code = BlockCode::one_block(space, x.alphabet(), std::move(first));
  return {std::move(space), std::move(code), std::move(blocks)};
}

OneBlockRecoding recode_to_one_block(const BlockCode& code) {
  const SftSpace& x = code.domain();
  const std::size_t k = code.span();
  auto [space, blocks] = block_space(x, k);
  std::vector<Symbol> image, centre;
  for (const auto& b : blocks) {
    image.push_back(code.table().at(b));
    centre.push_back(b[code.memory()]);
  }
  BlockCode one = BlockCode::one_block(space, code.codomain(), std::move(image));
  BlockCode conj = BlockCode::one_block(space, x.alphabet(), std::move(centre));
  return {std::move(space), std::move(one), std::move(conj), std::move(blocks)};
}

BigInt preimage_count(const BlockCode& code, const Word& w) {
  const auto& map = code.symbol_map();
  const SftSpace& x = code.domain();
  if (w.empty()) return 1;
  for (auto s : w)
    if (s >= code.codomain().size()) throw Error("word uses a symbol outside the code's codomain");

  std::vector<BigInt> v(x.size());
  for (Symbol i = 0; i < x.size(); ++i) v[i] = map[i] == w[0] ? 1 : 0;
  for (std::size_t t = 1; t < w.size(); ++t) {
    std::vector<BigInt> next(x.size());
    for (Symbol i = 0; i < x.size(); ++i) {
      if (v[i] == 0) continue;
      for (Symbol j = 0; j < x.size(); ++j)
        if (x.edge(i, j) && map[j] == w[t]) next[j] += v[i];
    }
    v = std::move(next);
  }
  BigInt total = 0;
  for (const auto& c : v) total += c;
  return total;
}

Matrix<int> incidence_matrix(const BlockCode& code) {
  const auto& map = code.symbol_map();
  Matrix<int> u(map.size(), code.codomain().size());
  for (Symbol i = 0; i < map.size(); ++i) u(i, map[i]) = 1;
  return u;
}

}  // namespace soficlab
