#include "soficlab/stochastic_module.hpp"

#include "soficlab/error.hpp"
#include "soficlab/linalg.hpp"
#include "soficlab/word_orbit.hpp"

namespace soficlab {

void validate(const StochasticModule& mod) {
  const std::size_t n = mod.dim();
  if (n == 0) throw Error("module dimension must be positive");
  if (mod.r.size() != n) throw Error("module l and r have different lengths");
  if (mod.mats.size() != mod.alphabet.size()) throw Error("module needs one matrix per alphabet symbol");
  for (std::size_t a = 0; a < mod.mats.size(); ++a)
    if (mod.mats[a].rows() != n || mod.mats[a].cols() != n)
      throw Error("module matrix for \"" + mod.alphabet.name(a) + "\" is not " + std::to_string(n) + "x" +
                  std::to_string(n));
  Rational total = dot(mod.l, mod.r);
  if (total != 1) throw Error("module has l r = " + to_string(total) + " ≠ 1");
}

StochasticModule module_of(const LinearRepresentation& rep) {
  return StochasticModule{rep.alphabet(), rep.x(), rep.phi(), rep.y()};
}

StochasticModule image_module(const BlockCode& code, const MarkovMeasure& mu) {
  return module_of(from_sofic_image(code, mu));
}

Rational probability(const StochasticModule& mod, const Word& w) {
  return evaluate_series(mod.l, mod.mats, mod.r, w);
}

namespace {

// Restricts mats to the row span of the orbit of l. Returns the new module in
// coordinates of the orbit basis; the new l is e_0.
StochasticModule row_pass(const StochasticModule& mod) {
  WordOrbit orb = row_orbit(mod.l, mod.mats);
  const std::size_t d = orb.dim();
  const auto& basis = orb.vectors();
  StochasticModule out;
  out.alphabet = mod.alphabet;
  out.l.assign(d, Rational(0));
  out.l[0] = 1;
  for (const auto& m : mod.mats) {
    RMatrix hat(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      auto c = orb.span.coordinates(basis[i] * m);
      if (!c) throw InternalError("row span of a module is not invariant under its generators");
      for (std::size_t j = 0; j < d; ++j) hat(i, j) = (*c)[j];
    }
    out.mats.push_back(std::move(hat));
  }
  out.r.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.r[i] = dot(basis[i], mod.r);
  return out;
}

StochasticModule transpose(const StochasticModule& mod) {
  StochasticModule out{mod.alphabet, mod.r, {}, mod.l};
  for (const auto& m : mod.mats) out.mats.push_back(m.transpose());
  return out;
}

}  // namespace

StochasticModule reduce(const StochasticModule& mod) {
  validate(mod);
  StochasticModule once = row_pass(mod);
  // The column pass is the row pass of the transposed module.
  StochasticModule out = transpose(row_pass(transpose(once)));
  if (auto w = distinguishing_word(mod, out))
    throw InternalError("reduced module differs from its input at \"" + mod.alphabet.format(*w) + "\"");
  return out;
}

std::optional<Word> distinguishing_word(const StochasticModule& m1, const StochasticModule& m2) {
  if (!(m1.alphabet == m2.alphabet)) throw Error("modules are over different alphabets");
  return first_difference(m1.l, m1.mats, m1.r, m2.l, m2.mats, m2.r);
}

bool equivalent(const StochasticModule& m1, const StochasticModule& m2) { return !distinguishing_word(m1, m2); }

CoreInvariant core_invariant(const StochasticModule& mod) {
  StochasticModule red = reduce(mod);
  RMatrix core(red.dim(), red.dim());
  for (const auto& m : red.mats) core = core + m;
  Polynomial ev = characteristic_polynomial(core).without_zero_roots();
  return {std::move(core), std::move(ev)};
}

bool core_quotient_check(const CoreInvariant& image, const CoreInvariant& domain) {
  return image.eventual_charpoly.divides(domain.eventual_charpoly);
}

}  // namespace soficlab
