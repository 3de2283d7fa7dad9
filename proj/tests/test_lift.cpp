#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "soficlab/error.hpp"
#include "soficlab/lift.hpp"

using namespace soficlab;
using oracle::R;
using oracle::V;

namespace {

struct Fixture {
  Model model;
  CodeStructure cs;
};

Fixture load(const std::string& name) {
  Model m = load_model(oracle::fixture(name));
  const ModelCode& c = m.codes.at("pi");
  std::optional<SftSpace> y;
  if (c.codomain_space) y = m.spaces.at(*c.codomain_space);
  CodeStructure cs = CodeStructure::make(c.code, y);
  return {m, cs};
}

CodeStructure identity(const SftSpace& x) {
  std::vector<Symbol> id(x.size());
  for (Symbol s = 0; s < id.size(); ++s) id[s] = s;
  return CodeStructure::make(BlockCode::one_block(x, x.alphabet(), id), x);
}

// Image of mu_P equals nu_Q on every word of length <= 6.
void check_image_exact(const CodeStructure& cs, const StochasticMatrix& p, const StochasticMatrix& q) {
  MarkovMeasure mu = MarkovMeasure::make(cs.X, p);
  MarkovMeasure nu = MarkovMeasure::make(cs.Y, q);
  for (std::size_t len = 0; len <= 6; ++len)
    for (const Word& w : oracle::words(cs.Y.size(), len))
      CHECK(image_cylinder_measure(cs.code, mu, w) == cylinder_measure(nu, w));
}

void check_image_numeric(const CodeStructure& cs, const Stochasticized& p, const StochasticMatrix& q) {
  NumericMarkov mu = numeric_chain(cs.X, p);
  MarkovMeasure nu = MarkovMeasure::make(cs.Y, q);
  for (std::size_t len = 1; len <= 6; ++len)
    for (const Word& w : oracle::words(cs.Y.size(), len))
      CHECK(oracle::image_measure_d(cs.code.symbol_map(), mu.stationary, mu.transition, w) ==
            doctest::Approx(cylinder_measure(nu, w).get_d()).epsilon(1e-9));
}

Matrix<int> times(const Matrix<int>& a, const Matrix<int>& b) {
  Matrix<int> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

Matrix<int> transpose(const Matrix<int>& a) {
  Matrix<int> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

}  // namespace

TEST_CASE("code structure") {
  Fixture f = load("figblack1_2.json");
  CHECK(f.cs.Y.size() == 2);
  CodeStructure inferred = CodeStructure::make(f.cs.code);
  CHECK(inferred.Y == f.cs.Y);

  // runs of b between a's have even length: not of finite type
  SftSpace even = build_sft(Alphabet({"a", "b1", "b2"}), std::vector<std::vector<int>>{{1, 1, 0}, {0, 0, 1}, {1, 1, 0}});
  BlockCode code = BlockCode::one_block(even, Alphabet({"a", "b"}), {0, 1, 1});
  CHECK_THROWS_WITH_AS(CodeStructure::make(code), doctest::Contains("image not SFT"), Error);
}

TEST_CASE("resolving status") {
  ResolvingStatus ex = resolving_status(load("exliftone.json").cs);
  CHECK(ex.right_e_resolving);
  CHECK(ex.left_e_resolving);
  CHECK_FALSE(ex.right_resolving);

  ResolvingStatus id = resolving_status(identity(load("shin.json").cs.X));
  CHECK(id.right_resolving);
  CHECK(id.left_resolving);
  CHECK(id.right_e_resolving);
  CHECK(id.left_e_resolving);

  ResolvingStatus shin = resolving_status(load("shin.json").cs);
  CHECK_FALSE(shin.right_e_resolving);
  CHECK_FALSE(shin.left_e_resolving);

  std::mt19937 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_instance(rng, 2 + trial % 4, 1 + trial % 3);
    CodeStructure cs;
    try {
      cs = CodeStructure::make(inst.code);
    } catch (const Error&) {
      continue;
    }
    ResolvingStatus s = resolving_status(cs);
    Matrix<int> au = times(cs.X.adjacency(), cs.U), ub = times(cs.U, cs.Y.adjacency());
    Matrix<int> atu = times(transpose(cs.X.adjacency()), cs.U), ubt = times(cs.U, transpose(cs.Y.adjacency()));
    bool le = true, ge = true, lle = true, lge = true;
    for (std::size_t i = 0; i < au.rows(); ++i)
      for (std::size_t j = 0; j < au.cols(); ++j) {
        le = le && au(i, j) <= ub(i, j);
        ge = ge && au(i, j) >= ub(i, j);
        lle = lle && atu(i, j) <= ubt(i, j);
        lge = lge && atu(i, j) >= ubt(i, j);
      }
    CHECK(s.right_resolving == le);
    CHECK(s.right_e_resolving == ge);
    CHECK(s.left_resolving == lle);
    CHECK(s.left_e_resolving == lge);
    CHECK((s.right_resolving && s.right_e_resolving) == (au == ub));
  }
}

TEST_CASE("stochasticization") {
  Stochasticized golden = stochasticize(R({{"0", "1"}, {"1", "1"}}));
  CHECK_FALSE(golden.exact);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(golden.rho == doctest::Approx(phi).epsilon(1e-12));
  CHECK(golden.matrix(0, 0) == doctest::Approx(0).epsilon(1e-12));
  CHECK(golden.matrix(0, 1) == doctest::Approx(1).epsilon(1e-12));
  CHECK(golden.matrix(1, 0) == doctest::Approx(1 / (phi * phi)).epsilon(1e-12));
  CHECK(golden.matrix(1, 1) == doctest::Approx(1 / phi).epsilon(1e-12));
  CHECK(golden.matrix(1, 0) == doctest::Approx(0.381966).epsilon(1e-6));

  Stochasticized two = stochasticize(R({{"2"}}));
  CHECK(two.exact);
  CHECK(two.exact_matrix == R({{"1"}}));
  CHECK(two.exact_rho == 2);

  RMatrix p = R({{"0", "2/3", "1/3"}, {"1/3", "2/3", "0"}, {"2/3", "0", "1/3"}});
  Stochasticized same = stochasticize(p);
  CHECK(same.exact);
  CHECK(same.exact_matrix == p);
  CHECK(stochasticize(same.exact_matrix).exact_matrix == same.exact_matrix);

  CHECK_THROWS_WITH_AS(stochasticize(R({{"1", "1"}, {"0", "1"}})), doctest::Contains("ambiguous Perron data"), Error);

  std::mt19937 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 4;
    Matrix<int> a = oracle::random_irreducible(rng, n, 0.5);
    DMatrix m(n, n);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j) ? u(rng) : 0.0;
    Stochasticized s = stochasticize(m);
    CHECK(s.rho == doctest::Approx(oracle::spectral_radius(m)).epsilon(1e-9));
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0;
      for (std::size_t j = 0; j < n; ++j) {
        row += s.matrix(i, j);
        CHECK((s.matrix(i, j) > 0) == (a(i, j) != 0));
      }
      CHECK(row == doctest::Approx(1).epsilon(1e-12));
    }
    Stochasticized again = stochasticize(s.matrix);
    CHECK(again.rho == doctest::Approx(1).epsilon(1e-10));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(again.matrix(i, j) == doctest::Approx(s.matrix(i, j)).epsilon(1e-9));
  }
}

TEST_CASE("e-resolving lifts") {
  Fixture f = load("exliftone.json");
  const StochasticMatrix& q = f.model.measures.at("nu").measure.transition();
  const StochasticMatrix& qp = f.model.measures.at("nu_prime").measure.transition();

  StochasticMatrix halves = e_resolving_lift(f.cs, q);
  CHECK(halves.matrix() == R({{"1/2", "1/4", "1/4"}, {"1/2", "1/4", "1/4"}, {"1/2", "1/4", "1/4"}}));
  check_image_exact(f.cs, halves, q);

  // (alpha, beta, gamma) split of an arbitrary [[p, q], [r, s]]
  auto split = [](const std::string& al, const std::string& be, const std::string& ga, const RMatrix& t) {
    Rational a = parse_rational(al), b = parse_rational(be), g = parse_rational(ga);
    Rational p = t(0, 0), qq = t(0, 1), r = t(1, 0), s = t(1, 1);
    return RMatrix::from_rows({{p, a * qq, (1 - a) * qq}, {r, b * s, (1 - b) * s}, {r, g * s, (1 - g) * s}});
  };
  struct Case {
    std::string a, b, g;
  };
  for (const Case& c : {Case{"1/4", "1/3", "1/2"}, Case{"1/2", "1/2", "1/2"}, Case{"1/5", "3/4", "2/3"}}) {
    RMatrix w = RMatrix::from_rows({{1, parse_rational(c.a), 1 - parse_rational(c.a)},
                                    {1, parse_rational(c.b), 1 - parse_rational(c.b)},
                                    {1, parse_rational(c.g), 1 - parse_rational(c.g)}});
    for (const StochasticMatrix* target : {&q, &qp}) {
      StochasticMatrix lifted = e_resolving_lift(f.cs, *target, w);
      CHECK(lifted.matrix() == split(c.a, c.b, c.g, target->matrix()));
      check_image_exact(f.cs, lifted, *target);
    }
  }
  CHECK(e_resolving_lift(f.cs, qp, f.model.matrices.at("weights")).matrix() == split("1/4", "1/3", "1/2", qp.matrix()));

  RMatrix bad = f.model.matrices.at("weights");
  bad(0, 1) = parse_rational("1/2");
  CHECK_THROWS_WITH_AS(e_resolving_lift(f.cs, qp, bad), doctest::Contains("invalid split weights"), Error);

  MarkovMeasure mu = load("figblack1_3.json").model.measures.at("mu").measure;
  CodeStructure id = identity(mu.base());
  CHECK(e_resolving_lift(id, mu.transition()).matrix() == mu.transition().matrix());

  Fixture shin = load("shin.json");
  CHECK_THROWS_WITH_AS(e_resolving_lift(shin.cs, StochasticMatrix(R({{"0", "1"}, {"1/2", "1/2"}}))),
                       doctest::Contains("lift construction requires e-resolving"), Error);

  // random codes, either side
  std::mt19937 rng(43);
  std::size_t left_only = 0, right_any = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto inst = oracle::random_instance(rng, 3 + trial % 3, 2, 0.6);
    CodeStructure cs;
    try {
      cs = CodeStructure::make(inst.code);
    } catch (const Error&) {
      continue;
    }
    ResolvingStatus s = resolving_status(cs);
    if (!s.right_e_resolving && !s.left_e_resolving) continue;
    if (!is_irreducible(cs.Y)) continue;
    StochasticMatrix target(oracle::random_stochastic(rng, cs.Y.adjacency()));
    StochasticMatrix lifted = e_resolving_lift(cs, target);
    check_image_exact(cs, lifted, target);
    if (s.right_e_resolving) ++right_any;
    else ++left_only;
  }
  CHECK(right_any > 0);
  CHECK(left_only > 0);
}

TEST_CASE("Markovian lifts") {
  Fixture f = load("exliftone.json");
  const StochasticMatrix& p = f.model.measures.at("mu").measure.transition();
  const StochasticMatrix& q = f.model.measures.at("nu").measure.transition();
  const StochasticMatrix& qp = f.model.measures.at("nu_prime").measure.transition();

  Stochasticized same = markovian_lift(f.cs, p, q, q);
  REQUIRE(same.exact);
  CHECK(same.exact_matrix == p.matrix());

  Stochasticized lifted = markovian_lift(f.cs, p, q, qp);
  REQUIRE(lifted.exact);
  CHECK(lifted.exact_matrix == R({{"1/3", "1/3", "1/3"}, {"1/4", "3/8", "3/8"}, {"1/4", "3/8", "3/8"}}));
  check_image_exact(f.cs, StochasticMatrix(lifted.exact_matrix), qp);

  // a lift with unequal splits carries them over
  RMatrix w = f.model.matrices.at("weights");
  StochasticMatrix pw = e_resolving_lift(f.cs, q, w);
  Stochasticized lw = markovian_lift(f.cs, pw, q, qp);
  REQUIRE(lw.exact);
  CHECK(lw.exact_matrix == e_resolving_lift(f.cs, qp, w).matrix());

  Fixture black = load("figblack1_2.json");
  const StochasticMatrix& bp = black.model.measures.at("mu").measure.transition();
  StochasticMatrix bq(R({{"0", "1"}, {"1/2", "1/2"}}));
  StochasticMatrix bqp(R({{"0", "1"}, {"2/3", "1/3"}}));
  Stochasticized bl = markovian_lift(black.cs, bp, bq, bqp);
  check_image_numeric(black.cs, bl, bqp);

  CHECK_THROWS_WITH_AS(markovian_lift(black.cs, bp, bqp, bq), doctest::Contains("code does not carry"), Error);
  CHECK_THROWS_WITH_AS(markovian_lift(black.cs, bp, bq, StochasticMatrix(R({{"1/2", "1/2"}, {"1/2", "1/2"}}))),
                       doctest::Contains("support mismatch"), Error);
}

TEST_CASE("weight per symbol") {
  MarkovMeasure bern = MarkovMeasure::make(full_shift(Alphabet({"0", "1"})), StochasticMatrix(R({{"1/2", "1/2"}, {"1/2", "1/2"}})));
  Wps fixed = wps(bern, {0});
  CHECK(fixed.product == parse_rational("1/2"));
  CHECK(fixed.value == doctest::Approx(std::log(0.5)));

  MarkovMeasure flip = MarkovMeasure::from_matrix(Alphabet({"0", "1"}), StochasticMatrix(R({{"0", "1"}, {"1", "0"}})));
  CHECK(wps(flip, {0, 1}).product == 1);
  CHECK(wps(flip, {0, 1}).value == 0);
  CHECK_THROWS_WITH_AS(wps(flip, {0}), doctest::Contains("not a periodic point"), Error);

  MarkovMeasure mu = load("figblack1_3.json").model.measures.at("mu").measure;
  CHECK(wps(mu, {0, 1, 1, 0, 2}).product == wps(mu, {1, 0, 2, 0, 1}).product);
  CHECK(wps(mu, {0, 1}).product == parse_rational("2/9"));

  // order-2 measure: transitions between consecutive 2-blocks of the orbit
  MarkovMeasure two = MarkovMeasure::of_order(full_shift(Alphabet({"0", "1"})), 2,
                                              StochasticMatrix(R({{"1/2", "1/2", "0", "0"},
                                                                  {"0", "0", "1/3", "2/3"},
                                                                  {"1/4", "3/4", "0", "0"},
                                                                  {"0", "0", "1/2", "1/2"}})));
  CHECK(wps(two, {0, 1}).product == parse_rational("1/3") * parse_rational("3/4"));
  CHECK(wps(two, {0, 0, 1}).product == parse_rational("1/2") * parse_rational("1/3") * parse_rational("1/4"));

  // cycles of stoch(M) in the semigroup example
  Fixture sg = load("semigroup_wps.json");
  const RMatrix& m = sg.model.matrices.at("M");
  const double lambda = oracle::spectral_radius(to_double(m));
  NumericMarkov chain = numeric_chain(sg.cs.X, stochasticize(m));
  CHECK(wps(chain, {1, 2}) == doctest::Approx(-std::log(lambda)).epsilon(1e-10));
  for (std::size_t n = 1; n <= 5; ++n) {
    Word odd{0}, even{0};
    for (std::size_t i = 0; i < n; ++i) {
      odd.insert(odd.end(), {1, 2});
      even.insert(even.end(), {1, 2});
    }
    even.push_back(1);
    CHECK(wps(chain, odd) == doctest::Approx(std::log(2 * std::pow(lambda, -(2.0 * n + 1))) / (2 * n + 1)).epsilon(1e-10));
    CHECK(wps(chain, even) == doctest::Approx(-std::log(lambda)).epsilon(1e-10));
  }
}

TEST_CASE("finite-to-one detection") {
  CHECK(finite_to_one_check(identity(load("shin.json").cs.X)));
  CHECK_FALSE(finite_to_one_check(load("exliftone.json").cs));
  CHECK(finite_to_one_check(load("semigroup_wps.json").cs));
  CHECK_FALSE(finite_to_one_check(load("figblack1_2.json").cs));

  // against brute force: a diamond shows up as two distinct paths of length
  // <= n + 2 with the same ends and label
  std::mt19937 rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_instance(rng, 2 + trial % 4, 2);
    CodeStructure cs;
    try {
      cs = CodeStructure::make(inst.code);
    } catch (const Error&) {
      continue;
    }
    const std::size_t n = cs.X.size();
    bool diamond = false;
    for (std::size_t len = 2; len <= n * n + 1 && !diamond; ++len) {
      std::map<std::tuple<Symbol, Symbol, Word>, int> seen;
      for (const Word& u : words_of_length(cs.X, len)) {
        Word label;
        for (Symbol s : u) label.push_back(cs.code.image_of(s));
        if (++seen[{u.front(), u.back(), label}] > 1) {
          diamond = true;
          break;
        }
      }
    }
    CHECK(finite_to_one_check(cs) == !diamond);
  }
}

TEST_CASE("wps lift check") {
  MarkovMeasure mu = load("figblack1_3.json").model.measures.at("mu").measure;
  CodeStructure id = identity(mu.base());
  CHECK(wps_lift_check(id, mu, mu, 6).holds);

  // a conjugacy carries the 2-block chain onto mu
  HigherBlock hb = higher_block_presentation(mu.base(), 2);
  CodeStructure conj = CodeStructure::make(hb.to_base, mu.base());
  CHECK(finite_to_one_check(conj));
  CHECK(wps_lift_check(conj, higher_block_measure(mu, 2), mu, 6).holds);

  CHECK_THROWS_AS(wps_lift_check(load("exliftone.json").cs, load("exliftone.json").model.measures.at("mu").measure,
                                 load("exliftone.json").model.measures.at("nu").measure, 4),
                  Error);

  // finite-to-one codes whose image is Markov
  std::mt19937 rng(45);
  std::size_t tried = 0;
  for (int trial = 0; trial < 300 && tried < 8; ++trial) {
    auto inst = oracle::random_instance(rng, 3 + trial % 3, 2);
    CodeStructure cs;
    try {
      cs = CodeStructure::make(inst.code);
    } catch (const Error&) {
      continue;
    }
    if (!finite_to_one_check(cs)) continue;
    DecisionContext ctx = DecisionContext::make(inst.code, inst.mu);
    for (std::size_t k = 1; k <= 2; ++k) {
      KStepVerdict v = decide_kstep(ctx, k);
      if (!v.is_k_markov) continue;
      ++tried;
      CHECK(wps_lift_check(cs, inst.mu, image_chain(v, cs.Y), 6).holds);
      break;
    }
  }
  CHECK(tried > 0);

  // stoch(M) has no Markov image: every candidate fails on a short cycle
  Fixture sg = load("semigroup_wps.json");
  NumericMarkov chain = numeric_chain(sg.cs.X, stochasticize(sg.model.matrices.at("M")));
  for (std::size_t k = 1; k <= 3; ++k) {
    NumericKChain cand = numeric_candidate(sg.cs.code, chain, k);
    WpsCheck c = wps_lift_check(sg.cs, chain, cand, 2 * k + 4);
    CHECK_FALSE(c.holds);
    REQUIRE(c.cycle);
    CHECK(c.cycle->size() <= 2 * k + 4);
    CHECK(std::abs(c.mu_wps - c.nu_wps) > 1e-6);
  }
}

TEST_CASE("image chain from a verdict") {
  Fixture f = load("figblack1_2.json");
  DecisionContext ctx = DecisionContext::make(f.cs.code, f.model.measures.at("mu").measure);
  MarkovMeasure nu = image_chain(decide_kstep(ctx, 1), f.cs.Y);
  CHECK(nu.transition().matrix() == R({{"0", "1"}, {"1/2", "1/2"}}));
  CHECK(nu.stationary() == V({"1/3", "2/3"}));
  MarkovMeasure nu2 = image_chain(decide_kstep(ctx, 2), f.cs.Y);
  CHECK(nu2.order() == 2);
  for (std::size_t len = 0; len <= 6; ++len)
    for (const Word& w : oracle::words(2, len)) CHECK(cylinder_measure(nu2, w) == cylinder_measure(nu, w));
}
