#include "soficlab/cli.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "soficlab/error.hpp"
#include "soficlab/lift.hpp"
#include "soficlab/markov_decide.hpp"
#include "soficlab/model_io.hpp"
#include "soficlab/thermo.hpp"

namespace soficlab {

namespace {

using Json = nlohmann::ordered_json;

// "path" or "path#name".
struct Source {
  Model model;
  std::optional<std::string> name;
  std::string label;
};

Source open_source(const std::string& ref) {
  auto hash = ref.rfind('#');
  Source s;
  s.label = ref;
  std::string path = ref;
  if (hash != std::string::npos) {
    path = ref.substr(0, hash);
    s.name = ref.substr(hash + 1);
  }
  s.model = load_model(path);
  return s;
}

template <class T>
const T* pick(const std::map<std::string, T>& section, const Source& src) {
  if (section.empty()) return nullptr;
  if (src.name) {
    auto it = section.find(*src.name);
    if (it != section.end()) return &it->second;
  }
  if (section.size() == 1) return &section.begin()->second;
  throw Error(src.label + ": several candidates; select one with " + src.label + "#name");
}

template <class T>
const T& need(const std::map<std::string, T>& section, const Source& src, const char* kind) {
  const T* p = pick(section, src);
  if (!p) throw Error(src.label + ": no " + kind + " in file");
  return *p;
}

std::string rat(const Rational& q) { return to_string(q); }

Json rat_matrix(const RMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json rat_vector(const RVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rat(x));
  return a;
}

Json dbl_matrix(const DMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

Json module_json(const StochasticModule& m) {
  Model tmp;
  tmp.modules.emplace("m", m);
  return Json::parse(save_model(tmp))["modules"]["m"];
}

Json big_json(const BigInt& z) {
  if (z.fits_slong_p()) return z.get_si();
  return to_string(z);
}

struct Flags {
  std::string model, other, code, from, via, weights, measure, potential, g;
  std::optional<std::string> word, cycle;
  std::optional<std::size_t> k, cap, n, m;
  std::string method = "vspace";
  std::string output = "json";
};

struct Runner {
  Flags f;
  std::ostream& out;

  Source src(const std::string& flag_value, const char* flag) const {
    const std::string& ref = flag_value.empty() ? f.model : flag_value;
    if (ref.empty()) throw Error(std::string("missing --") + flag + " (or --model)");
    return open_source(ref);
  }

  int emit(const Json& j, int code = 0) const {
    out << (f.output == "pretty" ? j.dump(2) : j.dump()) << "\n";
    return code;
  }

  Word word_in(const Alphabet& a) const {
    if (!f.word) throw Error("missing --word");
    return a.parse(*f.word);
  }

  // Code plus its structure; Y comes from the file when the code names it.
  CodeStructure code_structure(const Source& s) const {
    const ModelCode& c = need(s.model.codes, s, "code");
    std::optional<SftSpace> y;
    if (c.codomain_space) y = s.model.spaces.at(*c.codomain_space);
    if (!c.code.is_one_block()) throw Error("this command needs a 1-block code");
    return CodeStructure::make(c.code, y);
  }

  DecisionContext context() const {
    Source cs = src(f.code, "code");
    Source ms = src(f.measure, "measure");
    const ModelCode& c = need(cs.model.codes, cs, "code");
    const ModelMeasure& m = need(ms.model.measures, ms, "measure");
    return DecisionContext::make(c.code, m.measure);
  }

  // Module of whatever the source describes.
  StochasticModule module_from(const std::string& ref) const {
    Source s = open_source(ref);
    if (const auto* m = pick(s.model.modules, s)) return *m;
    if (const auto* r = pick(s.model.representations, s)) return module_of(*r);
    const auto* mu = pick(s.model.measures, s);
    if (!mu) throw Error(ref + ": no module, representation or measure in file");
    if (const auto* c = pick(s.model.codes, s)) {
      DecisionContext ctx = DecisionContext::make(c->code, mu->measure);
      return image_module(ctx.code, ctx.measure);
    }
    MarkovMeasure one = mu->measure.as_one_step();
    return image_module(BlockCode::one_block(one.chain_space(), one.chain_space().alphabet(), [&] {
                          std::vector<Symbol> id(one.chain_space().size());
                          for (Symbol s2 = 0; s2 < id.size(); ++s2) id[s2] = s2;
                          return id;
                        }()),
                        one);
  }

  int eval() const {
    Source s = src("", "model");
    const auto* mu = pick(s.model.measures, s);
    const auto* c = pick(s.model.codes, s);
    Rational v;
    if (mu && c) {
      DecisionContext ctx = DecisionContext::make(c->code, mu->measure);
      v = image_cylinder_measure(ctx.code, ctx.measure, word_in(ctx.image_alphabet()));
    } else if (const auto* r = pick(s.model.representations, s)) {
      v = evaluate(*r, word_in(r->alphabet()));
    } else if (const auto* m = pick(s.model.modules, s)) {
      v = probability(*m, word_in(m->alphabet));
    } else if (mu) {
      v = cylinder_measure(mu->measure, word_in(mu->measure.base().alphabet()));
    } else {
      throw Error(s.label + ": nothing to evaluate");
    }
    return emit(Json{{"value", rat(v)}});
  }

  int entropy_cmd() const {
    Source s = src(f.measure, "measure");
    const ModelMeasure& m = need(s.model.measures, s, "measure");
    return emit(Json{{"entropy", entropy(m.measure)}});
  }

  int reduce_cmd() const {
    if (f.model.empty()) throw Error("missing --model");
    StochasticModule r = reduce(module_from(f.model));
    return emit(Json{{"dim", r.dim()}, {"module", module_json(r)}});
  }

  int equiv_cmd() const {
    if (f.model.empty() || f.other.empty()) throw Error("equiv needs --model and --other");
    StochasticModule a = module_from(f.model), b = module_from(f.other);
    auto w = distinguishing_word(a, b);
    if (!w) return emit(Json{{"equivalent", true}});
    return emit(Json{{"equivalent", false},
                     {"witness", a.alphabet.format(*w)},
                     {"values", {rat(probability(a, *w)), rat(probability(b, *w))}}},
                1);
  }

  int core_cmd() const {
    if (f.model.empty()) throw Error("missing --model");
    CoreInvariant ci = core_invariant(module_from(f.model));
    return emit(Json{{"dim", ci.core.rows()},
                     {"core", rat_matrix(ci.core)},
                     {"eventual_charpoly", ci.eventual_charpoly.to_string()},
                     {"coefficients", rat_vector(ci.eventual_charpoly.coeffs())}});
  }

  Json chain_json(const KStepVerdict& v, const Alphabet& a) const {
    Json j;
    if (v.k > 1) {
      Json states = Json::array();
      for (const auto& w : v.states) states.push_back(a.format(w));
      j["states"] = states;
    }
    j["Q"] = rat_matrix(v.Q);
    return j;
  }

  int is_markov() const {
    DecisionContext ctx = context();
    const Alphabet& a = ctx.image_alphabet();
    if (f.k) {
      if (f.method == "vspace") {
        KStepVerdict v = decide_kstep(ctx, *f.k);
        Json j{{"is_k_markov", v.is_k_markov}};
        if (v.is_k_markov) {
          j.update(chain_json(v, a));
          return emit(j);
        }
        j["witness"] = a.format(*v.witness);
        j["context"] = a.format(*v.witness_context);
        return emit(j, 1);
      }
      if (f.method == "kernel") {
        bool ok = decide_kstep_kernel(ctx, *f.k);
        return emit(Json{{"is_k_markov", ok}}, ok ? 0 : 1);
      }
      if (f.method == "rank") {
        StochasticModule red = reduce(image_module(ctx.code, ctx.measure));
        RankVerdict v = rank_criterion(red, *f.k);
        Json j{{"is_k_markov", v.is_k_markov}};
        if (!v.is_k_markov) {
          j["witness"] = a.format(*v.witness);
          j["rank"] = v.witness_rank;
        }
        return emit(j, v.is_k_markov ? 0 : 1);
      }
      throw Error("unknown method \"" + f.method + "\" (vspace, kernel or rank)");
    }
    MarkovVerdict v = decide_markov(ctx, f.cap.value_or(kDefaultMarkovCap));
    Json j{{"status", to_string(v.status)}};
    if (v.status == MarkovStatus::markov) {
      j["k"] = v.k;
      j.update(chain_json(*v.chain, a));
    }
    j["reduced_dim"] = v.reduced_dim;
    j["alphabet_size"] = v.alphabet_size;
    j["bound"] = v.bound ? v.bound->to_string() : "1";
    j["searched_length"] = v.searched_length;
    if (v.witness) j["witness"] = a.format(*v.witness);
    j["detail"] = v.detail;
    return emit(j, v.status == MarkovStatus::not_markov ? 1 : 0);
  }

  int order_bound_cmd() const {
    if (!f.k || !f.m || !f.n) throw Error("order-bound needs --k, --m and --n");
    OrderBound b = order_bound(*f.k, *f.m, *f.n);
    return emit(Json{{"N", b.to_string()}, {"expanded", b.materialized()}});
  }

  int lift_cmd() const {
    Source cs_src = src(f.code, "code");
    CodeStructure cs = code_structure(cs_src);
    if (f.from.empty()) throw Error("lift needs --from (a measure on Y)");
    Source from = open_source(f.from);
    const MarkovMeasure& nu = need(from.model.measures, from, "measure").measure;
    if (nu.order() != 1 || !(nu.base() == cs.Y)) throw Error(f.from + ": --from must be a 1-step measure on Y");
    Json j;
    if (!f.via.empty()) {
      Source via = open_source(f.via);
      const MarkovMeasure& mu = need(via.model.measures, via, "measure").measure;
      KStepVerdict v = decide_kstep(DecisionContext::make(cs.code, mu), 1);
      if (!v.is_k_markov || v.states.size() != cs.Y.size()) throw Error("code does not carry μ_P to a 1-step chain on Y");
      Stochasticized s = markovian_lift(cs, mu.transition(), StochasticMatrix(v.Q), nu.transition());
      j["method"] = "markovian";
      j["exact"] = s.exact;
      j["P"] = s.exact ? rat_matrix(s.exact_matrix) : dbl_matrix(s.matrix);
      j["image_check"] = image_check(cs, s, nu);
    } else {
      std::optional<RMatrix> w;
      if (!f.weights.empty()) {
        Source ws = open_source(f.weights);
        w = need(ws.model.matrices, ws, "matrix");
      }
      StochasticMatrix p = e_resolving_lift(cs, nu.transition(), w);
      Stochasticized s;
      s.exact = true;
      s.exact_matrix = p.matrix();
      j["method"] = "e_resolving";
      j["exact"] = true;
      j["P"] = rat_matrix(p.matrix());
      j["image_check"] = image_check(cs, s, nu);
    }
    return emit(j);
  }

  // Image cylinders of the lift against ν on all Y-words up to length 6.
  static bool image_check(const CodeStructure& cs, const Stochasticized& s, const MarkovMeasure& nu) {
    for (std::size_t len = 1; len <= 6; ++len)
      for (const Word& w : words_of_length(cs.Y, len)) {
        if (s.exact) {
          MarkovMeasure mu = MarkovMeasure::make(cs.X, StochasticMatrix(s.exact_matrix));
          if (image_cylinder_measure(cs.code, mu, w) != cylinder_measure(nu, w)) return false;
        } else {
          NumericMarkov mu = numeric_chain(cs.X, s);
          if (std::abs(image_cylinder_measure(cs.code, mu, w) - cylinder_measure(nu, w).get_d()) > 1e-9) return false;
        }
      }
    return true;
  }

  int wps_cmd() const {
    Source s = src(f.measure, "measure");
    const ModelMeasure& m = need(s.model.measures, s, "measure");
    if (!f.cycle) throw Error("missing --cycle");
    Wps w = wps(m.measure, m.measure.base().alphabet().parse(*f.cycle));
    return emit(Json{{"product", rat(w.product)}, {"wps", w.value}});
  }

  int pressure_cmd() const {
    Source s = src(f.potential, "potential");
    const ModelPotential& p = need(s.model.potentials, s, "potential");
    Equilibrium eq = equilibrium_markov(p.potential);
    Json states = Json::array();
    for (const auto& b : eq.blocks) states.push_back(p.potential.space.alphabet().format(b));
    Json st = Json::array();
    for (double x : eq.chain.stationary) st.push_back(x);
    return emit(Json{{"pressure", eq.pressure},
                     {"entropy", eq.entropy},
                     {"integral", eq.integral},
                     {"equilibrium", {{"states", states}, {"transition", dbl_matrix(eq.chain.transition)}, {"stationary", st}}}});
  }

  int comp_ratio_cmd() const {
    Source cs_src = src(f.code, "code");
    CodeStructure cs = code_structure(cs_src);
    Source gs = src(f.g, "G");
    const ModelPotential& g = need(gs.model.potentials, gs, "potential");
    CompensationReport rep = compensation_ratio_report(cs, g.potential, f.n.value_or(12));
    Json rows = Json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"length", r.length},
                      {"words", r.words},
                      {"min_ratio", r.min_ratio},
                      {"max_ratio", r.max_ratio},
                      {"argmin", cs.Y.alphabet().format(r.argmin)},
                      {"argmax", cs.Y.alphabet().format(r.argmax)}});
    return emit(Json{{"min_ratio", rep.min_ratio},
                     {"max_ratio", rep.max_ratio},
                     {"rows", rows},
                     {"note", "bounded ratios at a finite horizon are evidence, not a certificate"}});
  }

  int preimages_cmd() const {
    Source s = src(f.code, "code");
    const ModelCode& c = need(s.model.codes, s, "code");
    Word w = word_in(c.code.codomain());
    if (c.code.is_one_block()) return emit(Json{{"count", big_json(preimage_count(c.code, w))}});
    OneBlockRecoding rec = recode_to_one_block(c.code);
    return emit(Json{{"count", big_json(preimage_count(rec.code, w))}});
  }

  int fiber_bound_cmd() const {
    Source s = src(f.code, "code");
    CodeStructure cs = code_structure(s);
    std::set<Symbol> support(cs.code.symbol_map().begin(), cs.code.symbol_map().end());
    return emit(Json{{"fiber_bound", fiber_bound(cs, support)}});
  }

  int resolving_cmd() const {
    Source s = src(f.code, "code");
    CodeStructure cs = code_structure(s);
    ResolvingStatus st = resolving_status(cs);
    return emit(Json{{"right_resolving", st.right_resolving},
                     {"left_resolving", st.left_resolving},
                     {"right_e_resolving", st.right_e_resolving},
                     {"left_e_resolving", st.left_e_resolving},
                     {"finite_to_one", finite_to_one_check(cs)}});
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with sofic (hidden Markov) measures", "soficlab"};
  app.require_subcommand(1, 1);
  Flags f;

  struct Command {
    const char* name;
    const char* help;
    std::vector<std::string> opts;
    std::function<int(const Runner&)> fn;
  };
  const std::vector<Command> commands = {
      {"eval", "measure of a cylinder word", {"model", "word"}, &Runner::eval},
      {"entropy", "entropy of a Markov measure", {"model", "measure"}, &Runner::entropy_cmd},
      {"reduce", "reduced stochastic module", {"model"}, &Runner::reduce_cmd},
      {"equiv", "compare two modules", {"model", "other"}, &Runner::equiv_cmd},
      {"core", "core matrix and eventual characteristic polynomial", {"model"}, &Runner::core_cmd},
      {"is-markov", "decide whether the image measure is (k-step) Markov",
       {"model", "code", "measure", "k", "cap", "method"}, &Runner::is_markov},
      {"order-bound", "the number N(k,m,n)", {"k", "m", "n"}, &Runner::order_bound_cmd},
      {"lift", "lift a Markov measure on Y through the code", {"model", "code", "from", "via", "weights"},
       &Runner::lift_cmd},
      {"wps", "weight per symbol of a periodic point", {"model", "measure", "cycle"}, &Runner::wps_cmd},
      {"pressure", "pressure and equilibrium state of a potential", {"model", "potential"}, &Runner::pressure_cmd},
      {"comp-ratio", "compensation ratio table", {"model", "code", "G", "n"}, &Runner::comp_ratio_cmd},
      {"preimages", "number of preimages of an image word", {"model", "code", "word"}, &Runner::preimages_cmd},
      {"fiber-bound", "least number of preimages of a symbol", {"model", "code"}, &Runner::fiber_bound_cmd},
      {"resolving", "resolving and finite-to-one properties of a code", {"model", "code"}, &Runner::resolving_cmd},
  };

  std::map<std::string, std::function<int(const Runner&)>> dispatch;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    dispatch[c.name] = c.fn;
    for (const auto& o : c.opts) {
      if (o == "model") sub->add_option("--model", f.model, "model file, optionally path#name");
      if (o == "other") sub->add_option("--other", f.other, "second model file");
      if (o == "code") sub->add_option("--code", f.code, "file holding the code");
      if (o == "measure") sub->add_option("--measure", f.measure, "file holding the measure");
      if (o == "from") sub->add_option("--from", f.from, "file holding the measure on Y");
      if (o == "via") sub->add_option("--via", f.via, "file holding a measure on X carried to a chain on Y");
      if (o == "weights") sub->add_option("--weights", f.weights, "file holding the split weights matrix");
      if (o == "potential") sub->add_option("--potential", f.potential, "file holding the potential");
      if (o == "G") sub->add_option("--G", f.g, "file holding the potential on Y");
      if (o == "word") sub->add_option("--word", f.word, "word, e.g. \"baab\" or \"b1 a b2\"");
      if (o == "cycle") sub->add_option("--cycle", f.cycle, "one period of the periodic point");
      if (o == "k") sub->add_option("--k", f.k, "order k")->check(CLI::PositiveNumber);
      if (o == "cap") sub->add_option("--cap", f.cap, "largest product length examined")->check(CLI::PositiveNumber);
      if (o == "n") sub->add_option("--n", f.n, "horizon or dimension n")->check(CLI::PositiveNumber);
      if (o == "m") sub->add_option("--m", f.m, "alphabet size m")->check(CLI::PositiveNumber);
      if (o == "method")
        sub->add_option("--method", f.method, "vspace, kernel or rank")
            ->check(CLI::IsMember({"vspace", "kernel", "rank"}));
    }
    if (std::string(c.name) == "order-bound") sub->get_option("--k")->required();
    sub->add_option("--output", f.output, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Runner r{f, out};
    return dispatch.at(name)(r);
  } catch (const InternalError& e) {
    err << "internal error (defect): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace soficlab
