#include "soficlab/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "soficlab/error.hpp"
#include "soficlab/linalg.hpp"

namespace soficlab {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw Error(where + ": " + what); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::size_t get_size(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

Rational get_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return parse_rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where, "expected a rational such as \"1/2\"");
}

RVec get_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  RVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_rational(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

RMatrix get_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  std::vector<RVec> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(get_vector(j[i], where + "[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != rows[0].size()) fail(where, "row " + std::to_string(i) + " has a different length");
  return rows_to_matrix(rows, rows[0].size());
}

Alphabet get_alphabet(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of symbol names");
  std::vector<std::string> names;
  for (const auto& s : j) names.push_back(get_string(s, where));
  try {
    return Alphabet(std::move(names));
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

double get_potential_value(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) fail(where, "expected a number, \"p/q\" or \"log(p/q)\"");
  std::string s = j.get<std::string>();
  double sign = 1;
  std::string body = s;
  if (!body.empty() && body[0] == '-' && body.rfind("-log(", 0) == 0) {
    sign = -1;
    body = body.substr(1);
  }
  try {
    if (body.rfind("log(", 0) == 0 && body.back() == ')') {
      Rational q = parse_rational(body.substr(4, body.size() - 5));
      if (q <= 0) fail(where, "log of a non-positive number");
      return sign * std::log(q.get_d());
    }
    return parse_rational(s).get_d();
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

Json rational_json(const Rational& q) { return to_string(q); }

Json vector_json(const RVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_json(x));
  return a;
}

Json matrix_json(const RMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row_vec(i)));
  return a;
}

Json alphabet_json(const Alphabet& a) {
  Json j = Json::array();
  for (const auto& n : a.names()) j.push_back(n);
  return j;
}

template <class Fn>
void each_entry(const Json& doc, const char* section, const std::string& origin, Fn fn) {
  auto it = doc.find(section);
  if (it == doc.end()) return;
  const std::string where = origin + ": " + section;
  if (!it->is_object()) throw Error(where + ": expected an object of named entries");
  for (auto e = it->begin(); e != it->end(); ++e) {
    const std::string path = std::string(section) + "." + e.key();
    try {
      fn(e.key(), e.value(), path);
    } catch (const Error& err) {
      const std::string msg = err.what();
      // Nested helpers already prefix their own path.
      if (msg.rfind(path, 0) == 0)
        throw Error(origin + ": " + msg);
      throw Error(origin + ": " + path + ": " + msg);
    }
  }
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* kind, const std::string& where) {
  auto it = m.find(name);
  if (it == m.end()) fail(where, std::string("unknown ") + kind + " \"" + name + "\"");
  return it->second;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Model parse_model(const std::string& text, const std::string& origin) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_and_column(text, e.byte);
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    throw Error(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON " +
                (pos == std::string::npos ? msg : msg.substr(pos)));
  }
  if (!doc.is_object()) throw Error(origin + ": top level must be an object");
  Model model;
  if (auto v = doc.find("version"); v != doc.end()) {
    model.version = get_string(*v, origin + ": version");
    if (model.version != kModelVersion)
      throw Error(origin + ": version: unsupported format \"" + model.version + "\" (expected " + kModelVersion + ")");
  }
  static const char* known[] = {"version",  "spaces",     "codes",   "measures", "representations",
                                "modules",  "potentials", "matrices"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw Error(origin + ": unknown section \"" + it.key() + "\"");
  }

  each_entry(doc, "spaces", origin, [&](const std::string& name, const Json& j, const std::string& path) {
    Alphabet a = get_alphabet(field(j, "alphabet", path), path + ".alphabet");
    RMatrix adj = get_matrix(field(j, "adjacency", path), path + ".adjacency");
    if (adj.rows() != a.size() || adj.cols() != a.size())
      fail(path, "adjacency must be " + std::to_string(a.size()) + "x" + std::to_string(a.size()));
    Matrix<int> m(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (adj(i, k) != 0 && adj(i, k) != 1) fail(path + ".adjacency", "entries must be 0 or 1");
        m(i, k) = adj(i, k) == 1 ? 1 : 0;
      }
    model.spaces.emplace(name, build_sft(a, m));
  });

  each_entry(doc, "codes", origin, [&](const std::string& name, const Json& j, const std::string& path) {
    ModelCode c;
    c.domain = get_string(field(j, "domain", path), path + ".domain");
    const SftSpace& x = lookup(model.spaces, c.domain, "space", path + ".domain");
    std::size_t memory = j.contains("memory") ? get_size(j["memory"], path + ".memory") : 0;
    std::size_t anticipation = j.contains("anticipation") ? get_size(j["anticipation"], path + ".anticipation") : 0;
    const Json& table = field(j, "table", path);
    if (!table.is_object()) fail(path + ".table", "expected an object mapping blocks to symbols");
    Alphabet y;
    if (j.contains("codomain")) {
      c.codomain_space = get_string(j["codomain"], path + ".codomain");
      y = lookup(model.spaces, *c.codomain_space, "space", path + ".codomain").alphabet();
    } else if (j.contains("codomain_alphabet")) {
      y = get_alphabet(j["codomain_alphabet"], path + ".codomain_alphabet");
    } else {
      std::vector<std::string> names;
      for (auto it = table.begin(); it != table.end(); ++it) {
        std::string s = get_string(it.value(), path + ".table");
        if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
      }
      y = Alphabet(std::move(names));
    }
    std::map<Word, Symbol> t;
    for (auto it = table.begin(); it != table.end(); ++it) {
      const std::string where = path + ".table[\"" + it.key() + "\"]";
      Word block;
      try {
        block = x.alphabet().parse(it.key());
      } catch (const Error& e) {
        fail(where, e.what());
      }
      auto sym = y.find(get_string(it.value(), where));
      if (!sym) fail(where, "symbol \"" + it.value().get<std::string>() + "\" is not in the codomain");
      if (!t.emplace(block, *sym).second) fail(where, "block listed twice");
    }
    c.code = BlockCode::make(x, y, memory, anticipation, std::move(t));
    model.codes.emplace(name, std::move(c));
  });

  each_entry(doc, "measures", origin, [&](const std::string& name, const Json& j, const std::string& path) {
    ModelMeasure m;
    m.space = get_string(field(j, "space", path), path + ".space");
    const SftSpace& x = lookup(model.spaces, m.space, "space", path + ".space");
    std::size_t order = j.contains("order") ? get_size(j["order"], path + ".order") : 1;
    if (order == 0) fail(path + ".order", "order must be positive");
    RMatrix p = get_matrix(field(j, "transition", path), path + ".transition");
    std::optional<RVec> st;
    if (j.contains("stationary")) st = get_vector(j["stationary"], path + ".stationary");
    StochasticMatrix sp(p);
    m.measure = order == 1 ? MarkovMeasure::make(x, sp, st) : MarkovMeasure::of_order(x, order, sp, st);
    model.measures.emplace(name, std::move(m));
  });

  auto read_family = [](const Json& j, const Alphabet& a, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object mapping symbols to matrices");
    std::vector<RMatrix> mats(a.size());
    std::vector<bool> seen(a.size(), false);
    for (auto it = j.begin(); it != j.end(); ++it) {
      auto s = a.find(it.key());
      if (!s) fail(path, "symbol \"" + it.key() + "\" is not in the alphabet");
      mats[*s] = get_matrix(it.value(), path + "." + it.key());
      seen[*s] = true;
    }
    for (Symbol s = 0; s < a.size(); ++s)
      if (!seen[s]) fail(path, "no matrix for symbol \"" + a.name(s) + "\"");
    return mats;
  };

  each_entry(doc, "representations", origin, [&](const std::string& name, const Json& j, const std::string& path) {
    Alphabet a = get_alphabet(field(j, "alphabet", path), path + ".alphabet");
    auto phi = read_family(field(j, "phi", path), a, path + ".phi");
    model.representations.emplace(name, LinearRepresentation(a, get_vector(field(j, "x", path), path + ".x"),
                                                             std::move(phi),
                                                             get_vector(field(j, "y", path), path + ".y")));
  });

  each_entry(doc, "modules", origin, [&](const std::string& name, const Json& j, const std::string& path) {
    StochasticModule m;
    m.alphabet = get_alphabet(field(j, "alphabet", path), path + ".alphabet");
    m.mats = read_family(field(j, "mats", path), m.alphabet, path + ".mats");
    m.l = get_vector(field(j, "l", path), path + ".l");
    m.r = get_vector(field(j, "r", path), path + ".r");
    validate(m);
    model.modules.emplace(name, std::move(m));
  });

  each_entry(doc, "potentials", origin, [&](const std::string& name, const Json& j, const std::string& path) {
    ModelPotential p;
    p.space = get_string(field(j, "space", path), path + ".space");
    p.potential.space = lookup(model.spaces, p.space, "space", path + ".space");
    p.potential.span = j.contains("span") ? get_size(j["span"], path + ".span") : 1;
    const Json& values = field(j, "values", path);
    if (!values.is_object()) fail(path + ".values", "expected an object mapping blocks to values");
    for (auto it = values.begin(); it != values.end(); ++it) {
      const std::string where = path + ".values[\"" + it.key() + "\"]";
      Word block;
      try {
        block = p.potential.space.alphabet().parse(it.key());
      } catch (const Error& e) {
        fail(where, e.what());
      }
      p.potential.values[block] = get_potential_value(it.value(), where);
    }
    p.potential.validate();
    model.potentials.emplace(name, std::move(p));
  });

  each_entry(doc, "matrices", origin, [&](const std::string& name, const Json& j, const std::string& path) {
    model.matrices.emplace(name, get_matrix(j, path));
  });

  return model;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), path);
}

std::string save_model(const Model& model) {
  Json doc;
  doc["version"] = model.version;
  if (!model.spaces.empty()) {
    Json& s = doc["spaces"] = Json::object();
    for (const auto& [name, x] : model.spaces) {
      Json adj = Json::array();
      for (std::size_t i = 0; i < x.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < x.size(); ++j) row.push_back(x.adjacency()(i, j));
        adj.push_back(row);
      }
      s[name] = {{"alphabet", alphabet_json(x.alphabet())}, {"adjacency", adj}};
    }
  }
  if (!model.codes.empty()) {
    Json& s = doc["codes"] = Json::object();
    for (const auto& [name, c] : model.codes) {
      Json j;
      j["domain"] = c.domain;
      if (c.codomain_space)
        j["codomain"] = *c.codomain_space;
      else
        j["codomain_alphabet"] = alphabet_json(c.code.codomain());
      j["memory"] = c.code.memory();
      j["anticipation"] = c.code.anticipation();
      Json t = Json::object();
      for (const auto& [block, sym] : c.code.table())
        t[c.code.domain().alphabet().format(block)] = c.code.codomain().name(sym);
      j["table"] = t;
      s[name] = j;
    }
  }
  if (!model.measures.empty()) {
    Json& s = doc["measures"] = Json::object();
    for (const auto& [name, m] : model.measures)
      s[name] = {{"space", m.space},
                 {"order", m.measure.order()},
                 {"transition", matrix_json(m.measure.transition().matrix())},
                 {"stationary", vector_json(m.measure.stationary())}};
  }
  auto family_json = [](const Alphabet& a, const std::vector<RMatrix>& mats) {
    Json j = Json::object();
    for (Symbol s = 0; s < a.size(); ++s) j[a.name(s)] = matrix_json(mats[s]);
    return j;
  };
  if (!model.representations.empty()) {
    Json& s = doc["representations"] = Json::object();
    for (const auto& [name, r] : model.representations)
      s[name] = {{"alphabet", alphabet_json(r.alphabet())},
                 {"x", vector_json(r.x())},
                 {"phi", family_json(r.alphabet(), r.phi())},
                 {"y", vector_json(r.y())}};
  }
  if (!model.modules.empty()) {
    Json& s = doc["modules"] = Json::object();
    for (const auto& [name, m] : model.modules)
      s[name] = {{"alphabet", alphabet_json(m.alphabet)},
                 {"l", vector_json(m.l)},
                 {"mats", family_json(m.alphabet, m.mats)},
                 {"r", vector_json(m.r)}};
  }
  if (!model.potentials.empty()) {
    Json& s = doc["potentials"] = Json::object();
    for (const auto& [name, p] : model.potentials) {
      Json v = Json::object();
      for (const auto& [block, x] : p.potential.values) v[p.potential.space.alphabet().format(block)] = x;
      s[name] = {{"space", p.space}, {"span", p.potential.span}, {"values", v}};
    }
  }
  if (!model.matrices.empty()) {
    Json& s = doc["matrices"] = Json::object();
    for (const auto& [name, m] : model.matrices) s[name] = matrix_json(m);
  }
  return doc.dump(2) + "\n";
}

}  // namespace soficlab
