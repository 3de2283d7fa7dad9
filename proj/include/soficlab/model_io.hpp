#ifndef SOFICLAB_MODEL_IO_HPP
#define SOFICLAB_MODEL_IO_HPP

#include <map>
#include <optional>
#include <string>

#include "soficlab/linear_rep.hpp"
#include "soficlab/stochastic_module.hpp"
#include "soficlab/thermo.hpp"

namespace soficlab {

inline constexpr const char* kModelVersion = "soficlab-model/1";

struct ModelCode {
  std::string domain;
  std::optional<std::string> codomain_space;  // Y, when the file names one
  BlockCode code;
  friend bool operator==(const ModelCode&, const ModelCode&) = default;
};

struct ModelMeasure {
  std::string space;
  MarkovMeasure measure;
  friend bool operator==(const ModelMeasure&, const ModelMeasure&) = default;
};

struct ModelPotential {
  std::string space;
  LocallyConstantPotential potential;
  friend bool operator==(const ModelPotential&, const ModelPotential&) = default;
};

/// One JSON document holding named objects. Sections:
///   spaces           {alphabet, adjacency}
///   codes            {domain, codomain | codomain_alphabet, memory, anticipation, table}
///   measures         {space, order, transition, stationary?}
///   representations  {alphabet, x, phi: {symbol: matrix}, y}
///   modules          {alphabet, l, mats: {symbol: matrix}, r}
///   potentials       {space, span, values: {block: number | "p/q" | "log(p/q)"}}
///   matrices         {name: matrix}
/// Rationals are strings "p/q" (integers may be plain numbers).
struct Model {
  std::string version = kModelVersion;
  std::map<std::string, SftSpace> spaces;
  std::map<std::string, ModelCode> codes;
  std::map<std::string, ModelMeasure> measures;
  std::map<std::string, LinearRepresentation> representations;
  std::map<std::string, StochasticModule> modules;
  std::map<std::string, ModelPotential> potentials;
  std::map<std::string, RMatrix> matrices;

  friend bool operator==(const Model&, const Model&) = default;
};

/// Errors name the file, the line and column for syntax errors, and the
/// object path (e.g. "measures.mu") for invalid content.
Model load_model(const std::string& path);
Model parse_model(const std::string& text, const std::string& origin = "<input>");

/// Deterministic JSON: sections and names in sorted order, rationals reduced.
std::string save_model(const Model& model);

}  // namespace soficlab

#endif
