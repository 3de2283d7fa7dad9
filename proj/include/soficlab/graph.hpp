#ifndef SOFICLAB_GRAPH_HPP
#define SOFICLAB_GRAPH_HPP

#include <cstddef>
#include <vector>

#include "soficlab/matrix.hpp"

namespace soficlab {

using Digraph = std::vector<std::vector<std::size_t>>;  // successor lists

/// Digraph with an edge i -> j wherever m(i, j) != 0.
template <class T>
Digraph support_graph(const Matrix<T>& m) {
  Digraph g(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) g[i].push_back(j);
  return g;
}

/// Strongly connected components (Tarjan). Components come out in reverse
/// topological order; vertices inside a component are sorted.
std::vector<std::vector<std::size_t>> strong_components(const Digraph& g);

bool strongly_connected(const Digraph& g);

}  // namespace soficlab

#endif
