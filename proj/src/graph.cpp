#include "soficlab/graph.hpp"

#include <algorithm>
#include <limits>

namespace soficlab {

namespace {

constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

struct Tarjan {
  const Digraph& g;
  std::vector<std::size_t> index, low;
  std::vector<bool> on_stack;
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  explicit Tarjan(const Digraph& graph)
      : g(graph), index(graph.size(), kUnvisited), low(graph.size(), 0), on_stack(graph.size(), false) {}

  // Iterative to stay safe on long chains.
  void run(std::size_t root) {
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < g[v].size()) {
        std::size_t w = g[v][next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> strong_components(const Digraph& g) {
  Tarjan t(g);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (t.index[v] == kUnvisited) t.run(v);
  return std::move(t.out);
}

bool strongly_connected(const Digraph& g) { return !g.empty() && strong_components(g).size() == 1; }

}  // namespace soficlab
