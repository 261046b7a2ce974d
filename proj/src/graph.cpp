#include "affectsim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace affectsim {

WeightedGraph::WeightedGraph(int n) {
  if (n <= 0) throw std::invalid_argument("node count must be positive");
  adjacency_.resize(static_cast<std::size_t>(n));
}

void WeightedGraph::check_node(int u) const {
  if (u < 0 || u >= node_count()) {
    throw std::invalid_argument("node id " + std::to_string(u) + " out of range");
  }
}

void WeightedGraph::add_edge(int u, int v, double weight) {
  check_node(u);
  check_node(v);
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (has_edge(u, v)) throw std::invalid_argument("duplicate edge");
  auto insert_sorted = [](std::vector<Edge>& list, Edge e) {
    const auto pos = std::lower_bound(list.begin(), list.end(), e.to,
                                      [](const Edge& lhs, int id) { return lhs.to < id; });
    list.insert(pos, e);
  };
  insert_sorted(adjacency_[static_cast<std::size_t>(u)], Edge{v, weight});
  insert_sorted(adjacency_[static_cast<std::size_t>(v)], Edge{u, weight});
  ++edge_count_;
}

void WeightedGraph::remove_edge(int u, int v) {
  auto erase_one = [this](int a, int b) {
    auto& list = adjacency_[static_cast<std::size_t>(a)];
    const auto pos = std::lower_bound(list.begin(), list.end(), b,
                                      [](const Edge& lhs, int id) { return lhs.to < id; });
    if (pos == list.end() || pos->to != b) throw std::invalid_argument("no such edge");
    list.erase(pos);
  };
  check_node(u);
  check_node(v);
  erase_one(u, v);
  erase_one(v, u);
  --edge_count_;
}

bool WeightedGraph::has_edge(int u, int v) const {
  check_node(u);
  check_node(v);
  const auto& list = adjacency_[static_cast<std::size_t>(u)];
  const auto pos = std::lower_bound(list.begin(), list.end(), v,
                                    [](const Edge& lhs, int id) { return lhs.to < id; });
  return pos != list.end() && pos->to == v;
}

void WeightedGraph::set_weight(int u, int v, double weight) {
  auto assign = [this](int a, int b, double w) {
    auto& list = adjacency_[static_cast<std::size_t>(a)];
    const auto pos = std::lower_bound(list.begin(), list.end(), b,
                                      [](const Edge& lhs, int id) { return lhs.to < id; });
    if (pos == list.end() || pos->to != b) throw std::invalid_argument("no such edge");
    pos->weight = w;
  };
  check_node(u);
  check_node(v);
  assign(u, v, weight);
  assign(v, u, weight);
}

std::vector<std::tuple<int, int, double>> WeightedGraph::edges() const {
  std::vector<std::tuple<int, int, double>> out;
  out.reserve(edge_count_);
  for (int u = 0; u < node_count(); ++u) {
    for (const auto& e : neighbors(u)) {
      if (u < e.to) out.emplace_back(u, e.to, e.weight);
    }
  }
  return out;  // already sorted: u ascending, neighbor lists sorted
}

bool WeightedGraph::connected() const {
  const int n = node_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& e : neighbors(u)) {
      if (!seen[static_cast<std::size_t>(e.to)]) {
        seen[static_cast<std::size_t>(e.to)] = 1;
        ++visited;
        stack.push_back(e.to);
      }
    }
  }
  return visited == n;
}

WeightedGraph generate_ba(int n, int m_attach, Rng& rng) {
  if (m_attach < 1 || n <= m_attach) {
    throw std::invalid_argument("scale-free generator needs n > m_attach >= 1");
  }
  WeightedGraph graph(n);
  // Endpoint multiset: each node appears once per incident edge, which makes
  // uniform sampling from it degree-proportional.
  std::vector<int> endpoints;
  endpoints.reserve(static_cast<std::size_t>(2 * m_attach * n));
  for (int u = 0; u < m_attach; ++u) {
    for (int v = u + 1; v < m_attach; ++v) {
      graph.add_edge(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::set<int> targets;
  for (int j = m_attach; j < n; ++j) {
    targets.clear();
    if (endpoints.empty()) {
      // No edges yet (m_attach == 1): attach uniformly among existing nodes.
      targets.insert(static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(j - 1))));
    } else {
      while (static_cast<int>(targets.size()) < m_attach) {
        const auto pick = endpoints[static_cast<std::size_t>(
            rng.uniform_int(0, endpoints.size() - 1))];
        targets.insert(pick);
      }
    }
    for (const int t : targets) {
      graph.add_edge(j, t);
      endpoints.push_back(j);
      endpoints.push_back(t);
    }
  }
  return graph;
}

WeightedGraph generate_ws(int n, int k, double p_rewire, Rng& rng) {
  if (k < 2 || k % 2 != 0 || n <= k) {
    throw std::invalid_argument("small-world generator needs n > k >= 2, k even");
  }
  if (p_rewire < 0.0 || p_rewire > 1.0) {
    throw std::invalid_argument("rewire probability outside [0, 1]");
  }
  WeightedGraph graph(n);
  for (int j = 1; j <= k / 2; ++j) {
    for (int u = 0; u < n; ++u) graph.add_edge(u, (u + j) % n);
  }
  // Rewire pass over the original lattice edges, keeping the edge count at
  // n*k/2: each rewire removes one edge and adds one.
  for (int j = 1; j <= k / 2; ++j) {
    for (int u = 0; u < n; ++u) {
      if (!rng.bernoulli(p_rewire)) continue;
      if (graph.degree(u) >= n - 1) continue;  // saturated, keep lattice edge
      const int v = (u + j) % n;
      if (!graph.has_edge(u, v)) continue;  // already redirected from the other side
      int w;
      do {
        w = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(n - 1)));
      } while (w == u || graph.has_edge(u, w));
      graph.remove_edge(u, v);
      graph.add_edge(u, w);
    }
  }
  return graph;
}

WeightedGraph generate_hybrid(int n, double ba_fraction, int m_attach, int k, double p_rewire,
                              int bridge_edges, Rng& rng) {
  if (ba_fraction < 0.0 || ba_fraction > 1.0) {
    throw std::invalid_argument("ba_fraction outside [0, 1]");
  }
  const int n_ba = static_cast<int>(std::floor(ba_fraction * n));
  if (n_ba == n) return generate_ba(n, m_attach, rng);
  if (n_ba == 0) return generate_ws(n, k, p_rewire, rng);
  if (bridge_edges < 1) {
    throw std::invalid_argument("bridge_edges must be >= 1 when both components are non-empty");
  }

  const WeightedGraph ba = generate_ba(n_ba, m_attach, rng);
  const WeightedGraph ws = generate_ws(n - n_ba, k, p_rewire, rng);
  WeightedGraph graph(n);
  for (const auto& [u, v, w] : ba.edges()) graph.add_edge(u, v, w);
  for (const auto& [u, v, w] : ws.edges()) graph.add_edge(u + n_ba, v + n_ba, w);
  int added = 0;
  while (added < bridge_edges) {
    const int u = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(n_ba - 1)));
    const int v = static_cast<int>(
        rng.uniform_int(static_cast<std::uint64_t>(n_ba), static_cast<std::uint64_t>(n - 1)));
    if (graph.has_edge(u, v)) continue;
    graph.add_edge(u, v);
    ++added;
  }
  if (!graph.connected()) {
    throw std::runtime_error("hybrid substrate came out disconnected");
  }
  return graph;
}

void assign_weights(WeightedGraph& graph, const InitConfig& cfg, Rng& rng) {
  for (const auto& [u, v, w] : graph.edges()) {
    (void)w;
    double weight;
    do {
      weight = rng.normal(cfg.weight_mu, cfg.weight_sigma);
    } while (weight <= 0.0);
    graph.set_weight(u, v, std::min(weight, 1.0));
  }
}

std::vector<int> init_etvs(int n, const InitConfig& cfg, Rng& rng) {
  if (cfg.etv_mu < 0.0 || cfg.etv_mu > static_cast<double>(cfg.m)) {
    throw std::invalid_argument("etv_mu outside [0, m]");
  }
  std::vector<int> etvs(static_cast<std::size_t>(n));
  for (auto& e : etvs) {
    const auto draw = static_cast<long long>(std::llround(rng.normal(cfg.etv_mu, cfg.etv_sigma)));
    e = static_cast<int>(std::clamp(draw, 0LL, static_cast<long long>(cfg.m)));
  }
  return etvs;
}

std::vector<EmotionCode> codes_from_etvs(std::span<const int> etvs, int m, Rng& rng) {
  std::vector<EmotionCode> codes;
  codes.reserve(etvs.size());
  for (const int e : etvs) codes.push_back(EmotionCode::with_etv(e, m, rng));
  return codes;
}

void write_edge_list(const WeightedGraph& graph, std::ostream& out) {
  char buf[64];
  for (const auto& [u, v, w] : graph.edges()) {
    const auto end = std::to_chars(buf, buf + sizeof(buf), w, std::chars_format::general, 17);
    out << u << ' ' << v << ' ' << std::string_view(buf, end.ptr) << '\n';
  }
}

void write_edge_list(const WeightedGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_edge_list(graph, out);
}

WeightedGraph read_edge_list(std::istream& in) {
  std::vector<std::tuple<int, int, double>> edges;
  int max_node = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    int u, v;
    double w;
    if (!(fields >> u >> v >> w)) throw std::runtime_error("malformed edge line: " + line);
    edges.emplace_back(u, v, w);
    max_node = std::max({max_node, u, v});
  }
  if (max_node < 0) throw std::runtime_error("empty edge list");
  WeightedGraph graph(max_node + 1);
  for (const auto& [u, v, w] : edges) graph.add_edge(u, v, w);
  return graph;
}

WeightedGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in);
}

}  // namespace affectsim
