#include "affectsim/reference.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace affectsim::reference {

namespace {

using Bits = std::vector<int>;

Bits to_bits(const EmotionCode& code) {
  Bits bits(static_cast<std::size_t>(code.length()));
  for (int i = 0; i < code.length(); ++i) bits[static_cast<std::size_t>(i)] = code.bit(i) ? 1 : 0;
  return bits;
}

EmotionCode from_bits(const Bits& bits) {
  EmotionCode code = EmotionCode::zeros(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    code.set_bit(static_cast<int>(i), bits[i] != 0);
  }
  return code;
}

int count_ones(const Bits& bits) {
  int total = 0;
  for (const int b : bits) total += b;
  return total;
}

// Piecewise similarity with midpoint damping, written branch by branch.
// Same multiplication order as the engine: (penalty * base) * decay.
double similarity(int e_node, int e_info, int t_local, const EsefParams& p) {
  const double decay = 1.0 - p.theta_decay * static_cast<double>(t_local);
  if (decay <= 0.0) return 0.0;
  const double half = static_cast<double>(p.m) / 2.0;
  const double diff = static_cast<double>(e_node - e_info);
  const double base = p.d * std::exp(-(diff * diff) / p.sigma);
  double value;
  if (static_cast<double>(e_info) < half) {
    if (static_cast<double>(e_node) < half) {
      value = (1.0 * base) * decay;
    } else {
      value = (std::exp(half - static_cast<double>(e_node)) * base) * decay;
    }
  } else if (static_cast<double>(e_info) > half) {
    if (static_cast<double>(e_node) > half) {
      value = (1.0 * base) * decay;
    } else {
      value = (std::exp(static_cast<double>(e_node) - half) * base) * decay;
    }
  } else {
    value = (1.0 * base) * decay;  // fragment on the midpoint: no opposite side
  }
  if (value < 0.0) value = 0.0;
  return value;
}

double neighbor_term(const WeightedGraph& graph, int v, const std::vector<int>& etvs) {
  int count = 0;
  double weighted_sum = 0.0;
  for (const auto& edge : graph.neighbors(v)) {
    weighted_sum += edge.weight * static_cast<double>(etvs[static_cast<std::size_t>(edge.to)]);
    ++count;
  }
  if (count == 0) return 0.0;
  return weighted_sum / static_cast<double>(count);
}

double global_term(const std::vector<int>& etvs) {
  long long total = 0;
  for (const int e : etvs) total += e;
  return static_cast<double>(total) / static_cast<double>(etvs.size());
}

double rate(double gamma, double m_term, double phi, const RateWeights& w, int m) {
  const double md = static_cast<double>(m);
  const double a = w.w_gamma * gamma;
  const double b = w.w_neighbor * (m_term / md);
  const double c = w.w_global * (phi / md);
  double beta = (a + b) + c;
  if (beta < 0.0) beta = 0.0;
  if (beta > 1.0) beta = 1.0;
  return beta;
}

// Random bit flips over a random prefix: pick a length, select each prefix
// position with the flip probability, invert the selected bits via
// delete-and-insert, exactly as the drift step is specified.
Bits mutation_op(const Bits& code, double sigma_rate, Rng& rng) {
  Bits out = code;
  const int m = static_cast<int>(code.size());
  const int len = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(m)));
  std::vector<int> mut_list;
  for (int j = 0; j < len; ++j) {
    if (rng.bernoulli(sigma_rate)) mut_list.push_back(j);
  }
  for (const int j : mut_list) {
    const auto pos = out.begin() + j;
    if (*pos == 1) {
      out.erase(pos);
      out.insert(out.begin() + j, 0);
    } else {
      out.erase(pos);
      out.insert(out.begin() + j, 1);
    }
  }
  return out;
}

// One-directional segment copy, delete-and-insert form with the equality
// guard on the preselected segment.
Bits crossover_op(const Bits& node_code, const Bits& info_code, double gamma, Rng& rng) {
  Bits out = node_code;
  const int m = static_cast<int>(node_code.size());
  const int len = static_cast<int>(std::floor(gamma * static_cast<double>(m)));
  const int start = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(m - len)));
  const int end = start + len;
  const Bits node_seg(node_code.begin() + start, node_code.begin() + end);
  const Bits info_seg(info_code.begin() + start, info_code.begin() + end);
  if (node_seg != info_seg) {
    out.erase(out.begin() + start, out.begin() + end);
    for (int j = 0; j < static_cast<int>(info_seg.size()); ++j) {
      out.insert(out.begin() + (start + j), info_seg[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

}  // namespace

SimulationTrace run(const WeightedGraph& graph, const std::vector<EmotionCode>& initial_codes,
                    const FragmentSchedule& schedule, const DynamicsParams& params,
                    std::uint64_t seed, int rounds, std::vector<EmotionCode>* final_codes) {
  const int n = graph.node_count();
  if (static_cast<int>(initial_codes.size()) != n) {
    throw std::invalid_argument("code array does not match the node count");
  }
  const int total = rounds < 0 ? schedule.total_rounds() : rounds;

  std::vector<Bits> codes;
  codes.reserve(static_cast<std::size_t>(n));
  for (const auto& code : initial_codes) codes.push_back(to_bits(code));
  std::vector<int> etvs(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) etvs[static_cast<std::size_t>(v)] = count_ones(codes[static_cast<std::size_t>(v)]);

  std::vector<Rng> streams;
  streams.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    streams.push_back(Rng::derive(seed, StreamKind::Agent, static_cast<std::uint64_t>(v)));
  }

  // Initial spreaders: population-mean rate against the first fragment.
  const InfoFragment& first = schedule.fragment(0);
  double beta_sum = 0.0;
  {
    const double phi0 = global_term(etvs);
    for (int v = 0; v < n; ++v) {
      const double g = similarity(etvs[static_cast<std::size_t>(v)], first.etv, 0, params.esef);
      beta_sum += rate(g, neighbor_term(graph, v, etvs), phi0, params.weights, params.esef.m);
    }
  }
  const double mean_beta0 = beta_sum / static_cast<double>(n);
  const int initial = static_cast<int>(std::llround(mean_beta0 * static_cast<double>(n)));
  if (initial <= 0) {
    throw std::runtime_error("no initial spreaders: mean spread rate rounds to zero");
  }
  std::vector<Compartment> state(static_cast<std::size_t>(n), Compartment::Ignorant);
  {
    Rng seeding = Rng::derive(seed, StreamKind::Seeding);
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    for (int i = 0; i < initial; ++i) {
      const auto j = static_cast<std::size_t>(
          seeding.uniform_int(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n - 1)));
      std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
      state[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = Compartment::Spreader;
    }
  }

  SimulationTrace trace;
  trace.node_count = n;
  trace.code_length = initial_codes.empty() ? 0 : initial_codes.front().length();
  auto record = [&](int t, int fragment, int t_local, double mean_beta) {
    RoundRecord rec;
    rec.t = t;
    rec.fragment = fragment;
    rec.t_local = t_local;
    rec.etvs = etvs;
    rec.compartments = state;
    rec.spreader = 0;
    for (const auto c : state) rec.spreader += (c == Compartment::Spreader) ? 1 : 0;
    rec.ignorant = n - rec.spreader;
    rec.phi = global_term(etvs);
    rec.mean_beta = mean_beta;
    trace.records.push_back(std::move(rec));
  };
  {
    const auto active0 = schedule.active_at(0);
    record(0, active0.index, active0.t_local, mean_beta0);
  }

  for (int t = 0; t < total; ++t) {
    const auto active = schedule.active_at(t);
    const InfoFragment& frag = schedule.fragment(active.index);
    const Bits frag_bits = to_bits(frag.code);
    const double phi = global_term(etvs);

    // Snapshot of round-start state; all three phases read it.
    const std::vector<Bits> snap_codes = codes;
    const std::vector<int> snap_etvs = etvs;
    const std::vector<Compartment> snap_state = state;

    std::vector<double> betas(static_cast<std::size_t>(n), 0.0);

    // Phase 1: broadcast and reception.
    for (int v = 0; v < n; ++v) {
      const auto vi = static_cast<std::size_t>(v);
      const double g = similarity(snap_etvs[vi], frag.etv, active.t_local, params.esef);
      const double beta =
          rate(g, neighbor_term(graph, v, snap_etvs), phi, params.weights, params.esef.m);
      betas[vi] = beta;
      bool received = false;
      for (const auto& edge : graph.neighbors(v)) {
        if (snap_state[static_cast<std::size_t>(edge.to)] != Compartment::Spreader) continue;
        if (streams[vi].bernoulli(beta) && !received) received = true;
      }
      if (received) {
        if (snap_state[vi] == Compartment::Ignorant) state[vi] = Compartment::Spreader;
        codes[vi] = crossover_op(snap_codes[vi], frag_bits, g, streams[vi]);
      }
    }

    // Phase 2: forgetting; the emotion code stays as it is.
    for (int v = 0; v < n; ++v) {
      const auto vi = static_cast<std::size_t>(v);
      if (state[vi] == Compartment::Spreader && streams[vi].bernoulli(params.gamma_forget)) {
        state[vi] = Compartment::Ignorant;
      }
    }

    // Phase 3: drift applies to everyone, every round.
    for (int v = 0; v < n; ++v) {
      const auto vi = static_cast<std::size_t>(v);
      codes[vi] = mutation_op(codes[vi], params.mutation.rate, streams[vi]);
      etvs[vi] = count_ones(codes[vi]);
    }

    double round_beta = 0.0;
    for (const double b : betas) round_beta += b;
    record(t + 1, active.index, active.t_local, round_beta / static_cast<double>(n));
  }

  if (final_codes != nullptr) {
    final_codes->clear();
    for (const auto& bits : codes) final_codes->push_back(from_bits(bits));
  }
  return trace;
}

}  // namespace affectsim::reference
