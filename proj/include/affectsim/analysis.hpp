#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "affectsim/engine.hpp"

namespace affectsim {

// Ascending ETV cut points defining the half-open bands [e_k, e_{k+1});
// the last band additionally includes m itself.
struct BandSpec {
  std::vector<int> edges;

  // Stacked-diagram bands used by the multi-information figures:
  // [0,7) [7,14) [14,18) [18,25) [25,32].
  static BandSpec default_bands(int m);
  // Alternate single-information legend, extended to cover the full range.
  static BandSpec single_info_bands(int m);

  std::size_t band_count() const { return edges.size() - 1; }
  void validate(int m) const;
};

// Per-round node counts per band; each row sums to the node count.
std::vector<std::vector<int>> etv_bands(const SimulationTrace& trace, const BandSpec& bands);

// Election-style post-processing of a final tendency distribution (m = 32
// only): shifted value e' = etv - 16; e' in [1,16] votes A, e' in [-16,-2]
// votes B, e' == 0 leans A and e' == -1 leans B, each abstaining with
// probability p_abstain.
struct VoteTally {
  long long votes_a = 0;
  long long votes_b = 0;
  long long abstained = 0;
};

VoteTally simulate_vote(std::span<const int> etvs, int m, double p_abstain, Rng& rng);

// Two-ended diverging color scale: 0 -> dark red (#8B0000), m/2 -> white,
// m -> dark gray (#404040), linear in RGB within each half.
std::string etv_color_hex(int etv, int m);

enum class GraphFormat { Dot, GraphMl };

// Graph rendering export with per-node fill colors from etv_color_hex.
void export_colored_graph(const WeightedGraph& graph, std::span<const int> etvs, int m,
                          const std::string& path, GraphFormat format);

// Time series of one run: "t,fragment,t_local,S,I,phi" with the fragment
// column 1-based and phi fixed to six decimals. JSON mirrors the records.
void write_timeseries_csv(const SimulationTrace& trace, std::ostream& out);
void write_timeseries_csv(const SimulationTrace& trace, const std::string& path);
void write_timeseries_json(const SimulationTrace& trace, const std::string& path);

// Per-round band counts: "t,<one column per band>".
void write_bands_csv(const SimulationTrace& trace, const BandSpec& bands, std::ostream& out);
void write_bands_csv(const SimulationTrace& trace, const BandSpec& bands,
                     const std::string& path);

// Final-round tendency values: "node,etv".
void write_final_etvs(const SimulationTrace& trace, const std::string& path);
std::vector<int> read_etvs(const std::string& path);

// Population-mean spread rate per round: "t,mean_beta".
void write_beta_csv(const SimulationTrace& trace, const std::string& path);
std::vector<double> read_beta_profile(const std::string& path);

// Minimal re-parse of a timeseries CSV, for round-trip checks.
struct TimeseriesRow {
  int t;
  int fragment;
  int t_local;
  int ignorant;
  int spreader;
  double phi;
};
std::vector<TimeseriesRow> read_timeseries_csv(const std::string& path);

}  // namespace affectsim
