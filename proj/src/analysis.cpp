#include "affectsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace affectsim {

BandSpec BandSpec::default_bands(int m) {
  if (m == 32) return BandSpec{{0, 7, 14, 18, 25, 32}};
  return BandSpec{{0, m / 4, m / 2, 3 * m / 4, m}};
}

BandSpec BandSpec::single_info_bands(int m) {
  if (m == 32) return BandSpec{{0, 4, 8, 13, 16, 21, 26, 32}};
  return default_bands(m);
}

void BandSpec::validate(int m) const {
  if (edges.size() < 2) throw std::invalid_argument("band spec needs at least two edges");
  if (edges.front() != 0 || edges.back() != m) {
    throw std::invalid_argument("band edges must cover [0, m]");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) throw std::invalid_argument("band edges must ascend strictly");
  }
}

std::vector<std::vector<int>> etv_bands(const SimulationTrace& trace, const BandSpec& bands) {
  bands.validate(trace.code_length);
  std::vector<std::vector<int>> counts;
  counts.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    std::vector<int> row(bands.band_count(), 0);
    for (const int e : rec.etvs) {
      // Last band is closed above so the full value lands in it.
      auto band = static_cast<std::size_t>(
          std::upper_bound(bands.edges.begin(), bands.edges.end(), e) - bands.edges.begin());
      band = band == 0 ? 0 : band - 1;
      if (band >= bands.band_count()) band = bands.band_count() - 1;
      ++row[band];
    }
    counts.push_back(std::move(row));
  }
  return counts;
}

VoteTally simulate_vote(std::span<const int> etvs, int m, double p_abstain, Rng& rng) {
  if (m != 32) throw std::invalid_argument("the ballot mapping is defined for m = 32 only");
  if (p_abstain < 0.0 || p_abstain > 1.0) throw std::invalid_argument("p_abstain outside [0, 1]");
  VoteTally tally;
  for (const int e : etvs) {
    if (e < 0 || e > m) throw std::invalid_argument("tendency value outside [0, m]");
    const int shifted = e - m / 2;
    if (shifted >= 1) {
      ++tally.votes_a;
    } else if (shifted <= -2) {
      ++tally.votes_b;
    } else if (shifted == 0) {
      if (rng.bernoulli(p_abstain)) ++tally.abstained; else ++tally.votes_a;
    } else {  // shifted == -1
      if (rng.bernoulli(p_abstain)) ++tally.abstained; else ++tally.votes_b;
    }
  }
  return tally;
}

std::string etv_color_hex(int etv, int m) {
  if (etv < 0 || etv > m) throw std::invalid_argument("tendency value outside [0, m]");
  constexpr int kRed[3] = {0x8B, 0x00, 0x00};
  constexpr int kWhite[3] = {0xFF, 0xFF, 0xFF};
  constexpr int kGray[3] = {0x40, 0x40, 0x40};
  const double half = static_cast<double>(m) / 2.0;
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    double v;
    if (static_cast<double>(etv) <= half) {
      const double f = static_cast<double>(etv) / half;
      v = kRed[c] + (kWhite[c] - kRed[c]) * f;
    } else {
      const double f = (static_cast<double>(etv) - half) / half;
      v = kWhite[c] + (kGray[c] - kWhite[c]) * f;
    }
    rgb[c] = static_cast<int>(std::lround(v));
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", rgb[0], rgb[1], rgb[2]);
  return std::string(buf);
}

void export_colored_graph(const WeightedGraph& graph, std::span<const int> etvs, int m,
                          const std::string& path, GraphFormat format) {
  if (static_cast<int>(etvs.size()) != graph.node_count()) {
    throw std::invalid_argument("etv array does not match the node count");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");

  char wbuf[48];
  if (format == GraphFormat::Dot) {
    out << "graph affect {\n  node [style=filled];\n";
    for (int v = 0; v < graph.node_count(); ++v) {
      out << "  " << v << " [fillcolor=\"" << etv_color_hex(etvs[static_cast<std::size_t>(v)], m)
          << "\"];\n";
    }
    for (const auto& [u, v, w] : graph.edges()) {
      std::snprintf(wbuf, sizeof(wbuf), "%.6f", w);
      out << "  " << u << " -- " << v << " [weight=" << wbuf << "];\n";
    }
    out << "}\n";
  } else {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n"
        << "  <key id=\"etv\" for=\"node\" attr.name=\"etv\" attr.type=\"int\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <graph id=\"affect\" edgedefault=\"undirected\">\n";
    for (int v = 0; v < graph.node_count(); ++v) {
      const int e = etvs[static_cast<std::size_t>(v)];
      out << "    <node id=\"n" << v << "\"><data key=\"color\">" << etv_color_hex(e, m)
          << "</data><data key=\"etv\">" << e << "</data></node>\n";
    }
    std::size_t idx = 0;
    for (const auto& [u, v, w] : graph.edges()) {
      std::snprintf(wbuf, sizeof(wbuf), "%.6f", w);
      out << "    <edge id=\"e" << idx++ << "\" source=\"n" << u << "\" target=\"n" << v
          << "\"><data key=\"weight\">" << wbuf << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
  }
}

void write_timeseries_csv(const SimulationTrace& trace, std::ostream& out) {
  out << "t,fragment,t_local,S,I,phi\n";
  char buf[32];
  for (const auto& rec : trace.records) {
    std::snprintf(buf, sizeof(buf), "%.6f", rec.phi);
    out << rec.t << ',' << rec.fragment + 1 << ',' << rec.t_local << ',' << rec.ignorant << ','
        << rec.spreader << ',' << buf << '\n';
  }
}

void write_timeseries_csv(const SimulationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_timeseries_csv(trace, out);
}

void write_timeseries_json(const SimulationTrace& trace, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["n"] = trace.node_count;
  doc["m"] = trace.code_length;
  auto& records = doc["records"];
  records = nlohmann::ordered_json::array();
  for (const auto& rec : trace.records) {
    records.push_back({{"t", rec.t},
                       {"fragment", rec.fragment + 1},
                       {"t_local", rec.t_local},
                       {"S", rec.ignorant},
                       {"I", rec.spreader},
                       {"phi", std::round(rec.phi * 1e6) / 1e6}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
}

void write_bands_csv(const SimulationTrace& trace, const BandSpec& bands, std::ostream& out) {
  const auto counts = etv_bands(trace, bands);
  out << 't';
  for (std::size_t b = 0; b + 1 < bands.edges.size(); ++b) {
    out << ",etv_" << bands.edges[b] << '_' << bands.edges[b + 1];
  }
  out << '\n';
  for (std::size_t t = 0; t < counts.size(); ++t) {
    out << trace.records[t].t;
    for (const int c : counts[t]) out << ',' << c;
    out << '\n';
  }
}

void write_bands_csv(const SimulationTrace& trace, const BandSpec& bands,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_bands_csv(trace, bands, out);
}

void write_final_etvs(const SimulationTrace& trace, const std::string& path) {
  if (trace.records.empty()) throw std::invalid_argument("empty trace");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "node,etv\n";
  const auto& etvs = trace.records.back().etvs;
  for (std::size_t v = 0; v < etvs.size(); ++v) out << v << ',' << etvs[v] << '\n';
}

std::vector<int> read_etvs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<int> etvs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("node,", 0) == 0) {
      first = false;
      continue;  // header of a final_etvs file
    }
    first = false;
    const auto comma = line.find(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    etvs.push_back(std::stoi(field));
  }
  if (etvs.empty()) throw std::runtime_error("no tendency values in " + path);
  return etvs;
}

void write_beta_csv(const SimulationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "t,mean_beta\n";
  char buf[32];
  for (const auto& rec : trace.records) {
    std::snprintf(buf, sizeof(buf), "%.9f", rec.mean_beta);
    out << rec.t << ',' << buf << '\n';
  }
}

std::vector<double> read_beta_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> betas;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("t,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("malformed beta row: " + line);
    betas.push_back(std::stod(line.substr(comma + 1)));
  }
  if (betas.empty()) throw std::runtime_error("no rate profile in " + path);
  return betas;
}

std::vector<TimeseriesRow> read_timeseries_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<TimeseriesRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("t,", 0) == 0) continue;
    TimeseriesRow row;
    std::istringstream fields(line);
    char sep;
    if (!(fields >> row.t >> sep >> row.fragment >> sep >> row.t_local >> sep >> row.ignorant >>
          sep >> row.spreader >> sep >> row.phi)) {
      throw std::runtime_error("malformed timeseries row: " + line);
    }
    row.fragment -= 1;  // stored 1-based
    rows.push_back(row);
  }
  return rows;
}

}  // namespace affectsim
