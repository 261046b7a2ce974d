// Command-line front end: single runs, mean-field integration, ballot
// post-processing, and multi-seed sweeps.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "affectsim/analysis.hpp"
#include "affectsim/config.hpp"
#include "affectsim/engine.hpp"
#include "affectsim/meanfield.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "affectsim 0.1.0";

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("AFFECTSIM_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  return static_cast<std::uint64_t>(std::strtoull(raw, nullptr, 10));
}

std::uint64_t resolve_seed(const affectsim::SimConfig& cfg,
                           const std::optional<std::uint64_t>& flag) {
  if (flag.has_value()) return *flag;
  if (const auto env = env_seed(); env.has_value()) return *env;
  return cfg.seed;
}

void write_manifest(const fs::path& path, const affectsim::SimConfig& cfg,
                    const std::vector<std::uint64_t>& seeds, const fs::path& out_dir,
                    const std::vector<std::string>& outputs) {
  ordered_json doc;
  doc["tool"] = kToolVersion;
  doc["config_hash"] = affectsim::config_hash_hex(cfg);
  doc["seeds"] = seeds;
  doc["out_dir"] = out_dir.string();
  doc["outputs"] = outputs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
}

int cmd_simulate(const std::string& config_path, const std::optional<std::uint64_t>& seed_flag,
                 const std::string& out_dir, const std::string& band_preset) {
  affectsim::SimConfig cfg = affectsim::load_sim_config(config_path);
  cfg.seed = resolve_seed(cfg, seed_flag);

  const fs::path out(out_dir);
  fs::create_directories(out);

  const affectsim::RunResult result = affectsim::run(cfg);

  if (band_preset != "default" && band_preset != "single-info") {
    throw affectsim::ConfigError("--bands", "must be 'default' or 'single-info'");
  }
  const auto bands = band_preset == "single-info"
                         ? affectsim::BandSpec::single_info_bands(cfg.m)
                         : affectsim::BandSpec::default_bands(cfg.m);
  const auto& final_etvs = result.trace.records.back().etvs;

  std::vector<std::string> outputs;
  auto emit = [&](const char* name, auto&& writer) {
    const fs::path p = out / name;
    writer(p.string());
    outputs.push_back(name);
  };
  emit("trace.csv", [&](const std::string& p) { affectsim::write_timeseries_csv(result.trace, p); });
  emit("trace.json",
       [&](const std::string& p) { affectsim::write_timeseries_json(result.trace, p); });
  emit("bands.csv",
       [&](const std::string& p) { affectsim::write_bands_csv(result.trace, bands, p); });
  emit("beta.csv", [&](const std::string& p) { affectsim::write_beta_csv(result.trace, p); });
  emit("final_etvs.csv",
       [&](const std::string& p) { affectsim::write_final_etvs(result.trace, p); });
  emit("graph_final.dot", [&](const std::string& p) {
    affectsim::export_colored_graph(result.graph, final_etvs, cfg.m, p,
                                    affectsim::GraphFormat::Dot);
  });
  emit("graph_final.graphml", [&](const std::string& p) {
    affectsim::export_colored_graph(result.graph, final_etvs, cfg.m, p,
                                    affectsim::GraphFormat::GraphMl);
  });
  emit("graph.edges", [&](const std::string& p) { affectsim::write_edge_list(result.graph, p); });

  outputs.push_back("manifest.json");
  write_manifest(out / "manifest.json", cfg, {cfg.seed}, out, outputs);

  const auto& last = result.trace.records.back();
  std::printf("rounds=%d N=%d final: S=%d I=%d phi=%.4f -> %s\n",
              static_cast<int>(result.trace.records.size()) - 1, cfg.num_all, last.ignorant,
              last.spreader, last.phi, out_dir.c_str());
  return 0;
}

int cmd_meanfield(const std::optional<std::string>& config_path,
                  const std::vector<std::string>& beta_spec, double gamma, double i0,
                  std::optional<double> horizon, double dt, const std::string& out_path) {
  double gamma_eff = gamma;
  if (config_path.has_value()) {
    const affectsim::SimConfig cfg = affectsim::load_sim_config(*config_path);
    if (gamma < 0.0) gamma_eff = cfg.gamma_forget;
  }
  if (gamma_eff < 0.0) gamma_eff = 0.1;

  std::function<double(double)> beta_fn;
  double horizon_eff = horizon.value_or(200.0);
  if (beta_spec.size() == 1) {
    const double beta = std::stod(beta_spec[0]);
    beta_fn = [beta](double) { return beta; };
  } else if (beta_spec.size() == 2 && beta_spec[0] == "from-trace") {
    auto profile = affectsim::read_beta_profile(beta_spec[1]);
    if (!horizon.has_value()) horizon_eff = static_cast<double>(profile.size() - 1);
    beta_fn = [profile = std::move(profile)](double t) {
      auto idx = static_cast<std::size_t>(std::floor(std::max(t, 0.0)));
      if (idx >= profile.size()) idx = profile.size() - 1;
      return profile[idx];
    };
  } else {
    throw affectsim::ConfigError("--beta", "expects a constant or: from-trace <beta.csv>");
  }

  const auto trajectory = affectsim::integrate(beta_fn, gamma_eff, i0, horizon_eff, dt);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << "t,s,i\n";
  char buf[80];
  for (const auto& state : trajectory) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.9f,%.9f", state.t, state.s, state.i);
    out << buf << '\n';
  }
  std::printf("steps=%zu final: s=%.6f i=%.6f -> %s\n", trajectory.size() - 1,
              trajectory.back().s, trajectory.back().i, out_path.c_str());
  return 0;
}

int cmd_vote(const std::string& etvs_path, double p_abstain, std::uint64_t seed,
             const std::optional<std::string>& out_path) {
  // accept either a tendency-value file or a simulation output directory
  std::string resolved = etvs_path;
  if (fs::is_directory(etvs_path)) resolved = (fs::path(etvs_path) / "final_etvs.csv").string();
  const std::vector<int> etvs = affectsim::read_etvs(resolved);
  affectsim::Rng rng = affectsim::Rng::derive(seed, affectsim::StreamKind::Vote);
  const auto tally = affectsim::simulate_vote(etvs, 32, p_abstain, rng);
  const auto total = static_cast<double>(etvs.size());
  std::printf("votes_a=%lld votes_b=%lld abstained=%lld (%.4f%% of %zu)\n", tally.votes_a,
              tally.votes_b, tally.abstained,
              100.0 * static_cast<double>(tally.abstained) / total, etvs.size());
  if (out_path.has_value()) {
    ordered_json doc{{"votes_a", tally.votes_a},
                     {"votes_b", tally.votes_b},
                     {"abstained", tally.abstained},
                     {"total", etvs.size()}};
    std::ofstream out(*out_path);
    if (!out) throw std::runtime_error("cannot open " + *out_path + " for writing");
    out << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, int seeds, int jobs,
              const std::optional<std::uint64_t>& seed_flag, const std::string& out_dir) {
  affectsim::SimConfig cfg = affectsim::load_sim_config(config_path);
  const std::uint64_t master = resolve_seed(cfg, seed_flag);
  if (seeds < 1) throw affectsim::ConfigError("--seeds", "must be >= 1");
  if (jobs < 1) throw affectsim::ConfigError("--jobs", "must be >= 1");

  const fs::path out(out_dir);
  fs::create_directories(out);

  std::vector<affectsim::SimulationTrace> traces(static_cast<std::size_t>(seeds));
  std::vector<std::uint64_t> run_seeds(static_cast<std::size_t>(seeds));
  for (int r = 0; r < seeds; ++r) {
    run_seeds[static_cast<std::size_t>(r)] = master + static_cast<std::uint64_t>(r);
  }

  // Runs are independent; workers pull run indices, results land in
  // run-index order so the reduction below never depends on scheduling.
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const int r = next.fetch_add(1);
      if (r >= seeds) return;
      try {
        affectsim::SimConfig run_cfg = cfg;
        run_cfg.seed = run_seeds[static_cast<std::size_t>(r)];
        traces[static_cast<std::size_t>(r)] = affectsim::run(run_cfg).trace;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, seeds);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<std::string> outputs;
  for (int r = 0; r < seeds; ++r) {
    const fs::path run_dir = out / ("run_" + std::to_string(r));
    fs::create_directories(run_dir);
    affectsim::write_timeseries_csv(traces[static_cast<std::size_t>(r)],
                                    (run_dir / "trace.csv").string());
    outputs.push_back("run_" + std::to_string(r) + "/trace.csv");
  }

  // Aggregate in run order: mean and sample stddev of phi per round.
  const std::size_t rows = traces.front().records.size();
  std::ofstream agg(out / "aggregate.csv");
  if (!agg) throw std::runtime_error("cannot open aggregate.csv for writing");
  agg << "t,phi_mean,phi_std\n";
  char buf[80];
  for (std::size_t t = 0; t < rows; ++t) {
    double sum = 0.0;
    for (const auto& trace : traces) sum += trace.records[t].phi;
    const double mean = sum / static_cast<double>(seeds);
    double sq = 0.0;
    for (const auto& trace : traces) {
      const double d = trace.records[t].phi - mean;
      sq += d * d;
    }
    const double sd = seeds > 1 ? std::sqrt(sq / static_cast<double>(seeds - 1)) : 0.0;
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f", traces.front().records[t].t, mean, sd);
    agg << buf << '\n';
  }
  outputs.push_back("aggregate.csv");
  outputs.push_back("manifest.json");
  write_manifest(out / "manifest.json", cfg, run_seeds, out, outputs);

  std::printf("sweep: %d runs -> %s\n", seeds, out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agent-based emotion propagation simulator"};
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_out = "out", sim_bands = "default";
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "run one seeded simulation");
  simulate->add_option("config", sim_config, "config file (TOML)")->required();
  simulate->add_option("--seed", sim_seed, "override the config seed");
  simulate->add_option("--out", sim_out, "output directory");
  simulate->add_option("--bands", sim_bands, "band preset for bands.csv (default|single-info)")
      ->capture_default_str();

  // meanfield
  std::optional<std::string> mf_config;
  std::vector<std::string> mf_beta;
  double mf_gamma = -1.0, mf_i0 = 0.01, mf_dt = 0.01;
  std::optional<double> mf_horizon;
  std::string mf_out = "meanfield.csv";
  auto* meanfield = app.add_subcommand("meanfield", "integrate the two-compartment rate equations");
  meanfield->add_option("config", mf_config, "config file (optional, supplies gamma)");
  meanfield->add_option("--beta", mf_beta, "constant rate, or: from-trace <beta.csv>")
      ->required()
      ->expected(1, 2);
  meanfield->add_option("--gamma", mf_gamma, "forgetting probability");
  meanfield->add_option("--i0", mf_i0, "initial spreader share")->capture_default_str();
  meanfield->add_option("--horizon", mf_horizon, "integration horizon in rounds");
  meanfield->add_option("--dt", mf_dt, "step size")->capture_default_str();
  meanfield->add_option("--out", mf_out, "trajectory CSV path")->capture_default_str();

  // vote
  std::string vote_etvs;
  double vote_p_abstain = 0.016;
  std::uint64_t vote_seed = 42;
  std::optional<std::string> vote_out;
  auto* vote = app.add_subcommand("vote", "ballot post-processing of a final state");
  vote->add_option("etvs", vote_etvs, "final_etvs.csv or plain list of tendency values")
      ->required();
  vote->add_option("--p-abstain", vote_p_abstain, "undecided abstention probability")->capture_default_str();
  vote->add_option("--seed", vote_seed, "ballot seed")->capture_default_str();
  vote->add_option("--out", vote_out, "tally JSON path");

  // sweep
  std::string sweep_config, sweep_out = "sweep";
  int sweep_seeds = 10, sweep_jobs = 1;
  std::optional<std::uint64_t> sweep_seed;
  auto* sweep = app.add_subcommand("sweep", "independent multi-seed runs with aggregation");
  sweep->add_option("config", sweep_config, "config file (TOML)")->required();
  sweep->add_option("--seeds", sweep_seeds, "number of runs")->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "concurrent runs")->capture_default_str();
  sweep->add_option("--seed", sweep_seed, "master seed override");
  sweep->add_option("--out", sweep_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_seed, sim_out, sim_bands);
    if (meanfield->parsed())
      return cmd_meanfield(mf_config, mf_beta, mf_gamma, mf_i0, mf_horizon, mf_dt, mf_out);
    if (vote->parsed()) return cmd_vote(vote_etvs, vote_p_abstain, vote_seed, vote_out);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_seeds, sweep_jobs, sweep_seed, sweep_out);
  } catch (const affectsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
