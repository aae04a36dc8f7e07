// Copyright 2026 The pacp-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pacp/baselines.hpp"
#include "pacp/config.hpp"
#include "pacp/optimizer.hpp"
#include "pacp/priority.hpp"
#include "pacp/rng.hpp"
#include "pacp/scenario.hpp"

namespace pacp {

enum class Scheme { kPacp, kFts, kDmdda, kNoFusion };

inline Scheme parse_scheme(const std::string& name) {
  if (name == "pacp") return Scheme::kPacp;
  if (name == "fts") return Scheme::kFts;
  if (name == "dmdda" || name == "dmdda-emulated") return Scheme::kDmdda;
  if (name == "nofusion") return Scheme::kNoFusion;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected pacp, fts, dmdda, nofusion)");
}

inline std::string scheme_label(Scheme s) {
  switch (s) {
    case Scheme::kPacp:
      return "pacp";
    case Scheme::kFts:
      return "fts";
    case Scheme::kDmdda:
      return "dmdda-emulated";
    case Scheme::kNoFusion:
      return "nofusion";
  }
  return "?";
}

/// One evaluated (scenario, scheme) pair.
struct RunRecord {
  std::uint64_t seed = 0;
  std::string scheme;
  std::string param = "none";
  double value = 0.0;
  double utility = 0.0;
  /// Priority-weighted raw rate, bits/s.
  double u_r = 0.0;
  /// Summed perceptual region, m^2.
  double u_p = 0.0;
  double throughput_bps = 0.0;
  double jain = 0.0;
  double coverage_m2 = 0.0;
  std::size_t links = 0;
  int iters = 0;
  double wall_ms = 0.0;
};

/// Scenario geometry, perception and the priority engine; independent of
/// the radio and energy parameters, so it can be shared across sweep values
/// that only touch those.
struct PreparedScenario {
  ScenarioState state;
  std::vector<WorldObject> objects;
  std::vector<Perception> views;
  PriorityEngine engine;
};

inline PreparedScenario prepare_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioState state = build_scenario(cfg);
  std::vector<WorldObject> objects = world_objects(state);
  std::vector<Perception> views =
      perceive_all(state, objects, bev_params(cfg), cfg.seed);
  PriorityEngine engine(state, objects, views, cfg.priority_mode,
                        cfg.comm_range_m, cfg.seed);
  return {std::move(state), std::move(objects), std::move(views),
          std::move(engine)};
}

/// Priority of every linked pair as seen after transmission at the chosen
/// ratio; pairs outside `s` keep their entry in `p`.
inline PriorityMatrix observed_priorities(const PriorityEngine& engine,
                                          const LinkSet& s,
                                          const RateSolution& rates,
                                          const PriorityMatrix& p,
                                          double loss_scale) {
  PriorityMatrix out = p;
  for (Link e : s.links()) {
    out(e.i, e.j) = engine.weight(
        e.i, e.j, compression_loss_rate(rates.r(e.i, e.j), loss_scale));
  }
  return out;
}

inline Allocation pacp_allocate(const ProblemInstance& inst,
                                const PriorityEngine& engine,
                                const ScenarioConfig& cfg) {
  const PriorityMatrix p0 = gate(engine.matrix(), cfg.gate_threshold);
  AlternateOptions opt;
  opt.max_iterations = cfg.max_iterations;
  opt.rel_tol = cfg.rel_tol;
  opt.gate_threshold = cfg.gate_threshold;
  if (cfg.refresh_priorities) {
    const double scale = cfg.compression_loss;
    opt.refresh = [&engine, scale](const LinkSet& g, const RateSolution& r,
                                   const PriorityMatrix& p) {
      return observed_priorities(engine, g, r, p, scale);
    };
  }
  const AlternationResult res = alternate(inst, p0, opt);
  Allocation out;
  out.scheme = "pacp";
  out.links = res.links;
  out.rates = res.rates;
  out.subchannels.assign(res.links.size(), 1.0);
  out.iterations = res.iterations;
  out.converged = res.converged;
  return out;
}

inline Allocation allocate(Scheme scheme, const ProblemInstance& inst,
                           const PreparedScenario& prep,
                           const ScenarioConfig& cfg) {
  switch (scheme) {
    case Scheme::kPacp:
      return pacp_allocate(inst, prep.engine, cfg);
    case Scheme::kFts:
      return fts_allocate(inst);
    case Scheme::kDmdda:
      return dmdda_allocate(inst, cfg.max_iterations, cfg.rel_tol);
    case Scheme::kNoFusion:
      return no_fusion(inst.size(), cfg.r_max);
  }
  throw std::logic_error("allocate: bad scheme");
}

/// Scores an allocation the same way for every scheme: priorities of the
/// linked pairs are re-measured at the ratios actually used and gated, and
/// the ego's own perception disc counts toward the perceptual region.
inline RunRecord evaluate(const ProblemInstance& inst,
                          const PreparedScenario& prep,
                          const ScenarioConfig& cfg, const Allocation& alloc) {
  const FeasibilityReport rep = feasibility_check(inst, alloc.links,
                                                  alloc.rates);
  if (!rep.feasible()) {
    const Violation& v = rep.violations.front();
    throw std::runtime_error("scheme " + alloc.scheme + " produced an " +
                             "infeasible solution: " + v.constraint +
                             " on link (" + std::to_string(v.link.i) + "," +
                             std::to_string(v.link.j) + ")");
  }
  const std::size_t n = inst.size();
  const PriorityMatrix p_eval = gate(
      observed_priorities(prep.engine, alloc.links, alloc.rates,
                          PriorityMatrix(n), cfg.compression_loss),
      cfg.gate_threshold);
  const std::size_t ego = static_cast<std::size_t>(cfg.ego_index);
  const double cell = cfg.coverage_cell_m;

  RunRecord rec;
  rec.seed = cfg.seed;
  rec.scheme = alloc.scheme;
  std::vector<double> rates;
  for (Link e : alloc.links.links()) {
    rec.u_r += p_eval(e.i, e.j) * alloc.rates.d(e.i, e.j);
    rec.throughput_bps += alloc.rates.u(e.i, e.j);
    rates.push_back(alloc.rates.u(e.i, e.j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    rec.u_p += detail::receiver_coverage(inst.regions,
                                         alloc.links.senders_into(j), cell);
  }
  const Disc own = inst.regions[ego];
  rec.u_p += union_area(std::span<const Disc>(&own, 1), cell);
  std::vector<std::size_t> ego_view = alloc.links.senders_into(ego);
  ego_view.push_back(ego);
  rec.coverage_m2 = detail::receiver_coverage(inst.regions, ego_view, cell);
  const bool any_rate =
      std::any_of(rates.begin(), rates.end(), [](double v) { return v > 0; });
  rec.jain = any_rate ? jain_index(rates) : 0.0;
  rec.utility = cfg.omega1 * rec.u_r + cfg.omega2 * rec.u_p;
  rec.links = alloc.links.size();
  rec.iters = alloc.iterations;
  return rec;
}

/// Full pipeline for one scheme on a prepared scenario.
inline RunRecord run_prepared(const PreparedScenario& prep,
                              const ScenarioConfig& cfg, Scheme scheme,
                              bool timing = false) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemInstance inst = make_instance(prep.state, cfg);
  const Allocation alloc = allocate(scheme, inst, prep, cfg);
  RunRecord rec = evaluate(inst, prep, cfg, alloc);
  if (timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  }
  return rec;
}

inline RunRecord run_once(const ScenarioConfig& cfg, Scheme scheme,
                          bool timing = false) {
  return run_prepared(prepare_scenario(cfg), cfg, scheme, timing);
}

/// A small random problem for comparing greedy selection with exhaustive
/// search: rates fixed at standalone values, random priorities, and
/// coverage weighted heavily enough to compete with the rate term.
struct OracleInstance {
  ProblemInstance inst;
  PriorityMatrix priorities;
  std::vector<Link> candidates;
  RateSolution rates;
};

inline OracleInstance oracle_instance(std::uint64_t seed, int max_n,
                                      int max_k) {
  if (max_n < 1 || max_k < 1) throw std::invalid_argument("oracle_instance");
  Rng rng(hash_key({seed, 0x6f7261636c65ULL}));
  const auto n = static_cast<std::size_t>(1 + rng.below(max_n));
  ScenarioConfig cfg;
  cfg.num_vehicles = static_cast<int>(n);
  cfg.num_subchannels = static_cast<int>(1 + rng.below(max_k));
  cfg.energy_budget_j = rng.uniform() < 0.5 ? rng.uniform(0.41, 0.5) : 1000.0;
  cfg.omega2 = rng.uniform(0.0, 50.0);

  ScenarioState state;
  while (state.vehicles.size() < n) {
    const Point2 c{rng.uniform(0.0, 90.0), rng.uniform(0.0, 30.0)};
    bool clear = true;
    for (const auto& v : state.vehicles) {
      const Point2 q = v.pose.position();
      clear = clear && std::hypot(q.x - c.x, q.y - c.y) >= 10.0;
    }
    if (!clear) continue;
    VehicleState v;
    v.id = state.vehicles.size();
    v.pose = Pose(c.x, c.y, 0.0);
    v.local_rate = cfg.local_rate_bps;
    v.cpu_hz = rng.uniform(cfg.cpu_min_hz, cfg.cpu_max_hz);
    v.perception_radius = rng.uniform(10.0, 40.0);
    state.vehicles.push_back(v);
  }

  OracleInstance out;
  out.inst = make_instance(state, cfg);
  out.priorities = PriorityMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rng.uniform() >= 0.3) {
        out.priorities(i, j) = rng.uniform();
      }
    }
  }
  out.candidates = candidate_links(out.inst, out.priorities);
  const LinkSet none(n);
  out.rates = selection_rates(out.inst, none, RateSolution(n, cfg.r_max),
                              out.candidates);
  return out;
}

// Sweeps.

struct SweepAxis {
  const char* name;
  const char* field;
  double unit;
  bool changes_geometry;
};

inline constexpr SweepAxis kSweepAxes[] = {
    {"tx_power", "tx_power_w", 1e-3, false},
    {"bandwidth", "bandwidth_hz", 1e6, false},
    {"num_cavs", "num_vehicles", 1.0, true},
    {"max_range", "road_length_m", 1.0, true},
    {"noise_offset", "noise_offset_db", 1.0, false},
    {"energy_budget", "energy_budget_j", 1.0, false},
};

inline const SweepAxis& sweep_axis(const std::string& name) {
  for (const auto& a : kSweepAxes) {
    if (name == a.name) return a;
  }
  throw std::invalid_argument(
      "unknown sweep parameter '" + name +
      "' (expected tx_power, bandwidth, num_cavs, max_range, noise_offset, "
      "energy_budget)");
}

/// Applies a sweep value given in the axis' display unit (mW, MHz, count,
/// m, dB, J).
inline ScenarioConfig with_sweep_value(ScenarioConfig cfg,
                                       const SweepAxis& axis, double value) {
  nlohmann::json j = cfg;
  if (std::string(axis.field) == "num_vehicles") {
    const double rounded = std::round(value);
    if (rounded != value || rounded < 1) {
      throw std::invalid_argument("num_cavs must be a positive integer");
    }
    j[axis.field] = static_cast<int>(rounded);
  } else {
    j[axis.field] = value * axis.unit;
  }
  return config_from_json(j);
}

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  std::vector<Scheme> schemes;
  int seeds = 1;
  unsigned jobs = 1;
  bool timing = false;
};

/// Evaluates scheme x value x seed. Seeds are cfg.seed, cfg.seed + 1, ...;
/// each worker owns whole seeds, and records are returned ordered by
/// (value, scheme, seed) regardless of scheduling.
inline std::vector<RunRecord> sweep(const ScenarioConfig& base,
                                    const SweepSpec& spec) {
  const SweepAxis& axis = sweep_axis(spec.param);
  if (spec.values.empty()) throw std::invalid_argument("sweep: no values");
  if (spec.seeds < 1) throw std::invalid_argument("sweep: seeds < 1");
  if (spec.schemes.empty()) throw std::invalid_argument("sweep: no schemes");
  std::vector<ScenarioConfig> per_value;
  for (double v : spec.values) {
    per_value.push_back(with_sweep_value(base, axis, v));
  }

  const std::size_t nv = spec.values.size();
  const std::size_t ns = spec.schemes.size();
  const auto nseeds = static_cast<std::size_t>(spec.seeds);
  std::vector<RunRecord> out(nv * ns * nseeds);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::string error;

  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= nseeds) return;
      try {
        std::optional<PreparedScenario> shared;
        for (std::size_t vi = 0; vi < nv; ++vi) {
          ScenarioConfig cfg = per_value[vi];
          cfg.seed = base.seed + k;
          std::optional<PreparedScenario> own;
          const PreparedScenario* prep;
          if (axis.changes_geometry) {
            own.emplace(prepare_scenario(cfg));
            prep = &*own;
          } else {
            if (!shared) shared.emplace(prepare_scenario(cfg));
            prep = &*shared;
          }
          for (std::size_t si = 0; si < ns; ++si) {
            RunRecord rec =
                run_prepared(*prep, cfg, spec.schemes[si], spec.timing);
            rec.param = spec.param;
            rec.value = spec.values[vi];
            out[(vi * ns + si) * nseeds + k] = std::move(rec);
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (error.empty()) {
          error = "seed " + std::to_string(base.seed + k) + ": " + e.what();
        }
        next.store(nseeds);
      }
    }
  };
  const unsigned jobs = std::max(1u, spec.jobs);
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (!error.empty()) throw std::runtime_error(error);
  return out;
}

// CSV output.

inline constexpr const char* kCsvHeader =
    "seed,scheme,param,value,utility,u_r,u_p,throughput_bps,jain,coverage_m2,"
    "links,iters,wall_ms";

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_row(const RunRecord& r) {
  std::string s = std::to_string(r.seed);
  s += ',' + r.scheme + ',' + r.param + ',' + format_double(r.value);
  for (double v : {r.utility, r.u_r, r.u_p, r.throughput_bps, r.jain,
                   r.coverage_m2}) {
    s += ',' + format_double(v);
  }
  s += ',' + std::to_string(r.links) + ',' + std::to_string(r.iters) + ',' +
       format_double(r.wall_ms);
  return s;
}

struct SeriesPoint {
  std::string scheme;
  double value = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};

/// Mean and sample standard deviation of `field` per (scheme, value), in
/// first-appearance order.
template <typename Field>
std::vector<SeriesPoint> summarize(const std::vector<RunRecord>& records,
                                   Field field) {
  std::vector<SeriesPoint> out;
  std::vector<std::vector<double>> samples;
  for (const RunRecord& r : records) {
    std::size_t k = 0;
    while (k < out.size() &&
           !(out[k].scheme == r.scheme && out[k].value == r.value)) {
      ++k;
    }
    if (k == out.size()) {
      out.push_back({r.scheme, r.value, 0.0, 0.0, 0});
      samples.emplace_back();
    }
    samples[k].push_back(field(r));
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& xs = samples[k];
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    out[k].mean = mean;
    out[k].std =
        xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1))
                      : 0.0;
    out[k].n = xs.size();
  }
  return out;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

inline std::string records_csv(const std::vector<RunRecord>& records) {
  std::string s = std::string(kCsvHeader) + '\n';
  for (const auto& r : records) s += csv_row(r) + '\n';
  return s;
}

inline std::string series_csv(const std::vector<SeriesPoint>& pts) {
  std::string s = "scheme,value,mean,std,n\n";
  for (const auto& p : pts) {
    s += p.scheme + ',' + format_double(p.value) + ',' +
         format_double(p.mean) + ',' + format_double(p.std) + ',' +
         std::to_string(p.n) + '\n';
  }
  return s;
}

/// Per-(scheme, value) means of every metric, one row each.
inline std::string means_csv(const std::vector<RunRecord>& records) {
  using Getter = double (*)(const RunRecord&);
  const std::pair<const char*, Getter> cols[] = {
      {"utility", [](const RunRecord& r) { return r.utility; }},
      {"u_r", [](const RunRecord& r) { return r.u_r; }},
      {"u_p", [](const RunRecord& r) { return r.u_p; }},
      {"throughput_bps", [](const RunRecord& r) { return r.throughput_bps; }},
      {"jain", [](const RunRecord& r) { return r.jain; }},
      {"coverage_m2", [](const RunRecord& r) { return r.coverage_m2; }},
      {"links", [](const RunRecord& r) { return double(r.links); }},
      {"iters", [](const RunRecord& r) { return double(r.iters); }},
  };
  std::vector<std::vector<SeriesPoint>> per_col;
  for (const auto& c : cols) per_col.push_back(summarize(records, c.second));
  std::string s = "scheme,param,value,n";
  for (const auto& c : cols) s += std::string(",") + c.first + "_mean";
  s += '\n';
  const std::string param = records.empty() ? "" : records.front().param;
  for (std::size_t k = 0; k < per_col[0].size(); ++k) {
    const SeriesPoint& p = per_col[0][k];
    s += p.scheme + ',' + param + ',' + format_double(p.value) + ',' +
         std::to_string(p.n);
    for (const auto& col : per_col) s += ',' + format_double(col[k].mean);
    s += '\n';
  }
  return s;
}

/// Writes utility_vs_<param>.csv and throughput_vs_<param>.csv.
inline std::vector<std::filesystem::path> emit_plotdata(
    const std::vector<RunRecord>& records, const std::filesystem::path& dir) {
  if (records.empty()) throw std::invalid_argument("emit_plotdata: no records");
  std::filesystem::create_directories(dir);
  const std::string param = records.front().param;
  const auto u = dir / ("utility_vs_" + param + ".csv");
  const auto t = dir / ("throughput_vs_" + param + ".csv");
  write_file(u, series_csv(summarize(
                    records, [](const RunRecord& r) { return r.utility; })));
  write_file(t, series_csv(summarize(records, [](const RunRecord& r) {
               return r.throughput_bps;
             })));
  return {u, t};
}

/// Binary BEV as a plain PGM, occupied cells black and local +y up.
inline std::string bev_pgm(const BevGrid& grid) {
  std::string s = "P2\n" + std::to_string(grid.dim) + ' ' +
                  std::to_string(grid.dim) + "\n255\n";
  for (int row = grid.dim - 1; row >= 0; --row) {
    for (int col = 0; col < grid.dim; ++col) {
      s += grid.at(row, col) ? "0" : "255";
      s += col + 1 < grid.dim ? ' ' : '\n';
    }
  }
  return s;
}

}  // namespace pacp
