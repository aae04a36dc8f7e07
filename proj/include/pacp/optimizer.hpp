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
#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacp/channel.hpp"
#include "pacp/config.hpp"
#include "pacp/geometry.hpp"
#include "pacp/lp.hpp"
#include "pacp/matrix.hpp"
#include "pacp/priority.hpp"
#include "pacp/scenario.hpp"

namespace pacp {

/// Raised when a receiver's budget is negative so no rate assignment can
/// satisfy the compute or energy constraint.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::size_t receiver, const std::string& what)
      : std::runtime_error("infeasible at receiver " +
                           std::to_string(receiver) + ": " + what),
        receiver_(receiver) {}
  std::size_t receiver() const { return receiver_; }

 private:
  std::size_t receiver_;
};

/// Directed link from sender i to receiver j.
struct Link {
  std::size_t i = 0;
  std::size_t j = 0;
  friend auto operator<=>(const Link&, const Link&) = default;
};

/// s_ij for every ordered pair.
class LinkSet {
 public:
  LinkSet() = default;
  explicit LinkSet(std::size_t n) : n_(n), s_(n * n, 0) {}

  std::size_t num_vehicles() const { return n_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(std::size_t i, std::size_t j) const {
    return i < n_ && j < n_ && s_[i * n_ + j] != 0;
  }
  bool contains(Link e) const { return contains(e.i, e.j); }

  void insert(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_) throw std::out_of_range("LinkSet: index");
    if (i == j) throw std::invalid_argument("LinkSet: self link");
    if (!s_[i * n_ + j]) {
      s_[i * n_ + j] = 1;
      ++count_;
    }
  }
  void insert(Link e) { insert(e.i, e.j); }

  void erase(std::size_t i, std::size_t j) {
    if (contains(i, j)) {
      s_[i * n_ + j] = 0;
      --count_;
    }
  }

  LinkSet with(Link e) const {
    LinkSet out = *this;
    out.insert(e);
    return out;
  }

  /// Links in lexicographic (i, j) order.
  std::vector<Link> links() const {
    std::vector<Link> out;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (s_[i * n_ + j]) out.push_back({i, j});
      }
    }
    return out;
  }

  std::vector<std::size_t> senders_into(std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (contains(i, j)) out.push_back(i);
    }
    return out;
  }

  std::size_t in_degree(std::size_t j) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_; ++i) c += contains(i, j) ? 1 : 0;
    return c;
  }

  friend bool operator==(const LinkSet&, const LinkSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> s_;
  std::size_t count_ = 0;
};

/// Compressed rate u, raw rate d and ratio r per ordered pair.
struct RateSolution {
  SquareMatrix u;
  SquareMatrix d;
  SquareMatrix r;

  RateSolution() = default;
  RateSolution(std::size_t n, double r_default)
      : u(n), d(n), r(n, r_default) {}
};

struct UtilityWeights {
  double omega1 = 1e-2;
  double omega2 = 1e-3;
};

/// Per-receiver budgets. gamma and phi are in bits/s; chi(i, j) in joules.
struct ConstraintLedger {
  std::vector<double> gamma;
  std::vector<double> phi;
  SquareMatrix chi;

  double budget(std::size_t j) const { return std::min(gamma[j], phi[j]); }
};

/// Scalar parameters the solver needs, lifted from ScenarioConfig.
struct SolverParams {
  std::size_t num_subchannels = 4;
  double energy_budget_j = 1000.0;
  double tau_t_s = 0.1;
  double tau_c_s = 0.1;
  double energy_per_bit_j = 1e-7;
  double tx_power_w = 8e-3;
  double beta = 10.0;
  double eta = 1.0;
  double r_min = 0.3;
  double r_max = 0.95;
  UtilityWeights weights;
  double coverage_cell = kDefaultCoverageCell;
  bool ego_only = false;
  std::size_t ego = 0;
};

inline SolverParams solver_params(const ScenarioConfig& cfg) {
  SolverParams p;
  p.num_subchannels = static_cast<std::size_t>(cfg.num_subchannels);
  p.energy_budget_j = cfg.energy_budget_j;
  p.tau_t_s = cfg.tau_t_s;
  p.tau_c_s = cfg.tau_c_s;
  p.energy_per_bit_j = cfg.energy_per_bit_j;
  p.tx_power_w = cfg.tx_power_w;
  p.beta = cfg.beta_cycles_per_bit;
  p.eta = cfg.eta;
  p.r_min = cfg.r_min;
  p.r_max = cfg.r_max;
  p.weights = {cfg.omega1, cfg.omega2};
  p.coverage_cell = cfg.coverage_cell_m;
  p.ego_only = cfg.ego_only;
  p.ego = static_cast<std::size_t>(cfg.ego_index);
  return p;
}

/// Everything the link/rate optimization sees of a scenario.
struct ProblemInstance {
  SolverParams params;
  /// C_ij; zero for out-of-range pairs.
  SquareMatrix capacity;
  /// L_ij in [0, 1].
  SquareMatrix distance;
  /// A_i, bits/s.
  std::vector<double> local_rate;
  /// F_j, cycles/s.
  std::vector<double> cpu_hz;
  std::vector<Disc> regions;

  std::size_t size() const { return local_rate.size(); }

  /// Lowest admissible compression ratio for link (i, j).
  double ratio_floor(std::size_t i, std::size_t j) const {
    return std::max(params.r_min, params.eta * std::exp(-distance(i, j)));
  }

  bool receiver_allowed(std::size_t j) const {
    return !params.ego_only || j == params.ego;
  }

  /// In range, a ratio within [floor, r_max] exists, and j may receive.
  bool pair_eligible(std::size_t i, std::size_t j) const {
    return i != j && capacity(i, j) > 0.0 &&
           ratio_floor(i, j) <= params.r_max && receiver_allowed(j);
  }

  /// Energy-derived rate budget of receiver j with `links` incoming links.
  double gamma(std::size_t j, std::size_t links) const {
    const double et = params.energy_per_bit_j * params.tau_c_s;
    return params.energy_budget_j / et -
           params.tau_t_s * params.tx_power_w * static_cast<double>(links) /
               et -
           local_rate[j];
  }

  double phi(std::size_t j) const {
    return cpu_hz[j] / params.beta - local_rate[j];
  }

  double chi(double u) const {
    return u * params.energy_per_bit_j * params.tau_c_s +
           params.tau_t_s * params.tx_power_w;
  }

  /// Right-hand side of the per-receiver energy constraint on sum chi.
  double energy_headroom(std::size_t j) const {
    return params.energy_budget_j -
           params.tau_c_s * params.energy_per_bit_j * local_rate[j];
  }
};

inline ProblemInstance make_instance(const ScenarioState& state,
                                     const ScenarioConfig& cfg) {
  ProblemInstance inst;
  inst.params = solver_params(cfg);
  inst.capacity = capacity_matrix(state.positions(), cfg.channel());
  inst.distance = normalized_distance_matrix(state, cfg.comm_range_m);
  for (const auto& v : state.vehicles) {
    inst.local_rate.push_back(v.local_rate);
    inst.cpu_hz.push_back(v.cpu_hz);
  }
  inst.regions = perception_regions(state);
  return inst;
}

namespace detail {

inline bool within(double lhs, double rhs) {
  return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

inline double receiver_coverage(std::span<const Disc> regions,
                                const std::vector<std::size_t>& senders,
                                double cell) {
  if (senders.empty()) return 0.0;
  std::vector<Disc> discs;
  discs.reserve(senders.size());
  for (std::size_t i : senders) discs.push_back(regions[i]);
  return union_area(discs, cell);
}

}  // namespace detail

/// omega1 * sum P_ij s_ij d_ij + omega2 * sum over receivers j of the area
/// covered by the regions of j's senders.
inline double utility(const LinkSet& s, const SquareMatrix& d,
                      const PriorityMatrix& p, std::span<const Disc> regions,
                      const UtilityWeights& w,
                      double cell = kDefaultCoverageCell) {
  const std::size_t n = s.num_vehicles();
  if (d.size() != n || p.size() != n || regions.size() != n) {
    throw std::invalid_argument("utility: dimension mismatch");
  }
  double quality = 0.0;
  double region = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto senders = s.senders_into(j);
    for (std::size_t i : senders) quality += p(i, j) * d(i, j);
    region += detail::receiver_coverage(regions, senders, cell);
  }
  return w.omega1 * quality + w.omega2 * region;
}

inline double utility(const ProblemInstance& inst, const LinkSet& s,
                      const SquareMatrix& d, const PriorityMatrix& p) {
  return utility(s, d, p, inst.regions, inst.params.weights,
                 inst.params.coverage_cell);
}

/// Discrete derivative of the utility at s in direction e.
inline double marginal_gain(const LinkSet& s, Link e, const SquareMatrix& d,
                            const PriorityMatrix& p,
                            std::span<const Disc> regions,
                            const UtilityWeights& w,
                            double cell = kDefaultCoverageCell) {
  if (s.contains(e)) throw std::invalid_argument("marginal_gain: e in s");
  return utility(s.with(e), d, p, regions, w, cell) -
         utility(s, d, p, regions, w, cell);
}

/// Budgets for link set s and compressed rates u (all zero when null).
inline ConstraintLedger build_ledger(const ProblemInstance& inst,
                                     const LinkSet& s,
                                     const SquareMatrix* u = nullptr) {
  const std::size_t n = inst.size();
  ConstraintLedger ledger;
  ledger.chi = SquareMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    ledger.gamma.push_back(inst.gamma(j, s.in_degree(j)));
    ledger.phi.push_back(inst.phi(j));
    if (inst.receiver_allowed(j) && ledger.phi[j] < 0.0) {
      throw InfeasibleError(j, "local data exceeds compute capacity");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) ledger.chi(i, j) = inst.chi(u ? (*u)(i, j) : 0.0);
    }
  }
  return ledger;
}

/// Compressed rates maximizing sum P_ij u_ij / floor_ij over the links in
/// s. The problem separates by receiver; each receiver's LP is solved with
/// the simplex routine. Rates are also capped at floor_ij * A_i, so that
/// u / floor never exceeds the raw data available.
inline SquareMatrix solve_rate_lp(const ProblemInstance& inst,
                                  const LinkSet& s, const PriorityMatrix& p,
                                  const ConstraintLedger& ledger) {
  const std::size_t n = inst.size();
  constexpr double kScale = 1e-6;  // work in Mbit/s for conditioning
  SquareMatrix u(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto senders = s.senders_into(j);
    if (senders.empty()) continue;
    const double budget = ledger.budget(j);
    if (budget < 0.0) {
      throw InfeasibleError(j, "negative rate budget " +
                                   std::to_string(budget) + " bit/s");
    }
    const std::size_t m = senders.size();
    std::vector<double> c(m);
    std::vector<std::vector<double>> a(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> b(m + 1);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = senders[k];
      const double floor = inst.ratio_floor(i, j);
      c[k] = p(i, j) / floor;
      a[k][k] = 1.0;
      b[k] = std::min(inst.capacity(i, j), floor * inst.local_rate[i]) *
             kScale;
      a[m][k] = 1.0;
    }
    b[m] = budget * kScale;
    const lp::Result res = lp::maximize(c, a, b);
    for (std::size_t k = 0; k < m; ++k) {
      // Clip solver round-off back onto the box.
      u(senders[k], j) = std::min(res.x[k], b[k]) / kScale;
    }
  }
  return u;
}

/// d_ij = min(A_i, u_ij / floor_ij), r_ij = u_ij / d_ij (r_max where u is
/// zero).
inline RateSolution recover_rates(const ProblemInstance& inst,
                                  const SquareMatrix& u) {
  const std::size_t n = inst.size();
  RateSolution out(n, inst.params.r_max);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double uij = u(i, j);
      if (i == j || uij <= 0.0) continue;
      const double a = inst.local_rate[i];
      const double raw = uij / inst.ratio_floor(i, j);
      const double d = raw >= a * (1.0 - 1e-12) ? a : raw;
      out.u(i, j) = uij;
      out.d(i, j) = d;
      out.r(i, j) = uij / d;
    }
  }
  return out;
}

/// Rate link (i, j) would get if it were the receiver's only link.
inline double standalone_rate(const ProblemInstance& inst, std::size_t i,
                              std::size_t j) {
  const double cap = std::min(inst.capacity(i, j),
                              inst.ratio_floor(i, j) * inst.local_rate[i]);
  const double budget = std::min(inst.gamma(j, 1), inst.phi(j));
  return std::max(0.0, std::min(cap, budget));
}

/// Eligible pairs with positive (gated) priority and a positive
/// standalone rate, in lexicographic order.
inline std::vector<Link> candidate_links(const ProblemInstance& inst,
                                         const PriorityMatrix& p) {
  std::vector<Link> out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 0; j < inst.size(); ++j) {
      if (inst.pair_eligible(i, j) && p(i, j) > 0.0 &&
          standalone_rate(inst, i, j) > 0.0) {
        out.push_back({i, j});
      }
    }
  }
  return out;
}

/// Rates for the links in s from the LP, plus standalone rates for every
/// other candidate; the rate data the link-selection stage works with.
inline RateSolution selection_rates(const ProblemInstance& inst,
                                    const LinkSet& s,
                                    const RateSolution& lp_rates,
                                    std::span<const Link> candidates) {
  SquareMatrix u = lp_rates.u;
  for (Link e : candidates) {
    if (!s.contains(e)) u(e.i, e.j) = standalone_rate(inst, e.i, e.j);
  }
  return recover_rates(inst, u);
}

/// Whether adding e to g keeps the subchannel count, the per-receiver
/// energy constraint and the compute constraint satisfied under rates u.
inline bool can_add(const ProblemInstance& inst, const LinkSet& g, Link e,
                    const SquareMatrix& u) {
  if (g.contains(e) || g.size() + 1 > inst.params.num_subchannels) {
    return false;
  }
  double chi_sum = inst.chi(u(e.i, e.j));
  double rate_sum = u(e.i, e.j);
  for (std::size_t i : g.senders_into(e.j)) {
    chi_sum += inst.chi(u(i, e.j));
    rate_sum += u(i, e.j);
  }
  return detail::within(chi_sum, inst.energy_headroom(e.j)) &&
         detail::within(rate_sum, inst.phi(e.j));
}

/// Greedy submodular maximization: repeatedly adds the feasible candidate
/// with the largest positive marginal gain; ties go to the smallest
/// (i, j).
inline LinkSet greedy_links(const ProblemInstance& inst,
                            std::span<const Link> candidates,
                            const RateSolution& rates,
                            const PriorityMatrix& p) {
  const std::size_t n = inst.size();
  const auto& w = inst.params.weights;
  const double cell = inst.params.coverage_cell;
  LinkSet g(n);
  std::vector<std::vector<std::size_t>> senders(n);
  std::vector<double> area(n, 0.0);
  while (g.size() < inst.params.num_subchannels) {
    double best_gain = 0.0;
    const Link* best = nullptr;
    double best_area = 0.0;
    for (const Link& e : candidates) {
      if (!can_add(inst, g, e, rates.u)) continue;
      auto with = senders[e.j];
      with.push_back(e.i);
      const double a = detail::receiver_coverage(inst.regions, with, cell);
      const double gain = w.omega1 * p(e.i, e.j) * rates.d(e.i, e.j) +
                          w.omega2 * (a - area[e.j]);
      if (gain > best_gain) {
        best_gain = gain;
        best = &e;
        best_area = a;
      }
    }
    if (!best) break;
    g.insert(*best);
    senders[best->j].push_back(best->i);
    area[best->j] = best_area;
  }
  return g;
}

/// Starting link set: receivers in index order take their largest-capacity
/// candidate links until K links exist globally, skipping links that would
/// leave the receiver with a negative energy budget.
inline LinkSet initial_links(const ProblemInstance& inst,
                             std::span<const Link> candidates) {
  const std::size_t n = inst.size();
  const std::size_t k_max = inst.params.num_subchannels;
  LinkSet s(n);
  for (std::size_t j = 0; j < n && s.size() < k_max; ++j) {
    std::vector<Link> incoming;
    for (Link e : candidates) {
      if (e.j == j) incoming.push_back(e);
    }
    std::stable_sort(incoming.begin(), incoming.end(),
                     [&](const Link& a, const Link& b) {
                       return inst.capacity(a.i, j) > inst.capacity(b.i, j);
                     });
    std::size_t taken = 0;
    for (Link e : incoming) {
      if (s.size() >= k_max || taken >= k_max) break;
      if (inst.gamma(j, s.in_degree(j) + 1) < 0.0) break;
      s.insert(e);
      ++taken;
    }
  }
  return s;
}

/// Returns a refreshed priority matrix after links g were used with
/// `rates`, given the matrix in force.
using PriorityRefresh = std::function<PriorityMatrix(
    const LinkSet& g, const RateSolution& rates, const PriorityMatrix& p)>;

struct AlternateOptions {
  int max_iterations = 50;
  double rel_tol = 1e-6;
  double gate_threshold = 0.05;
  /// Empty: priorities stay frozen.
  PriorityRefresh refresh;
};

struct AlternationResult {
  LinkSet links;
  RateSolution rates;
  PriorityMatrix priorities;
  double utility = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Utility of every iterate since the last priority re-initialization.
  std::vector<double> history;
};

/// Alternates the rate LP and greedy link selection. A greedy set that
/// does not beat the incumbent by more than rel_tol under the same rate
/// data is discarded, so with frozen priorities the iterate utilities never
/// decrease. A priority change larger than the gate threshold restarts
/// from a fresh initial set.
inline AlternationResult alternate(const ProblemInstance& inst,
                                   const PriorityMatrix& p0,
                                   const AlternateOptions& opt = {}) {
  AlternationResult best;
  PriorityMatrix p = p0;
  std::vector<Link> cands = candidate_links(inst, p);
  LinkSet s = initial_links(inst, cands);
  bool have_best = false;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const RateSolution rates =
        recover_rates(inst, solve_rate_lp(inst, s, p, build_ledger(inst, s)));
    const double u_s = utility(inst, s, rates.d, p);
    if (!have_best || u_s > best.utility) {
      best.links = s;
      best.rates = rates;
      best.priorities = p;
      best.utility = u_s;
      have_best = true;
    }
    best.history.push_back(u_s);
    best.iterations = it;

    const RateSolution sel = selection_rates(inst, s, rates, cands);
    LinkSet g = greedy_links(inst, cands, sel, p);
    if (utility(inst, g, sel.d, p) <=
        u_s + opt.rel_tol * std::max(1.0, std::abs(u_s))) {
      g = s;
    }

    if (opt.refresh) {
      const PriorityMatrix fresh =
          gate(opt.refresh(g, sel, p), opt.gate_threshold);
      if (fresh.max_abs_diff(p) > opt.gate_threshold) {
        p = fresh;
        cands = candidate_links(inst, p);
        s = initial_links(inst, cands);
        have_best = false;
        best.history.clear();
        continue;
      }
    }

    // An unchanged set makes the next iterate an exact repeat, so both the
    // set and the utility are stationary.
    if (g == s) {
      best.converged = true;
      break;
    }
    s = std::move(g);
  }
  if (!have_best) {
    // Cap hit right after a restart: evaluate the fresh set once.
    const RateSolution rates =
        recover_rates(inst, solve_rate_lp(inst, s, p, build_ledger(inst, s)));
    best.links = s;
    best.rates = rates;
    best.priorities = p;
    best.utility = utility(inst, s, rates.d, p);
    best.history.push_back(best.utility);
  }
  return best;
}

/// Exhaustive maximizer of the utility over feasible subsets of the
/// candidates under fixed rate data.
inline std::pair<LinkSet, double> brute_force_utility_opt(
    const ProblemInstance& inst, std::span<const Link> candidates,
    const RateSolution& rates, const PriorityMatrix& p) {
  if (inst.size() > 5 || inst.params.num_subchannels > 4) {
    throw std::invalid_argument(
        "brute_force_utility_opt: needs N <= 5 and K <= 4");
  }
  LinkSet best_set(inst.size());
  double best = 0.0;
  std::function<void(std::size_t, const LinkSet&)> visit =
      [&](std::size_t from, const LinkSet& cur) {
        const double v = utility(inst, cur, rates.d, p);
        if (v > best) {
          best = v;
          best_set = cur;
        }
        for (std::size_t k = from; k < candidates.size(); ++k) {
          if (can_add(inst, cur, candidates[k], rates.u)) {
            visit(k + 1, cur.with(candidates[k]));
          }
        }
      };
  visit(0, LinkSet(inst.size()));
  return {best_set, best};
}

struct Violation {
  std::string constraint;
  Link link;
  double slack = 0.0;
};

/// Minimum slack per constraint family plus every violation found.
struct FeasibilityReport {
  std::vector<Violation> violations;
  double min_slack_subchannels = std::numeric_limits<double>::infinity();
  double min_slack_capacity = std::numeric_limits<double>::infinity();
  double min_slack_ratio = std::numeric_limits<double>::infinity();
  double min_slack_floor = std::numeric_limits<double>::infinity();
  double min_slack_compute = std::numeric_limits<double>::infinity();
  double min_slack_energy = std::numeric_limits<double>::infinity();

  bool feasible() const { return violations.empty(); }
};

/// Checks a solution against every system constraint. Slacks are relative
/// to the constraint's right-hand side; anything below -1e-9 is reported.
inline FeasibilityReport feasibility_check(const ProblemInstance& inst,
                                           const LinkSet& s,
                                           const RateSolution& rates) {
  constexpr double kTol = -1e-9;
  const std::size_t n = inst.size();
  const auto& pr = inst.params;
  FeasibilityReport rep;
  auto record = [&](const char* name, Link e, double lhs, double rhs,
                    double& min_slack) {
    const double slack = (rhs - lhs) / std::max(1.0, std::abs(rhs));
    min_slack = std::min(min_slack, slack);
    if (!(slack >= kTol)) rep.violations.push_back({name, e, slack});
  };

  record("subchannels", {0, 0}, static_cast<double>(s.size()),
         static_cast<double>(pr.num_subchannels), rep.min_slack_subchannels);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Link e{i, j};
      const double u = rates.u(i, j), d = rates.d(i, j), r = rates.r(i, j);
      if (!s.contains(i, j)) {
        if (u != 0.0 || d != 0.0) {
          rep.violations.push_back({"unlinked_rate", e, -std::abs(u)});
        }
        continue;
      }
      if (i == j) rep.violations.push_back({"self_link", e, -1.0});
      record("capacity", e, u, inst.capacity(i, j), rep.min_slack_capacity);
      record("raw_rate", e, d, inst.local_rate[i], rep.min_slack_capacity);
      if (u > 0.0 &&
          std::abs(r * d - u) > 1e-12 * std::max(std::abs(u), 1.0)) {
        rep.violations.push_back({"rate_identity", e, -std::abs(r * d - u)});
      }
      record("ratio_max", e, r, pr.r_max, rep.min_slack_ratio);
      record("ratio_min", e, pr.r_min, r, rep.min_slack_ratio);
      record("distance_floor", e, inst.ratio_floor(i, j), r,
             rep.min_slack_floor);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double rate_sum = 0.0;
    double chi_sum = 0.0;
    for (std::size_t i : s.senders_into(j)) {
      rate_sum += rates.u(i, j);
      chi_sum += inst.chi(rates.u(i, j));
    }
    const Link e{j, j};
    if (inst.receiver_allowed(j) || rate_sum > 0.0) {
      record("compute", e, inst.local_rate[j] + rate_sum,
             inst.cpu_hz[j] / pr.beta, rep.min_slack_compute);
    }
    record("energy", e,
           chi_sum + pr.tau_c_s * pr.energy_per_bit_j * inst.local_rate[j],
           pr.energy_budget_j, rep.min_slack_energy);
  }
  return rep;
}

}  // namespace pacp
