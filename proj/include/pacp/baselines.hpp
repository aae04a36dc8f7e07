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
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacp/optimizer.hpp"

namespace pacp {

/// (sum x)^2 / (n * sum x^2).
inline double jain_index(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("jain_index: empty input");
  double sum = 0.0, sq = 0.0;
  for (double v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument("jain_index: negative value");
    sum += v;
    sq += v * v;
  }
  if (sq == 0.0) throw std::invalid_argument("jain_index: all zero");
  return sum * sum / (static_cast<double>(x.size()) * sq);
}

/// Links, rates, and the number of subchannels given to each link (in
/// lexicographic link order).
struct Allocation {
  std::string scheme;
  LinkSet links;
  RateSolution rates;
  std::vector<double> subchannels;
  int iterations = 1;
  bool converged = true;
};

namespace detail {

inline std::vector<double> one_subchannel_each(const LinkSet& s) {
  return std::vector<double>(s.size(), 1.0);
}

}  // namespace detail

/// Subchannel-fair scheduling: receivers take turns, in index order, each
/// claiming one subchannel for its nearest remaining in-range helper until
/// all K are assigned. Each link sends at min(C_ij, floor_ij * A_i) at the
/// distance-floor ratio, scaled down uniformly per receiver when the
/// receiver's budget is short.
inline Allocation fts_allocate(const ProblemInstance& inst) {
  const std::size_t n = inst.size();
  const std::size_t k_max = inst.params.num_subchannels;
  Allocation out;
  out.scheme = "fts";
  out.links = LinkSet(n);

  std::vector<std::vector<std::size_t>> queue(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.pair_eligible(i, j)) queue[j].push_back(i);
    }
    std::stable_sort(queue[j].begin(), queue[j].end(),
                     [&](std::size_t a, std::size_t b) {
                       return inst.distance(a, j) < inst.distance(b, j);
                     });
  }
  std::vector<std::size_t> next(n, 0);
  bool progress = true;
  while (out.links.size() < k_max && progress) {
    progress = false;
    for (std::size_t j = 0; j < n && out.links.size() < k_max; ++j) {
      if (next[j] >= queue[j].size()) continue;
      if (inst.gamma(j, out.links.in_degree(j) + 1) <= 0.0) continue;
      out.links.insert(queue[j][next[j]++], j);
      progress = true;
    }
  }

  SquareMatrix u(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto senders = out.links.senders_into(j);
    if (senders.empty()) continue;
    double want = 0.0;
    for (std::size_t i : senders) {
      u(i, j) = std::min(inst.capacity(i, j),
                         inst.ratio_floor(i, j) * inst.local_rate[i]);
      want += u(i, j);
    }
    const double budget = std::min(inst.gamma(j, senders.size()), inst.phi(j));
    if (budget <= 0.0) {
      for (std::size_t i : senders) {
        u(i, j) = 0.0;
        out.links.erase(i, j);
      }
      continue;
    }
    if (want > budget) {
      const double scale = budget / want;
      for (std::size_t i : senders) u(i, j) *= scale;
    }
  }
  out.rates = recover_rates(inst, u);
  out.subchannels = detail::one_subchannel_each(out.links);
  return out;
}

/// Weights that turn the rate objective sum P_ij u_ij / floor_ij into the
/// compressed throughput sum u_ij.
inline PriorityMatrix throughput_weights(const ProblemInstance& inst) {
  PriorityMatrix w(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 0; j < inst.size(); ++j) {
      if (i != j) w(i, j) = inst.ratio_floor(i, j);
    }
  }
  return w;
}

/// Priority-agnostic throughput maximization: the PACP solver run on the
/// compressed throughput with no coverage term. An emulation of the
/// distributed scheme, whose message protocol is not reproduced.
inline Allocation dmdda_allocate(const ProblemInstance& inst,
                                 int max_iterations = 50,
                                 double rel_tol = 1e-6) {
  ProblemInstance throughput = inst;
  throughput.params.weights.omega2 = 0.0;
  AlternateOptions opt;
  opt.max_iterations = max_iterations;
  opt.rel_tol = rel_tol;
  const AlternationResult res =
      alternate(throughput, throughput_weights(inst), opt);
  Allocation out;
  out.scheme = "dmdda-emulated";
  out.links = res.links;
  out.rates = res.rates;
  out.subchannels = detail::one_subchannel_each(out.links);
  out.iterations = res.iterations;
  out.converged = res.converged;
  return out;
}

/// Every vehicle perceives alone.
inline Allocation no_fusion(std::size_t n, double r_max = 1.0) {
  Allocation out;
  out.scheme = "nofusion";
  out.links = LinkSet(n);
  out.rates = RateSolution(n, r_max);
  return out;
}

}  // namespace pacp
