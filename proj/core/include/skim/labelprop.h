// Copyright 2026 The Skim Authors
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

#ifndef SKIM_LABELPROP_H_
#define SKIM_LABELPROP_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "skim/graph.h"
#include "skim/rankers.h"

namespace skim {

using LabelId = std::uint64_t;

struct LabelScore {
  LabelId label = 0;
  double score = 0.0;

  friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

// Sparse label -> confidence map. Entries are sorted by label and every
// stored score is finite and positive.
class LabelDistribution {
 public:
  LabelDistribution() = default;
  // Sorts, drops non-positive scores. Throws kInvalidArgument on repeated
  // labels or non-finite scores.
  explicit LabelDistribution(std::vector<LabelScore> entries);

  double Get(LabelId label) const;
  std::span<const LabelScore> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const LabelDistribution&,
                         const LabelDistribution&) = default;

 private:
  std::vector<LabelScore> entries_;
};

// Squared L2 distance over the union of supports.
double SquaredDistance(const LabelDistribution& x, const LabelDistribution& y);

struct Seed {
  NodeId node = 0;  // a segment node, never kQueryNode
  std::size_t segment_index = 0;
  LabelId label = 0;
};

// Seed label (score 1.0) per segment node.
struct SeedAssignment {
  std::vector<Seed> seeds;  // one per segment node, ordered by node
};

// Every segment node seeded with its own segment index as label.
SeedAssignment MakeIdentitySeeds(const SummaryGraph& graph);

// Throws kInvalidArgument unless every segment node has exactly one seed,
// labels are unique and the query node is unseeded.
void ValidateSeeds(const SummaryGraph& graph, const SeedAssignment& seeds);

struct PropagationConfig {
  int max_iters = 50;
  // Stop once no (node, label) entry moves by more than this between sweeps.
  double tolerance = 1e-6;
  // Keep only the strongest labels per node after each sweep.
  std::optional<std::size_t> prune_top_k;
  int threads = 1;
  // Evaluate the objective at the start and after every sweep into
  // PropagationResult::trace (entry 0 is the initial state).
  bool record_trace = false;
};

struct SweepStats {
  int iteration = 0;
  double objective = 0.0;
  double max_delta = 0.0;
  std::size_t active_labels = 0;  // stored (node, label) entries
};

struct PropagationResult {
  std::vector<LabelDistribution> distributions;  // indexed by NodeId
  int iterations_run = 0;
  double final_objective = 0.0;
  bool converged = false;
  std::vector<SweepStats> trace;
};

// Objective minimized by propagation:
//
//   ls   * sum_i   w_qi * |L_q - L_i|^2
// + lv   * sum_i<j w_ij * |L_i - L_j|^2
// + lsd  * sum_i        |Y_i - L_i|^2
//
// with Y_i the seed distribution {seed_i: 1}. `distributions` is indexed by
// NodeId and must cover every node.
double Objective(const SummaryGraph& graph,
                 std::span<const LabelDistribution> distributions,
                 const SeedAssignment& seeds);

// Synchronous sweeps, each replacing every node's distribution by the exact
// minimizer of the objective with its neighbors held at the previous sweep:
//
//   L_q <- sum_i w_qi L_i / sum_i w_qi
//   L_i <- (ls w_qi L_q + lv sum_j w_ij L_j + lsd Y_i)
//          / (ls w_qi + lv sum_j w_ij + lsd)
//
// Starts from L_i = Y_i and an empty L_q. Throws kIsolatedQuery when the
// query node has no positive semantic edge (or lambda_semantic is 0).
PropagationResult Propagate(const SummaryGraph& graph,
                            const SeedAssignment& seeds,
                            const PropagationConfig& config = {});

// Segments ordered by the query node's score for their seed label,
// descending, ties to the smaller segment index. Labels that never reached
// the query node score 0.
Ranking RankByQueryLabels(const PropagationResult& result,
                          const SeedAssignment& seeds,
                          Model model = Model::kGraph);

// CSV with header "iteration,objective,max_delta,active_labels".
void WriteTraceCsv(std::ostream& out, std::span<const SweepStats> trace);

}  // namespace skim

#endif  // SKIM_LABELPROP_H_
