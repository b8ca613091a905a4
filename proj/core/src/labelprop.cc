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

#include "skim/labelprop.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>
#include <utility>

#include "parallel.h"
#include "skim/error.h"

namespace skim {
namespace {

// Internal row: labels are remapped to dense slots in ascending label order,
// so slot order and label order agree.
struct Row {
  std::vector<std::uint32_t> slots;
  std::vector<double> scores;

  std::size_t size() const { return slots.size(); }
};

class Accumulator {
 public:
  explicit Accumulator(std::size_t num_slots)
      : acc_(num_slots, 0.0), mark_(num_slots, 0) {}

  void Add(const Row& row, double factor) {
    if (row.size() == acc_.size()) {
      // A full row holds every slot in order; skip the bookkeeping.
      dense_ = true;
      for (std::size_t k = 0; k < row.size(); ++k) {
        acc_[k] += factor * row.scores[k];
      }
      return;
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      Add(row.slots[k], factor * row.scores[k]);
    }
  }

  void Add(std::uint32_t slot, double value) {
    if (!mark_[slot]) {
      mark_[slot] = 1;
      touched_.push_back(slot);
    }
    acc_[slot] += value;
  }

  // Writes acc / denom for every touched slot into `out` in slot order and
  // resets the accumulator.
  void Finish(double denom, Row& out) {
    out.slots.clear();
    out.scores.clear();
    auto emit = [&](std::uint32_t s) {
      const double v = acc_[s] / denom;
      if (v > 0.0) {
        out.slots.push_back(s);
        out.scores.push_back(v);
      }
      acc_[s] = 0.0;
      mark_[s] = 0;
    };
    if (dense_) {
      for (std::uint32_t s = 0; s < acc_.size(); ++s) emit(s);
    } else if (touched_.size() * 4 >= acc_.size()) {
      for (std::uint32_t s = 0; s < acc_.size(); ++s) {
        if (mark_[s]) emit(s);
      }
    } else {
      std::sort(touched_.begin(), touched_.end());
      for (std::uint32_t s : touched_) emit(s);
    }
    touched_.clear();
    dense_ = false;
  }

 private:
  std::vector<double> acc_;
  std::vector<std::uint8_t> mark_;
  std::vector<std::uint32_t> touched_;
  bool dense_ = false;
};

void PruneTopK(Row& row, std::size_t k) {
  if (row.size() <= k) return;
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row.scores[a] != row.scores[b]) {
                        return row.scores[a] > row.scores[b];
                      }
                      return row.slots[a] < row.slots[b];
                    });
  order.resize(k);
  std::sort(order.begin(), order.end());
  Row pruned;
  pruned.slots.reserve(k);
  pruned.scores.reserve(k);
  for (std::size_t i : order) {
    pruned.slots.push_back(row.slots[i]);
    pruned.scores.push_back(row.scores[i]);
  }
  row = std::move(pruned);
}

double MaxAbsChange(const Row& x, const Row& y) {
  double best = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x.slots[i] < y.slots[j])) {
      best = std::max(best, std::abs(x.scores[i++]));
    } else if (i == x.size() || y.slots[j] < x.slots[i]) {
      best = std::max(best, std::abs(y.scores[j++]));
    } else {
      best = std::max(best, std::abs(x.scores[i++] - y.scores[j++]));
    }
  }
  return best;
}

std::vector<LabelDistribution> ToDistributions(
    const std::vector<Row>& rows, const std::vector<LabelId>& slot_labels) {
  std::vector<LabelDistribution> out;
  out.reserve(rows.size());
  for (const Row& row : rows) {
    std::vector<LabelScore> entries;
    entries.reserve(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      entries.push_back({slot_labels[row.slots[k]], row.scores[k]});
    }
    out.emplace_back(std::move(entries));
  }
  return out;
}

}  // namespace

LabelDistribution::LabelDistribution(std::vector<LabelScore> entries) {
  for (const LabelScore& e : entries) {
    if (!std::isfinite(e.score)) {
      throw Error(ErrorCode::kInvalidArgument, "label score is not finite");
    }
  }
  std::erase_if(entries, [](const LabelScore& e) { return e.score <= 0.0; });
  std::sort(entries.begin(), entries.end(),
            [](const LabelScore& a, const LabelScore& b) {
              return a.label < b.label;
            });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1].label == entries[i].label) {
      throw Error(ErrorCode::kInvalidArgument, "repeated label");
    }
  }
  entries_ = std::move(entries);
}

double LabelDistribution::Get(LabelId label) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), label,
      [](const LabelScore& e, LabelId l) { return e.label < l; });
  return (it != entries_.end() && it->label == label) ? it->score : 0.0;
}

double SquaredDistance(const LabelDistribution& x, const LabelDistribution& y) {
  auto a = x.entries();
  auto b = y.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double d;
    if (j == b.size() || (i < a.size() && a[i].label < b[j].label)) {
      d = a[i++].score;
    } else if (i == a.size() || b[j].label < a[i].label) {
      d = b[j++].score;
    } else {
      d = a[i++].score - b[j++].score;
    }
    sum += d * d;
  }
  return sum;
}

SeedAssignment MakeIdentitySeeds(const SummaryGraph& graph) {
  SeedAssignment seeds;
  seeds.seeds.reserve(graph.num_segments());
  for (std::size_t p = 0; p < graph.num_segments(); ++p) {
    seeds.seeds.push_back({SummaryGraph::SegmentNode(p), graph.segment_index(p),
                           static_cast<LabelId>(graph.segment_index(p))});
  }
  return seeds;
}

void ValidateSeeds(const SummaryGraph& graph, const SeedAssignment& seeds) {
  if (seeds.seeds.size() != graph.num_segments()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need exactly one seed per segment node");
  }
  std::unordered_set<LabelId> labels;
  for (std::size_t p = 0; p < seeds.seeds.size(); ++p) {
    const Seed& s = seeds.seeds[p];
    if (s.node != SummaryGraph::SegmentNode(p)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "seeds must be ordered by segment node and never seed the "
                  "query node");
    }
    if (!labels.insert(s.label).second) {
      throw Error(ErrorCode::kInvalidArgument, "seed labels must be unique");
    }
  }
}

double Objective(const SummaryGraph& graph,
                 std::span<const LabelDistribution> distributions,
                 const SeedAssignment& seeds) {
  if (distributions.size() != graph.num_nodes()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one distribution per graph node");
  }
  const LabelDistribution& query = distributions[kQueryNode];
  double semantic = 0.0;
  for (std::size_t p = 0; p < graph.num_segments(); ++p) {
    const double w = graph.query_weight(p);
    if (w > 0.0) {
      semantic += w * SquaredDistance(
                          query, distributions[SummaryGraph::SegmentNode(p)]);
    }
  }
  double visual = 0.0;
  for (const VisualEdge& e : graph.visual_edges()) {
    if (e.weight > 0.0) {
      visual += e.weight *
                SquaredDistance(distributions[SummaryGraph::SegmentNode(e.a)],
                                distributions[SummaryGraph::SegmentNode(e.b)]);
    }
  }
  double seed = 0.0;
  for (const Seed& s : seeds.seeds) {
    const LabelDistribution& d = distributions[s.node];
    // |Y - L|^2 = |L|^2 - 2 L[seed] + 1, expanded to avoid building Y.
    double own = d.Get(s.label);
    double norm2 = 0.0;
    for (const LabelScore& e : d.entries()) norm2 += e.score * e.score;
    seed += norm2 - own * own + (1.0 - own) * (1.0 - own);
  }
  return graph.lambda_semantic() * semantic + graph.lambda_visual() * visual +
         graph.lambda_seed() * seed;
}

PropagationResult Propagate(const SummaryGraph& graph,
                            const SeedAssignment& seeds,
                            const PropagationConfig& config) {
  if (config.max_iters < 1 || !(config.tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "need max_iters >= 1 and tolerance > 0");
  }
  if (config.prune_top_k && *config.prune_top_k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "prune_top_k must be >= 1");
  }
  ValidateSeeds(graph, seeds);
  const std::size_t n = graph.num_segments();
  const double ls = graph.lambda_semantic();
  const double lv = graph.lambda_visual();
  const double lseed = graph.lambda_seed();

  double query_total = 0.0;
  for (double w : graph.query_weights()) query_total += w;
  if (!(ls * query_total > 0.0)) {
    throw Error(ErrorCode::kIsolatedQuery,
                "query node has no positive semantic edge");
  }
  const double query_denom = ls * query_total;

  std::vector<LabelId> slot_labels;
  slot_labels.reserve(n);
  for (const Seed& s : seeds.seeds) slot_labels.push_back(s.label);
  std::sort(slot_labels.begin(), slot_labels.end());
  std::vector<std::uint32_t> seed_slot(n);
  for (std::size_t p = 0; p < n; ++p) {
    seed_slot[p] = static_cast<std::uint32_t>(
        std::lower_bound(slot_labels.begin(), slot_labels.end(),
                         seeds.seeds[p].label) -
        slot_labels.begin());
  }

  std::vector<Row> current(graph.num_nodes());
  for (std::size_t p = 0; p < n; ++p) {
    current[SummaryGraph::SegmentNode(p)].slots = {seed_slot[p]};
    current[SummaryGraph::SegmentNode(p)].scores = {1.0};
  }
  std::vector<Row> next(graph.num_nodes());
  std::vector<double> node_delta(graph.num_nodes(), 0.0);

  PropagationResult result;
  if (config.record_trace) {
    result.trace.push_back(
        {0, Objective(graph, ToDistributions(current, slot_labels), seeds), 0.0,
         n});
  }
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    internal::ParallelFor(
        graph.num_nodes(), config.threads,
        [&](std::size_t begin, std::size_t end) {
          Accumulator acc(n);
          for (std::size_t node = begin; node < end; ++node) {
            Row& out = next[node];
            if (node == kQueryNode) {
              for (std::size_t p = 0; p < n; ++p) {
                const double w = graph.query_weight(p);
                if (w > 0.0) acc.Add(current[SummaryGraph::SegmentNode(p)], ls * w);
              }
              acc.Finish(query_denom, out);
            } else {
              const std::size_t p = node - 1;
              const double wq = graph.query_weight(p);
              const double denom = ls * wq + lv * graph.visual_degree(p) + lseed;
              if (!(denom > 0.0)) {
                out = current[node];
              } else {
                if (ls * wq > 0.0) acc.Add(current[kQueryNode], ls * wq);
                if (lv > 0.0) {
                  for (const Neighbor& nb : graph.neighbors(p)) {
                    acc.Add(current[SummaryGraph::SegmentNode(nb.position)],
                            lv * nb.weight);
                  }
                }
                if (lseed > 0.0) acc.Add(seed_slot[p], lseed);
                acc.Finish(denom, out);
              }
            }
            if (config.prune_top_k) PruneTopK(out, *config.prune_top_k);
            node_delta[node] = MaxAbsChange(current[node], out);
          }
        });
    std::swap(current, next);
    const double delta =
        *std::max_element(node_delta.begin(), node_delta.end());
    result.iterations_run = iter;
    if (config.record_trace) {
      SweepStats stats;
      stats.iteration = iter;
      stats.max_delta = delta;
      for (const Row& r : current) stats.active_labels += r.size();
      stats.objective =
          Objective(graph, ToDistributions(current, slot_labels), seeds);
      result.trace.push_back(stats);
    }
    if (delta <= config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.distributions = ToDistributions(current, slot_labels);
  result.final_objective = Objective(graph, result.distributions, seeds);
  return result;
}

Ranking RankByQueryLabels(const PropagationResult& result,
                          const SeedAssignment& seeds, Model model) {
  if (result.distributions.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "propagation result has no query distribution");
  }
  const LabelDistribution& query = result.distributions[kQueryNode];
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(seeds.seeds.size());
  for (const Seed& s : seeds.seeds) {
    scored.emplace_back(query.Get(s.label), s.segment_index);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  Ranking ranking;
  ranking.model = model;
  ranking.items.reserve(scored.size());
  for (std::size_t r = 0; r < scored.size(); ++r) {
    ranking.items.push_back({scored[r].second, scored[r].first, r + 1});
  }
  return ranking;
}

void WriteTraceCsv(std::ostream& out, std::span<const SweepStats> trace) {
  out << "iteration,objective,max_delta,active_labels\n";
  const auto precision = out.precision(17);
  for (const SweepStats& s : trace) {
    out << s.iteration << ',' << s.objective << ',' << s.max_delta << ','
        << s.active_labels << '\n';
  }
  out.precision(precision);
}

}  // namespace skim
