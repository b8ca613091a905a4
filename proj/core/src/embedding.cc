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

#include "skim/embedding.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "skim/error.h"

namespace skim {

DenseVector::DenseVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "vector must have dim >= 1");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "vector has non-finite value");
    }
  }
}

double DenseVector::Norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

void ValidateAnnotation(const EntityAnnotation& annotation) {
  if (annotation.entity_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "entity id is empty");
  }
  if (!(annotation.weight >= 0.0 && annotation.weight <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "weight of '" + annotation.entity_id + "' outside [0, 1]");
  }
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dim must be >= 1");
  }
}

void EmbeddingTable::Insert(std::string entity_id, DenseVector vector) {
  if (vector.dim() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding for '" + entity_id + "' has dim " +
                    std::to_string(vector.dim()) + ", table has " +
                    std::to_string(dim_));
  }
  auto [it, inserted] = entries_.try_emplace(entity_id, std::move(vector));
  if (!inserted) {
    throw Error(ErrorCode::kDuplicateEntity,
                "duplicate entity '" + entity_id + "'");
  }
  order_.push_back(std::move(entity_id));
}

const DenseVector* EmbeddingTable::Find(std::string_view entity_id) const {
  auto it = entries_.find(std::string(entity_id));
  return it == entries_.end() ? nullptr : &it->second;
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine of vectors with dims " + std::to_string(u.size()) +
                    " and " + std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  }
  double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  // Rounding can push |c| marginally past 1.
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

double Cosine(const DenseVector& u, const DenseVector& v) {
  return Cosine(u.values(), v.values());
}

DenseVector AggregateSemantic(std::span<const EntityAnnotation> annotations,
                              const EmbeddingTable& table,
                              std::size_t* missing) {
  // Summing in (id, weight) order makes the result bit-identical under any
  // permutation of the input list.
  std::vector<const EntityAnnotation*> ordered;
  ordered.reserve(annotations.size());
  for (const EntityAnnotation& a : annotations) ordered.push_back(&a);
  std::sort(ordered.begin(), ordered.end(),
            [](const EntityAnnotation* x, const EntityAnnotation* y) {
              if (x->entity_id != y->entity_id) {
                return x->entity_id < y->entity_id;
              }
              return x->weight < y->weight;
            });

  std::vector<double> sum(table.dim(), 0.0);
  std::size_t found = 0;
  std::size_t misses = 0;
  for (const EntityAnnotation* ap : ordered) {
    const EntityAnnotation& a = *ap;
    const DenseVector* s = table.Find(a.entity_id);
    if (s == nullptr) {
      ++misses;
      continue;
    }
    ++found;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += a.weight * (*s)[i];
  }
  if (missing != nullptr) *missing += misses;
  if (found == 0) {
    throw Error(ErrorCode::kNoKnownEntities,
                "none of " + std::to_string(annotations.size()) +
                    " entities is in the embedding table");
  }
  const double inv = 1.0 / static_cast<double>(found);
  for (double& v : sum) v *= inv;
  return DenseVector(std::move(sum));
}

}  // namespace skim
