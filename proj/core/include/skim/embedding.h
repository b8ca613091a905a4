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

#ifndef SKIM_EMBEDDING_H_
#define SKIM_EMBEDDING_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skim {

// A finite, non-empty vector of reals. Construction validates both.
class DenseVector {
 public:
  explicit DenseVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double Norm() const;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

// An entity identifier with a detector or linker confidence in [0, 1].
struct EntityAnnotation {
  std::string entity_id;
  double weight = 1.0;

  friend bool operator==(const EntityAnnotation&,
                         const EntityAnnotation&) = default;
};

// Throws kInvalidArgument for an empty id or a weight outside [0, 1].
void ValidateAnnotation(const EntityAnnotation& annotation);

// Entity id -> semantic embedding. All vectors share one dimension.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  // Throws kDuplicateEntity or kDimensionMismatch.
  void Insert(std::string entity_id, DenseVector vector);

  // Returns nullptr when the id is absent.
  const DenseVector* Find(std::string_view entity_id) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return order_.size(); }
  // Ids in insertion order.
  const std::vector<std::string>& ids() const { return order_; }

 private:
  std::size_t dim_;
  std::unordered_map<std::string, DenseVector> entries_;
  std::vector<std::string> order_;
};

// dot(u, v) / (|u| |v|). Throws kDimensionMismatch when the sizes differ and
// kZeroVector when either norm is zero.
double Cosine(std::span<const double> u, std::span<const double> v);
double Cosine(const DenseVector& u, const DenseVector& v);

// Weighted semantic representation of an annotation list:
//
//   (1 / |E|) * sum_{e in E} w_e * S_e
//
// where E is the subset of annotations whose entity is present in `table`.
// The divisor is the count of retained annotations, not the sum of their
// weights. Annotations missing from the table are counted into `*missing`
// when it is non-null. Throws kNoKnownEntities when nothing is retained.
DenseVector AggregateSemantic(std::span<const EntityAnnotation> annotations,
                              const EmbeddingTable& table,
                              std::size_t* missing = nullptr);

}  // namespace skim

#endif  // SKIM_EMBEDDING_H_
