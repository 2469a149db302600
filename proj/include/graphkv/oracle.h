// Copyright 2026 The GraphKV Authors.
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

#ifndef GRAPHKV_ORACLE_H_
#define GRAPHKV_ORACLE_H_

// Dense, naive reference implementations. Everything here is O(n^2) or worse
// and deliberately shares no code with the graph/propagation fast path; it
// exists to check that path in tests and acceptance runs.

#include <cstddef>
#include <vector>

#include "graphkv/graph.h"
#include "graphkv/kv_model.h"
#include "graphkv/propagation.h"

namespace graphkv::oracle {

// n x n cosine matrix over the rows of m, in double precision.
std::vector<std::vector<double>> dense_full_similarity(const Matrix& m);

// Same contract as refine_scores, computed from the full n x n similarity
// matrix of the kind-selected vector pair with plain loops.
ScoreVector dense_reference_refine(const LayerCache& cache,
                                   const ScoreVector& scores,
                                   const SourceSelection& sel,
                                   std::size_t budget, SimilarityKind kind,
                                   const PropagationConfig& cfg);

}  // namespace graphkv::oracle

#endif  // GRAPHKV_ORACLE_H_
