/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Synthetic multi-annotator datasets.
//
// Two generators are available. The Dirichlet generator draws a label
// distribution per document and then each annotator's label from it. The
// matrix-calibrated generator draws a latent label per document and each
// annotator's label from an emission distribution chosen so that, in
// expectation, two annotators of the same document co-occur exactly as in
// the target conflation matrix. Relearning a conflation matrix from the
// output therefore recovers the target's row distributions.

#ifndef AGREESIM_SYNTH_H_
#define AGREESIM_SYNTH_H_

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "agreesim/conflation.h"
#include "agreesim/label_core.h"

namespace agreesim {

struct DirichletMode {
  // One concentration per scheme label (ascending value order), all > 0.
  std::vector<double> alpha;
};

struct MatrixCalibratedMode {
  ConflationMatrix matrix;
};

struct SynthConfig {
  LabelScheme scheme = ControversyScheme();
  std::size_t n_docs = 343;
  // (annotator count, weight) pairs; a single entry means a constant count.
  std::vector<std::pair<int, double>> annotators = {{3, 1.0}};
  std::variant<DirichletMode, MatrixCalibratedMode> mode =
      MatrixCalibratedMode{ControversyReferenceMatrix()};
  uint64_t seed = 0;

  // Throws ValidationError on an invalid combination.
  void Validate() const;
};

// Latent-label prior and per-latent emission rows for a target matrix.
struct CalibratedEmission {
  std::vector<double> prior;
  std::vector<std::vector<double>> emission;
};

// With J the normalised co-occurrence matrix and m its marginal, the
// emission is E = diag(m)^-1/2 sqrt(D) diag(m)^1/2 where
// D = diag(m)^-1/2 J diag(m)^-1/2, and the prior is m. Then
// E^T diag(m) E = J. Negative eigenvalues of D and negative entries of E
// (possible for matrices that are not co-occurrence-like) are clipped to 0
// and rows renormalised. Labels with no mass keep a point emission.
CalibratedEmission CalibrateEmission(const ConflationMatrix& matrix);

// Document ids are "d1" .. "dN". Deterministic given the config.
Dataset Generate(const SynthConfig& config);

}  // namespace agreesim

#endif  // AGREESIM_SYNTH_H_
