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

#include "agreesim/synth.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "agreesim/errors.h"
#include "agreesim/rng.h"

namespace agreesim {

void SynthConfig::Validate() const {
  if (n_docs == 0) throw ValidationError("n_docs must be at least 1");
  if (annotators.empty()) {
    throw ValidationError("annotator count distribution is empty");
  }
  double total = 0.0;
  for (const auto& [count, weight] : annotators) {
    if (count < 1) throw ValidationError("annotator counts must be >= 1");
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw ValidationError("annotator count weights must be non-negative");
    }
    total += weight;
  }
  if (!(total > 0.0)) {
    throw ValidationError("annotator count weights must have positive sum");
  }
  if (const auto* dirichlet = std::get_if<DirichletMode>(&mode)) {
    if (dirichlet->alpha.size() != scheme.size()) {
      throw ValidationError("dirichlet alpha needs one entry per label");
    }
    for (double a : dirichlet->alpha) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw ValidationError("dirichlet alpha entries must be > 0");
      }
    }
  } else {
    const auto& calibrated = std::get<MatrixCalibratedMode>(mode);
    if (!(calibrated.matrix.scheme() == scheme)) {
      throw ValidationError("calibration matrix scheme does not match");
    }
    if (calibrated.matrix.Total() == 0) {
      throw ValidationError("calibration matrix has no counts");
    }
  }
}

CalibratedEmission CalibrateEmission(const ConflationMatrix& matrix) {
  const std::size_t k = matrix.size();
  const double total = static_cast<double>(matrix.Total());
  if (total <= 0.0) throw ValidationError("calibration matrix has no counts");

  std::vector<double> marginal(k);
  for (std::size_t a = 0; a < k; ++a) {
    marginal[a] = static_cast<double>(matrix.RowSum(a)) / total;
  }
  // Restrict to labels that actually occur; the rest get point emissions
  // and zero prior.
  std::vector<std::size_t> live;
  for (std::size_t a = 0; a < k; ++a) {
    if (marginal[a] > 0.0) live.push_back(a);
  }
  const auto n = static_cast<Eigen::Index>(live.size());
  Eigen::MatrixXd scaled(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t a = live[i];
      const std::size_t b = live[j];
      scaled(i, j) = static_cast<double>(matrix.counts()[a][b]) / total /
                     std::sqrt(marginal[a] * marginal[b]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scaled);
  Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root = solver.eigenvectors() * roots.asDiagonal() *
                               solver.eigenvectors().transpose();

  CalibratedEmission out;
  out.prior = marginal;
  out.emission.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a) out.emission[a][a] = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t a = live[i];
    std::vector<double> row(k, 0.0);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t b = live[j];
      const double value =
          root(i, j) * std::sqrt(marginal[b]) / std::sqrt(marginal[a]);
      row[b] = std::max(value, 0.0);
      sum += row[b];
    }
    if (sum > 0.0) {
      for (double& v : row) v /= sum;
      out.emission[a] = std::move(row);
    }
  }
  return out;
}

namespace {

int DrawAnnotatorCount(const SynthConfig& config, Rng& rng) {
  if (config.annotators.size() == 1) return config.annotators.front().first;
  std::vector<double> weights;
  for (const auto& [count, weight] : config.annotators) weights.push_back(weight);
  return config.annotators[rng.Categorical(weights)].first;
}

std::vector<double> DrawDirichlet(const std::vector<double>& alpha, Rng& rng) {
  std::vector<double> draw(alpha.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    std::gamma_distribution<double> gamma(alpha[i], 1.0);
    draw[i] = gamma(rng.engine());
    sum += draw[i];
  }
  if (!(sum > 0.0)) {
    // Every component underflowed: all mass goes to the largest alpha.
    std::size_t best = 0;
    for (std::size_t i = 1; i < alpha.size(); ++i) {
      if (alpha[i] > alpha[best]) best = i;
    }
    std::fill(draw.begin(), draw.end(), 0.0);
    draw[best] = 1.0;
    return draw;
  }
  for (double& d : draw) d /= sum;
  return draw;
}

}  // namespace

Dataset Generate(const SynthConfig& config) {
  config.Validate();
  Rng rng(config.seed);
  const LabelScheme& scheme = config.scheme;

  std::optional<CalibratedEmission> emission;
  if (const auto* calibrated = std::get_if<MatrixCalibratedMode>(&config.mode)) {
    emission = CalibrateEmission(calibrated->matrix);
  }

  std::vector<Document> documents;
  documents.reserve(config.n_docs);
  for (std::size_t d = 0; d < config.n_docs; ++d) {
    const int n_labels = DrawAnnotatorCount(config, rng);
    std::vector<double> label_probs;
    if (emission) {
      label_probs = emission->emission[rng.Categorical(emission->prior)];
    } else {
      label_probs =
          DrawDirichlet(std::get<DirichletMode>(config.mode).alpha, rng);
    }
    Document doc{"d" + std::to_string(d + 1), {}};
    for (int i = 0; i < n_labels; ++i) {
      doc.labels.push_back(scheme.ValueAt(rng.Categorical(label_probs)));
    }
    documents.push_back(std::move(doc));
  }
  return Dataset(scheme, std::move(documents));
}

}  // namespace agreesim
