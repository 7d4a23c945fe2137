#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "patret/corpus.hpp"
#include "patret/fusion.hpp"
#include "patret/rng.hpp"
#include "patret/types.hpp"

namespace patret {

// Single-hidden-layer multilabel classifier: input -> ReLU(hidden) ->
// dropout (training only) -> sigmoid(output), trained with Adam on mean
// binary cross entropy.
struct MlpConfig {
  Index input_dim = 0;
  Index hidden_dim = 384;
  Real dropout_rate = 0.1;
  Index output_dim = 0;
  Real learning_rate = 5e-5;
  Index batch_size = 16;
  int epochs = 10;
  std::array<int, 3> split_ratios{8, 1, 1};
  std::uint64_t seed = 42;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real adam_epsilon = 1e-8;

  void validate() const;
};

struct MlpParams {
  Matrix w1;  // hidden x input
  Vector b1;  // hidden
  Matrix w2;  // output x hidden
  Vector b2;  // output
};

struct MlpGradients {
  Matrix w1;
  Vector b1;
  Matrix w2;
  Vector b2;
};

// Glorot-uniform weights, zero biases; deterministic under config.seed.
MlpParams init_params(const MlpConfig& config);

// Probability vector for one input. training=true applies inverted dropout
// driven by dropout_rng (required in that case).
Vector forward(const MlpConfig& config, const MlpParams& params,
               const Vector& input, bool training = false,
               Rng* dropout_rng = nullptr);

struct Dataset {
  Matrix inputs;  // N x input_dim
  Matrix labels;  // N x output_dim, multi-hot
  std::vector<std::string> ids;

  Index size() const { return inputs.rows(); }
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

// Disjoint partition by seeded shuffle; each part's size is within 1 of
// the exact ratio share. Requires at least 10 examples.
SplitIndices split_dataset(std::size_t count, std::array<int, 3> ratios,
                           std::uint64_t seed);

Dataset take(const Dataset& dataset, const std::vector<std::size_t>& indices);

// Mean BCE over examples and label bits, computed through logits for
// numerical stability. Gradients exclude dropout (the finite-difference
// tests drive this directly).
Real bce_loss(const MlpConfig& config, const MlpParams& params,
              const Matrix& inputs, const Matrix& labels);
Real bce_loss_and_gradients(const MlpConfig& config, const MlpParams& params,
                            const Matrix& inputs, const Matrix& labels,
                            MlpGradients& grads);

struct TrainedClassifier {
  MlpParams params;
  std::vector<Real> train_loss;       // per epoch
  std::vector<Real> validation_loss;  // per epoch (empty if no validation set)
};

// Adam on mini-batches from a seeded shuffle each epoch; dropout active.
// Deterministic under fixed seed (single-threaded). Throws
// Errc::diverged_loss when an epoch loss is not finite.
TrainedClassifier train_classifier(const Dataset& train, const Dataset& validation,
                                   const MlpConfig& config);

struct MetricsReport {
  Real top1 = 0;
  Real top5 = 0;
  Real top10 = 0;
  Real precision = 0;
  Real recall = 0;
  Real f1 = 0;
};

enum class PrfAveraging { micro, macro };

// Top-n accuracy counts an example as correct when any true code appears
// among its n highest-scored codes (ties broken by ascending code index).
// P/R/F1 are computed at `threshold` with the chosen multilabel averaging.
MetricsReport evaluate(const MlpConfig& config, const MlpParams& params,
                       const Dataset& test, Real threshold = 0.5,
                       PrfAveraging averaging = PrfAveraging::micro);

struct SelectionRow {
  FusionSpec spec;
  Index embedding_size = 0;
  MetricsReport metrics;
};

struct SelectionResult {
  std::vector<SelectionRow> rows;          // sorted by top1 descending
  std::size_t excluded_zero_label = 0;     // unlabeled patents left out
};

// Trains and evaluates one classifier per fusion spec on an identical
// seeded split of the labeled corpus patents, sorted by top-1 accuracy
// descending. input_dim/output_dim are derived per spec.
SelectionResult run_embedding_selection(const CorpusIndex& corpus,
                                        const std::vector<FusionSpec>& specs,
                                        const BlockTables& tables,
                                        const MlpConfig& base_config,
                                        PrfAveraging averaging = PrfAveraging::micro);

// TSV with one row per spec, mirroring the selection table columns.
void save_selection_table(const SelectionResult& result, const std::string& path);

}  // namespace patret
