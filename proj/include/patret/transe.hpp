#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "patret/kgraph.hpp"
#include "patret/types.hpp"

namespace patret {

enum class Norm { l1, l2 };

struct TransEConfig {
  Index dim = 384;
  Real margin = 1.0;
  Norm norm = Norm::l2;
  Real learning_rate = 0.01;
  int epochs = 100;
  int negatives_per_positive = 1;
  Index batch_size = 1024;
  bool normalize_entities = true;
  bool type_constrained_negatives = false;
  std::uint64_t seed = 42;
  int threads = 1;  // >1 trades bit-reproducibility for speed

  void validate() const;
};

// Learned vectors for one graph; rows align with the store's dictionaries.
struct EmbeddingTable {
  Matrix entity_vectors;    // num_entities x dim
  Matrix relation_vectors;  // num_relations x dim

  Index dim() const { return entity_vectors.cols(); }
};

// Uniform init in [-6/sqrt(d), +6/sqrt(d)]; relation vectors normalized to
// unit L2 norm once. Deterministic under config.seed.
EmbeddingTable init_embeddings(const TransEConfig& config, const TripleStore& store);

// ||h + r - t|| under the chosen norm, for any Eigen row expressions.
template <typename DH, typename DR, typename DT>
Real translation_score(const Eigen::MatrixBase<DH>& h,
                       const Eigen::MatrixBase<DR>& r,
                       const Eigen::MatrixBase<DT>& t, Norm norm) {
  if (norm == Norm::l1) return (h + r - t).template lpNorm<1>();
  return (h + r - t).norm();
}

Real score(Index h, Index r, Index t, const EmbeddingTable& table, Norm norm);

struct PosNegPair {
  Triple pos;
  Triple neg;
};

// Summed hinge loss max(0, margin + s(pos) - s(neg)) over the pairs, with
// gradients accumulated into the (pre-sized, pre-zeroed) buffers. The
// subgradient at the hinge kink and at a zero difference vector is 0.
// Exposed so the finite-difference tests can drive it directly.
Real hinge_loss_and_gradients(const EmbeddingTable& table,
                              std::span<const PosNegPair> pairs, Norm norm,
                              Real margin, Matrix& entity_grad,
                              Matrix& relation_grad);

Real hinge_loss(const EmbeddingTable& table, std::span<const PosNegPair> pairs,
                Norm norm, Real margin);

struct TrainResult {
  EmbeddingTable table;
  std::vector<Real> loss_history;  // mean hinge loss per epoch
  std::size_t skipped_facts = 0;   // positives whose corruption exhausted retries
};

// Mini-batch gradient descent on the margin-ranking loss. The per-batch
// update applies the summed pair gradients at the configured learning rate;
// entity vectors are re-normalized after each batch when enabled.
// Deterministic under fixed seed with threads == 1.
TrainResult train(const TripleStore& store, const TransEConfig& config);

struct LinkPredictionStats {
  Real mean_rank = 0;
  Real hits_at_1 = 0;
  Real hits_at_10 = 0;
};

// Filtered tail ranking: for each held-out <h, r, t>, the true tail is
// ranked among all entities by ascending score, excluding candidates that
// form a known positive (store or held-out set). Ties rank pessimistically.
LinkPredictionStats link_prediction_eval(const EmbeddingTable& table,
                                         const TripleStore& store,
                                         const std::vector<Triple>& held_out,
                                         Norm norm);

}  // namespace patret
