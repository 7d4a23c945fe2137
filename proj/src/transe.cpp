#include "patret/transe.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "patret/error.hpp"
#include "patret/rng.hpp"

namespace patret {

void TransEConfig::validate() const {
  if (dim < 1) fail(Errc::invalid_argument, "dim must be >= 1");
  if (epochs < 1) fail(Errc::invalid_argument, "epochs must be >= 1");
  if (negatives_per_positive < 1)
    fail(Errc::invalid_argument, "negatives_per_positive must be >= 1");
  if (margin < 0) fail(Errc::invalid_argument, "margin must be non-negative");
  if (learning_rate <= 0) fail(Errc::invalid_argument, "learning_rate must be positive");
  if (batch_size < 1) fail(Errc::invalid_argument, "batch_size must be >= 1");
  if (threads < 1) fail(Errc::invalid_argument, "threads must be >= 1");
}

EmbeddingTable init_embeddings(const TransEConfig& config, const TripleStore& store) {
  config.validate();
  const Index d = config.dim;
  const Real bound = 6.0 / std::sqrt(static_cast<Real>(d));
  Rng rng(config.seed);

  EmbeddingTable table;
  table.entity_vectors.resize(store.entities.size(), d);
  table.relation_vectors.resize(store.relations.size(), d);
  for (Index i = 0; i < table.entity_vectors.rows(); ++i)
    for (Index j = 0; j < d; ++j)
      table.entity_vectors(i, j) = uniform_real(rng, -bound, bound);
  for (Index i = 0; i < table.relation_vectors.rows(); ++i)
    for (Index j = 0; j < d; ++j)
      table.relation_vectors(i, j) = uniform_real(rng, -bound, bound);
  for (Index i = 0; i < table.relation_vectors.rows(); ++i) {
    const Real n = table.relation_vectors.row(i).norm();
    if (n > 0) table.relation_vectors.row(i) /= n;
  }
  return table;
}

Real score(Index h, Index r, Index t, const EmbeddingTable& table, Norm norm) {
  return translation_score(table.entity_vectors.row(h),
                           table.relation_vectors.row(r),
                           table.entity_vectors.row(t), norm);
}

namespace {

using RowVec = Eigen::Matrix<Real, 1, Eigen::Dynamic>;

// d||v||/dv: v/||v|| for L2, sign(v) for L1. Zero at v == 0.
RowVec norm_gradient(const RowVec& v, Norm norm) {
  if (norm == Norm::l1)
    return v.unaryExpr([](Real x) { return x > 0 ? Real(1) : (x < 0 ? Real(-1) : Real(0)); });
  const Real n = v.norm();
  if (n == 0) return RowVec::Zero(v.cols());
  return v / n;
}

}  // namespace

Real hinge_loss_and_gradients(const EmbeddingTable& table,
                              std::span<const PosNegPair> pairs, Norm norm,
                              Real margin, Matrix& entity_grad,
                              Matrix& relation_grad) {
  Real total = 0;
  for (const auto& pair : pairs) {
    const RowVec v_pos = table.entity_vectors.row(pair.pos.head) +
                         table.relation_vectors.row(pair.pos.relation) -
                         table.entity_vectors.row(pair.pos.tail);
    const RowVec v_neg = table.entity_vectors.row(pair.neg.head) +
                         table.relation_vectors.row(pair.neg.relation) -
                         table.entity_vectors.row(pair.neg.tail);
    const Real s_pos = norm == Norm::l1 ? v_pos.lpNorm<1>() : v_pos.norm();
    const Real s_neg = norm == Norm::l1 ? v_neg.lpNorm<1>() : v_neg.norm();
    const Real hinge = margin + s_pos - s_neg;
    if (hinge <= 0) continue;  // inactive (and 0 at the kink)
    total += hinge;

    const RowVec g_pos = norm_gradient(v_pos, norm);
    const RowVec g_neg = norm_gradient(v_neg, norm);
    entity_grad.row(pair.pos.head) += g_pos;
    relation_grad.row(pair.pos.relation) += g_pos;
    entity_grad.row(pair.pos.tail) -= g_pos;
    entity_grad.row(pair.neg.head) -= g_neg;
    relation_grad.row(pair.neg.relation) -= g_neg;
    entity_grad.row(pair.neg.tail) += g_neg;
  }
  return total;
}

Real hinge_loss(const EmbeddingTable& table, std::span<const PosNegPair> pairs,
                Norm norm, Real margin) {
  Real total = 0;
  for (const auto& pair : pairs) {
    const Real s_pos = score(pair.pos.head, pair.pos.relation, pair.pos.tail, table, norm);
    const Real s_neg = score(pair.neg.head, pair.neg.relation, pair.neg.tail, table, norm);
    total += std::max(Real(0), margin + s_pos - s_neg);
  }
  return total;
}

TrainResult train(const TripleStore& store, const TransEConfig& config) {
  config.validate();
  if (store.triples.empty()) fail(Errc::empty_graph, "cannot train on an empty store");

  TrainResult result;
  result.table = init_embeddings(config, store);
  EmbeddingTable& table = result.table;

  Rng shuffle_rng(derive_seed(config.seed, 1));
  Rng corrupt_rng(derive_seed(config.seed, 2));

  Matrix entity_grad = Matrix::Zero(table.entity_vectors.rows(), config.dim);
  Matrix relation_grad = Matrix::Zero(table.relation_vectors.rows(), config.dim);

  const std::size_t n_triples = store.triples.size();
  std::vector<PosNegPair> batch_pairs;
  batch_pairs.reserve(static_cast<std::size_t>(config.batch_size) *
                      static_cast<std::size_t>(config.negatives_per_positive));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = shuffled_indices(n_triples, shuffle_rng);
    Real epoch_loss = 0;
    std::size_t epoch_pairs = 0;

    for (std::size_t begin = 0; begin < n_triples;
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(n_triples, begin + static_cast<std::size_t>(config.batch_size));

      // Negatives are drawn from the single stream regardless of thread
      // count, so parallelism only affects gradient summation order.
      batch_pairs.clear();
      for (std::size_t i = begin; i < end; ++i) {
        const Triple& pos = store.triples[order[i]];
        for (int k = 0; k < config.negatives_per_positive; ++k) {
          try {
            batch_pairs.push_back(
                {pos, corrupt(pos, store, CorruptSide::uniform, corrupt_rng,
                              config.type_constrained_negatives)});
          } catch (const Error& e) {
            if (e.code() != Errc::exhausted_retries) throw;
            ++result.skipped_facts;
          }
        }
      }
      if (batch_pairs.empty()) continue;

      entity_grad.setZero();
      relation_grad.setZero();
      Real batch_loss = 0;
      if (config.threads <= 1 || batch_pairs.size() < 64) {
        batch_loss = hinge_loss_and_gradients(table, batch_pairs, config.norm,
                                              config.margin, entity_grad,
                                              relation_grad);
      } else {
        const int workers = config.threads;
        std::vector<Matrix> eg(workers), rg(workers);
        std::vector<Real> losses(static_cast<std::size_t>(workers), 0);
        std::vector<std::thread> pool;
        const std::size_t chunk = (batch_pairs.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            const std::size_t lo = static_cast<std::size_t>(w) * chunk;
            const std::size_t hi = std::min(batch_pairs.size(), lo + chunk);
            eg[w] = Matrix::Zero(entity_grad.rows(), entity_grad.cols());
            rg[w] = Matrix::Zero(relation_grad.rows(), relation_grad.cols());
            if (lo < hi) {
              losses[static_cast<std::size_t>(w)] = hinge_loss_and_gradients(
                  table, std::span(batch_pairs).subspan(lo, hi - lo),
                  config.norm, config.margin, eg[w], rg[w]);
            }
          });
        }
        for (auto& th : pool) th.join();
        for (int w = 0; w < workers; ++w) {  // fixed merge order
          entity_grad += eg[w];
          relation_grad += rg[w];
          batch_loss += losses[static_cast<std::size_t>(w)];
        }
      }

      table.entity_vectors -= config.learning_rate * entity_grad;
      table.relation_vectors -= config.learning_rate * relation_grad;
      if (config.normalize_entities) {
        for (Index e = 0; e < table.entity_vectors.rows(); ++e) {
          const Real n = table.entity_vectors.row(e).norm();
          if (n > 1e-12) table.entity_vectors.row(e) /= n;
        }
      }

      epoch_loss += batch_loss;
      epoch_pairs += batch_pairs.size();
    }

    const Real mean_loss =
        epoch_pairs > 0 ? epoch_loss / static_cast<Real>(epoch_pairs) : Real(0);
    if (!std::isfinite(mean_loss))
      fail(Errc::diverged_loss,
           "epoch " + std::to_string(epoch + 1) + " mean loss is not finite");
    result.loss_history.push_back(mean_loss);
  }
  return result;
}

LinkPredictionStats link_prediction_eval(const EmbeddingTable& table,
                                         const TripleStore& store,
                                         const std::vector<Triple>& held_out,
                                         Norm norm) {
  std::unordered_set<Triple, TripleHash> filter = store.positive_set;
  filter.insert(held_out.begin(), held_out.end());

  const Index num_entities = table.entity_vectors.rows();
  LinkPredictionStats stats;
  std::size_t hits1 = 0, hits10 = 0;
  Real rank_sum = 0;

  Vector scores(num_entities);
  for (const auto& query : held_out) {
    const RowVec target = table.entity_vectors.row(query.head) +
                          table.relation_vectors.row(query.relation);
    if (norm == Norm::l1)
      scores = (table.entity_vectors.rowwise() - target).cwiseAbs().rowwise().sum();
    else
      scores = (table.entity_vectors.rowwise() - target).rowwise().norm();

    const Real true_score = scores(query.tail);
    std::size_t better = 0, ties = 0;
    for (Index e = 0; e < num_entities; ++e) {
      if (e == query.tail) continue;
      if (filter.count({query.head, query.relation, e})) continue;  // filtered
      if (scores(e) < true_score)
        ++better;
      else if (scores(e) == true_score)
        ++ties;  // pessimistic: true tail ranked after all ties
    }
    const std::size_t rank = better + ties + 1;
    rank_sum += static_cast<Real>(rank);
    if (rank <= 1) ++hits1;
    if (rank <= 10) ++hits10;
  }

  const Real n = static_cast<Real>(held_out.size());
  if (!held_out.empty()) {
    stats.mean_rank = rank_sum / n;
    stats.hits_at_1 = static_cast<Real>(hits1) / n;
    stats.hits_at_10 = static_cast<Real>(hits10) / n;
  }
  return stats;
}

}  // namespace patret
