#include "patret/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

void MlpConfig::validate() const {
  if (input_dim < 1) fail(Errc::invalid_argument, "input_dim must be >= 1");
  if (hidden_dim < 1) fail(Errc::invalid_argument, "hidden_dim must be >= 1");
  if (output_dim < 1) fail(Errc::invalid_argument, "output_dim must be >= 1");
  if (dropout_rate < 0 || dropout_rate >= 1)
    fail(Errc::invalid_argument, "dropout_rate must be in [0, 1)");
  if (learning_rate <= 0) fail(Errc::invalid_argument, "learning_rate must be positive");
  if (batch_size < 1) fail(Errc::invalid_argument, "batch_size must be >= 1");
  if (epochs < 1) fail(Errc::invalid_argument, "epochs must be >= 1");
  for (int r : split_ratios)
    if (r < 0) fail(Errc::invalid_argument, "split ratios must be non-negative");
  if (split_ratios[0] + split_ratios[1] + split_ratios[2] <= 0)
    fail(Errc::invalid_argument, "split ratios sum to zero");
}

MlpParams init_params(const MlpConfig& config) {
  config.validate();
  Rng rng(derive_seed(config.seed, 20));
  const auto glorot = [&](Matrix& w, Index rows, Index cols) {
    const Real limit = std::sqrt(Real(6) / static_cast<Real>(rows + cols));
    w.resize(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) w(i, j) = uniform_real(rng, -limit, limit);
  };
  MlpParams params;
  glorot(params.w1, config.hidden_dim, config.input_dim);
  params.b1 = Vector::Zero(config.hidden_dim);
  glorot(params.w2, config.output_dim, config.hidden_dim);
  params.b2 = Vector::Zero(config.output_dim);
  return params;
}

namespace {

Real sigmoid(Real z) { return Real(1) / (Real(1) + std::exp(-z)); }

// BCE from logit: max(z,0) - z*y + log1p(exp(-|z|))
Real bce_from_logit(Real z, Real y) {
  return std::max(z, Real(0)) - z * y + std::log1p(std::exp(-std::abs(z)));
}

struct ForwardCache {
  Matrix z1;            // B x H pre-activation
  Matrix dropout_mask;  // B x H entries in {0, 1/(1-rate)}; empty when off
  Matrix hidden;        // B x H post ReLU (and dropout when training)
  Matrix logits;        // B x L
};

ForwardCache forward_batch(const MlpParams& params, const Matrix& inputs,
                           Real dropout_rate, Rng* dropout_rng) {
  ForwardCache cache;
  cache.z1 = (inputs * params.w1.transpose()).rowwise() + params.b1.transpose();
  cache.hidden = cache.z1.cwiseMax(Real(0));
  if (dropout_rng && dropout_rate > 0) {
    // inverted dropout; mask entries drawn row-major for a fixed stream
    const Real scale = Real(1) / (Real(1) - dropout_rate);
    cache.dropout_mask.resize(cache.hidden.rows(), cache.hidden.cols());
    for (Index i = 0; i < cache.hidden.rows(); ++i)
      for (Index j = 0; j < cache.hidden.cols(); ++j)
        cache.dropout_mask(i, j) =
            unit_real(*dropout_rng) < dropout_rate ? Real(0) : scale;
    cache.hidden.array() *= cache.dropout_mask.array();
  }
  cache.logits = (cache.hidden * params.w2.transpose()).rowwise() + params.b2.transpose();
  return cache;
}

Real mean_bce(const Matrix& logits, const Matrix& labels) {
  Real total = 0;
  for (Index i = 0; i < logits.rows(); ++i)
    for (Index j = 0; j < logits.cols(); ++j)
      total += bce_from_logit(logits(i, j), labels(i, j));
  return total / static_cast<Real>(logits.rows() * logits.cols());
}

// Backward pass for mean BCE; returns the loss. `cache.hidden` must match
// the forward pass that produced `cache.logits`.
Real backward_batch(const MlpParams& params, const Matrix& inputs,
                    const Matrix& labels, const ForwardCache& cache,
                    MlpGradients& grads) {
  const Real scale =
      Real(1) / static_cast<Real>(cache.logits.rows() * cache.logits.cols());
  Matrix dz2 = cache.logits.unaryExpr([](Real z) { return sigmoid(z); }) - labels;
  dz2 *= scale;

  grads.w2 = dz2.transpose() * cache.hidden;
  grads.b2 = dz2.colwise().sum().transpose();
  Matrix dh = dz2 * params.w2;
  if (cache.dropout_mask.size() > 0) dh.array() *= cache.dropout_mask.array();
  const Matrix dz1 = (cache.z1.array() > 0).cast<Real>() * dh.array();

  grads.w1 = dz1.transpose() * inputs;
  grads.b1 = dz1.colwise().sum().transpose();
  return mean_bce(cache.logits, labels);
}

}  // namespace

Vector forward(const MlpConfig& config, const MlpParams& params,
               const Vector& input, bool training, Rng* dropout_rng) {
  if (input.size() != params.w1.cols())
    fail(Errc::dim_mismatch, "input dim " + std::to_string(input.size()) +
                                 " != " + std::to_string(params.w1.cols()));
  if (training && dropout_rng == nullptr)
    fail(Errc::invalid_argument, "training forward needs a dropout rng");

  Matrix x = input.transpose();
  ForwardCache cache = forward_batch(params, x, config.dropout_rate,
                                     training ? dropout_rng : nullptr);
  Vector probs(cache.logits.cols());
  for (Index j = 0; j < probs.size(); ++j) probs(j) = sigmoid(cache.logits(0, j));
  return probs;
}

SplitIndices split_dataset(std::size_t count, std::array<int, 3> ratios,
                           std::uint64_t seed) {
  if (count < 10)
    fail(Errc::too_few_examples,
         "need at least 10 examples, got " + std::to_string(count));
  const Real total = static_cast<Real>(ratios[0] + ratios[1] + ratios[2]);
  if (total <= 0) fail(Errc::invalid_argument, "split ratios sum to zero");

  const auto n = static_cast<Real>(count);
  auto n_train = static_cast<std::size_t>(std::llround(n * ratios[0] / total));
  auto n_val   = static_cast<std::size_t>(std::llround(n * ratios[1] / total));
  if (n_train + n_val > count) n_val = count - n_train;

  Rng rng(derive_seed(seed, 21));
  const auto order = shuffled_indices(count, rng);

  SplitIndices split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  split.test.assign(order.begin() + n_train + n_val, order.end());
  return split;
}

Dataset take(const Dataset& dataset, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.inputs.resize(static_cast<Index>(indices.size()), dataset.inputs.cols());
  out.labels.resize(static_cast<Index>(indices.size()), dataset.labels.cols());
  out.ids.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.inputs.row(static_cast<Index>(i)) = dataset.inputs.row(static_cast<Index>(indices[i]));
    out.labels.row(static_cast<Index>(i)) = dataset.labels.row(static_cast<Index>(indices[i]));
    if (!dataset.ids.empty()) out.ids.push_back(dataset.ids[indices[i]]);
  }
  return out;
}

Real bce_loss(const MlpConfig& config, const MlpParams& params,
              const Matrix& inputs, const Matrix& labels) {
  (void)config;
  const ForwardCache cache = forward_batch(params, inputs, 0, nullptr);
  return mean_bce(cache.logits, labels);
}

Real bce_loss_and_gradients(const MlpConfig& config, const MlpParams& params,
                            const Matrix& inputs, const Matrix& labels,
                            MlpGradients& grads) {
  (void)config;
  const ForwardCache cache = forward_batch(params, inputs, 0, nullptr);
  return backward_batch(params, inputs, labels, cache, grads);
}

namespace {

struct AdamState {
  MlpGradients m;
  MlpGradients v;
  long t = 0;

  explicit AdamState(const MlpParams& params) {
    m.w1 = Matrix::Zero(params.w1.rows(), params.w1.cols());
    m.b1 = Vector::Zero(params.b1.size());
    m.w2 = Matrix::Zero(params.w2.rows(), params.w2.cols());
    m.b2 = Vector::Zero(params.b2.size());
    v = m;
  }
};

template <typename P, typename G, typename M>
void adam_update_one(P& param, const G& grad, M& m, M& v, const MlpConfig& cfg,
                     Real bias1, Real bias2) {
  m = cfg.beta1 * m + (1 - cfg.beta1) * grad;
  v = (cfg.beta2 * v.array() + (1 - cfg.beta2) * grad.array().square()).matrix();
  param.array() -=
      cfg.learning_rate * (m.array() / bias1) /
      ((v.array() / bias2).sqrt() + cfg.adam_epsilon);
}

void adam_step(MlpParams& params, const MlpGradients& grads, AdamState& state,
               const MlpConfig& cfg) {
  ++state.t;
  const Real bias1 = 1 - std::pow(cfg.beta1, static_cast<Real>(state.t));
  const Real bias2 = 1 - std::pow(cfg.beta2, static_cast<Real>(state.t));
  adam_update_one(params.w1, grads.w1, state.m.w1, state.v.w1, cfg, bias1, bias2);
  adam_update_one(params.b1, grads.b1, state.m.b1, state.v.b1, cfg, bias1, bias2);
  adam_update_one(params.w2, grads.w2, state.m.w2, state.v.w2, cfg, bias1, bias2);
  adam_update_one(params.b2, grads.b2, state.m.b2, state.v.b2, cfg, bias1, bias2);
}

}  // namespace

TrainedClassifier train_classifier(const Dataset& train, const Dataset& validation,
                                   const MlpConfig& config) {
  config.validate();
  if (train.size() == 0) fail(Errc::too_few_examples, "empty training set");
  if (train.inputs.cols() != config.input_dim)
    fail(Errc::dim_mismatch, "training inputs have dim " +
                                 std::to_string(train.inputs.cols()) +
                                 ", config says " + std::to_string(config.input_dim));
  if (train.labels.cols() != config.output_dim)
    fail(Errc::dim_mismatch, "training labels have width " +
                                 std::to_string(train.labels.cols()) +
                                 ", config says " + std::to_string(config.output_dim));

  TrainedClassifier out;
  out.params = init_params(config);
  AdamState adam(out.params);
  Rng shuffle_rng(derive_seed(config.seed, 22));
  Rng dropout_rng(derive_seed(config.seed, 23));
  MlpGradients grads;

  const auto n = static_cast<std::size_t>(train.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = shuffled_indices(n, shuffle_rng);
    Real epoch_loss = 0;

    for (std::size_t begin = 0; begin < n;
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(n, begin + static_cast<std::size_t>(config.batch_size));
      const auto rows = static_cast<Index>(end - begin);

      Matrix x(rows, train.inputs.cols());
      Matrix y(rows, train.labels.cols());
      for (Index i = 0; i < rows; ++i) {
        x.row(i) = train.inputs.row(static_cast<Index>(order[begin + static_cast<std::size_t>(i)]));
        y.row(i) = train.labels.row(static_cast<Index>(order[begin + static_cast<std::size_t>(i)]));
      }

      const ForwardCache cache =
          forward_batch(out.params, x, config.dropout_rate, &dropout_rng);
      const Real batch_loss = backward_batch(out.params, x, y, cache, grads);
      adam_step(out.params, grads, adam, config);
      epoch_loss += batch_loss * static_cast<Real>(rows);
    }

    const Real mean_train = epoch_loss / static_cast<Real>(n);
    if (!std::isfinite(mean_train))
      fail(Errc::diverged_loss,
           "epoch " + std::to_string(epoch + 1) + " train loss is not finite");
    out.train_loss.push_back(mean_train);
    if (validation.size() > 0)
      out.validation_loss.push_back(
          bce_loss(config, out.params, validation.inputs, validation.labels));
  }
  return out;
}

MetricsReport evaluate(const MlpConfig& config, const MlpParams& params,
                       const Dataset& test, Real threshold,
                       PrfAveraging averaging) {
  if (test.size() == 0) fail(Errc::too_few_examples, "empty test set");
  const ForwardCache cache = forward_batch(params, test.inputs, 0, nullptr);
  const Index n = test.size();
  const Index labels = test.labels.cols();

  MetricsReport report;
  std::size_t hit1 = 0, hit5 = 0, hit10 = 0;
  std::vector<Index> idx(static_cast<std::size_t>(labels));

  for (Index i = 0; i < n; ++i) {
    std::iota(idx.begin(), idx.end(), Index(0));
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
      return cache.logits(i, a) > cache.logits(i, b);  // monotone in probability
    });
    const auto hit_within = [&](std::size_t k) {
      for (std::size_t j = 0; j < std::min<std::size_t>(k, idx.size()); ++j)
        if (test.labels(i, idx[j]) > Real(0.5)) return true;
      return false;
    };
    if (hit_within(1)) ++hit1;
    if (hit_within(5)) ++hit5;
    if (hit_within(10)) ++hit10;
  }
  report.top1 = static_cast<Real>(hit1) / static_cast<Real>(n);
  report.top5 = static_cast<Real>(hit5) / static_cast<Real>(n);
  report.top10 = static_cast<Real>(hit10) / static_cast<Real>(n);

  // decision threshold on probabilities == threshold on logits
  const Real logit_threshold = std::log(threshold / (1 - threshold));
  const auto prf_cell = [&](Index i, Index j, std::size_t& tp, std::size_t& fp,
                            std::size_t& fn) {
    const bool predicted = cache.logits(i, j) >= logit_threshold;
    const bool truth = test.labels(i, j) > Real(0.5);
    if (predicted && truth) ++tp;
    if (predicted && !truth) ++fp;
    if (!predicted && truth) ++fn;
  };
  const auto safe_div = [](Real num, Real den) { return den > 0 ? num / den : Real(0); };

  if (averaging == PrfAveraging::micro) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < labels; ++j) prf_cell(i, j, tp, fp, fn);
    report.precision = safe_div(static_cast<Real>(tp), static_cast<Real>(tp + fp));
    report.recall = safe_div(static_cast<Real>(tp), static_cast<Real>(tp + fn));
    report.f1 = safe_div(2 * report.precision * report.recall,
                         report.precision + report.recall);
  } else {
    Real p_sum = 0, r_sum = 0, f_sum = 0;
    for (Index j = 0; j < labels; ++j) {
      std::size_t tp = 0, fp = 0, fn = 0;
      for (Index i = 0; i < n; ++i) prf_cell(i, j, tp, fp, fn);
      const Real p = safe_div(static_cast<Real>(tp), static_cast<Real>(tp + fp));
      const Real r = safe_div(static_cast<Real>(tp), static_cast<Real>(tp + fn));
      p_sum += p;
      r_sum += r;
      f_sum += safe_div(2 * p * r, p + r);
    }
    report.precision = p_sum / static_cast<Real>(labels);
    report.recall = r_sum / static_cast<Real>(labels);
    report.f1 = f_sum / static_cast<Real>(labels);
  }
  return report;
}

SelectionResult run_embedding_selection(const CorpusIndex& corpus,
                                        const std::vector<FusionSpec>& specs,
                                        const BlockTables& tables,
                                        const MlpConfig& base_config,
                                        PrfAveraging averaging) {
  std::vector<const PatentRecord*> labeled;
  for (const auto& rec : corpus.patents)
    if (!rec.cpc_codes.empty()) labeled.push_back(&rec);

  SelectionResult result;
  result.excluded_zero_label = corpus.patents.size() - labeled.size();

  const auto label_count = static_cast<Index>(corpus.label_space.size());
  if (label_count == 0) fail(Errc::too_few_examples, "corpus has no class labels");
  std::unordered_map<std::string, Index> label_index;
  for (std::size_t i = 0; i < corpus.label_space.size(); ++i)
    label_index.emplace(corpus.label_space[i], static_cast<Index>(i));

  // One split for every spec: identical partition of the labeled examples.
  const SplitIndices split =
      split_dataset(labeled.size(), base_config.split_ratios, base_config.seed);

  for (const auto& spec : specs) {
    Dataset dataset;
    dataset.labels = Matrix::Zero(static_cast<Index>(labeled.size()), label_count);
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      const FusedVector fused =
          fuse(spec, labeled[i]->patent_id, tables, MissingPolicy::error);
      if (dataset.inputs.size() == 0)
        dataset.inputs.resize(static_cast<Index>(labeled.size()), fused.vector.size());
      dataset.inputs.row(static_cast<Index>(i)) = fused.vector.transpose();
      for (const auto& code : labeled[i]->cpc_codes)
        dataset.labels(static_cast<Index>(i), label_index.at(code)) = 1;
      dataset.ids.push_back(labeled[i]->patent_id);
    }

    MlpConfig config = base_config;
    config.input_dim = dataset.inputs.cols();
    config.output_dim = label_count;

    const Dataset train_set = take(dataset, split.train);
    const Dataset val_set = take(dataset, split.validation);
    const Dataset test_set = take(dataset, split.test);
    const TrainedClassifier trained = train_classifier(train_set, val_set, config);

    SelectionRow row;
    row.spec = spec;
    row.embedding_size = dataset.inputs.cols();
    row.metrics = evaluate(config, trained.params, test_set, 0.5, averaging);
    result.rows.push_back(std::move(row));
  }

  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SelectionRow& x, const SelectionRow& y) {
                     return x.metrics.top1 > y.metrics.top1;
                   });
  return result;
}

void save_selection_table(const SelectionResult& result, const std::string& path) {
  auto out = open_output(path);
  out << "embedding_type\tembedding_size\ttop1_accuracy\ttop5_accuracy\t"
         "top10_accuracy\tprecision\trecall\tf1\n";
  for (const auto& row : result.rows) {
    out << row.spec.to_string() << '\t' << row.embedding_size << '\t'
        << format_real(row.metrics.top1, 4) << '\t'
        << format_real(row.metrics.top5, 4) << '\t'
        << format_real(row.metrics.top10, 4) << '\t'
        << format_real(row.metrics.precision, 4) << '\t'
        << format_real(row.metrics.recall, 4) << '\t'
        << format_real(row.metrics.f1, 4) << '\n';
  }
}

}  // namespace patret
