#include "cazsl/lezsl.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "cazsl/csv.hpp"
#include "cazsl/rng.hpp"

namespace cazsl::lezsl {

Eigen::Index LabelEmbedding::class_column(const std::string& class_name) const {
  for (std::size_t j = 0; j < class_names.size(); ++j)
    if (class_names[j] == class_name) return static_cast<Eigen::Index>(j);
  throw UnknownClass(class_name);
}

LabelEmbedding embedding_original(const attrspace::AttributeMatrix& a) {
  if (!a.normalized)
    throw NotNormalized("label embedding expects a column-normalized attribute matrix");
  LabelEmbedding e;
  e.columns = a.values;
  e.class_names = a.class_names;
  e.id = kEmbeddingOriginal;
  return e;
}

LabelEmbedding embedding_expanded(const attrspace::ExpandedAttributeMatrix& s) {
  LabelEmbedding e;
  e.columns = s.values;
  e.class_names = s.class_names;
  e.id = kEmbeddingExpanded;
  return e;
}

double compatibility(const BilinearModel& model, const Eigen::VectorXd& x,
                     const std::string& y) {
  if (x.size() != model.w.rows())
    throw DimensionMismatch(fmt::format("feature vector has {} dims, model expects {}",
                                        x.size(), model.w.rows()));
  if (model.embedding.dim() != model.w.cols())
    throw DimensionMismatch("embedding dimension does not match model columns");
  const Eigen::Index col = model.embedding.class_column(y);
  return x.transpose() * model.w * model.embedding.columns.col(col);
}

SampleLoss sample_loss(const BilinearModel& model, const Eigen::VectorXd& x,
                       const std::string& y_true,
                       const std::vector<std::string>& seen_classes, WeightMode mode,
                       double l2) {
  if (seen_classes.empty()) throw NoTrainingData("no seen classes for the ranking loss");
  if (x.size() != model.w.rows())
    throw DimensionMismatch("feature vector does not match model");
  if (model.embedding.dim() != model.w.cols())
    throw DimensionMismatch("embedding dimension does not match model columns");

  const Eigen::Index true_col = model.embedding.class_column(y_true);
  if (std::find(seen_classes.begin(), seen_classes.end(), y_true) == seen_classes.end())
    throw UnknownClass(y_true);

  const Eigen::RowVectorXd proj = x.transpose() * model.w;  // 1 x N_a
  const double f_true = proj * model.embedding.columns.col(true_col);

  struct Violation {
    Eigen::Index col;
    double hinge;
  };
  std::vector<Violation> violations;
  for (const auto& cls : seen_classes) {
    if (cls == y_true) continue;
    const Eigen::Index col = model.embedding.class_column(cls);
    const double f_y = proj * model.embedding.columns.col(col);
    const double hinge = 1.0 + f_y - f_true;
    if (hinge > 0.0) violations.push_back({col, hinge});
  }

  // Rank-based weighting: worst violator first, weight 1/rank.
  std::vector<double> weights(violations.size(), 1.0);
  if (mode == WeightMode::kRankBased && !violations.empty()) {
    std::vector<std::size_t> order(violations.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return violations[a].hinge > violations[b].hinge;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank)
      weights[order[rank]] = 1.0 / static_cast<double>(rank + 1);
  }

  SampleLoss out;
  out.value = l2 * model.w.squaredNorm();
  Eigen::VectorXd embed_dir = Eigen::VectorXd::Zero(model.embedding.dim());
  for (std::size_t v = 0; v < violations.size(); ++v) {
    out.value += weights[v] * violations[v].hinge;
    embed_dir += weights[v] * (model.embedding.columns.col(violations[v].col) -
                               model.embedding.columns.col(true_col));
  }
  out.gradient = x * embed_dir.transpose() + 2.0 * l2 * model.w;
  return out;
}

TrainResult train(const datagen::Dataset& data, const datagen::SplitSpec& split,
                  const LabelEmbedding& embedding, const TrainHyper& hyper) {
  if (split.train_samples.empty()) throw NoTrainingData("no training samples in split");
  if (hyper.learning_rate < 0.0 || hyper.learning_rate > 10.0)
    throw DataError("learning_rate must lie in [0, 10]");
  if (hyper.epochs < 0 || hyper.epochs > 1000000)
    throw DataError("epochs must lie in [0, 1e6]");
  if (hyper.l2 < 0.0) throw DataError("l2 must be non-negative");
  for (const auto& c : split.seen_classes) embedding.class_column(c);

  std::unordered_map<std::string, Eigen::Index> sample_row;
  for (std::size_t i = 0; i < data.sample_ids.size(); ++i)
    sample_row.emplace(data.sample_ids[i], static_cast<Eigen::Index>(i));
  std::vector<Eigen::Index> train_rows;
  train_rows.reserve(split.train_samples.size());
  for (const auto& id : split.train_samples) {
    auto it = sample_row.find(id);
    if (it == sample_row.end()) throw DataError("train sample '" + id + "' not in dataset");
    train_rows.push_back(it->second);
  }

  const Eigen::Index d = data.feature_dim();
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  TrainResult result;
  result.model.embedding = embedding;
  result.model.w.resize(d, embedding.dim());
  Rng init_rng(hyper.seed, 10);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < embedding.dim(); ++j)
      result.model.w(i, j) = init_rng.uniform(-bound, bound);

  Rng shuffle_rng(hyper.seed, 11);
  std::vector<Eigen::Index> order = train_rows;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (Eigen::Index row : order) {
      const SampleLoss sl =
          sample_loss(result.model, data.features.row(row).transpose(),
                      data.labels[static_cast<std::size_t>(row)], split.seen_classes,
                      hyper.weight_mode, hyper.l2);
      result.model.w -= hyper.learning_rate * sl.gradient;
    }
    double total = 0.0;
    for (Eigen::Index row : train_rows)
      total += sample_loss(result.model, data.features.row(row).transpose(),
                           data.labels[static_cast<std::size_t>(row)], split.seen_classes,
                           hyper.weight_mode, hyper.l2)
                   .value;
    result.loss_trace.push_back(total / static_cast<double>(train_rows.size()));
  }
  return result;
}

Ranking le_predict(const BilinearModel& model, const Eigen::VectorXd& x,
                   const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw EmptyCandidates("candidate set is empty");
  Eigen::VectorXd scores(static_cast<Eigen::Index>(candidates.size()));
  const Eigen::RowVectorXd proj = x.transpose() * model.w;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    scores[static_cast<Eigen::Index>(i)] =
        proj * model.embedding.columns.col(model.embedding.class_column(candidates[i]));
  return make_ranking(candidates, scores);
}

std::string model_csv(const BilinearModel& model) {
  std::string out = fmt::format("{},{},{}\n", model.w.rows(), model.w.cols(),
                                model.embedding.id);
  for (Eigen::Index i = 0; i < model.w.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.w.cols(); ++j) {
      if (j) out += ",";
      out += csv::format_double(model.w(i, j));
    }
    out += "\n";
  }
  return out;
}

SerializedModel load_model_csv(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "empty model file");
  const auto header = csv::split_line(lines[0]);
  if (header.size() != 3)
    throw ParseError(path, 1, "expected header '<d>,<N_a>,<embedding_id>'");
  const auto d = csv::parse_int(header[0], path, 1);
  const auto na = csv::parse_int(header[1], path, 1);
  const std::string id = csv::trim(header[2]);
  if (d < 1 || na < 1) throw ParseError(path, 1, "model dimensions must be positive");
  if (id != kEmbeddingOriginal && id != kEmbeddingExpanded)
    throw ParseError(path, 1, "embedding id must be 'original' or 'expanded'");

  SerializedModel m;
  m.embedding_id = id;
  m.w.resize(d, na);
  Eigen::Index row = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (csv::trim(lines[li]).empty()) continue;
    if (row >= d) throw ParseError(path, li + 1, "more weight rows than declared");
    const auto fields = csv::split_line(lines[li]);
    if (static_cast<std::int64_t>(fields.size()) != na)
      throw ParseError(path, li + 1,
                       fmt::format("expected {} fields, got {}", na, fields.size()));
    for (std::size_t j = 0; j < fields.size(); ++j)
      m.w(row, static_cast<Eigen::Index>(j)) = csv::parse_double(fields[j], path, li + 1);
    ++row;
  }
  if (row != d) throw ParseError(path, lines.size(), "fewer weight rows than declared");
  return m;
}

std::string loss_trace_csv(const std::vector<double>& trace) {
  std::string out = "epoch,loss\n";
  for (std::size_t e = 0; e < trace.size(); ++e)
    out += fmt::format("{},{}\n", e + 1, csv::format_double(trace[e]));
  return out;
}

}  // namespace cazsl::lezsl
