#include "cazsl/dap.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cazsl/csv.hpp"

namespace cazsl::dap {

namespace {

constexpr double kPriorFloor = 1e-3;
constexpr double kPosteriorFloor = 1e-6;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

BinarizedSignatures binarize_signatures(const attrspace::SignatureView& s,
                                        const std::vector<std::string>& seen_classes) {
  if (seen_classes.empty()) throw DataError("binarization needs at least one seen class");
  std::vector<Eigen::Index> seen_cols;
  seen_cols.reserve(seen_classes.size());
  for (const auto& c : seen_classes) seen_cols.push_back(s.class_index(c));

  BinarizedSignatures out;
  out.class_names = *s.class_names;
  std::vector<Eigen::Index> kept;
  std::vector<double> thresholds;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    double mean = 0.0;
    for (Eigen::Index c : seen_cols) mean += (*s.values)(i, c);
    mean /= static_cast<double>(seen_cols.size());
    int first_bit = (*s.values)(i, seen_cols[0]) > mean ? 1 : 0;
    bool constant = true;
    for (Eigen::Index c : seen_cols)
      if (((*s.values)(i, c) > mean ? 1 : 0) != first_bit) {
        constant = false;
        break;
      }
    if (constant) {
      out.dropped_attributes.push_back((*s.attribute_names)[static_cast<std::size_t>(i)]);
      continue;
    }
    kept.push_back(i);
    thresholds.push_back(mean);
    out.attribute_names.push_back((*s.attribute_names)[static_cast<std::size_t>(i)]);
  }

  out.bits.resize(static_cast<Eigen::Index>(kept.size()), s.cols());
  out.thresholds.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) {
    out.thresholds[static_cast<Eigen::Index>(r)] = thresholds[r];
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      out.bits(static_cast<Eigen::Index>(r), j) =
          (*s.values)(kept[r], j) > thresholds[r] ? 1 : 0;
  }
  return out;
}

Eigen::MatrixXi binarize_with_thresholds(const attrspace::SignatureView& s,
                                         const std::vector<std::string>& attribute_names,
                                         const Eigen::VectorXd& thresholds) {
  if (static_cast<Eigen::Index>(attribute_names.size()) != thresholds.size())
    throw DimensionMismatch("attribute name count does not match threshold count");
  std::unordered_map<std::string, Eigen::Index> row_of;
  for (std::size_t i = 0; i < s.attribute_names->size(); ++i)
    row_of.emplace((*s.attribute_names)[i], static_cast<Eigen::Index>(i));
  Eigen::MatrixXi bits(thresholds.size(), s.cols());
  for (std::size_t r = 0; r < attribute_names.size(); ++r) {
    auto it = row_of.find(attribute_names[r]);
    if (it == row_of.end()) throw UnknownAttribute(attribute_names[r]);
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      bits(static_cast<Eigen::Index>(r), j) =
          (*s.values)(it->second, j) > thresholds[static_cast<Eigen::Index>(r)] ? 1 : 0;
  }
  return bits;
}

AttributeClassifierBank train_bank(const datagen::Dataset& data,
                                   const datagen::SplitSpec& split,
                                   const attrspace::SignatureView& s,
                                   const TrainConfig& hyper) {
  if (split.train_samples.empty()) throw NoTrainingData("no training samples in split");
  if (hyper.learning_rate < 0.0 || hyper.epochs < 0 || hyper.l2 < 0.0)
    throw DataError("learning rate, epochs, and l2 must be non-negative");

  const BinarizedSignatures bin = binarize_signatures(s, split.seen_classes);
  const Eigen::Index na = bin.bits.rows();
  if (na == 0) throw DataError("every attribute was dropped during binarization");

  std::unordered_map<std::string, Eigen::Index> sample_row;
  for (std::size_t i = 0; i < data.sample_ids.size(); ++i)
    sample_row.emplace(data.sample_ids[i], static_cast<Eigen::Index>(i));
  std::unordered_map<std::string, Eigen::Index> class_col;
  for (std::size_t j = 0; j < bin.class_names.size(); ++j)
    class_col.emplace(bin.class_names[j], static_cast<Eigen::Index>(j));

  const Eigen::Index n = static_cast<Eigen::Index>(split.train_samples.size());
  const Eigen::Index d = data.feature_dim();
  Eigen::MatrixXd x(n, d);
  Eigen::MatrixXd targets(na, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto it = sample_row.find(split.train_samples[static_cast<std::size_t>(i)]);
    if (it == sample_row.end())
      throw DataError("train sample '" + split.train_samples[static_cast<std::size_t>(i)] +
                      "' not in dataset");
    x.row(i) = data.features.row(it->second);
    const std::string& label = data.labels[static_cast<std::size_t>(it->second)];
    auto cit = class_col.find(label);
    if (cit == class_col.end()) throw UnknownClass(label);
    targets.col(i) = bin.bits.col(cit->second).cast<double>();
  }

  // Full-batch gradient descent on the logistic cross-entropy, all attribute
  // classifiers updated jointly; zero initialization keeps it deterministic.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(na, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(na);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    Eigen::MatrixXd z = w * x.transpose();
    z.colwise() += b;
    Eigen::MatrixXd p = z.unaryExpr([](double v) { return sigmoid(v); });
    const Eigen::MatrixXd diff = p - targets;
    const Eigen::MatrixXd grad_w = diff * x * inv_n + 2.0 * hyper.l2 * w;
    const Eigen::VectorXd grad_b = diff.rowwise().sum() * inv_n;
    w -= hyper.learning_rate * grad_w;
    b -= hyper.learning_rate * grad_b;
  }

  AttributeClassifierBank bank;
  bank.weights = std::move(w);
  bank.biases = std::move(b);
  bank.thresholds = bin.thresholds;
  bank.attribute_names = bin.attribute_names;
  bank.dropped_attributes = bin.dropped_attributes;

  bank.priors.resize(na);
  std::vector<Eigen::Index> seen_cols;
  for (const auto& c : split.seen_classes) seen_cols.push_back(class_col.at(c));
  for (Eigen::Index i = 0; i < na; ++i) {
    double mean = 0.0;
    for (Eigen::Index c : seen_cols) mean += bin.bits(i, c);
    mean /= static_cast<double>(seen_cols.size());
    bank.priors[i] = std::clamp(mean, kPriorFloor, 1.0 - kPriorFloor);
  }
  return bank;
}

Eigen::VectorXd posteriors(const AttributeClassifierBank& bank, const Eigen::VectorXd& x) {
  if (x.size() != bank.feature_dim())
    throw DimensionMismatch(fmt::format("feature vector has {} dims, bank expects {}",
                                        x.size(), bank.feature_dim()));
  Eigen::VectorXd z = bank.weights * x + bank.biases;
  Eigen::VectorXd p(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    p[i] = std::clamp(sigmoid(z[i]), kPosteriorFloor, 1.0 - kPosteriorFloor);
  return p;
}

Eigen::VectorXd dap_scores(const Eigen::VectorXd& sample_posteriors,
                           const Eigen::VectorXd& priors,
                           const Eigen::MatrixXi& candidate_bits) {
  if (sample_posteriors.size() != priors.size() ||
      sample_posteriors.size() != candidate_bits.rows())
    throw DimensionMismatch("posterior, prior, and signature sizes disagree");
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(candidate_bits.cols());
  for (Eigen::Index y = 0; y < candidate_bits.cols(); ++y) {
    double s = 0.0;
    for (Eigen::Index m = 0; m < sample_posteriors.size(); ++m) {
      const bool on = candidate_bits(m, y) != 0;
      const double post = on ? sample_posteriors[m] : 1.0 - sample_posteriors[m];
      const double prior = on ? priors[m] : 1.0 - priors[m];
      s += std::log(post) - std::log(prior);
    }
    scores[y] = s;
  }
  return scores;
}

Eigen::MatrixXi select_candidate_bits(const Eigen::MatrixXi& bits,
                                      const std::vector<std::string>& class_names,
                                      const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw EmptyCandidates("candidate set is empty");
  Eigen::MatrixXi out(bits.rows(), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto it = std::find(class_names.begin(), class_names.end(), candidates[i]);
    if (it == class_names.end()) throw UnknownClass(candidates[i]);
    out.col(static_cast<Eigen::Index>(i)) =
        bits.col(static_cast<Eigen::Index>(it - class_names.begin()));
  }
  return out;
}

Ranking dap_predict(const AttributeClassifierBank& bank, const Eigen::VectorXd& x,
                    const std::vector<std::string>& candidates,
                    const Eigen::MatrixXi& bits,
                    const std::vector<std::string>& bit_class_names) {
  const Eigen::VectorXd post = posteriors(bank, x);
  const Eigen::MatrixXi cand_bits = select_candidate_bits(bits, bit_class_names, candidates);
  return make_ranking(candidates, dap_scores(post, bank.priors, cand_bits));
}

std::string bank_csv(const AttributeClassifierBank& bank) {
  std::string out = "attribute,prior,threshold,bias";
  for (Eigen::Index j = 0; j < bank.feature_dim(); ++j) out += fmt::format(",w{}", j + 1);
  out += "\n";
  for (Eigen::Index i = 0; i < bank.size(); ++i) {
    out += bank.attribute_names[static_cast<std::size_t>(i)];
    out += "," + csv::format_double(bank.priors[i]);
    out += "," + csv::format_double(bank.thresholds[i]);
    out += "," + csv::format_double(bank.biases[i]);
    for (Eigen::Index j = 0; j < bank.feature_dim(); ++j)
      out += "," + csv::format_double(bank.weights(i, j));
    out += "\n";
  }
  return out;
}

std::string dropped_csv(const AttributeClassifierBank& bank) {
  std::string out = "attribute,reason\n";
  for (const auto& name : bank.dropped_attributes) out += name + ",constant_over_seen\n";
  return out;
}

AttributeClassifierBank load_bank_csv(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "empty bank file");
  const auto header = csv::split_line(lines[0]);
  if (header.size() < 5 || csv::trim(header[0]) != "attribute" ||
      csv::trim(header[1]) != "prior" || csv::trim(header[2]) != "threshold" ||
      csv::trim(header[3]) != "bias")
    throw ParseError(path, 1, "expected header 'attribute,prior,threshold,bias,w1,...'");
  const std::size_t dim = header.size() - 4;

  AttributeClassifierBank bank;
  std::vector<Eigen::VectorXd> weight_rows;
  std::vector<double> priors, thresholds, biases;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (csv::trim(lines[li]).empty()) continue;
    const auto fields = csv::split_line(lines[li]);
    if (fields.size() != header.size())
      throw ParseError(path, li + 1,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    bank.attribute_names.push_back(csv::trim(fields[0]));
    priors.push_back(csv::parse_double(fields[1], path, li + 1));
    thresholds.push_back(csv::parse_double(fields[2], path, li + 1));
    biases.push_back(csv::parse_double(fields[3], path, li + 1));
    Eigen::VectorXd w(dim);
    for (std::size_t j = 4; j < fields.size(); ++j)
      w[static_cast<Eigen::Index>(j - 4)] = csv::parse_double(fields[j], path, li + 1);
    weight_rows.push_back(std::move(w));
    const double prior = priors.back();
    if (prior <= 0.0 || prior >= 1.0)
      throw ParseError(path, li + 1, "prior must lie strictly inside (0,1)");
  }
  if (weight_rows.empty()) throw ParseError(path, 1, "bank file has no classifier rows");

  const Eigen::Index na = static_cast<Eigen::Index>(weight_rows.size());
  bank.weights.resize(na, static_cast<Eigen::Index>(dim));
  bank.priors.resize(na);
  bank.thresholds.resize(na);
  bank.biases.resize(na);
  for (Eigen::Index i = 0; i < na; ++i) {
    bank.weights.row(i) = weight_rows[static_cast<std::size_t>(i)];
    bank.priors[i] = priors[static_cast<std::size_t>(i)];
    bank.thresholds[i] = thresholds[static_cast<std::size_t>(i)];
    bank.biases[i] = biases[static_cast<std::size_t>(i)];
  }
  return bank;
}

}  // namespace cazsl::dap
