#include "cazsl/evalkit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cazsl/csv.hpp"

namespace cazsl::evalkit {

std::string mode_name(EvalMode mode) {
  return mode == EvalMode::kZsl ? "zsl" : "gzsl";
}

EvalMode parse_mode(const std::string& name) {
  if (name == "zsl") return EvalMode::kZsl;
  if (name == "gzsl") return EvalMode::kGzsl;
  throw UsageError("mode must be 'zsl' or 'gzsl', got '" + name + "'");
}

double harmonic_mean(double acc_unseen, double acc_seen) {
  const double sum = acc_unseen + acc_seen;
  if (sum <= 0.0) return 0.0;
  return 2.0 * acc_unseen * acc_seen / sum;
}

namespace {

EvalReport evaluate_pool(const PredictionMap& predictions, const datagen::Dataset& data,
                         const std::vector<std::string>& pool,
                         const std::vector<std::string>& class_order, EvalMode mode) {
  std::unordered_map<std::string, Eigen::Index> class_col;
  for (std::size_t j = 0; j < class_order.size(); ++j)
    class_col.emplace(class_order[j], static_cast<Eigen::Index>(j));

  EvalReport rep;
  rep.mode = mode;
  rep.class_order = class_order;
  rep.confusion = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(class_order.size()),
                                        static_cast<Eigen::Index>(class_order.size()));
  std::unordered_map<std::string, ClassAccuracy> acc;
  for (const auto& id : pool) {
    auto pit = predictions.find(id);
    if (pit == predictions.end()) throw MissingPrediction(id);
    const Eigen::Index row = data.sample_index(id);
    const std::string& truth = data.labels[static_cast<std::size_t>(row)];
    auto tcol = class_col.find(truth);
    auto pcol = class_col.find(pit->second);
    if (tcol == class_col.end())
      throw CoverageMismatch("sample '" + id + "' has label '" + truth +
                             "' outside the evaluated class set");
    if (pcol == class_col.end())
      throw CoverageMismatch("prediction '" + pit->second + "' for sample '" + id +
                             "' lies outside the candidate set");
    rep.confusion(tcol->second, pcol->second) += 1;
    auto& a = acc[truth];
    a.class_name = truth;
    a.total += 1;
    if (truth == pit->second) a.correct += 1;
    rep.evaluated_samples += 1;
  }

  // Every pool sample is covered by now, so any surplus is an extra entry.
  if (predictions.size() != pool.size())
    throw CoverageMismatch(fmt::format("{} predictions for a test pool of {} samples",
                                       predictions.size(), pool.size()));

  double sum = 0.0;
  for (const auto& name : class_order) {
    auto it = acc.find(name);
    if (it == acc.end()) continue;  // class without test samples stays out of the mean
    rep.per_class.push_back(it->second);
    sum += it->second.accuracy();
  }
  rep.mean_class_acc = rep.per_class.empty() ? 0.0 : sum / rep.per_class.size();
  return rep;
}

double pool_class_mean(const EvalReport& rep, const datagen::SplitSpec& split, bool seen) {
  double sum = 0.0;
  int count = 0;
  for (const auto& a : rep.per_class) {
    const bool is_seen = split.is_seen(a.class_name);
    if (is_seen == seen) {
      sum += a.accuracy();
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

}  // namespace

EvalReport evaluate_zsl(const PredictionMap& predictions, const datagen::Dataset& data,
                        const datagen::SplitSpec& split) {
  if (split.test_unseen_samples.empty()) throw EmptyPool("test_unseen pool is empty");
  return evaluate_pool(predictions, data, split.test_unseen_samples,
                       split.unseen_classes, EvalMode::kZsl);
}

EvalReport evaluate_gzsl(const PredictionMap& predictions, const datagen::Dataset& data,
                         const datagen::SplitSpec& split) {
  if (split.test_seen_samples.empty()) throw EmptyPool("test_seen pool is empty");
  if (split.test_unseen_samples.empty()) throw EmptyPool("test_unseen pool is empty");
  std::vector<std::string> pool = split.test_seen_samples;
  pool.insert(pool.end(), split.test_unseen_samples.begin(),
              split.test_unseen_samples.end());
  EvalReport rep = evaluate_pool(predictions, data, pool, split.all_classes(),
                                 EvalMode::kGzsl);
  rep.acc_seen = pool_class_mean(rep, split, true);
  rep.acc_unseen = pool_class_mean(rep, split, false);
  rep.harmonic_mean = harmonic_mean(rep.acc_unseen, rep.acc_seen);
  return rep;
}

std::vector<double> sample_attribute_distances(const attrspace::SignatureView& s,
                                               const std::vector<std::string>& candidates,
                                               DistanceMetric metric) {
  if (candidates.size() < 2)
    throw TooFewCandidates("need at least two candidate classes for a distance sample");
  std::unordered_set<std::string> unique;
  std::vector<Eigen::Index> cols;
  for (const auto& c : candidates) {
    if (!unique.insert(c).second) throw DuplicateCandidate(c);
    cols.push_back(s.class_index(c));
  }

  Eigen::MatrixXd sigs(s.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i)
    sigs.col(static_cast<Eigen::Index>(i)) = s.values->col(cols[i]);

  if (metric == DistanceMetric::kHammingOnBinarized) {
    for (Eigen::Index r = 0; r < sigs.rows(); ++r) {
      const double t = s.values->row(r).mean();
      for (Eigen::Index c = 0; c < sigs.cols(); ++c)
        sigs(r, c) = sigs(r, c) > t ? 1.0 : 0.0;
    }
  }

  std::vector<double> dists;
  dists.reserve(cols.size() * (cols.size() - 1) / 2);
  for (Eigen::Index a = 0; a < sigs.cols(); ++a)
    for (Eigen::Index b = a + 1; b < sigs.cols(); ++b) {
      if (metric == DistanceMetric::kHammingOnBinarized)
        dists.push_back((sigs.col(a) - sigs.col(b)).cwiseAbs().sum());
      else
        dists.push_back((sigs.col(a) - sigs.col(b)).norm());
    }
  std::sort(dists.begin(), dists.end());
  return dists;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "metric,value\n";
  out += "mode," + mode_name(report.mode) + "\n";
  out += fmt::format("evaluated_classes,{}\n", report.per_class.size());
  out += fmt::format("evaluated_samples,{}\n", report.evaluated_samples);
  out += "mean_class_acc," + csv::format_double(report.mean_class_acc) + "\n";
  if (report.mode == EvalMode::kGzsl) {
    out += "acc_unseen," + csv::format_double(report.acc_unseen) + "\n";
    out += "acc_seen," + csv::format_double(report.acc_seen) + "\n";
    out += "harmonic_mean," + csv::format_double(report.harmonic_mean) + "\n";
  }
  return out;
}

std::string per_class_csv(const EvalReport& report) {
  std::string out = "class,correct,total,accuracy\n";
  for (const auto& a : report.per_class)
    out += fmt::format("{},{},{},{}\n", a.class_name, a.correct, a.total,
                       csv::format_double(a.accuracy()));
  return out;
}

std::string confusion_csv(const EvalReport& report) {
  std::string out = "true_class";
  for (const auto& c : report.class_order) out += "," + c;
  out += "\n";
  for (Eigen::Index i = 0; i < report.confusion.rows(); ++i) {
    out += report.class_order[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < report.confusion.cols(); ++j)
      out += fmt::format(",{}", report.confusion(i, j));
    out += "\n";
  }
  return out;
}

std::string report_text(const EvalReport& report) {
  std::string out;
  out += fmt::format("mode: {}\n", mode_name(report.mode));
  out += fmt::format("evaluated: {} samples across {} classes\n", report.evaluated_samples,
                     report.per_class.size());
  out += fmt::format("mean per-class accuracy: {:.4f}\n", report.mean_class_acc);
  if (report.mode == EvalMode::kGzsl) {
    out += fmt::format("unseen-class accuracy:   {:.4f}\n", report.acc_unseen);
    out += fmt::format("seen-class accuracy:     {:.4f}\n", report.acc_seen);
    out += fmt::format("harmonic mean:           {:.4f}\n", report.harmonic_mean);
  }
  out += "per-class accuracy:\n";
  for (const auto& a : report.per_class)
    out += fmt::format("  {:<24} {:>3}/{:<3} = {:.4f}\n", a.class_name, a.correct, a.total,
                       a.accuracy());
  return out;
}

}  // namespace cazsl::evalkit
