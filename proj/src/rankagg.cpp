#include "cazsl/rankagg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace cazsl::rankagg {

namespace {

void check_candidates(const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw EmptyCandidates("candidate set is empty");
  std::unordered_set<std::string> seen;
  for (const auto& c : candidates)
    if (!seen.insert(c).second) throw DuplicateCandidate(c);
}

RankProfile profile_from_rows(Eigen::MatrixXd rows, std::vector<std::string> candidates) {
  if ((rows.array() < -1e-12).any() || (rows.array() > 1.0 + 1e-12).any())
    throw DataError("rank profile entries must lie in [0,1]; normalize the signatures first");
  RankProfile p;
  p.rows = std::move(rows);
  p.candidate_classes = std::move(candidates);
  return p;
}

double objective_value(const RankProfile& profile, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& r, double sigma) {
  double j = 0.0;
  for (Eigen::Index m = 0; m < profile.num_attributes(); ++m)
    j += weights[m] * std::exp(-(r - profile.rows.row(m).transpose()).squaredNorm() / sigma);
  return j;
}

struct RunOutcome {
  Eigen::VectorXd r;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

RunOutcome run_mean_shift(const RankProfile& profile, const Eigen::VectorXd& norm_weights,
                          const Eigen::VectorXd& raw_weights, const Eigen::VectorXd& start,
                          double sigma, int max_iterations, double tolerance) {
  const Eigen::Index na = profile.num_attributes();
  RunOutcome out;
  out.r = start;
  out.trace.push_back(objective_value(profile, raw_weights, out.r, sigma));
  Eigen::VectorXd dist2(na);
  for (int it = 0; it < max_iterations; ++it) {
    for (Eigen::Index m = 0; m < na; ++m)
      dist2[m] = (out.r - profile.rows.row(m).transpose()).squaredNorm();
    // Kernels shifted by the smallest distance so the denominator never
    // underflows to zero; the fixed point is unchanged.
    double min_d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < na; ++m)
      if (norm_weights[m] > 0.0) min_d2 = std::min(min_d2, dist2[m]);
    Eigen::VectorXd next = Eigen::VectorXd::Zero(out.r.size());
    double denom = 0.0;
    for (Eigen::Index m = 0; m < na; ++m) {
      if (norm_weights[m] == 0.0) continue;
      const double k = norm_weights[m] * std::exp(-(dist2[m] - min_d2) / sigma);
      next += k * profile.rows.row(m).transpose();
      denom += k;
    }
    next /= denom;
    const double step = (next - out.r).lpNorm<Eigen::Infinity>();
    out.r = next;
    ++out.iterations;
    out.trace.push_back(objective_value(profile, raw_weights, out.r, sigma));
    if (step < tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

RankProfile induce_ranks(const attrspace::SignatureView& s,
                         const std::vector<std::string>& candidates) {
  check_candidates(candidates);
  Eigen::MatrixXd rows(s.rows(), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i)
    rows.col(static_cast<Eigen::Index>(i)) = s.values->col(s.class_index(candidates[i]));
  return profile_from_rows(std::move(rows), candidates);
}

RankProfile induce_ranks_subset(const attrspace::SignatureView& s,
                                const std::vector<std::string>& attribute_names,
                                const std::vector<std::string>& candidates) {
  check_candidates(candidates);
  std::unordered_map<std::string, Eigen::Index> row_of;
  for (std::size_t i = 0; i < s.attribute_names->size(); ++i)
    row_of.emplace((*s.attribute_names)[i], static_cast<Eigen::Index>(i));
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(attribute_names.size()),
                       static_cast<Eigen::Index>(candidates.size()));
  std::vector<Eigen::Index> cand_cols;
  cand_cols.reserve(candidates.size());
  for (const auto& c : candidates) cand_cols.push_back(s.class_index(c));
  for (std::size_t a = 0; a < attribute_names.size(); ++a) {
    auto it = row_of.find(attribute_names[a]);
    if (it == row_of.end()) throw UnknownAttribute(attribute_names[a]);
    for (std::size_t i = 0; i < cand_cols.size(); ++i)
      rows(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) =
          (*s.values)(it->second, cand_cols[i]);
  }
  return profile_from_rows(std::move(rows), candidates);
}

double kernel_similarity(const Eigen::VectorXd& r, const Eigen::VectorXd& r_m, double sigma) {
  if (sigma <= 0.0) throw NonPositiveSigma("kernel bandwidth must be positive");
  if (r.size() != r_m.size()) throw DimensionMismatch("rank vectors differ in length");
  return std::exp(-(r - r_m).squaredNorm() / sigma);
}

double resolve_sigma(const RankProfile& profile, const SigmaPolicy& policy) {
  if (!policy.use_median) {
    if (policy.value <= 0.0) throw NonPositiveSigma("explicit sigma must be positive");
    return policy.value;
  }
  const Eigen::Index na = profile.num_attributes();
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(na * (na - 1) / 2));
  for (Eigen::Index a = 0; a < na; ++a)
    for (Eigen::Index b = a + 1; b < na; ++b)
      dists.push_back((profile.rows.row(a) - profile.rows.row(b)).squaredNorm());
  if (dists.empty()) return 1.0;
  std::sort(dists.begin(), dists.end());
  const std::size_t n = dists.size();
  const double median =
      n % 2 == 1 ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
  return median > 0.0 ? median : 1.0;
}

AggregationResult aggregate(const RankProfile& profile, const Eigen::VectorXd& weights,
                            const AggregateOptions& options) {
  const Eigen::Index na = profile.num_attributes();
  if (na == 0 || profile.num_candidates() == 0)
    throw DataError("rank profile is empty");
  if (weights.size() != na)
    throw DimensionMismatch("weight count does not match profile row count");
  if (!weights.allFinite()) throw NonFiniteWeight("weights contain non-finite values");
  if ((weights.array() < 0.0).any()) throw DataError("weights must be non-negative");
  const double total = weights.sum();
  if (total <= 0.0) throw AllZeroWeights("at least one weight must be positive");
  if (options.max_iterations < 1 || options.tolerance <= 0.0)
    throw DataError("max_iterations must be >= 1 and tolerance > 0");

  const Eigen::VectorXd norm_weights = weights / total;
  const double sigma = resolve_sigma(profile, options.sigma);

  // Weighted-mean start; with one-hot weights this is the selected row and
  // the first update leaves it fixed.
  Eigen::VectorXd start = Eigen::VectorXd::Zero(profile.num_candidates());
  for (Eigen::Index m = 0; m < na; ++m)
    start += norm_weights[m] * profile.rows.row(m).transpose();

  RunOutcome best = run_mean_shift(profile, norm_weights, weights, start, sigma,
                                   options.max_iterations, options.tolerance);
  if (options.multistart) {
    for (Eigen::Index m = 0; m < na; ++m) {
      RunOutcome alt =
          run_mean_shift(profile, norm_weights, weights, profile.rows.row(m).transpose(),
                         sigma, options.max_iterations, options.tolerance);
      if (alt.trace.back() > best.trace.back()) best = std::move(alt);
    }
  }

  AggregationResult res;
  res.r_star = best.r;
  res.objective = best.trace.back();
  res.iterations = best.iterations;
  res.converged = best.converged;
  res.sigma_used = sigma;
  res.objective_trace = std::move(best.trace);
  res.predicted_index = 0;
  for (Eigen::Index i = 1; i < res.r_star.size(); ++i)
    if (res.r_star[i] > res.r_star[res.predicted_index]) res.predicted_index = static_cast<int>(i);
  res.predicted_class = profile.candidate_classes[static_cast<std::size_t>(res.predicted_index)];
  return res;
}

PpzslPrediction ppzsl_predict(const dap::AttributeClassifierBank& bank,
                              const Eigen::VectorXd& x, const attrspace::SignatureView& s,
                              const std::vector<std::string>& candidates,
                              const AggregateOptions& options) {
  PpzslPrediction out;
  out.weights = dap::posteriors(bank, x);
  const RankProfile profile = induce_ranks_subset(s, bank.attribute_names, candidates);
  out.aggregation = aggregate(profile, out.weights, options);
  out.predicted_class = out.aggregation.predicted_class;
  return out;
}

}  // namespace cazsl::rankagg
