#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cazsl/attrspace.hpp"
#include "cazsl/dap.hpp"
#include "cazsl/errors.hpp"

namespace cazsl::rankagg {

// Row m holds attribute m's scores over the candidate classes; higher score
// means ranked above.
struct RankProfile {
  Eigen::MatrixXd rows;  // attributes x candidates
  std::vector<std::string> candidate_classes;

  Eigen::Index num_attributes() const { return rows.rows(); }
  Eigen::Index num_candidates() const { return rows.cols(); }
};

struct SigmaPolicy {
  bool use_median = true;
  double value = 0.0;

  static SigmaPolicy median() { return {true, 0.0}; }
  static SigmaPolicy fixed(double sigma) { return {false, sigma}; }
};

struct AggregateOptions {
  SigmaPolicy sigma = SigmaPolicy::median();
  int max_iterations = 500;
  double tolerance = 1e-10;
  bool multistart = false;  // also start from each profile row, keep best objective
};

struct AggregationResult {
  Eigen::VectorXd r_star;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  int predicted_index = 0;
  std::string predicted_class;
  double sigma_used = 0.0;
  std::vector<double> objective_trace;  // objective at the start, then after each update
};

RankProfile induce_ranks(const attrspace::SignatureView& s,
                         const std::vector<std::string>& candidates);

// Row subset by attribute name, then candidate columns; pairs a trained
// bank's kept attributes with the signature matrix.
RankProfile induce_ranks_subset(const attrspace::SignatureView& s,
                                const std::vector<std::string>& attribute_names,
                                const std::vector<std::string>& candidates);

double kernel_similarity(const Eigen::VectorXd& r, const Eigen::VectorXd& r_m, double sigma);

// Median of pairwise squared distances between profile rows; falls back to 1
// when there are no pairs or all rows coincide.
double resolve_sigma(const RankProfile& profile, const SigmaPolicy& policy);

// Maximizes sum_m w_m * exp(-||r - r_m||^2 / sigma) by mean-shift fixed-point
// iteration from the weighted-mean initializer.
AggregationResult aggregate(const RankProfile& profile, const Eigen::VectorXd& weights,
                            const AggregateOptions& options = {});

struct PpzslPrediction {
  std::string predicted_class;
  Eigen::VectorXd weights;  // the attribute posteriors used
  AggregationResult aggregation;
};

// Posterior-weighted rank aggregation: attribute posteriors for the sample
// become the mixture weights over the induced per-attribute ranks.
PpzslPrediction ppzsl_predict(const dap::AttributeClassifierBank& bank,
                              const Eigen::VectorXd& x, const attrspace::SignatureView& s,
                              const std::vector<std::string>& candidates,
                              const AggregateOptions& options = {});

}  // namespace cazsl::rankagg
