#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cazsl/dap.hpp"
#include "cazsl/datagen.hpp"
#include "cazsl/evalkit.hpp"
#include "cazsl/lezsl.hpp"
#include "cazsl/rankagg.hpp"

namespace cazsl::pipeline {

// The ablation cells: probability scores, their rank-aggregated variant, and
// the bilinear learner, each with plain or complement-expanded signatures.
enum class Method { kDap, kDapCa, kDapRa, kDapCaRa, kLe, kLeCa };

Method parse_method(const std::string& name);  // UsageError on anything else
std::string method_name(Method method);
bool method_uses_expanded(Method method);
bool method_uses_rank_aggregation(Method method);
bool method_is_label_embedding(Method method);

struct PredictOptions {
  Method method = Method::kDapCaRa;
  evalkit::EvalMode mode = evalkit::EvalMode::kZsl;
  dap::TrainConfig dap_hyper;
  lezsl::TrainHyper le_hyper;
  rankagg::SigmaPolicy sigma = rankagg::SigmaPolicy::median();
  int max_iterations = 500;
  double tolerance = 1e-10;
  int threads = 1;
};

struct SampleOutcome {
  std::string sample_id;
  std::string predicted;
  double score = 0.0;       // winning score (probability or compatibility methods)
  double objective = 0.0;   // aggregation objective (rank-aggregation methods)
  int iterations = 0;
  bool converged = true;
  bool degenerate_tie = false;
};

struct PipelineResult {
  std::vector<SampleOutcome> outcomes;  // test-pool order
  evalkit::EvalReport report;
  std::vector<std::string> dropped_attributes;
  std::optional<std::vector<double>> loss_trace;  // when a model was trained here
};

// Trains whatever the method needs (unless a pre-trained bank/model is
// supplied), predicts over the mode's test pool, and evaluates.
PipelineResult run_predict(const datagen::Dataset& data, const datagen::SplitSpec& split,
                           const attrspace::AttributeMatrix& raw_attributes,
                           const PredictOptions& options,
                           const dap::AttributeClassifierBank* preloaded_bank = nullptr,
                           const lezsl::SerializedModel* preloaded_model = nullptr);

std::string predictions_csv(const std::vector<SampleOutcome>& outcomes);
std::string diagnostics_csv(const std::vector<SampleOutcome>& outcomes, Method method);
evalkit::PredictionMap load_predictions_csv(const std::string& path);

}  // namespace cazsl::pipeline
