#include "cazsl/pipeline.hpp"

#include <fmt/format.h>

#include <unordered_map>

#include "cazsl/csv.hpp"
#include "cazsl/parallel.hpp"

namespace cazsl::pipeline {

Method parse_method(const std::string& name) {
  if (name == "dap") return Method::kDap;
  if (name == "dap-ca") return Method::kDapCa;
  if (name == "dap-ra") return Method::kDapRa;
  if (name == "dap-ca-ra") return Method::kDapCaRa;
  if (name == "le") return Method::kLe;
  if (name == "le-ca") return Method::kLeCa;
  throw UsageError("unknown method '" + name +
                   "' (expected dap, dap-ca, dap-ra, dap-ca-ra, le, le-ca)");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kDap: return "dap";
    case Method::kDapCa: return "dap-ca";
    case Method::kDapRa: return "dap-ra";
    case Method::kDapCaRa: return "dap-ca-ra";
    case Method::kLe: return "le";
    case Method::kLeCa: return "le-ca";
  }
  return "?";
}

bool method_uses_expanded(Method method) {
  return method == Method::kDapCa || method == Method::kDapCaRa || method == Method::kLeCa;
}

bool method_uses_rank_aggregation(Method method) {
  return method == Method::kDapRa || method == Method::kDapCaRa;
}

bool method_is_label_embedding(Method method) {
  return method == Method::kLe || method == Method::kLeCa;
}

namespace {

struct TestPool {
  std::vector<std::string> sample_ids;
  std::vector<std::string> candidates;
};

TestPool build_test_pool(const datagen::SplitSpec& split, evalkit::EvalMode mode) {
  TestPool pool;
  if (mode == evalkit::EvalMode::kZsl) {
    if (split.test_unseen_samples.empty()) throw EmptyPool("test_unseen pool is empty");
    pool.sample_ids = split.test_unseen_samples;
    pool.candidates = split.unseen_classes;
  } else {
    if (split.test_seen_samples.empty()) throw EmptyPool("test_seen pool is empty");
    if (split.test_unseen_samples.empty()) throw EmptyPool("test_unseen pool is empty");
    pool.sample_ids = split.test_seen_samples;
    pool.sample_ids.insert(pool.sample_ids.end(), split.test_unseen_samples.begin(),
                           split.test_unseen_samples.end());
    pool.candidates = split.all_classes();
  }
  if (pool.candidates.empty()) throw EmptyCandidates("split defines no candidate classes");
  return pool;
}

}  // namespace

PipelineResult run_predict(const datagen::Dataset& data, const datagen::SplitSpec& split,
                           const attrspace::AttributeMatrix& raw_attributes,
                           const PredictOptions& options,
                           const dap::AttributeClassifierBank* preloaded_bank,
                           const lezsl::SerializedModel* preloaded_model) {
  datagen::validate_bundle(data, split, raw_attributes);
  const attrspace::AttributeMatrix normalized = attrspace::normalize_columns(raw_attributes);
  std::optional<attrspace::ExpandedAttributeMatrix> expanded;
  if (method_uses_expanded(options.method)) expanded = attrspace::expand(normalized);
  const attrspace::SignatureView sig =
      expanded ? attrspace::SignatureView(*expanded) : attrspace::SignatureView(normalized);

  const TestPool pool = build_test_pool(split, options.mode);
  std::unordered_map<std::string, Eigen::Index> sample_row;
  for (std::size_t i = 0; i < data.sample_ids.size(); ++i)
    sample_row.emplace(data.sample_ids[i], static_cast<Eigen::Index>(i));
  std::vector<Eigen::Index> rows;
  rows.reserve(pool.sample_ids.size());
  for (const auto& id : pool.sample_ids) {
    auto it = sample_row.find(id);
    if (it == sample_row.end()) throw DataError("test sample '" + id + "' not in dataset");
    rows.push_back(it->second);
  }

  PipelineResult result;
  result.outcomes.resize(pool.sample_ids.size());

  if (method_is_label_embedding(options.method)) {
    lezsl::LabelEmbedding embedding = method_uses_expanded(options.method)
                                          ? lezsl::embedding_expanded(*expanded)
                                          : lezsl::embedding_original(normalized);
    lezsl::BilinearModel model;
    if (preloaded_model) {
      const std::string want = method_uses_expanded(options.method)
                                   ? lezsl::kEmbeddingExpanded
                                   : lezsl::kEmbeddingOriginal;
      if (preloaded_model->embedding_id != want)
        throw DimensionMismatch(fmt::format(
            "model was trained with the '{}' embedding but method {} needs '{}'",
            preloaded_model->embedding_id, method_name(options.method), want));
      if (preloaded_model->w.cols() != embedding.dim() ||
          preloaded_model->w.rows() != data.feature_dim())
        throw DimensionMismatch("serialized model shape does not match data/embedding");
      model.w = preloaded_model->w;
      model.embedding = std::move(embedding);
    } else {
      lezsl::TrainResult trained = lezsl::train(data, split, embedding, options.le_hyper);
      result.loss_trace = trained.loss_trace;
      model = std::move(trained.model);
    }

    parallel_for(rows.size(), options.threads, [&](std::size_t i) {
      const Ranking r =
          lezsl::le_predict(model, data.features.row(rows[i]).transpose(), pool.candidates);
      SampleOutcome& o = result.outcomes[i];
      o.sample_id = pool.sample_ids[i];
      o.predicted = r.predicted();
      o.score = r.ranked.front().score;
      o.degenerate_tie = r.degenerate_tie;
    });
  } else {
    dap::AttributeClassifierBank bank;
    if (preloaded_bank) {
      if (preloaded_bank->feature_dim() != data.feature_dim())
        throw DimensionMismatch("serialized bank feature dimension does not match data");
      bank = *preloaded_bank;
    } else {
      bank = dap::train_bank(data, split, sig, options.dap_hyper);
    }
    result.dropped_attributes = bank.dropped_attributes;

    if (method_uses_rank_aggregation(options.method)) {
      const rankagg::RankProfile profile =
          rankagg::induce_ranks_subset(sig, bank.attribute_names, pool.candidates);
      rankagg::AggregateOptions agg;
      // One bandwidth per candidate set, shared across samples.
      agg.sigma = rankagg::SigmaPolicy::fixed(rankagg::resolve_sigma(profile, options.sigma));
      agg.max_iterations = options.max_iterations;
      agg.tolerance = options.tolerance;
      parallel_for(rows.size(), options.threads, [&](std::size_t i) {
        const Eigen::VectorXd w =
            dap::posteriors(bank, data.features.row(rows[i]).transpose());
        const rankagg::AggregationResult agg_result =
            rankagg::aggregate(profile, w, agg);
        SampleOutcome& o = result.outcomes[i];
        o.sample_id = pool.sample_ids[i];
        o.predicted = agg_result.predicted_class;
        o.objective = agg_result.objective;
        o.iterations = agg_result.iterations;
        o.converged = agg_result.converged;
      });
    } else {
      const Eigen::MatrixXi bits =
          dap::binarize_with_thresholds(sig, bank.attribute_names, bank.thresholds);
      const Eigen::MatrixXi cand_bits =
          dap::select_candidate_bits(bits, *sig.class_names, pool.candidates);
      parallel_for(rows.size(), options.threads, [&](std::size_t i) {
        const Eigen::VectorXd post =
            dap::posteriors(bank, data.features.row(rows[i]).transpose());
        const Ranking r = make_ranking(pool.candidates,
                                       dap::dap_scores(post, bank.priors, cand_bits));
        SampleOutcome& o = result.outcomes[i];
        o.sample_id = pool.sample_ids[i];
        o.predicted = r.predicted();
        o.score = r.ranked.front().score;
        o.degenerate_tie = r.degenerate_tie;
      });
    }
  }

  evalkit::PredictionMap predictions;
  for (const auto& o : result.outcomes) predictions.emplace(o.sample_id, o.predicted);
  result.report = options.mode == evalkit::EvalMode::kZsl
                      ? evalkit::evaluate_zsl(predictions, data, split)
                      : evalkit::evaluate_gzsl(predictions, data, split);
  return result;
}

std::string predictions_csv(const std::vector<SampleOutcome>& outcomes) {
  std::string out = "sample_id,predicted\n";
  for (const auto& o : outcomes) out += o.sample_id + "," + o.predicted + "\n";
  return out;
}

std::string diagnostics_csv(const std::vector<SampleOutcome>& outcomes, Method method) {
  std::string out;
  if (method_uses_rank_aggregation(method)) {
    out = "sample_id,predicted,objective,iterations,converged\n";
    for (const auto& o : outcomes)
      out += fmt::format("{},{},{},{},{}\n", o.sample_id, o.predicted,
                         csv::format_double(o.objective), o.iterations,
                         o.converged ? "true" : "false");
  } else {
    out = "sample_id,predicted,score,degenerate_tie\n";
    for (const auto& o : outcomes)
      out += fmt::format("{},{},{},{}\n", o.sample_id, o.predicted,
                         csv::format_double(o.score), o.degenerate_tie ? "true" : "false");
  }
  return out;
}

evalkit::PredictionMap load_predictions_csv(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "empty predictions file");
  if (csv::trim(lines[0]) != "sample_id,predicted")
    throw ParseError(path, 1, "expected header 'sample_id,predicted'");
  evalkit::PredictionMap map;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (csv::trim(lines[li]).empty()) continue;
    const auto fields = csv::split_line(lines[li]);
    if (fields.size() != 2)
      throw ParseError(path, li + 1, "expected '<sample_id>,<predicted>'");
    const std::string id = csv::trim(fields[0]);
    if (!map.emplace(id, csv::trim(fields[1])).second) throw DuplicateSampleId(id);
  }
  return map;
}

}  // namespace cazsl::pipeline
