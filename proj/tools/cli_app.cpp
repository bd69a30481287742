#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>

#include "cazsl/attrspace.hpp"
#include "cazsl/csv.hpp"
#include "cazsl/dap.hpp"
#include "cazsl/datagen.hpp"
#include "cazsl/errors.hpp"
#include "cazsl/evalkit.hpp"
#include "cazsl/lezsl.hpp"
#include "cazsl/pacbound.hpp"
#include "cazsl/pipeline.hpp"
#include "cazsl/version.hpp"

namespace cazsl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 42;
  int threads = 1;
  bool quiet = false;
};

std::string in_dir(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void write_manifest(const std::string& path, const std::string& command,
                    const json& config, const GlobalOpts& g) {
  json m;
  m["command"] = command;
  m["config"] = config;
  m["seed"] = g.seed;
  m["threads"] = g.threads;
  m["version"] = kVersion;
  csv::write_file_atomic(path, m.dump(2) + "\n");
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
}

// ---- expand ----

struct ExpandCmd {
  std::string in, out;
};

void run_expand(const ExpandCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  const attrspace::AttributeMatrix raw = attrspace::load_attribute_csv(cmd.in);
  if (attrspace::looks_expanded(raw.values))
    throw AlreadyExpanded("input already stacks complements (row pairs sum to one): " +
                          cmd.in);
  const attrspace::AttributeMatrix normalized = attrspace::normalize_columns(raw);
  const attrspace::ExpandedAttributeMatrix s = attrspace::expand(normalized);
  csv::write_file_atomic(cmd.out, attrspace::attribute_csv(s));
  write_manifest(cmd.out + ".manifest.json", "expand", {{"in", cmd.in}, {"out", cmd.out}},
                 g);
  if (!g.quiet) {
    const auto report = attrspace::entropy_report(normalized, s);
    out << "expanded " << s.original_rows << " attributes to " << s.rows() << " rows over "
        << s.cols() << " classes\n";
    out << "class entropy (original -> expanded):\n";
    double gain = 0.0;
    for (const auto& r : report) {
      out << "  " << r.class_name << ": " << csv::format_double(r.entropy_original)
          << " -> " << csv::format_double(r.entropy_expanded) << "\n";
      gain += r.entropy_expanded - r.entropy_original;
    }
    out << "mean entropy gain: " << csv::format_double(gain / report.size()) << "\n";
  }
}

// ---- entropy ----

struct EntropyCmd {
  std::string in, out;
};

void run_entropy(const EntropyCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  const attrspace::AttributeMatrix loaded = attrspace::load_attribute_csv(cmd.in);
  attrspace::AttributeMatrix base;
  attrspace::ExpandedAttributeMatrix s;
  if (attrspace::looks_expanded(loaded.values)) {
    const Eigen::Index m = loaded.values.rows() / 2;
    base.values = loaded.values.topRows(m);
    base.attribute_names.assign(loaded.attribute_names.begin(),
                                loaded.attribute_names.begin() + m);
    base.class_names = loaded.class_names;
    base.normalized = true;
    s.values = loaded.values;
    s.attribute_names = loaded.attribute_names;
    s.class_names = loaded.class_names;
    s.original_rows = m;
    s.source = base;
  } else {
    base = attrspace::normalize_columns(loaded);
    s = attrspace::expand(base);
  }
  const auto report = attrspace::entropy_report(base, s);
  std::string csv_out = "class,original_entropy,expanded_entropy\n";
  for (const auto& r : report)
    csv_out += r.class_name + "," + csv::format_double(r.entropy_original) + "," +
               csv::format_double(r.entropy_expanded) + "\n";
  csv::write_file_atomic(cmd.out, csv_out);
  write_manifest(cmd.out + ".manifest.json", "entropy", {{"in", cmd.in}, {"out", cmd.out}},
                 g);
  if (!g.quiet) {
    int increased = 0;
    for (const auto& r : report)
      if (r.entropy_expanded >= r.entropy_original) ++increased;
    out << "entropy report for " << report.size() << " classes written to " << cmd.out
        << " (" << increased << " classes gained or held entropy)\n";
  }
}

// ---- synth ----

struct SynthCmd {
  datagen::SynthConfig cfg;
  std::string out_dir;
};

void run_synth(SynthCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  cmd.cfg.seed = g.seed;
  const datagen::SynthBundle bundle = datagen::generate_synthetic(cmd.cfg);
  ensure_out_dir(cmd.out_dir);
  datagen::write_dataset(bundle.dataset, bundle.split, bundle.attributes,
                         in_dir(cmd.out_dir, "features.csv"),
                         in_dir(cmd.out_dir, "splits.csv"),
                         in_dir(cmd.out_dir, "attributes.csv"));
  write_manifest(in_dir(cmd.out_dir, "manifest.json"), "synth",
                 {{"seen_classes", cmd.cfg.num_seen_classes},
                  {"unseen_classes", cmd.cfg.num_unseen_classes},
                  {"attributes", cmd.cfg.num_attributes},
                  {"feature_dim", cmd.cfg.feature_dim},
                  {"samples_per_class", cmd.cfg.samples_per_class},
                  {"noise_sigma", cmd.cfg.noise_sigma},
                  {"signature_sparsity", cmd.cfg.signature_sparsity},
                  {"out_dir", cmd.out_dir}},
                 g);
  if (!g.quiet)
    out << "generated " << bundle.dataset.num_samples() << " samples ("
        << bundle.split.train_samples.size() << " train, "
        << bundle.split.test_seen_samples.size() << " test_seen, "
        << bundle.split.test_unseen_samples.size() << " test_unseen) into " << cmd.out_dir
        << "\n";
}

// ---- shared loading ----

struct DataArgs {
  std::string features, splits, attributes;
};

void add_data_args(CLI::App* sub, DataArgs& data) {
  sub->add_option("--features", data.features, "features CSV")->required();
  sub->add_option("--splits", data.splits, "splits CSV")->required();
  sub->add_option("--attributes", data.attributes, "class-attribute CSV")->required();
}

json data_config(const DataArgs& d) {
  return {{"features", d.features}, {"splits", d.splits}, {"attributes", d.attributes}};
}

// ---- train-dap ----

struct TrainDapCmd {
  DataArgs data;
  std::string form = "original";
  dap::TrainConfig hyper;
  std::string out_dir;
};

void run_train_dap(const TrainDapCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  const datagen::LoadedBundle bundle =
      datagen::load_dataset(cmd.data.features, cmd.data.splits, cmd.data.attributes);
  const attrspace::AttributeMatrix normalized =
      attrspace::normalize_columns(bundle.attributes);
  std::optional<attrspace::ExpandedAttributeMatrix> expanded;
  if (cmd.form == "expanded") expanded = attrspace::expand(normalized);
  const attrspace::SignatureView sig =
      expanded ? attrspace::SignatureView(*expanded) : attrspace::SignatureView(normalized);
  const dap::AttributeClassifierBank bank =
      dap::train_bank(bundle.dataset, bundle.split, sig, cmd.hyper);
  ensure_out_dir(cmd.out_dir);
  csv::write_file_atomic(in_dir(cmd.out_dir, "bank.csv"), dap::bank_csv(bank));
  csv::write_file_atomic(in_dir(cmd.out_dir, "dropped.csv"), dap::dropped_csv(bank));
  json config = data_config(cmd.data);
  config["signatures"] = cmd.form;
  config["lr"] = cmd.hyper.learning_rate;
  config["epochs"] = cmd.hyper.epochs;
  config["l2"] = cmd.hyper.l2;
  config["out_dir"] = cmd.out_dir;
  write_manifest(in_dir(cmd.out_dir, "manifest.json"), "train-dap", config, g);
  if (!g.quiet)
    out << "trained " << bank.size() << " attribute classifiers ("
        << bank.dropped_attributes.size() << " dropped) into " << cmd.out_dir << "\n";
}

// ---- train-le ----

struct TrainLeCmd {
  DataArgs data;
  std::string form = "original";
  std::string weight_mode = "uniform";
  lezsl::TrainHyper hyper;
  std::string out_dir;
};

lezsl::WeightMode parse_weight_mode(const std::string& name) {
  if (name == "uniform") return lezsl::WeightMode::kUniform;
  if (name == "rank") return lezsl::WeightMode::kRankBased;
  throw UsageError("weight mode must be 'uniform' or 'rank', got '" + name + "'");
}

void run_train_le(TrainLeCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  const datagen::LoadedBundle bundle =
      datagen::load_dataset(cmd.data.features, cmd.data.splits, cmd.data.attributes);
  const attrspace::AttributeMatrix normalized =
      attrspace::normalize_columns(bundle.attributes);
  lezsl::LabelEmbedding embedding;
  if (cmd.form == "expanded")
    embedding = lezsl::embedding_expanded(attrspace::expand(normalized));
  else
    embedding = lezsl::embedding_original(normalized);
  cmd.hyper.weight_mode = parse_weight_mode(cmd.weight_mode);
  cmd.hyper.seed = g.seed;
  const lezsl::TrainResult result =
      lezsl::train(bundle.dataset, bundle.split, embedding, cmd.hyper);
  ensure_out_dir(cmd.out_dir);
  csv::write_file_atomic(in_dir(cmd.out_dir, "model.csv"), lezsl::model_csv(result.model));
  csv::write_file_atomic(in_dir(cmd.out_dir, "loss_trace.csv"),
                         lezsl::loss_trace_csv(result.loss_trace));
  json config = data_config(cmd.data);
  config["embedding"] = cmd.form;
  config["lr"] = cmd.hyper.learning_rate;
  config["epochs"] = cmd.hyper.epochs;
  config["l2"] = cmd.hyper.l2;
  config["weight_mode"] = cmd.weight_mode;
  config["out_dir"] = cmd.out_dir;
  write_manifest(in_dir(cmd.out_dir, "manifest.json"), "train-le", config, g);
  if (!g.quiet) {
    out << "trained bilinear model (" << result.model.w.rows() << " x "
        << result.model.w.cols() << ") into " << cmd.out_dir;
    if (!result.loss_trace.empty())
      out << ", final loss " << csv::format_double(result.loss_trace.back());
    out << "\n";
  }
}

// ---- predict ----

struct PredictCmd {
  DataArgs data;
  std::string method;
  std::string mode = "zsl";
  std::string bank_path, model_path;
  std::optional<double> lr;
  std::optional<int> epochs;
  std::optional<double> l2;
  std::string weight_mode = "uniform";
  std::string sigma = "median";
  int max_iters = 500;
  double tol = 1e-10;
  std::string out_dir;
};

rankagg::SigmaPolicy parse_sigma(const std::string& text) {
  if (text == "median") return rankagg::SigmaPolicy::median();
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return rankagg::SigmaPolicy::fixed(v);
  } catch (const std::exception&) {
    throw UsageError("--sigma expects 'median' or a positive number, got '" + text + "'");
  }
}

void write_eval_outputs(const std::string& out_dir, const evalkit::EvalReport& report) {
  csv::write_file_atomic(in_dir(out_dir, "report.csv"), evalkit::report_csv(report));
  csv::write_file_atomic(in_dir(out_dir, "per_class.csv"), evalkit::per_class_csv(report));
  csv::write_file_atomic(in_dir(out_dir, "confusion.csv"), evalkit::confusion_csv(report));
  csv::write_file_atomic(in_dir(out_dir, "summary.txt"), evalkit::report_text(report));
}

void run_predict_cmd(const PredictCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  pipeline::PredictOptions options;
  options.method = pipeline::parse_method(cmd.method);
  options.mode = evalkit::parse_mode(cmd.mode);
  options.dap_hyper.learning_rate = cmd.lr.value_or(options.dap_hyper.learning_rate);
  options.dap_hyper.epochs = cmd.epochs.value_or(options.dap_hyper.epochs);
  options.dap_hyper.l2 = cmd.l2.value_or(options.dap_hyper.l2);
  options.le_hyper.learning_rate = cmd.lr.value_or(options.le_hyper.learning_rate);
  options.le_hyper.epochs = cmd.epochs.value_or(options.le_hyper.epochs);
  options.le_hyper.l2 = cmd.l2.value_or(options.le_hyper.l2);
  options.le_hyper.weight_mode = parse_weight_mode(cmd.weight_mode);
  options.le_hyper.seed = g.seed;
  options.sigma = parse_sigma(cmd.sigma);
  options.max_iterations = cmd.max_iters;
  options.tolerance = cmd.tol;
  options.threads = g.threads;

  const bool is_le = pipeline::method_is_label_embedding(options.method);
  if (!cmd.bank_path.empty() && !cmd.model_path.empty())
    throw UsageError("--bank and --model are mutually exclusive");
  if (!cmd.bank_path.empty() && is_le)
    throw UsageError("--bank applies only to dap methods");
  if (!cmd.model_path.empty() && !is_le)
    throw UsageError("--model applies only to label-embedding methods");

  const datagen::LoadedBundle bundle =
      datagen::load_dataset(cmd.data.features, cmd.data.splits, cmd.data.attributes);
  std::optional<dap::AttributeClassifierBank> bank;
  if (!cmd.bank_path.empty()) bank = dap::load_bank_csv(cmd.bank_path);
  std::optional<lezsl::SerializedModel> model;
  if (!cmd.model_path.empty()) model = lezsl::load_model_csv(cmd.model_path);

  const pipeline::PipelineResult result = pipeline::run_predict(
      bundle.dataset, bundle.split, bundle.attributes, options,
      bank ? &*bank : nullptr, model ? &*model : nullptr);

  ensure_out_dir(cmd.out_dir);
  csv::write_file_atomic(in_dir(cmd.out_dir, "predictions.csv"),
                         pipeline::predictions_csv(result.outcomes));
  csv::write_file_atomic(in_dir(cmd.out_dir, "diagnostics.csv"),
                         pipeline::diagnostics_csv(result.outcomes, options.method));
  write_eval_outputs(cmd.out_dir, result.report);
  json config = data_config(cmd.data);
  config["method"] = cmd.method;
  config["mode"] = cmd.mode;
  if (cmd.lr) config["lr"] = *cmd.lr;
  if (cmd.epochs) config["epochs"] = *cmd.epochs;
  if (cmd.l2) config["l2"] = *cmd.l2;
  config["weight_mode"] = cmd.weight_mode;
  config["sigma"] = cmd.sigma;
  config["max_iters"] = cmd.max_iters;
  config["tol"] = cmd.tol;
  if (!cmd.bank_path.empty()) config["bank"] = cmd.bank_path;
  if (!cmd.model_path.empty()) config["model"] = cmd.model_path;
  config["out_dir"] = cmd.out_dir;
  write_manifest(in_dir(cmd.out_dir, "manifest.json"), "predict", config, g);
  if (!g.quiet) out << evalkit::report_text(result.report);
}

// ---- eval ----

struct EvalCmd {
  DataArgs data;
  std::string predictions;
  std::string mode = "zsl";
  std::string out_dir;
};

void run_eval(const EvalCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  const datagen::LoadedBundle bundle =
      datagen::load_dataset(cmd.data.features, cmd.data.splits, cmd.data.attributes);
  const evalkit::PredictionMap predictions =
      pipeline::load_predictions_csv(cmd.predictions);
  const evalkit::EvalMode mode = evalkit::parse_mode(cmd.mode);
  const evalkit::EvalReport report =
      mode == evalkit::EvalMode::kZsl
          ? evalkit::evaluate_zsl(predictions, bundle.dataset, bundle.split)
          : evalkit::evaluate_gzsl(predictions, bundle.dataset, bundle.split);
  ensure_out_dir(cmd.out_dir);
  write_eval_outputs(cmd.out_dir, report);
  json config = data_config(cmd.data);
  config["predictions"] = cmd.predictions;
  config["mode"] = cmd.mode;
  config["out_dir"] = cmd.out_dir;
  write_manifest(in_dir(cmd.out_dir, "manifest.json"), "eval", config, g);
  if (!g.quiet) out << evalkit::report_text(report);
}

// ---- pac-bound ----

struct PacBoundCmd {
  int m = 0, d = 0, n = 0;
  double gamma = 0.0, delta = 0.0;
  std::string rp_file;
  std::optional<double> g_inv;
  bool strict_2m = false;
  std::string out;
};

pacbound::EmpiricalCdf load_rp_file(const std::string& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "empty distance file");
  const std::string header = csv::trim(lines[0]);
  if (header == "distance") {
    std::vector<double> distances;
    for (std::size_t li = 1; li < lines.size(); ++li) {
      if (csv::trim(lines[li]).empty()) continue;
      distances.push_back(csv::parse_double(lines[li], path, li + 1));
    }
    if (distances.empty()) throw ParseError(path, 1, "no distances listed");
    return pacbound::EmpiricalCdf::from_samples(std::move(distances));
  }
  if (header == "z,cdf") {
    std::vector<double> z, p;
    for (std::size_t li = 1; li < lines.size(); ++li) {
      if (csv::trim(lines[li]).empty()) continue;
      const auto fields = csv::split_line(lines[li]);
      if (fields.size() != 2) throw ParseError(path, li + 1, "expected '<z>,<cdf>'");
      z.push_back(csv::parse_double(fields[0], path, li + 1));
      p.push_back(csv::parse_double(fields[1], path, li + 1));
    }
    if (z.empty()) throw ParseError(path, 1, "no CDF rows listed");
    return pacbound::EmpiricalCdf::from_table(std::move(z), std::move(p));
  }
  throw ParseError(path, 1, "expected header 'distance' or 'z,cdf'");
}

void run_pac_bound(const PacBoundCmd& cmd, const GlobalOpts& g, std::ostream& out) {
  if (cmd.rp_file.empty() == !cmd.g_inv.has_value())
    throw UsageError("provide exactly one of --rp-file and --g-inv");
  pacbound::BoundInput input;
  input.num_attributes = cmd.m;
  input.feature_dim = cmd.d;
  input.num_points = cmd.n;
  input.gamma = cmd.gamma;
  input.delta = cmd.delta;
  input.strict_double_count = cmd.strict_2m;
  if (!cmd.rp_file.empty())
    input.rp = load_rp_file(cmd.rp_file);
  else
    input.g_override = cmd.g_inv;
  const pacbound::BoundReport report = pacbound::bound_report(input);
  csv::write_file_atomic(cmd.out, pacbound::bound_report_csv(report));
  json config = {{"M", cmd.m},           {"d", cmd.d},
                 {"n", cmd.n},           {"gamma", cmd.gamma},
                 {"delta", cmd.delta},   {"strict_2m", cmd.strict_2m},
                 {"out", cmd.out}};
  if (!cmd.rp_file.empty()) config["rp_file"] = cmd.rp_file;
  if (cmd.g_inv) config["g_inv"] = *cmd.g_inv;
  write_manifest(cmd.out + ".manifest.json", "pac-bound", config, g);
  if (!g.quiet) out << pacbound::bound_report_csv(report);
}

}  // namespace

int run_with_args(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"zero-shot learning with complementary attributes and rank aggregation"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for synthesis and training")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for per-sample inference")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_flag("--quiet", g.quiet, "suppress progress output");
  app.fallthrough();

  ExpandCmd expand_cmd;
  auto* expand_sub =
      app.add_subcommand("expand", "normalize an attribute matrix and stack complements");
  expand_sub->add_option("--in", expand_cmd.in, "attribute CSV to expand")->required();
  expand_sub->add_option("--out", expand_cmd.out, "output CSV path")->required();

  EntropyCmd entropy_cmd;
  auto* entropy_sub =
      app.add_subcommand("entropy", "per-class entropy before and after expansion");
  entropy_sub->add_option("--in", entropy_cmd.in, "attribute CSV (plain or expanded)")
      ->required();
  entropy_sub->add_option("--out", entropy_cmd.out, "output CSV path")->required();

  SynthCmd synth_cmd;
  auto* synth_sub = app.add_subcommand("synth", "generate a seeded synthetic dataset");
  synth_sub->add_option("--seen", synth_cmd.cfg.num_seen_classes, "seen class count")
      ->capture_default_str();
  synth_sub->add_option("--unseen", synth_cmd.cfg.num_unseen_classes, "unseen class count")
      ->capture_default_str();
  synth_sub->add_option("--attributes", synth_cmd.cfg.num_attributes, "attribute count")
      ->capture_default_str();
  synth_sub->add_option("--dim", synth_cmd.cfg.feature_dim, "feature dimension")
      ->capture_default_str();
  synth_sub
      ->add_option("--samples-per-class", synth_cmd.cfg.samples_per_class,
                   "samples per class")
      ->capture_default_str();
  synth_sub->add_option("--noise-sigma", synth_cmd.cfg.noise_sigma, "feature noise scale")
      ->capture_default_str();
  synth_sub
      ->add_option("--sparsity", synth_cmd.cfg.signature_sparsity,
                   "signature bit probability")
      ->capture_default_str();
  synth_sub->add_option("--out-dir", synth_cmd.out_dir, "output directory")->required();

  TrainDapCmd train_dap_cmd;
  auto* train_dap_sub =
      app.add_subcommand("train-dap", "train per-attribute probabilistic classifiers");
  add_data_args(train_dap_sub, train_dap_cmd.data);
  train_dap_sub
      ->add_option("--signatures", train_dap_cmd.form,
                   "signature form: original or expanded")
      ->check(CLI::IsMember({"original", "expanded"}))
      ->capture_default_str();
  train_dap_sub->add_option("--lr", train_dap_cmd.hyper.learning_rate, "learning rate")
      ->capture_default_str();
  train_dap_sub->add_option("--epochs", train_dap_cmd.hyper.epochs, "training epochs")
      ->capture_default_str();
  train_dap_sub->add_option("--l2", train_dap_cmd.hyper.l2, "L2 penalty")
      ->capture_default_str();
  train_dap_sub->add_option("--out-dir", train_dap_cmd.out_dir, "output directory")
      ->required();

  TrainLeCmd train_le_cmd;
  auto* train_le_sub = app.add_subcommand("train-le", "train the bilinear label embedding");
  add_data_args(train_le_sub, train_le_cmd.data);
  train_le_sub
      ->add_option("--embedding", train_le_cmd.form, "embedding form: original or expanded")
      ->check(CLI::IsMember({"original", "expanded"}))
      ->capture_default_str();
  train_le_sub->add_option("--lr", train_le_cmd.hyper.learning_rate, "learning rate")
      ->capture_default_str();
  train_le_sub->add_option("--epochs", train_le_cmd.hyper.epochs, "training epochs")
      ->capture_default_str();
  train_le_sub->add_option("--l2", train_le_cmd.hyper.l2, "L2 penalty")
      ->capture_default_str();
  train_le_sub
      ->add_option("--weight-mode", train_le_cmd.weight_mode,
                   "hinge weighting: uniform or rank")
      ->check(CLI::IsMember({"uniform", "rank"}))
      ->capture_default_str();
  train_le_sub->add_option("--out-dir", train_le_cmd.out_dir, "output directory")
      ->required();

  PredictCmd predict_cmd;
  auto* predict_sub =
      app.add_subcommand("predict", "train (or load) a model and classify the test pool");
  add_data_args(predict_sub, predict_cmd.data);
  predict_sub
      ->add_option("--method", predict_cmd.method,
                   "dap, dap-ca, dap-ra, dap-ca-ra, le, or le-ca")
      ->required();
  predict_sub->add_option("--mode", predict_cmd.mode, "zsl or gzsl")->capture_default_str();
  predict_sub->add_option("--bank", predict_cmd.bank_path, "pre-trained classifier bank");
  predict_sub->add_option("--model", predict_cmd.model_path, "pre-trained bilinear model");
  predict_sub->add_option("--lr", predict_cmd.lr, "learning rate override");
  predict_sub->add_option("--epochs", predict_cmd.epochs, "epoch override");
  predict_sub->add_option("--l2", predict_cmd.l2, "L2 penalty override");
  predict_sub
      ->add_option("--weight-mode", predict_cmd.weight_mode,
                   "hinge weighting: uniform or rank")
      ->check(CLI::IsMember({"uniform", "rank"}))
      ->capture_default_str();
  predict_sub->add_option("--sigma", predict_cmd.sigma, "kernel bandwidth: median or number")
      ->capture_default_str();
  predict_sub->add_option("--max-iters", predict_cmd.max_iters, "mean-shift iteration cap")
      ->capture_default_str();
  predict_sub->add_option("--tol", predict_cmd.tol, "mean-shift convergence tolerance")
      ->capture_default_str();
  predict_sub->add_option("--out-dir", predict_cmd.out_dir, "output directory")->required();

  EvalCmd eval_cmd;
  auto* eval_sub = app.add_subcommand("eval", "evaluate a predictions file");
  add_data_args(eval_sub, eval_cmd.data);
  eval_sub->add_option("--predictions", eval_cmd.predictions, "predictions CSV")->required();
  eval_sub->add_option("--mode", eval_cmd.mode, "zsl or gzsl")->capture_default_str();
  eval_sub->add_option("--out-dir", eval_cmd.out_dir, "output directory")->required();

  PacBoundCmd pac_cmd;
  auto* pac_sub = app.add_subcommand("pac-bound", "sample-complexity and success bounds");
  pac_sub->add_option("--M", pac_cmd.m, "attribute count")->required();
  pac_sub->add_option("--d", pac_cmd.d, "feature dimension")->required();
  pac_sub->add_option("--n", pac_cmd.n, "attribute-space point count")->required();
  pac_sub->add_option("--gamma", pac_cmd.gamma, "label-stage failure probability")
      ->required();
  pac_sub->add_option("--delta", pac_cmd.delta, "per-classifier failure probability")
      ->required();
  pac_sub->add_option("--rp-file", pac_cmd.rp_file, "distance sample or CDF table CSV");
  pac_sub->add_option("--g-inv", pac_cmd.g_inv, "explicit tolerated distance");
  pac_sub->add_flag("--strict-2m", pac_cmd.strict_2m,
                    "also report the doubled-classifier-count variant");
  pac_sub->add_option("--out", pac_cmd.out, "output CSV path")->required();

  expand_sub->callback([&] { run_expand(expand_cmd, g, out); });
  entropy_sub->callback([&] { run_entropy(entropy_cmd, g, out); });
  synth_sub->callback([&] { run_synth(synth_cmd, g, out); });
  train_dap_sub->callback([&] { run_train_dap(train_dap_cmd, g, out); });
  train_le_sub->callback([&] { run_train_le(train_le_cmd, g, out); });
  predict_sub->callback([&] { run_predict_cmd(predict_cmd, g, out); });
  eval_sub->callback([&] { run_eval(eval_cmd, g, out); });
  pac_sub->callback([&] { run_pac_bound(pac_cmd, g, out); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace cazsl::cli
