#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cazsl/csv.hpp"
#include "cazsl/pipeline.hpp"
#include "cli_app.hpp"

namespace fs = std::filesystem;
using namespace cazsl;
using namespace cazsl::pipeline;

namespace {

datagen::SynthConfig tiny_config(std::uint64_t seed) {
  datagen::SynthConfig cfg;
  cfg.seed = seed;
  cfg.num_seen_classes = 6;
  cfg.num_unseen_classes = 3;
  cfg.num_attributes = 6;
  cfg.feature_dim = 8;
  cfg.samples_per_class = 10;
  cfg.noise_sigma = 0.1;
  cfg.signature_sparsity = 0.5;
  return cfg;
}

PredictOptions fast_options(Method method) {
  PredictOptions o;
  o.method = method;
  o.dap_hyper.epochs = 200;
  o.le_hyper.epochs = 40;
  o.le_hyper.learning_rate = 0.05;
  return o;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run_with_args(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("method names parse both ways") {
    for (const char* name : {"dap", "dap-ca", "dap-ra", "dap-ca-ra", "le", "le-ca"}) {
      CHECK(method_name(parse_method(name)) == name);
    }
    CHECK_THROWS_AS(parse_method("svm"), UsageError);
    CHECK(method_uses_expanded(Method::kDapCa));
    CHECK_FALSE(method_uses_expanded(Method::kDapRa));
    CHECK(method_uses_rank_aggregation(Method::kDapCaRa));
    CHECK_FALSE(method_uses_rank_aggregation(Method::kLe));
    CHECK(method_is_label_embedding(Method::kLeCa));
    CHECK_FALSE(method_is_label_embedding(Method::kDap));
  }

  TEST_CASE("every method solves an easy zero-shot problem") {
    const auto bundle = datagen::generate_synthetic(tiny_config(101));
    for (Method method : {Method::kDap, Method::kDapCa, Method::kDapRa, Method::kDapCaRa,
                          Method::kLe, Method::kLeCa}) {
      const auto result =
          run_predict(bundle.dataset, bundle.split, bundle.attributes, fast_options(method));
      CHECK(result.outcomes.size() == bundle.split.test_unseen_samples.size());
      CHECK(result.report.mean_class_acc > 1.0 / 3.0);
      for (std::size_t i = 0; i < result.outcomes.size(); ++i)
        CHECK(result.outcomes[i].sample_id == bundle.split.test_unseen_samples[i]);
      if (method_is_label_embedding(method))
        CHECK(result.loss_trace.has_value());
      else
        CHECK_FALSE(result.loss_trace.has_value());
    }
  }

  TEST_CASE("generalized mode spans both test pools and all classes") {
    const auto bundle = datagen::generate_synthetic(tiny_config(102));
    auto options = fast_options(Method::kDap);
    options.mode = evalkit::EvalMode::kGzsl;
    const auto result =
        run_predict(bundle.dataset, bundle.split, bundle.attributes, options);
    CHECK(result.outcomes.size() == bundle.split.test_seen_samples.size() +
                                        bundle.split.test_unseen_samples.size());
    CHECK(result.report.mode == evalkit::EvalMode::kGzsl);
    CHECK(result.report.class_order.size() == 9);
    CHECK(result.report.harmonic_mean >= 0.0);
  }

  TEST_CASE("a preloaded bank reproduces inline training") {
    const auto bundle = datagen::generate_synthetic(tiny_config(103));
    const auto options = fast_options(Method::kDap);
    const auto inliner =
        run_predict(bundle.dataset, bundle.split, bundle.attributes, options);

    const auto normalized = attrspace::normalize_columns(bundle.attributes);
    const auto bank = dap::train_bank(bundle.dataset, bundle.split,
                                      attrspace::SignatureView(normalized), options.dap_hyper);
    const auto preloaded = run_predict(bundle.dataset, bundle.split, bundle.attributes,
                                       options, &bank, nullptr);
    CHECK(predictions_csv(inliner.outcomes) == predictions_csv(preloaded.outcomes));
    CHECK(diagnostics_csv(inliner.outcomes, options.method) ==
          diagnostics_csv(preloaded.outcomes, options.method));
  }

  TEST_CASE("a preloaded model reproduces inline training") {
    const auto bundle = datagen::generate_synthetic(tiny_config(104));
    const auto options = fast_options(Method::kLe);
    const auto inliner =
        run_predict(bundle.dataset, bundle.split, bundle.attributes, options);

    const auto normalized = attrspace::normalize_columns(bundle.attributes);
    const auto trained = lezsl::train(bundle.dataset, bundle.split,
                                      lezsl::embedding_original(normalized), options.le_hyper);
    lezsl::SerializedModel serialized;
    serialized.w = trained.model.w;
    serialized.embedding_id = trained.model.embedding.id;
    const auto preloaded = run_predict(bundle.dataset, bundle.split, bundle.attributes,
                                       options, nullptr, &serialized);
    CHECK(predictions_csv(inliner.outcomes) == predictions_csv(preloaded.outcomes));
    CHECK_FALSE(preloaded.loss_trace.has_value());
  }

  TEST_CASE("a model trained on the wrong embedding is rejected") {
    const auto bundle = datagen::generate_synthetic(tiny_config(105));
    const auto options = fast_options(Method::kLeCa);
    const auto normalized = attrspace::normalize_columns(bundle.attributes);
    const auto trained = lezsl::train(bundle.dataset, bundle.split,
                                      lezsl::embedding_original(normalized), options.le_hyper);
    lezsl::SerializedModel serialized;
    serialized.w = trained.model.w;
    serialized.embedding_id = trained.model.embedding.id;
    CHECK_THROWS_AS(run_predict(bundle.dataset, bundle.split, bundle.attributes, options,
                                nullptr, &serialized),
                    DimensionMismatch);
  }

  TEST_CASE("thread count does not change the outcome") {
    const auto bundle = datagen::generate_synthetic(tiny_config(106));
    auto one = fast_options(Method::kDapCaRa);
    one.threads = 1;
    auto four = fast_options(Method::kDapCaRa);
    four.threads = 4;
    const auto a = run_predict(bundle.dataset, bundle.split, bundle.attributes, one);
    const auto b = run_predict(bundle.dataset, bundle.split, bundle.attributes, four);
    CHECK(predictions_csv(a.outcomes) == predictions_csv(b.outcomes));
    CHECK(diagnostics_csv(a.outcomes, Method::kDapCaRa) ==
          diagnostics_csv(b.outcomes, Method::kDapCaRa));
  }

  TEST_CASE("prediction csv round trips through the loader") {
    const auto bundle = datagen::generate_synthetic(tiny_config(107));
    const auto result =
        run_predict(bundle.dataset, bundle.split, bundle.attributes, fast_options(Method::kDap));
    const auto path = (fs::temp_directory_path() / "cazsl_pred.csv").string();
    csv::write_file_atomic(path, predictions_csv(result.outcomes));
    const auto map = load_predictions_csv(path);
    CHECK(map.size() == result.outcomes.size());
    for (const auto& o : result.outcomes) CHECK(map.at(o.sample_id) == o.predicted);
    fs::remove(path);

    csv::write_file_atomic(path, "sample_id,predicted\na,x\na,y\n");
    CHECK_THROWS_AS(load_predictions_csv(path), DuplicateSampleId);
    fs::remove(path);
  }

  TEST_CASE("diagnostics schema depends on the method family") {
    const auto bundle = datagen::generate_synthetic(tiny_config(108));
    const auto plain =
        run_predict(bundle.dataset, bundle.split, bundle.attributes, fast_options(Method::kDap));
    const auto agg = run_predict(bundle.dataset, bundle.split, bundle.attributes,
                                 fast_options(Method::kDapRa));
    const auto d1 = diagnostics_csv(plain.outcomes, Method::kDap);
    const auto d2 = diagnostics_csv(agg.outcomes, Method::kDapRa);
    CHECK(d1.find("score") != std::string::npos);
    CHECK(d2.find("objective") != std::string::npos);
    CHECK(d2.find("iterations") != std::string::npos);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("end-to-end file workflow") {
    const auto dir = fs::temp_directory_path() / "cazsl_cli_flow";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto data_dir = (dir / "data").string();

    const auto synth = run_cli({"--quiet", "synth", "--seen", "6", "--unseen", "3",
                                "--attributes", "6", "--dim", "8", "--samples-per-class", "10",
                                "--noise-sigma", "0.1", "--sparsity", "0.5",
                                "--out-dir", data_dir});
    REQUIRE(synth.code == 0);
    REQUIRE(fs::exists(dir / "data" / "features.csv"));
    REQUIRE(fs::exists(dir / "data" / "splits.csv"));
    REQUIRE(fs::exists(dir / "data" / "attributes.csv"));
    CHECK(fs::exists(dir / "data" / "manifest.json"));

    const auto expanded_path = (dir / "expanded.csv").string();
    const auto expand = run_cli({"expand", "--in", (dir / "data" / "attributes.csv").string(),
                                 "--out", expanded_path});
    CHECK(expand.code == 0);
    CHECK(expand.out.find("mean entropy gain") != std::string::npos);
    REQUIRE(fs::exists(expanded_path));

    const auto re_expand = run_cli({"expand", "--in", expanded_path,
                                    "--out", (dir / "twice.csv").string()});
    CHECK(re_expand.code == 2);
    CHECK(re_expand.err.find("expanded") != std::string::npos);

    const auto entropy = run_cli({"--quiet", "entropy", "--in",
                                  (dir / "data" / "attributes.csv").string(),
                                  "--out", (dir / "entropy.csv").string()});
    CHECK(entropy.code == 0);
    const auto entropy_lines = csv::read_lines((dir / "entropy.csv").string());
    REQUIRE(!entropy_lines.empty());
    CHECK(entropy_lines.front() == "class,original_entropy,expanded_entropy");
    CHECK(entropy_lines.size() == 10);

    const auto bank_dir = (dir / "bank").string();
    const auto train_dap = run_cli({"--quiet", "train-dap",
                                    "--features", (dir / "data" / "features.csv").string(),
                                    "--splits", (dir / "data" / "splits.csv").string(),
                                    "--attributes", (dir / "data" / "attributes.csv").string(),
                                    "--epochs", "200", "--out-dir", bank_dir});
    REQUIRE(train_dap.code == 0);
    REQUIRE(fs::exists(dir / "bank" / "bank.csv"));
    CHECK(fs::exists(dir / "bank" / "dropped.csv"));

    const auto model_dir = (dir / "model").string();
    const auto train_le = run_cli({"--quiet", "train-le",
                                   "--features", (dir / "data" / "features.csv").string(),
                                   "--splits", (dir / "data" / "splits.csv").string(),
                                   "--attributes", (dir / "data" / "attributes.csv").string(),
                                   "--embedding", "original", "--epochs", "40",
                                   "--lr", "0.05", "--out-dir", model_dir});
    REQUIRE(train_le.code == 0);
    REQUIRE(fs::exists(dir / "model" / "model.csv"));
    CHECK(fs::exists(dir / "model" / "loss_trace.csv"));

    const auto pred_dir = (dir / "pred").string();
    const auto predict = run_cli({"--quiet", "predict", "--method", "dap",
                                  "--features", (dir / "data" / "features.csv").string(),
                                  "--splits", (dir / "data" / "splits.csv").string(),
                                  "--attributes", (dir / "data" / "attributes.csv").string(),
                                  "--bank", (dir / "bank" / "bank.csv").string(),
                                  "--out-dir", pred_dir});
    REQUIRE(predict.code == 0);
    for (const char* name : {"predictions.csv", "diagnostics.csv", "report.csv",
                             "per_class.csv", "confusion.csv", "summary.txt", "manifest.json"})
      CHECK(fs::exists(dir / "pred" / name));

    const auto eval_dir = (dir / "eval").string();
    const auto eval = run_cli({"--quiet", "eval",
                               "--predictions", (dir / "pred" / "predictions.csv").string(),
                               "--features", (dir / "data" / "features.csv").string(),
                               "--splits", (dir / "data" / "splits.csv").string(),
                               "--attributes", (dir / "data" / "attributes.csv").string(),
                               "--out-dir", eval_dir});
    REQUIRE(eval.code == 0);
    CHECK(csv::read_lines((dir / "eval" / "report.csv").string()) ==
          csv::read_lines((dir / "pred" / "report.csv").string()));

    fs::remove_all(dir);
  }

  TEST_CASE("prediction runs are reproducible across thread counts") {
    const auto dir = fs::temp_directory_path() / "cazsl_cli_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto data_dir = (dir / "data").string();
    REQUIRE(run_cli({"--quiet", "synth", "--seen", "6", "--unseen", "3", "--attributes", "6",
                     "--dim", "8", "--samples-per-class", "10", "--out-dir", data_dir})
                .code == 0);
    auto predict_args = [&](const std::string& out_dir, const char* threads) {
      return std::vector<std::string>{
          "--quiet", "--threads", threads, "predict", "--method", "dap-ca-ra",
          "--features", (dir / "data" / "features.csv").string(),
          "--splits", (dir / "data" / "splits.csv").string(),
          "--attributes", (dir / "data" / "attributes.csv").string(),
          "--epochs", "150", "--out-dir", out_dir};
    };
    REQUIRE(run_cli(predict_args((dir / "p1").string(), "1")).code == 0);
    REQUIRE(run_cli(predict_args((dir / "p4").string(), "4")).code == 0);
    for (const char* name : {"predictions.csv", "diagnostics.csv", "report.csv"}) {
      std::ifstream a(dir / "p1" / name), b(dir / "p4" / name);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      CHECK(sa.str() == sb.str());
    }
    fs::remove_all(dir);
  }

  TEST_CASE("pac-bound computes from a distance file") {
    const auto dir = fs::temp_directory_path() / "cazsl_cli_bound";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "dists.csv") << "distance\n0.5\n0.8\n1.2\n1.5\n2\n";
    const auto out_path = (dir / "bound.csv").string();
    const auto run = run_cli({"--quiet", "pac-bound", "--M", "10", "--d", "32", "--n", "5",
                              "--gamma", "0.8", "--delta", "0.05",
                              "--rp-file", (dir / "dists.csv").string(), "--out", out_path});
    REQUIRE(run.code == 0);
    bool found = false;
    for (const auto& line : csv::read_lines(out_path)) {
      const auto fields = csv::split_line(line);
      if (fields.size() == 2 && fields[0] == "g_inv_gamma") {
        CHECK(csv::parse_double(fields[1], out_path, 1) == doctest::Approx(0.5));
        found = true;
      }
    }
    CHECK(found);
    CHECK(fs::exists(dir / "bound.csv.manifest.json"));

    const auto both = run_cli({"--quiet", "pac-bound", "--M", "10", "--d", "32", "--n", "5",
                               "--gamma", "0.8", "--delta", "0.05",
                               "--rp-file", (dir / "dists.csv").string(), "--g-inv", "0.5",
                               "--out", out_path});
    CHECK(both.code == 1);

    const auto unreachable = run_cli({"--quiet", "pac-bound", "--M", "10", "--d", "32",
                                      "--n", "5", "--gamma", "0.1", "--delta", "0.05",
                                      "--rp-file", (dir / "dists.csv").string(),
                                      "--out", out_path});
    CHECK(unreachable.code == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("exit codes separate usage, data, and numeric failures") {
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"definitely-not-a-command"}).code == 1);
    CHECK(run_cli({"expand", "--in", "/nonexistent/a.csv", "--out", "/tmp/x.csv"}).code == 2);
    CHECK(run_cli({"predict", "--method", "svm", "--features", "f", "--splits", "s",
                   "--attributes", "a", "--out-dir", "/tmp/zz"})
              .code == 1);
    CHECK(run_cli({"predict", "--method", "le", "--features", "f", "--splits", "s",
                   "--attributes", "a", "--bank", "b.csv", "--out-dir", "/tmp/zz"})
              .code == 1);
    CHECK(run_cli({"predict", "--method", "dap-ra", "--features", "f", "--splits", "s",
                   "--attributes", "a", "--sigma", "garbage", "--out-dir", "/tmp/zz"})
              .code == 1);
  }

  TEST_CASE("help text names every subcommand") {
    const auto help = run_cli({"--help"});
    for (const char* name :
         {"expand", "entropy", "synth", "train-dap", "train-le", "predict", "eval", "pac-bound"})
      CHECK(help.out.find(name) != std::string::npos);
  }
}
