#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "cazsl/csv.hpp"
#include "cazsl/lezsl.hpp"
#include "oracles.hpp"

using namespace cazsl;
using namespace cazsl::lezsl;

namespace {

attrspace::AttributeMatrix base_matrix() {
  Eigen::MatrixXd v(2, 3);
  v << 0.9, 0.1, 0.5,
       0.2, 0.8, 0.5;
  return attrspace::make_attribute_matrix(v, {"a0", "a1"}, {"c0", "c1", "c2"});
}

BilinearModel model_with(const Eigen::MatrixXd& w) {
  BilinearModel m;
  m.w = w;
  m.embedding = embedding_original(attrspace::normalize_columns(base_matrix()));
  return m;
}

// Two seen classes whose features sit on opposite ends of the first axis.
std::pair<datagen::Dataset, datagen::SplitSpec> separable_problem(int per_class) {
  datagen::Dataset d;
  oracles::XorShift gen{29};
  std::vector<Eigen::VectorXd> rows;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < per_class; ++i) {
      Eigen::VectorXd x(2);
      x << (c == 0 ? -1.5 : 1.5) + 0.3 * (gen.uniform() - 0.5),
           0.5 * (gen.uniform() - 0.5);
      d.sample_ids.push_back("c" + std::to_string(c) + "_" + std::to_string(i));
      d.labels.push_back("c" + std::to_string(c));
      rows.push_back(x);
    }
  }
  d.features.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i)
    d.features.row(static_cast<Eigen::Index>(i)) = rows[i];
  datagen::SplitSpec split;
  split.seen_classes = {"c0", "c1"};
  split.unseen_classes = {"c2"};
  split.train_samples = d.sample_ids;
  return {d, split};
}

}  // namespace

TEST_SUITE("lezsl") {
  TEST_CASE("embeddings carry their source id and values") {
    const auto n = attrspace::normalize_columns(base_matrix());
    const auto orig = embedding_original(n);
    CHECK(orig.id == kEmbeddingOriginal);
    CHECK(orig.dim() == 2);
    CHECK((orig.columns - n.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(orig.class_column("c1") == 1);
    CHECK_THROWS_AS(orig.class_column("nope"), UnknownClass);

    const auto s = attrspace::expand(n);
    const auto exp = embedding_expanded(s);
    CHECK(exp.id == kEmbeddingExpanded);
    CHECK(exp.dim() == 4);
    CHECK((exp.columns - s.values).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("embedding_original requires normalized input") {
    CHECK_THROWS_AS(embedding_original(base_matrix()), NotNormalized);
  }

  TEST_CASE("compatibility is the bilinear form") {
    Eigen::MatrixXd w(2, 2);
    w << 1.0, 2.0,
         3.0, 4.0;
    const auto m = model_with(w);
    Eigen::VectorXd x(2);
    x << 1.0, -1.0;
    const auto& phi = m.embedding.columns;
    const double expected =
        x(0) * (w(0, 0) * phi(0, 0) + w(0, 1) * phi(1, 0)) +
        x(1) * (w(1, 0) * phi(0, 0) + w(1, 1) * phi(1, 0));
    CHECK(compatibility(m, x, "c0") == doctest::Approx(expected).epsilon(1e-12));
    CHECK(compatibility(model_with(Eigen::MatrixXd::Zero(2, 2)), x, "c0") ==
          doctest::Approx(0.0));
  }

  TEST_CASE("satisfied margins leave only the regularizer") {
    // W chosen so the true class wins by much more than the unit margin.
    Eigen::MatrixXd w(2, 2);
    w << 10.0, -10.0,
         0.0, 0.0;
    const auto m = model_with(w);
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;  // strongly compatible with c0's signature
    const auto loss = sample_loss(m, x, "c0", {"c0", "c1"}, WeightMode::kUniform, 0.0);
    CHECK(loss.value == doctest::Approx(0.0));
    CHECK(loss.gradient.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    const double l2 = 0.01;
    const auto reg = sample_loss(m, x, "c0", {"c0", "c1"}, WeightMode::kUniform, l2);
    CHECK(reg.value == doctest::Approx(l2 * w.squaredNorm()).epsilon(1e-12));
    CHECK((reg.gradient - 2.0 * l2 * w).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("zero weights give each wrong class a unit hinge") {
    const auto m = model_with(Eigen::MatrixXd::Zero(2, 2));
    Eigen::VectorXd x(2);
    x << 1.0, 1.0;
    const auto loss = sample_loss(m, x, "c0", {"c0", "c1", "c2"}, WeightMode::kUniform, 0.0);
    // All compatibilities are zero, so both wrong classes violate the unit
    // margin exactly; uniform weighting sums the two hinges.
    CHECK(loss.value == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("gradient matches finite differences") {
    oracles::XorShift gen{31};
    const auto n = attrspace::normalize_columns(base_matrix());
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXd w(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) w(i, j) = 2.0 * gen.uniform() - 1.0;
      auto m = model_with(w);
      Eigen::VectorXd x(2);
      x << 2.0 * gen.uniform() - 1.0, 2.0 * gen.uniform() - 1.0;
      for (WeightMode mode : {WeightMode::kUniform, WeightMode::kRankBased}) {
        const auto loss = sample_loss(m, x, "c0", {"c0", "c1", "c2"}, mode, 1e-3);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            auto f = [&](double v) {
              auto probe = m;
              probe.w(i, j) = v;
              return sample_loss(probe, x, "c0", {"c0", "c1", "c2"}, mode, 1e-3).value;
            };
            const double numeric = oracles::central_difference(f, m.w(i, j), 1e-6);
            CHECK(loss.gradient(i, j) == doctest::Approx(numeric).epsilon(5e-4));
          }
      }
    }
  }

  TEST_CASE("rank weighting discounts later violators") {
    // Zero W: every wrong class ties at compatibility 0 with hinge 1.
    const auto m = model_with(Eigen::MatrixXd::Zero(2, 2));
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;
    const auto uniform = sample_loss(m, x, "c0", {"c0", "c1", "c2"}, WeightMode::kUniform, 0.0);
    const auto ranked = sample_loss(m, x, "c0", {"c0", "c1", "c2"}, WeightMode::kRankBased, 0.0);
    CHECK(uniform.value == doctest::Approx(2.0));
    CHECK(ranked.value == doctest::Approx(1.0 + 0.5).epsilon(1e-12));
  }

  TEST_CASE("training is deterministic and its loss decreases") {
    const auto [data, split] = separable_problem(15);
    const auto emb = embedding_original(attrspace::normalize_columns(base_matrix()));
    TrainHyper hyper;
    hyper.learning_rate = 0.002;
    hyper.epochs = 30;
    const auto a = train(data, split, emb, hyper);
    const auto b = train(data, split, emb, hyper);
    CHECK((a.model.w - b.model.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.loss_trace == b.loss_trace);
    REQUIRE(a.loss_trace.size() == 30);
    CHECK(a.loss_trace.back() < a.loss_trace.front());

    TrainHyper other = hyper;
    other.seed = 7;
    const auto c = train(data, split, emb, other);
    CHECK((a.model.w - c.model.w).cwiseAbs().maxCoeff() > 0.0);
  }

  TEST_CASE("training separates the separable problem") {
    const auto [data, split] = separable_problem(15);
    const auto emb = embedding_original(attrspace::normalize_columns(base_matrix()));
    TrainHyper hyper;
    hyper.learning_rate = 0.05;
    hyper.epochs = 60;
    const auto result = train(data, split, emb, hyper);
    int correct = 0;
    for (Eigen::Index i = 0; i < data.num_samples(); ++i) {
      const auto r = le_predict(result.model, data.features.row(i).transpose(),
                                split.seen_classes);
      correct += (r.predicted() == data.labels[static_cast<std::size_t>(i)]);
    }
    CHECK(correct == data.num_samples());
  }

  TEST_CASE("zero epochs keep the seeded initializer") {
    const auto [data, split] = separable_problem(4);
    const auto emb = embedding_original(attrspace::normalize_columns(base_matrix()));
    TrainHyper hyper;
    hyper.epochs = 0;
    const auto result = train(data, split, emb, hyper);
    CHECK(result.loss_trace.empty());
    const double bound = 1.0 / std::sqrt(2.0);
    CHECK(result.model.w.cwiseAbs().maxCoeff() <= bound + 1e-12);
    CHECK(result.model.w.cwiseAbs().maxCoeff() > 0.0);
  }

  TEST_CASE("hyperparameters are validated") {
    const auto [data, split] = separable_problem(4);
    const auto emb = embedding_original(attrspace::normalize_columns(base_matrix()));
    TrainHyper bad;
    bad.learning_rate = -0.1;
    CHECK_THROWS_AS(train(data, split, emb, bad), DataError);
    bad.learning_rate = 11.0;
    CHECK_THROWS_AS(train(data, split, emb, bad), DataError);
    TrainHyper huge;
    huge.epochs = 2000000;
    CHECK_THROWS_AS(train(data, split, emb, huge), DataError);
    TrainHyper fine;
    fine.learning_rate = 0.0;
    fine.epochs = 3;
    const auto frozen = train(data, split, emb, fine);
    REQUIRE(frozen.loss_trace.size() == 3);
    CHECK(frozen.loss_trace[0] == doctest::Approx(frozen.loss_trace[2]));
  }

  TEST_CASE("model csv round trips with its embedding id") {
    const auto [data, split] = separable_problem(5);
    const auto emb = embedding_original(attrspace::normalize_columns(base_matrix()));
    TrainHyper hyper;
    hyper.epochs = 5;
    const auto result = train(data, split, emb, hyper);
    const auto path = (std::filesystem::temp_directory_path() / "cazsl_model.csv").string();
    csv::write_file_atomic(path, model_csv(result.model));
    const auto lines = csv::read_lines(path);
    CHECK(lines.front() == "2,2,original");
    const auto loaded = load_model_csv(path);
    CHECK(loaded.embedding_id == kEmbeddingOriginal);
    CHECK((loaded.w - result.model.w).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
  }

  TEST_CASE("model loader rejects malformed files") {
    const auto path = (std::filesystem::temp_directory_path() / "cazsl_model_bad.csv").string();
    csv::write_file_atomic(path, "2,2,original\n0.5,0.5\n");
    CHECK_THROWS_AS(load_model_csv(path), ParseError);
    csv::write_file_atomic(path, "2,2,sideways\n0.5,0.5\n0.5,0.5\n");
    CHECK_THROWS_AS(load_model_csv(path), ParseError);
    std::filesystem::remove(path);
  }

  TEST_CASE("loss trace csv lists one epoch per row") {
    const auto text = loss_trace_csv({0.5, 0.25});
    CHECK(text == "epoch,loss\n1,0.5\n2,0.25\n");
  }

  TEST_CASE("le_predict ranks by compatibility") {
    Eigen::MatrixXd w(2, 2);
    w << 5.0, -5.0,
         0.0, 0.0;
    const auto m = model_with(w);
    Eigen::VectorXd x(2);
    x << 1.0, 0.0;
    const auto r = le_predict(m, x, {"c0", "c1", "c2"});
    CHECK(r.predicted() == "c0");
    Eigen::VectorXd y = -x;
    CHECK(le_predict(m, y, {"c0", "c1", "c2"}).predicted() == "c1");
    CHECK_THROWS_AS(le_predict(m, x, {}), EmptyCandidates);
  }
}
