#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <vector>

#include "helpers.hpp"
#include "mlbase/harness.hpp"

using Catch::Matchers::WithinAbs;
using test_support::make_dataset;

namespace {

/// Multiset of labelsets — order-free identity for split bookkeeping.
std::map<std::vector<std::size_t>, int> labelset_census(const mlbase::multi_label_dataset& data) {
  std::map<std::vector<std::size_t>, int> census;
  for (const mlbase::instance& example : data.instances) ++census[example.labels.members()];
  return census;
}

mlbase::multi_label_dataset varied_fixture() {
  return make_dataset(4, {{0},
                          {0, 1},
                          {1, 2},
                          {2},
                          {0, 1, 2},
                          {3},
                          {0, 3},
                          {1},
                          {2, 3},
                          {0, 2}});
}

}  // namespace

TEST_CASE("protocol parsing accepts the documented grammar") {
  CHECK(mlbase::protocol::parse("full") == mlbase::protocol::full());
  CHECK(mlbase::protocol::parse("FULL").kind == mlbase::protocol::kind_t::full);

  const mlbase::protocol h = mlbase::protocol::parse("holdout:0.8", 5);
  CHECK(h.kind == mlbase::protocol::kind_t::holdout);
  CHECK(h.train_fraction == 0.8);
  CHECK(h.seed == 5);
  CHECK(mlbase::protocol::parse("holdout").train_fraction == 0.7);

  const mlbase::protocol k = mlbase::protocol::parse("cv:5");
  CHECK(k.kind == mlbase::protocol::kind_t::kfold);
  CHECK(k.folds == 5);
  CHECK(mlbase::protocol::parse("cv").folds == 10);
  CHECK(mlbase::protocol::parse("kfold:3").folds == 3);
  CHECK(mlbase::protocol::parse(" cv : 4 ").folds == 4);
}

TEST_CASE("protocol parsing rejects malformed input") {
  CHECK_THROWS_AS(mlbase::protocol::parse("full:1"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse("holdout:0"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse("holdout:1"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse("holdout:nope"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse("cv:1"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse("cv:-3"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse("cv:x"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse("bootstrap"), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::parse(""), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::holdout(1.5), mlbase::argument_error);
  CHECK_THROWS_AS(mlbase::protocol::kfold(1), mlbase::argument_error);
}

TEST_CASE("protocol round-trips through its text form") {
  for (const char* text : {"full", "holdout:0.7", "holdout:0.85", "cv:10", "cv:3"}) {
    const mlbase::protocol p = mlbase::protocol::parse(text);
    CHECK(mlbase::protocol::parse(p.to_string()) == p);
  }
  CHECK(mlbase::protocol::kfold(7).to_string() == "cv:7");
  CHECK(mlbase::protocol::holdout(0.7).to_string() == "holdout:0.7");
  CHECK(mlbase::protocol::full().to_string() == "full");
}

TEST_CASE("shuffled_indices is a seed-deterministic permutation") {
  const auto once = mlbase::shuffled_indices(100, 42);
  const auto again = mlbase::shuffled_indices(100, 42);
  CHECK(once == again);
  CHECK(mlbase::shuffled_indices(100, 43) != once);

  auto sorted = once;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);

  CHECK(mlbase::shuffled_indices(0, 1).empty());
  CHECK(mlbase::shuffled_indices(1, 1) == std::vector<std::size_t>{0});
}

TEST_CASE("holdout splits by ceil(fraction * N), clamped to keep both sides") {
  const auto data = varied_fixture();

  SECTION("fraction 0.7 of 10 gives 7 train / 3 test") {
    const auto [train, test] = mlbase::split_holdout(data, mlbase::protocol::holdout(0.7, 3));
    CHECK(train.size() == 7);
    CHECK(test.size() == 3);
    CHECK(train.label_count() == 4);
    CHECK(test.name == data.name);
  }
  SECTION("extreme fraction clamps to leave one test instance") {
    const auto [train, test] = mlbase::split_holdout(data, mlbase::protocol::holdout(0.999, 3));
    CHECK(train.size() == 9);
    CHECK(test.size() == 1);
  }
  SECTION("tiny fraction clamps to keep one training instance") {
    const auto [train, test] = mlbase::split_holdout(data, mlbase::protocol::holdout(0.001, 3));
    CHECK(train.size() == 1);
    CHECK(test.size() == 9);
  }
  SECTION("split is exhaustive and disjoint") {
    const auto [train, test] = mlbase::split_holdout(data, mlbase::protocol::holdout(0.7, 11));
    auto census = labelset_census(train);
    for (const auto& [labels, count] : labelset_census(test)) census[labels] += count;
    CHECK(census == labelset_census(data));
  }
  SECTION("same seed reproduces the same split, different seeds move instances") {
    const auto first = mlbase::split_holdout(data, mlbase::protocol::holdout(0.7, 9));
    const auto second = mlbase::split_holdout(data, mlbase::protocol::holdout(0.7, 9));
    CHECK(first.first.instances == second.first.instances);
    CHECK(first.second.instances == second.second.instances);
  }
  SECTION("degenerate inputs are rejected") {
    const auto single = make_dataset(2, {{0}});
    CHECK_THROWS_AS(mlbase::split_holdout(single, mlbase::protocol::holdout(0.5)),
                    mlbase::argument_error);
    CHECK_THROWS_AS(mlbase::split_holdout(data, mlbase::protocol::full()), mlbase::argument_error);
  }
}

TEST_CASE("k-fold splits partition the data with near-equal folds") {
  const auto data = varied_fixture();

  SECTION("10 instances over 5 folds: every test fold has 2") {
    const auto splits = mlbase::split_kfold(data, mlbase::protocol::kfold(5, 17));
    REQUIRE(splits.size() == 5);
    std::map<std::vector<std::size_t>, int> pooled;
    for (const auto& [train, test] : splits) {
      CHECK(test.size() == 2);
      CHECK(train.size() == 8);
      for (const auto& [labels, count] : labelset_census(test)) pooled[labels] += count;
    }
    CHECK(pooled == labelset_census(data));
  }
  SECTION("11 instances over 3 folds: sizes 4, 4, 3") {
    auto eleven = data;
    eleven.instances.push_back(data.instances.front());
    const auto splits = mlbase::split_kfold(eleven, mlbase::protocol::kfold(3, 17));
    REQUIRE(splits.size() == 3);
    CHECK(splits[0].second.size() == 4);
    CHECK(splits[1].second.size() == 4);
    CHECK(splits[2].second.size() == 3);
    for (const auto& [train, test] : splits) CHECK(train.size() + test.size() == 11);
  }
  SECTION("k equal to N yields leave-one-out") {
    const auto splits = mlbase::split_kfold(data, mlbase::protocol::kfold(10, 2));
    for (const auto& [train, test] : splits) CHECK(test.size() == 1);
  }
  SECTION("more folds than instances is rejected") {
    CHECK_THROWS_AS(mlbase::split_kfold(data, mlbase::protocol::kfold(11)), mlbase::argument_error);
    CHECK_THROWS_AS(mlbase::split_kfold(data, mlbase::protocol::full()), mlbase::argument_error);
  }
}

TEST_CASE("full-protocol evaluation is a pure function of the dataset") {
  const auto data = varied_fixture();
  const mlbase::evaluation_report a = mlbase::evaluate_baseline(data, mlbase::protocol::parse("full", 1));
  const mlbase::evaluation_report b =
      mlbase::evaluate_baseline(data, mlbase::protocol::parse("full", 999));
  CHECK(a == b);

  // Duplicating every instance changes neither the fitted model nor any
  // of the instance-averaged or count-ratio measures.
  auto doubled = data;
  doubled.instances.insert(doubled.instances.end(), data.instances.begin(), data.instances.end());
  const mlbase::evaluation_report c = mlbase::evaluate_baseline(doubled, mlbase::protocol::full());
  for (const auto& [m, value] : a.values) {
    INFO(mlbase::to_string(m));
    CHECK_THAT(c.values.at(m), WithinAbs(value, 1e-12));
  }
}

TEST_CASE("holdout evaluation composes split, fit and score") {
  const auto data = varied_fixture();
  const mlbase::protocol p = mlbase::protocol::holdout(0.7, 23);
  const auto [train, test] = mlbase::split_holdout(data, p);
  const mlbase::evaluation_report manual =
      mlbase::evaluate_model(mlbase::fit_general_b(train), test);
  CHECK(mlbase::evaluate_baseline(data, p) == manual);
}

TEST_CASE("cross-validation reports the unweighted mean of the folds") {
  const auto data = varied_fixture();
  const mlbase::protocol p = mlbase::protocol::kfold(5, 31);

  std::map<mlbase::measure, double> mean;
  for (const auto& [train, test] : mlbase::split_kfold(data, p)) {
    const mlbase::evaluation_report fold =
        mlbase::evaluate_model(mlbase::fit_general_b(train), test);
    for (const auto& [m, value] : fold.values) mean[m] += value;
  }
  const mlbase::evaluation_report combined = mlbase::evaluate_baseline(data, p);
  for (auto& [m, value] : mean) {
    INFO(mlbase::to_string(m));
    CHECK_THAT(combined.values.at(m), WithinAbs(value / 5.0, 1e-12));
  }

  CHECK(mlbase::evaluate_baseline(data, p) == combined);  // repeatable
}

TEST_CASE("full-protocol values match frequency-only closed forms") {
  // For a constant prediction Z over a dataset with label frequencies f_j,
  // several measures collapse to closed forms in N, q, sum|Y|, and
  // S = sum of f_j over j in Z:
  //   HL      = (sum|Y| + N*|Z| - 2S) / (N*q)
  //   Pr      = S / (N*|Z|)
  //   MicroF1 = 2S / (N*|Z| + sum|Y|)
  //   MacroF1 = (1/q) * sum_{j in Z} 2*f_j / (N + f_j)
  // Checking the evaluated pipeline against them exercises fit, predict
  // and scoring end to end through an independent derivation.
  std::mt19937_64 engine(515);
  std::uniform_int_distribution<std::size_t> n_dist(1, 12);
  std::uniform_int_distribution<std::size_t> q_dist(1, 6);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = n_dist(engine);
    const std::size_t q = q_dist(engine);
    std::vector<std::vector<std::size_t>> rows(n);
    for (auto& row : rows) {
      for (std::size_t label = 0; label < q; ++label) {
        if (coin(engine)) row.push_back(label);
      }
    }
    const auto data = make_dataset(q, rows);
    const mlbase::general_b_model model = mlbase::fit_general_b(data);
    const mlbase::evaluation_report report =
        mlbase::evaluate_baseline(data, mlbase::protocol::full());

    const std::vector<std::size_t> freqs = mlbase::label_frequencies(data);
    std::size_t label_total = 0;  // sum over instances of |Y_i|
    for (const std::size_t f : freqs) label_total += f;
    std::size_t covered = 0;  // S
    for (const std::size_t j : model.prediction.members()) covered += freqs[j];
    const double nd = static_cast<double>(n);
    const double sigma = static_cast<double>(model.sigma);

    INFO("round " << round << " N=" << n << " q=" << q);
    CHECK_THAT(report.values.at(mlbase::measure::hamming_loss),
               WithinAbs((static_cast<double>(label_total) + nd * sigma - 2.0 * covered) /
                             (nd * static_cast<double>(q)),
                         1e-12));
    CHECK_THAT(report.values.at(mlbase::measure::precision),
               WithinAbs(static_cast<double>(covered) / (nd * sigma), 1e-12));
    CHECK_THAT(report.values.at(mlbase::measure::micro_f1),
               WithinAbs(2.0 * covered / (nd * sigma + static_cast<double>(label_total)), 1e-12));
    double macro = 0.0;
    for (const std::size_t j : model.prediction.members()) {
      macro += 2.0 * static_cast<double>(freqs[j]) / (nd + static_cast<double>(freqs[j]));
    }
    CHECK_THAT(report.values.at(mlbase::measure::macro_f1),
               WithinAbs(macro / static_cast<double>(q), 1e-12));
  }
}

TEST_CASE("evaluating on an empty dataset is rejected") {
  const auto data = varied_fixture();
  const mlbase::general_b_model model = mlbase::fit_general_b(data);
  mlbase::multi_label_dataset empty = data;
  empty.instances.clear();
  CHECK_THROWS_AS(mlbase::evaluate_model(model, empty), mlbase::argument_error);
}
