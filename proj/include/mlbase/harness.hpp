#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlbase/baseline.hpp"
#include "mlbase/dataset.hpp"
#include "mlbase/error.hpp"
#include "mlbase/metrics.hpp"
#include "mlbase/text.hpp"

// Evaluation protocols. "full" fits and evaluates on the whole dataset —
// the right protocol for a constant baseline, whose fitted prediction is
// insensitive to resampling and whose published reference scores are
// whole-dataset figures. Holdout and k-fold cross-validation are provided
// for parity with how proposed methods are typically measured; both
// shuffle with an explicitly seeded generator so every split is
// reproducible from the (protocol, seed) pair alone.

namespace mlbase {

struct protocol {
  enum class kind_t { full, holdout, kfold };

  kind_t kind = kind_t::full;
  double train_fraction = 0.7;  // holdout only
  std::size_t folds = 10;       // kfold only
  std::uint64_t seed = 0;

  static protocol full() { return {}; }

  static protocol holdout(double train_fraction, std::uint64_t seed = 0) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
      throw argument_error("protocol: holdout fraction must lie strictly between 0 and 1");
    }
    protocol p;
    p.kind = kind_t::holdout;
    p.train_fraction = train_fraction;
    p.seed = seed;
    return p;
  }

  static protocol kfold(std::size_t folds, std::uint64_t seed = 0) {
    if (folds < 2) throw argument_error("protocol: k-fold needs at least 2 folds");
    protocol p;
    p.kind = kind_t::kfold;
    p.folds = folds;
    p.seed = seed;
    return p;
  }

  /// Parses "full", "holdout:<fraction>" or "cv:<k>". The bare forms
  /// "holdout" and "cv" take the defaults (0.7 and 10).
  static protocol parse(std::string_view text, std::uint64_t seed = 0) {
    const std::size_t colon = text.find(':');
    const std::string_view head = detail::trim(text.substr(0, colon));
    const std::string_view tail =
        colon == std::string_view::npos ? std::string_view{} : detail::trim(text.substr(colon + 1));
    if (detail::iequals(head, "full")) {
      if (!tail.empty()) throw argument_error("protocol: 'full' takes no parameter");
      protocol p = full();
      p.seed = seed;
      return p;
    }
    if (detail::iequals(head, "holdout")) {
      if (tail.empty()) return holdout(0.7, seed);
      const std::optional<double> fraction = detail::parse_double(tail);
      if (!fraction) throw argument_error("protocol: bad holdout fraction '" + std::string(tail) + "'");
      return holdout(*fraction, seed);
    }
    if (detail::iequals(head, "cv") || detail::iequals(head, "kfold")) {
      if (tail.empty()) return kfold(10, seed);
      const std::optional<long long> k = detail::parse_integer(tail);
      if (!k || *k < 0) throw argument_error("protocol: bad fold count '" + std::string(tail) + "'");
      return kfold(static_cast<std::size_t>(*k), seed);
    }
    throw argument_error("protocol: unknown protocol '" + std::string(text) + "'");
  }

  std::string to_string() const {
    switch (kind) {
      case kind_t::full: return "full";
      case kind_t::holdout: return "holdout:" + detail::format_double(train_fraction);
      case kind_t::kfold: return "cv:" + std::to_string(folds);
    }
    return "?";
  }

  friend bool operator==(const protocol&, const protocol&) = default;
};

/// Fisher–Yates permutation of 0..n-1 driven by a fixed-algorithm
/// generator. Spelled out rather than delegated to std::shuffle, whose
/// index sequence the standard leaves implementation-defined — splits
/// must be byte-identical across compilers for a given seed.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  std::mt19937_64 engine(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(engine() % i);
    std::swap(indices[i - 1], indices[j]);
  }
  return indices;
}

namespace detail {

inline multi_label_dataset take_instances(const multi_label_dataset& data,
                                          const std::vector<std::size_t>& indices,
                                          std::size_t begin, std::size_t end) {
  multi_label_dataset subset;
  subset.name = data.name;
  subset.label_names = data.label_names;
  subset.feature_schema = data.feature_schema;
  subset.instances.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) subset.instances.push_back(data.instances[indices[i]]);
  return subset;
}

}  // namespace detail

/// Shuffles, then takes ceil(train_fraction * N) instances for training —
/// clamped so both sides stay non-empty.
inline std::pair<multi_label_dataset, multi_label_dataset> split_holdout(
    const multi_label_dataset& data, const protocol& p) {
  if (p.kind != protocol::kind_t::holdout) throw argument_error("split_holdout: protocol is not holdout");
  const std::size_t n = data.size();
  if (n < 2) throw argument_error("split_holdout: need at least 2 instances");
  const std::vector<std::size_t> order = shuffled_indices(n, p.seed);
  std::size_t train_size =
      static_cast<std::size_t>(std::ceil(p.train_fraction * static_cast<double>(n)));
  if (train_size < 1) train_size = 1;
  if (train_size > n - 1) train_size = n - 1;
  return {detail::take_instances(data, order, 0, train_size),
          detail::take_instances(data, order, train_size, n)};
}

/// K (train, test) pairs; fold sizes differ by at most one, with the
/// earlier folds taking the remainder.
inline std::vector<std::pair<multi_label_dataset, multi_label_dataset>> split_kfold(
    const multi_label_dataset& data, const protocol& p) {
  if (p.kind != protocol::kind_t::kfold) throw argument_error("split_kfold: protocol is not k-fold");
  const std::size_t n = data.size();
  if (p.folds > n) throw argument_error("split_kfold: more folds than instances");
  const std::vector<std::size_t> order = shuffled_indices(n, p.seed);
  const std::size_t base = n / p.folds;
  const std::size_t remainder = n % p.folds;

  std::vector<std::pair<multi_label_dataset, multi_label_dataset>> splits;
  splits.reserve(p.folds);
  std::size_t begin = 0;
  for (std::size_t fold = 0; fold < p.folds; ++fold) {
    const std::size_t size = base + (fold < remainder ? 1 : 0);
    const std::size_t end = begin + size;
    std::vector<std::size_t> train_order;
    train_order.reserve(n - size);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < begin || i >= end) train_order.push_back(order[i]);
    }
    splits.emplace_back(detail::take_instances(data, train_order, 0, train_order.size()),
                        detail::take_instances(data, order, begin, end));
    begin = end;
  }
  return splits;
}

/// Applies the fitted model to every instance and scores the predictions.
inline evaluation_report evaluate_model(const general_b_model& model,
                                        const multi_label_dataset& data) {
  if (data.instances.empty()) throw argument_error("evaluate_model: empty dataset");
  std::vector<bipartition_pair> pairs;
  pairs.reserve(data.size());
  for (const instance& example : data.instances) {
    pairs.push_back({example.labels, predict(model, example)});
  }
  return evaluate_all(pairs);
}

/// Fits and evaluates the baseline under the given protocol. Cross-
/// validation reports the unweighted mean of the per-fold values. The
/// "full" protocol never consults the seed, so its result is a pure
/// function of the dataset.
inline evaluation_report evaluate_baseline(const multi_label_dataset& data, const protocol& p) {
  switch (p.kind) {
    case protocol::kind_t::full: {
      const general_b_model model = fit_general_b(data);
      return evaluate_model(model, data);
    }
    case protocol::kind_t::holdout: {
      const auto [train, test] = split_holdout(data, p);
      const general_b_model model = fit_general_b(train);
      return evaluate_model(model, test);
    }
    case protocol::kind_t::kfold: {
      const auto splits = split_kfold(data, p);
      evaluation_report mean;
      for (const auto& [train, test] : splits) {
        const general_b_model model = fit_general_b(train);
        const evaluation_report fold = evaluate_model(model, test);
        for (const auto& [m, value] : fold.values) mean.values[m] += value;
        mean.directions = fold.directions;
      }
      for (auto& [m, value] : mean.values) value /= static_cast<double>(splits.size());
      return mean;
    }
  }
  throw argument_error("evaluate_baseline: unknown protocol kind");
}

}  // namespace mlbase
