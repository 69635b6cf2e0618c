// Copyright 2026 The hltruth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numeric>
#include <sstream>

#include "hltruth/entailment.hpp"
#include "hltruth/error.hpp"
#include "hltruth/util.hpp"
#include "json.hpp"

namespace hltruth {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kMaxLearningRateHalvings = 40;

// Mean log-loss, computed from the logit for numerical stability.
double mean_log_loss(std::span<const FeatureVector> x,
                     std::span<const double> y, const FeatureVector& w,
                     double b) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = b;
    for (std::size_t k = 0; k < kFeatureCount; ++k) z += w[k] * x[i][k];
    total += std::max(z, 0.0) - z * y[i] + std::log1p(std::exp(-std::abs(z)));
  }
  return total / static_cast<double>(x.size());
}

FeatureVector json_to_vector(const ordered_json& j, const char* key) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != kFeatureCount) {
    throw DataError(std::string("model field \"") + key + "\" must hold " +
                    std::to_string(kFeatureCount) + " numbers");
  }
  FeatureVector v{};
  for (std::size_t k = 0; k < kFeatureCount; ++k) v[k] = arr[k].get<double>();
  return v;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LexicalModel::predict(const FeatureVector& x) const {
  double z = bias;
  for (std::size_t k = 0; k < kFeatureCount; ++k)
    z += weights[k] * (x[k] - feature_means[k]) / feature_stds[k];
  return sigmoid(z);
}

std::string LexicalModel::to_json() const {
  ordered_json j;
  j["weights"] = weights;
  j["bias"] = bias;
  j["feature_means"] = feature_means;
  j["feature_stds"] = feature_stds;
  ordered_json names = ordered_json::array();
  for (auto n : LexicalFeatures::names()) names.push_back(n);
  j["feature_names"] = names;
  ordered_json meta;
  meta["epochs"] = training_meta.hyper.epochs;
  meta["learning_rate"] = training_meta.hyper.learning_rate;
  meta["seed"] = training_meta.hyper.seed;
  meta["batch_size"] = training_meta.hyper.batch_size;
  meta["loss_tolerance"] = training_meta.hyper.loss_tolerance;
  meta["final_learning_rate"] = training_meta.final_learning_rate;
  meta["epoch_losses"] = training_meta.epoch_losses;
  ordered_json tok;
  tok["mode"] = to_string(training_meta.tokenizer.mode);
  tok["lowercase"] = training_meta.tokenizer.lowercase;
  tok["mask_digits"] = training_meta.tokenizer.mask_digits;
  meta["tokenizer"] = tok;
  j["training_meta"] = meta;
  return j.dump(2) + "\n";
}

LexicalModel LexicalModel::from_json(std::string_view text) {
  LexicalModel m;
  try {
    const ordered_json j = ordered_json::parse(text);
    const auto& names = j.at("feature_names");
    if (!names.is_array() || names.size() != kFeatureCount)
      throw DataError("model feature_names has the wrong length");
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      if (names[k].get<std::string>() != LexicalFeatures::names()[k]) {
        throw DataError("model feature " + std::to_string(k) + " is '" +
                        names[k].get<std::string>() + "', expected '" +
                        std::string(LexicalFeatures::names()[k]) + "'");
      }
    }
    m.weights = json_to_vector(j, "weights");
    m.bias = j.at("bias").get<double>();
    m.feature_means = json_to_vector(j, "feature_means");
    m.feature_stds = json_to_vector(j, "feature_stds");
    for (double s : m.feature_stds)
      if (!(s > 0.0) || !std::isfinite(s))
        throw DataError("model feature_stds must be finite and positive");
    const auto& meta = j.at("training_meta");
    m.training_meta.hyper.epochs = meta.value("epochs", 0);
    m.training_meta.hyper.learning_rate = meta.value("learning_rate", 0.0);
    m.training_meta.hyper.seed = meta.value("seed", std::uint64_t{0});
    m.training_meta.hyper.batch_size = meta.value("batch_size", std::size_t{0});
    m.training_meta.hyper.loss_tolerance = meta.value("loss_tolerance", 0.0);
    m.training_meta.final_learning_rate =
        meta.value("final_learning_rate", 0.0);
    if (meta.contains("epoch_losses"))
      m.training_meta.epoch_losses =
          meta.at("epoch_losses").get<std::vector<double>>();
    if (meta.contains("tokenizer")) {
      const auto& tok = meta.at("tokenizer");
      m.training_meta.tokenizer.mode =
          parse_tokenizer_mode(tok.at("mode").get<std::string>());
      m.training_meta.tokenizer.lowercase = tok.at("lowercase").get<bool>();
      m.training_meta.tokenizer.mask_digits = tok.at("mask_digits").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed lexical model: ") + e.what());
  }
  return m;
}

void LexicalModel::save(const std::filesystem::path& path) const {
  write_file(path, to_json());
}

LexicalModel LexicalModel::load(const std::filesystem::path& path) {
  try {
    return from_json(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LexicalModel train_on_features(std::span<const FeatureVector> features,
                               std::span<const EntailmentLabel> labels,
                               std::span<const std::string> ids,
                               const TrainHyper& hyper) {
  if (features.size() != labels.size())
    throw DataError("train: features and labels differ in length");
  if (hyper.epochs < 0 || !(hyper.learning_rate > 0.0) ||
      hyper.batch_size == 0) {
    throw DataError("train: epochs >= 0, learning_rate > 0, batch_size >= 1");
  }
  const std::size_t n = features.size();
  std::size_t positives = 0;
  for (auto l : labels) positives += l == EntailmentLabel::kEntail;
  if (positives == 0 || positives == n) {
    throw DataError("train: labeled data must contain both entail and "
                    "non_entail examples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      if (!std::isfinite(features[i][k])) {
        const std::string id = i < ids.size() ? ids[i] : std::to_string(i);
        throw DataError("train: feature '" +
                        std::string(LexicalFeatures::names()[k]) +
                        "' is non-finite for instance '" + id + "'");
      }
    }
  }

  LexicalModel model;
  model.training_meta.hyper = hyper;

  // Standardization statistics are frozen into the model.
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    double sum = 0.0;
    for (const auto& f : features) sum += f[k];
    const double mu = sum / n;
    double var = 0.0;
    for (const auto& f : features) var += (f[k] - mu) * (f[k] - mu);
    const double sd = std::sqrt(var / n);
    model.feature_means[k] = mu;
    model.feature_stds[k] = sd > 1e-12 ? sd : 1.0;
  }
  std::vector<FeatureVector> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kFeatureCount; ++k)
      x[i][k] = (features[i][k] - model.feature_means[k]) /
                model.feature_stds[k];
    y[i] = labels[i] == EntailmentLabel::kEntail ? 1.0 : 0.0;
  }

  FeatureVector w{};
  double b = 0.0;
  double lr = hyper.learning_rate;
  double prev_loss = mean_log_loss(x, y, w, b);
  std::vector<std::size_t> order(n);

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    seeded_shuffle(order, hyper.seed + static_cast<std::uint64_t>(epoch));

    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxLearningRateHalvings; ++attempt) {
      FeatureVector tw = w;
      double tb = b;
      for (std::size_t start = 0; start < n; start += hyper.batch_size) {
        const std::size_t end = std::min(n, start + hyper.batch_size);
        FeatureVector gw{};
        double gb = 0.0;
        for (std::size_t p = start; p < end; ++p) {
          const std::size_t i = order[p];
          double z = tb;
          for (std::size_t k = 0; k < kFeatureCount; ++k) z += tw[k] * x[i][k];
          const double err = sigmoid(z) - y[i];
          for (std::size_t k = 0; k < kFeatureCount; ++k) gw[k] += err * x[i][k];
          gb += err;
        }
        const double scale = lr / static_cast<double>(end - start);
        for (std::size_t k = 0; k < kFeatureCount; ++k) tw[k] -= scale * gw[k];
        tb -= scale * gb;
      }
      const double loss = mean_log_loss(x, y, tw, tb);
      if (!std::isfinite(loss)) {
        std::size_t worst = 0;
        for (std::size_t k = 1; k < kFeatureCount; ++k)
          if (std::abs(tw[k]) > std::abs(tw[worst])) worst = k;
        throw DataError("train: non-finite loss at epoch " +
                        std::to_string(epoch + 1) + " (largest weight on '" +
                        std::string(LexicalFeatures::names()[worst]) + "')");
      }
      if (loss <= prev_loss + hyper.loss_tolerance) {
        w = tw;
        b = tb;
        prev_loss = loss;
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;  // converged to within floating-point noise
    model.training_meta.epoch_losses.push_back(prev_loss);
  }
  model.weights = w;
  model.bias = b;
  model.training_meta.final_learning_rate = lr;
  return model;
}

LexicalModel train_lexical(std::span<const LabeledInstance> labeled,
                           const TrainHyper& hyper,
                           const TokenizerConfig& tokenizer,
                           const StopwordList& stopwords) {
  std::vector<FeatureVector> features;
  std::vector<EntailmentLabel> labels;
  std::vector<std::string> ids;
  features.reserve(labeled.size());
  for (const auto& ex : labeled) {
    const Tokens src = tokenize(tokenizer, ex.instance.source);
    const Tokens hl = tokenize(tokenizer, ex.instance.headline);
    if (hl.empty()) {
      throw DataError("train: instance '" + ex.instance.id +
                      "' has an empty headline");
    }
    features.push_back(extract_features(src, hl, stopwords).values());
    labels.push_back(ex.label);
    ids.push_back(ex.instance.id);
  }
  LexicalModel model = train_on_features(features, labels, ids, hyper);
  model.training_meta.tokenizer = tokenizer;
  return model;
}

}  // namespace hltruth
