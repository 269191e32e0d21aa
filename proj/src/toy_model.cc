// Copyright 2026 The massrank Authors.
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

#include "massrank/toy_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include "json.hpp"

#include "massrank/errors.h"
#include "massrank/numeric.h"
#include "massrank/similarity.h"

namespace massrank {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRowTolerance = 1e-12;
// Upper bound on per-image row storage (doubles).
constexpr size_t kMaxRowStorage = size_t{1} << 24;

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

std::string JoinTokens(const TokenSequence& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// Dirichlet(1) draw sharpened by `power`; every entry strictly positive.
std::vector<double> RandomRow(size_t n, double power, CounterRng& rng) {
  std::vector<double> row(n);
  double total = 0.0;
  for (auto& v : row) {
    const double u = rng.Uniform() + 0x1.0p-54;
    v = std::pow(-std::log(u), power);
    total += v;
  }
  for (auto& v : row) v /= total;
  return row;
}

}  // namespace

ToyModel::ToyModel(std::vector<std::string> vocab, std::vector<ItemId> images,
                   std::vector<double> prior, size_t max_len,
                   std::optional<ItemId> null_image)
    : vocab_(std::move(vocab)),
      images_(std::move(images)),
      prior_(std::move(prior)),
      null_image_(std::move(null_image)),
      max_len_(max_len) {
  if (vocab_.size() < 2 || vocab_.size() > kMaxVocab) {
    throw ModelDomainError("vocabulary size must be in [2, 32]");
  }
  for (size_t i = 0; i < vocab_.size(); ++i) {
    if (vocab_[i].empty()) throw ModelDomainError("empty token string in vocabulary");
    for (size_t j = 0; j < i; ++j) {
      if (vocab_[i] == vocab_[j]) {
        throw ModelDomainError("duplicate token '" + vocab_[i] + "'");
      }
    }
    if (vocab_[i] == kEndToken) end_index_ = static_cast<int>(i);
  }
  if (end_index_ < 0) {
    throw ModelDomainError("vocabulary lacks the end token " +
                           std::string(kEndToken));
  }
  if (images_.empty()) throw ModelDomainError("model has no images");
  const size_t total_images = images_.size() + (null_image_ ? 1 : 0);
  if (total_images > kMaxImages) throw ModelDomainError("more than 16 images");
  if (max_len_ == 0 || max_len_ > kMaxLen) {
    throw ModelDomainError("max_len must be in [1, 8]");
  }
  for (const auto& id : images_) {
    CheckItemId(id, "image");
    if (IsNullImage(id)) {
      throw ModelDomainError("'null' is reserved; designate a null image instead");
    }
  }
  if (null_image_) {
    CheckItemId(*null_image_, "image");
    if (IsNullImage(*null_image_)) {
      throw ModelDomainError("'null' is reserved; name the null image differently");
    }
    images_.push_back(*null_image_);
  }
  for (size_t i = 0; i < images_.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (images_[i] == images_[j]) {
        throw ModelDomainError("duplicate image '" + images_[i] + "'");
      }
    }
  }
  const size_t n_prior = images_.size() - (null_image_ ? 1 : 0);
  if (prior_.empty()) prior_.assign(n_prior, 1.0 / static_cast<double>(n_prior));
  if (prior_.size() != n_prior) {
    throw ModelDomainError("prior has " + std::to_string(prior_.size()) +
                           " entries for " + std::to_string(n_prior) + " images");
  }
  double prior_total = 0.0;
  for (double p : prior_) {
    if (!std::isfinite(p) || p < 0.0) throw ModelDomainError("negative prior");
    prior_total += p;
  }
  if (std::fabs(prior_total - 1.0) > kRowTolerance) {
    throw ModelDomainError("prior does not sum to 1");
  }

  const size_t branching = vocab_.size() - 1;
  prefix_offset_.assign(max_len_ + 1, 0);
  size_t level = 1;
  for (size_t d = 0; d < max_len_; ++d) {
    prefix_offset_[d + 1] = prefix_offset_[d] + level;
    level *= branching;
    if (prefix_offset_[d + 1] * vocab_.size() > kMaxRowStorage) {
      throw ModelDomainError("model too large to enumerate");
    }
  }
  rows_.assign(images_.size(),
               std::vector<double>(num_prefixes() * vocab_.size(), 0.0));
  has_row_.assign(images_.size(), std::vector<char>(num_prefixes(), 0));
}

size_t ToyModel::ImageIndex(const ItemId& image) const {
  for (size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] == image) return i;
  }
  throw ModelDomainError("unknown image '" + image + "'");
}

int ToyModel::TokenIndex(std::string_view token) const {
  for (size_t i = 0; i < vocab_.size(); ++i) {
    if (vocab_[i] == token) return static_cast<int>(i);
  }
  throw ModelDomainError("unknown token '" + std::string(token) + "'");
}

size_t ToyModel::ChildPrefix(size_t parent, size_t depth, int token) const {
  const size_t branching = vocab_.size() - 1;
  const size_t digit = static_cast<size_t>(token < end_index_ ? token : token - 1);
  return prefix_offset_[depth + 1] + (parent - prefix_offset_[depth]) * branching +
         digit;
}

size_t ToyModel::PrefixIndex(const TokenSequence& prefix) const {
  if (prefix.size() >= max_len_) {
    throw ModelDomainError("prefix of length " + std::to_string(prefix.size()) +
                           " has no row (max_len " + std::to_string(max_len_) + ")");
  }
  size_t index = 0;
  for (size_t d = 0; d < prefix.size(); ++d) {
    const int w = TokenIndex(prefix[d]);
    if (w == end_index_) throw ModelDomainError("end token inside a prefix");
    index = ChildPrefix(index, d, w);
  }
  return index;
}

TokenSequence ToyModel::PrefixTokens(size_t index) const {
  size_t depth = 0;
  while (index >= prefix_offset_[depth + 1]) ++depth;
  const size_t branching = vocab_.size() - 1;
  size_t rel = index - prefix_offset_[depth];
  TokenSequence tokens(depth);
  for (size_t d = depth; d-- > 0;) {
    size_t digit = rel % branching;
    rel /= branching;
    const size_t w = digit < static_cast<size_t>(end_index_) ? digit : digit + 1;
    tokens[d] = vocab_[w];
  }
  return tokens;
}

void ToyModel::SetRow(const ItemId& image, const TokenSequence& prefix,
                      std::vector<double> row) {
  const size_t img = ImageIndex(image);
  const size_t p = PrefixIndex(prefix);
  if (row.size() != vocab_.size()) {
    throw ModelDomainError("row for prefix '" + JoinTokens(prefix) + "' has " +
                           std::to_string(row.size()) + " entries, expected " +
                           std::to_string(vocab_.size()));
  }
  double total = 0.0;
  for (double v : row) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ModelDomainError("row for prefix '" + JoinTokens(prefix) +
                             "' has a negative or non-finite entry");
    }
    total += v;
  }
  if (std::fabs(total - 1.0) > kRowTolerance) {
    throw ModelDomainError("row for image '" + image + "' prefix '" +
                           JoinTokens(prefix) + "' does not sum to 1");
  }
  std::copy(row.begin(), row.end(), rows_[img].begin() + p * vocab_.size());
  has_row_[img][p] = 1;
}

bool ToyModel::HasRow(const ItemId& image, const TokenSequence& prefix) const {
  return has_row_[ImageIndex(image)][PrefixIndex(prefix)] != 0;
}

std::span<const double> ToyModel::Row(const ItemId& image,
                                      const TokenSequence& prefix) const {
  const size_t img = ImageIndex(image);
  const size_t p = PrefixIndex(prefix);
  if (!has_row_[img][p]) {
    throw ModelDomainError("image '" + image + "' has no row at prefix '" +
                           JoinTokens(prefix) + "'");
  }
  return std::span<const double>(rows_[img]).subspan(p * vocab_.size(),
                                                      vocab_.size());
}

void ToyModel::Validate() const {
  const size_t v = vocab_.size();
  for (size_t img = 0; img < images_.size(); ++img) {
    // reachable[p] is set when prefix p has positive probability.
    std::vector<char> reachable(num_prefixes(), 0);
    reachable[0] = 1;
    for (size_t depth = 0; depth < max_len_; ++depth) {
      for (size_t p = prefix_offset_[depth]; p < prefix_offset_[depth + 1]; ++p) {
        if (!reachable[p]) continue;
        if (!has_row_[img][p]) {
          throw ModelDomainError("image '" + images_[img] +
                                 "' lacks a row at reachable prefix '" +
                                 JoinTokens(PrefixTokens(p)) + "'");
        }
        if (depth + 1 == max_len_) continue;
        for (size_t w = 0; w < v; ++w) {
          if (static_cast<int>(w) == end_index_) continue;
          if (rows_[img][p * v + w] > 0.0) {
            reachable[ChildPrefix(p, depth, static_cast<int>(w))] = 1;
          }
        }
      }
    }
  }
}

std::vector<double> ToyModel::RawConditional(size_t image,
                                             const TokenSequence& text) const {
  if (text.empty()) throw ModelDomainError("empty caption");
  if (text.size() > max_len_) {
    throw ModelDomainError("caption longer than max_len " + std::to_string(max_len_));
  }
  std::vector<double> out(text.size());
  size_t p = 0;
  for (size_t t = 0; t < text.size(); ++t) {
    const int w = TokenIndex(text[t]);
    if (w == end_index_ && t + 1 != text.size()) {
      throw ModelDomainError("end token before the last position");
    }
    if (!has_row_[image][p]) {
      throw ModelDomainError("image '" + images_[image] + "' has no row at prefix '" +
                             JoinTokens(TokenSequence(text.begin(), text.begin() + t)) +
                             "'");
    }
    out[t] = SafeLog(rows_[image][p * vocab_.size() + w]);
    if (t + 1 < text.size()) p = ChildPrefix(p, t, w);
  }
  return out;
}

TokenLogProbs ToyModel::ExactConditional(const ItemId& image,
                                         const TokenSequence& text) const {
  std::vector<double> raw = RawConditional(ImageIndex(image), text);
  for (double v : raw) {
    if (!std::isfinite(v)) {
      throw ModelDomainError("caption '" + JoinTokens(text) +
                             "' has zero probability under image '" + image + "'");
    }
  }
  return TokenLogProbs(std::move(raw));
}

TokenLogProbs ToyModel::ExactMarginal(const TokenSequence& text) const {
  if (text.empty()) throw ModelDomainError("empty caption");
  if (text.size() > max_len_) {
    throw ModelDomainError("caption longer than max_len " + std::to_string(max_len_));
  }
  const size_t n_prior = prior_.size();
  const size_t v = vocab_.size();
  std::vector<double> log_weight(n_prior);
  for (size_t k = 0; k < n_prior; ++k) log_weight[k] = SafeLog(prior_[k]);
  std::vector<double> joint(n_prior);
  std::vector<double> out(text.size());
  size_t p = 0;
  for (size_t t = 0; t < text.size(); ++t) {
    const int w = TokenIndex(text[t]);
    if (w == end_index_ && t + 1 != text.size()) {
      throw ModelDomainError("end token before the last position");
    }
    for (size_t k = 0; k < n_prior; ++k) {
      if (log_weight[k] == kNegInf) {
        joint[k] = kNegInf;
        continue;
      }
      if (!has_row_[k][p]) {
        throw ModelDomainError("image '" + images_[k] + "' has no row at a reachable prefix");
      }
      joint[k] = log_weight[k] + SafeLog(rows_[k][p * v + w]);
    }
    out[t] = LogSumExp(joint) - LogSumExp(log_weight);
    if (!std::isfinite(out[t])) {
      throw ModelDomainError("caption '" + JoinTokens(text) +
                             "' has zero marginal probability");
    }
    log_weight = joint;
    if (t + 1 < text.size()) p = ChildPrefix(p, t, w);
  }
  return TokenLogProbs(std::move(out));
}

double ToyModel::ExactPmi(const ItemId& image, const TokenSequence& text) const {
  const TokenLogProbs cond = ExactConditional(image, text);
  const TokenLogProbs marg = ExactMarginal(text);
  std::vector<double> diff(cond.size());
  for (size_t t = 0; t < cond.size(); ++t) diff[t] = cond[t] - marg[t];
  return CompensatedSum(diff) / static_cast<double>(diff.size());
}

ToyModel ToyModel::WithMarginalNullImage(const ItemId& null_id) const {
  const size_t n_prior = prior_.size();
  std::vector<ItemId> prior_images(images_.begin(), images_.begin() + n_prior);
  ToyModel out(vocab_, prior_images, prior_, max_len_, null_id);
  for (size_t k = 0; k < n_prior; ++k) {
    out.rows_[k] = rows_[k];
    out.has_row_[k] = has_row_[k];
  }
  const size_t v = vocab_.size();
  const size_t null_index = n_prior;
  // log_weight[p][k] = log prior(k) + log p(prefix p | k).
  std::vector<std::vector<double>> log_weight(num_prefixes(),
                                              std::vector<double>(n_prior, kNegInf));
  for (size_t k = 0; k < n_prior; ++k) log_weight[0][k] = SafeLog(prior_[k]);
  for (size_t depth = 0; depth < max_len_; ++depth) {
    for (size_t p = prefix_offset_[depth]; p < prefix_offset_[depth + 1]; ++p) {
      const std::vector<double>& lw = log_weight[p];
      const double norm = LogSumExp(lw);
      if (norm == kNegInf) continue;  // unreachable under every image
      std::vector<double> row(v, 0.0);
      for (size_t k = 0; k < n_prior; ++k) {
        if (lw[k] == kNegInf) continue;
        if (!has_row_[k][p]) {
          throw ModelDomainError("image '" + images_[k] + "' lacks a reachable row");
        }
        const double post = std::exp(lw[k] - norm);
        for (size_t w = 0; w < v; ++w) row[w] += post * rows_[k][p * v + w];
      }
      double total = 0.0;
      for (double x : row) total += x;
      for (size_t w = 0; w < v; ++w) {
        out.rows_[null_index][p * v + w] = row[w] / total;
      }
      out.has_row_[null_index][p] = 1;
      if (depth + 1 == max_len_) continue;
      for (size_t w = 0; w < v; ++w) {
        if (static_cast<int>(w) == end_index_) continue;
        const size_t child = ChildPrefix(p, depth, static_cast<int>(w));
        for (size_t k = 0; k < n_prior; ++k) {
          log_weight[child][k] =
              lw[k] == kNegInf ? kNegInf : lw[k] + SafeLog(rows_[k][p * v + w]);
        }
      }
    }
  }
  return out;
}

std::vector<TokenSequence> ToyModel::EnumerateCaptions() const {
  std::vector<TokenSequence> out;
  for (size_t p = 0; p < num_prefixes(); ++p) {
    TokenSequence prefix = PrefixTokens(p);
    TokenSequence ended = prefix;
    ended.push_back(vocab_[end_index_]);
    out.push_back(std::move(ended));
    if (prefix.size() + 1 == max_len_) {
      for (size_t w = 0; w < vocab_.size(); ++w) {
        if (static_cast<int>(w) == end_index_) continue;
        TokenSequence full = prefix;
        full.push_back(vocab_[w]);
        out.push_back(std::move(full));
      }
    }
  }
  return out;
}

std::string ToyModel::ToJson() const {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["vocab"] = vocab_;
  const size_t n_prior = prior_.size();
  doc["images"] = std::vector<ItemId>(images_.begin(), images_.begin() + n_prior);
  doc["prior"] = prior_;
  doc["max_len"] = max_len_;
  doc["null_image"] = null_image_ ? ordered_json(*null_image_) : ordered_json(nullptr);
  ordered_json rows = ordered_json::array();
  for (size_t img = 0; img < images_.size(); ++img) {
    for (size_t p = 0; p < num_prefixes(); ++p) {
      if (!has_row_[img][p]) continue;
      ordered_json r;
      r["image"] = images_[img];
      r["prefix"] = PrefixTokens(p);
      r["p"] = std::vector<double>(rows_[img].begin() + p * vocab_.size(),
                                   rows_[img].begin() + (p + 1) * vocab_.size());
      rows.push_back(std::move(r));
    }
  }
  doc["rows"] = std::move(rows);
  return doc.dump(1) + "\n";
}

ToyModel ToyModel::FromJson(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
    std::optional<ItemId> null_image;
    if (doc.contains("null_image") && !doc["null_image"].is_null()) {
      null_image = doc["null_image"].get<std::string>();
    }
    std::vector<double> prior;
    if (doc.contains("prior")) prior = doc["prior"].get<std::vector<double>>();
    ToyModel model(doc.at("vocab").get<std::vector<std::string>>(),
                   doc.at("images").get<std::vector<ItemId>>(), std::move(prior),
                   doc.at("max_len").get<size_t>(), std::move(null_image));
    for (const auto& r : doc.at("rows")) {
      model.SetRow(r.at("image").get<std::string>(),
                   r.at("prefix").get<TokenSequence>(),
                   r.at("p").get<std::vector<double>>());
    }
    model.Validate();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("toy model: ") + e.what());
  }
}

ToyModel RandomToyModel(const RandomModelSpec& spec) {
  if (spec.n_images == 0 || spec.vocab_size < 2) {
    throw ModelDomainError("random model needs >= 1 image and >= 2 tokens");
  }
  CounterRng rng(spec.seed);
  std::vector<std::string> vocab;
  for (size_t i = 0; i + 1 < spec.vocab_size; ++i) vocab.push_back("w" + std::to_string(i));
  vocab.emplace_back(ToyModel::kEndToken);
  std::vector<ItemId> images;
  for (size_t i = 0; i < spec.n_images; ++i) images.push_back("img" + std::to_string(i));
  std::vector<double> prior;
  if (spec.random_prior) prior = RandomRow(spec.n_images, 1.0, rng);
  ToyModel model(vocab, images, prior, spec.max_len);
  const size_t n_prefix = model.num_prefixes();
  std::vector<TokenSequence> prefixes;
  prefixes.reserve(n_prefix);
  // Enumerate prefixes in index order via the captions ending in the end token.
  for (const auto& cap : model.EnumerateCaptions()) {
    if (cap.back() == ToyModel::kEndToken) {
      prefixes.emplace_back(cap.begin(), cap.end() - 1);
    }
  }
  for (const auto& image : images) {
    for (const auto& prefix : prefixes) {
      model.SetRow(image, prefix, RandomRow(spec.vocab_size, spec.sharpness, rng));
    }
  }
  return model;
}

ToyModel SymmetricPrefixToyModel(const RandomModelSpec& spec) {
  RandomModelSpec uniform = spec;
  uniform.random_prior = false;
  ToyModel model = RandomToyModel(uniform);
  CounterRng rng = CounterRng(spec.seed).Split("shared-rows");
  for (const auto& cap : model.EnumerateCaptions()) {
    if (cap.back() != ToyModel::kEndToken) continue;
    const TokenSequence prefix(cap.begin(), cap.end() - 1);
    if (prefix.size() + 1 >= spec.max_len) continue;
    const std::vector<double> row = RandomRow(spec.vocab_size, spec.sharpness, rng);
    for (const auto& image : model.images()) model.SetRow(image, prefix, row);
  }
  return model;
}

ConditionalTable ExportTables(const ToyModel& model,
                              const std::vector<TokenSequence>& captions,
                              const ExportOptions& options) {
  if (!options.caption_ids.empty() && options.caption_ids.size() != captions.size()) {
    throw InvalidInputError("caption id count does not match caption count");
  }
  const size_t n_prior = model.prior().size();
  const std::vector<ItemId> prior_images(model.images().begin(),
                                         model.images().begin() + n_prior);
  const size_t v = model.vocab().size();
  ConditionalTable table;
  for (const auto& image : prior_images) {
    const auto row = model.Row(image, {});
    table.AddImageEmbedding(options.id_prefix + image,
                            EmbeddingVector(std::vector<double>(row.begin(), row.end())));
  }
  for (size_t i = 0; i < captions.size(); ++i) {
    const TokenSequence& caption = captions[i];
    const ItemId text = options.id_prefix + (options.caption_ids.empty()
                                                 ? "t" + std::to_string(i)
                                                 : options.caption_ids[i]);
    const TokenLogProbs marginal = model.ExactMarginal(caption);
    const double marginal_total = CompensatedSum(marginal.values());
    for (const auto& image : prior_images) {
      TokenLogProbs cond = model.ExactConditional(image, caption);
      const double logit = CompensatedSum(cond.values()) - marginal_total;
      table.Add({options.id_prefix + image, text, caption, std::move(cond)});
      table.AddItm(options.id_prefix + image, text, ItmLogit{logit});
    }
    TokenLogProbs null_row = model.null_image()
                                 ? model.ExactConditional(*model.null_image(), caption)
                                 : marginal;
    table.Add({std::string(kNullImage), text, caption, std::move(null_row)});

    std::vector<double> onehot_mean(v, 0.0);
    for (const auto& tok : caption) {
      const auto it = std::find(model.vocab().begin(), model.vocab().end(), tok);
      onehot_mean[static_cast<size_t>(it - model.vocab().begin())] +=
          1.0 / static_cast<double>(caption.size());
    }
    table.AddTextEmbedding(text, EmbeddingVector(std::move(onehot_mean)));
  }
  return table;
}

std::vector<BiasedInstance> MakeBiasedFamily(const BiasedFamilySpec& spec) {
  const double s = spec.prior_strength;
  if (!(s > 0.0 && s < 1.0)) {
    throw ConstructionError("prior_strength must lie strictly between 0 and 1");
  }
  if (s < kMinPriorStrength) {
    throw ConstructionError("prior_strength " + std::to_string(s) +
                            " is below the construction cutoff 0.5");
  }
  if (spec.n_instances == 0) throw ConstructionError("n_instances must be positive");

  const std::vector<std::string> vocab = {"a", "b", "c", "d",
                                          std::string(ToyModel::kEndToken)};
  const TokenSequence caption_a = {"a", std::string(ToyModel::kEndToken)};
  const TokenSequence caption_b = {"b", std::string(ToyModel::kEndToken)};
  const CounterRng master(spec.seed);
  std::vector<BiasedInstance> family;
  family.reserve(spec.n_instances);
  for (size_t n = 0; n < spec.n_instances; ++n) {
    CounterRng rng = master.Split(static_cast<uint64_t>(n));
    // Under iB: q_a > q_b = beta * q_a. Under iA: p(a) = s, p(b) = delta with
    // delta < s * beta, which is exactly the condition for PMI(iB, b) to
    // exceed PMI(iB, a) when the prefix posterior is uniform.
    const double beta = 0.3 + 0.6 * rng.Uniform();
    const double q_a = (0.5 + 0.4 * rng.Uniform()) / (1.0 + beta);
    const double q_b = beta * q_a;
    const double gamma = 0.1 + 0.8 * rng.Uniform();
    const double delta = gamma * std::min(s * beta, 1.0 - s);

    auto first_row = [&](double pa, double pb) {
      const std::vector<double> rest = RandomRow(3, 1.0, rng);
      const double remainder = 1.0 - pa - pb;
      // Order: a, b, c, d, </s>.
      std::vector<double> row = {pa, pb, remainder * rest[0], remainder * rest[1], 0.0};
      row[4] = 1.0 - row[0] - row[1] - row[2] - row[3];
      return row;
    };

    ToyModel model(vocab, {"iA", "iB"}, {}, 2);
    model.SetRow("iA", {}, first_row(s, delta));
    model.SetRow("iB", {}, first_row(q_a, q_b));
    // Continuations are shared by both images; "a" and "b" share one row so
    // the end-token probability does not disturb the ordering.
    const std::vector<double> after_ab = RandomRow(5, 1.0, rng);
    const std::vector<double> after_c = RandomRow(5, 1.0, rng);
    const std::vector<double> after_d = RandomRow(5, 1.0, rng);
    for (const char* image : {"iA", "iB"}) {
      model.SetRow(image, {"a"}, after_ab);
      model.SetRow(image, {"b"}, after_ab);
      model.SetRow(image, {"c"}, after_c);
      model.SetRow(image, {"d"}, after_d);
    }
    model.Validate();

    const double tl_a = TlScore(model.ExactConditional("iB", caption_a),
                                TlMode::kProbMean).value;
    const double tl_b = TlScore(model.ExactConditional("iB", caption_b),
                                TlMode::kProbMean).value;
    const double pmi_a = model.ExactPmi("iB", caption_a);
    const double pmi_b = model.ExactPmi("iB", caption_b);
    if (!(tl_a > tl_b) || !(pmi_b > pmi_a)) {
      throw ConstructionError("instance " + std::to_string(n) +
                              " failed exact verification");
    }
    const std::string prefix = "f" + std::to_string(n) + "/";
    family.push_back({std::move(model), caption_a, caption_b,
                      FoilSample{prefix + "iB", prefix + "B", prefix + "A",
                                 "language-prior"}});
  }
  return family;
}

}  // namespace massrank
