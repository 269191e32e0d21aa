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

#include "commands.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "massrank/adapter.h"
#include "massrank/errors.h"
#include "massrank/gender_lexicon.h"
#include "massrank/io.h"
#include "massrank/marginal.h"
#include "massrank/metrics.h"
#include "massrank/parallel.h"
#include "massrank/results.h"
#include "massrank/retrieval.h"
#include "massrank/similarity.h"
#include "massrank/toy_model.h"

#ifndef MASSRANK_DEFAULT_LEXICON
#define MASSRANK_DEFAULT_LEXICON "data/gender_lexicon.tsv"
#endif

namespace massrank {
namespace {

using RawJson = nlohmann::json;

enum class Similarity { kItc, kItm, kItmVqa, kTl, kMass };

Similarity ParseSimilarity(std::string_view name) {
  if (name == "itc") return Similarity::kItc;
  if (name == "itm") return Similarity::kItm;
  if (name == "itm-vqa") return Similarity::kItmVqa;
  if (name == "tl") return Similarity::kTl;
  if (name == "mass") return Similarity::kMass;
  throw UsageError("unknown similarity '" + std::string(name) + "'");
}

// Knobs shared by the subcommands.
struct RunConfig {
  std::string similarity = "mass";
  std::string tl_mode = "prob-mean";
  std::string marginal = "null-image";
  uint64_t mc_n = 0;
  uint64_t seed = 0;
  size_t shortlist = kDefaultShortlist;
  std::vector<size_t> k_list = {1, 5, 10};
  bool absolute_bias = false;
  std::string mixed_policy = "both";
  size_t jobs = 1;
  std::string adapter;
};

void AddJobsFlag(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--jobs", cfg.jobs, "Worker threads (outputs do not depend on it)")
      ->envname("MASSRANK_JOBS")
      ->check(CLI::PositiveNumber);
}

void AddScoringFlags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--similarity", cfg.similarity, "itc | itm | itm-vqa | tl | mass")
      ->envname("MASSRANK_SIMILARITY")
      ->capture_default_str();
  cmd->add_option("--tl-mode", cfg.tl_mode, "prob-mean | logprob-mean")
      ->envname("MASSRANK_TL_MODE")
      ->capture_default_str();
  cmd->add_option("--marginal", cfg.marginal, "null-image | mc-avg-log | mc-log-mean-exp")
      ->envname("MASSRANK_MARGINAL")
      ->capture_default_str();
  cmd->add_option("--mc-n", cfg.mc_n, "Monte-Carlo image samples per caption")
      ->envname("MASSRANK_MC_N");
  cmd->add_option("--seed", cfg.seed, "Master seed; the only entropy source")
      ->envname("MASSRANK_SEED")
      ->capture_default_str();
  AddJobsFlag(cmd, cfg);
}

void AddEvalFlags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--shortlist", cfg.shortlist, "First-stage shortlist size")
      ->envname("MASSRANK_SHORTLIST")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--k", cfg.k_list, "Comma-separated K values")
      ->envname("MASSRANK_K")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--absolute-bias", cfg.absolute_bias, "Average |f| in Bias@K")
      ->envname("MASSRANK_ABSOLUTE_BIAS");
  cmd->add_option("--mixed-policy", cfg.mixed_policy,
                  "How captions naming both genders count: both | neither")
      ->envname("MASSRANK_MIXED_POLICY")
      ->capture_default_str();
  AddJobsFlag(cmd, cfg);
}

void AddAdapterFlag(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--adapter", cfg.adapter, "stdio:<command> or http://host:port/path")
      ->envname("MASSRANK_ADAPTER")
      ->required();
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void WriteOutput(const std::string& path, const std::string& content) {
  WriteFileAtomic(path, content);
  WriteDigestSidecar(path, content);
}

Json InputDigests(const std::string& table_path) {
  Json inputs;
  inputs["table"] = FileDigest(table_path);
  const TableSiblings sib = SiblingPaths(table_path);
  for (const auto& [name, path] :
       {std::pair{"image_emb", sib.image_emb}, std::pair{"text_emb", sib.text_emb},
        std::pair{"itm", sib.itm}}) {
    if (std::filesystem::exists(path)) inputs[name] = FileDigest(path);
  }
  return inputs;
}

// ---- score -------------------------------------------------------------------

struct ScoreArgs {
  std::string table;
  std::string pairs;
  std::string out;
};

std::vector<std::pair<ItemId, ItemId>> DefaultPairs(const ConditionalTable& table,
                                                    Similarity sim) {
  std::vector<std::pair<ItemId, ItemId>> pairs;
  switch (sim) {
    case Similarity::kItc:
      for (const auto& [image, v] : table.image_embeddings()) {
        if (IsNullImage(image)) continue;
        for (const auto& [text, w] : table.text_embeddings()) pairs.emplace_back(image, text);
      }
      break;
    case Similarity::kItm:
    case Similarity::kItmVqa:
      for (const auto& [key, v] : table.itm()) pairs.push_back(key);
      break;
    case Similarity::kTl:
    case Similarity::kMass:
      for (const auto& [key, entry] : table.entries()) {
        if (!IsNullImage(key.first)) pairs.push_back(key);
      }
      break;
  }
  return pairs;
}

int CmdScore(const RunConfig& cfg, const ScoreArgs& args) {
  const Similarity sim = ParseSimilarity(cfg.similarity);
  const TlMode tl_mode = ParseTlMode(cfg.tl_mode);
  MarginalConfig marginal_cfg{ParseMarginalMethod(cfg.marginal), cfg.mc_n, cfg.seed};
  const bool mc = marginal_cfg.method != MarginalMethod::kNullImage;
  if (mc && cfg.mc_n == 0) throw UsageError("--mc-n is required with a Monte-Carlo marginal");
  if (!mc && cfg.mc_n != 0) throw UsageError("--mc-n only applies to Monte-Carlo marginals");

  const ConditionalTable table = LoadTable(args.table);
  const auto pairs = args.pairs.empty() ? DefaultPairs(table, sim) : LoadPairs(args.pairs);
  if (pairs.empty()) throw EmptyDatasetError("no (image, text) pairs to score");
  for (const auto& [image, text] : pairs) {
    if (IsNullImage(image)) {
      throw ReservedIdError("the null image cannot be scored (pair with text '" + text + "')");
    }
  }

  std::map<ItemId, size_t> text_slot;
  std::vector<ItemId> texts;
  std::vector<MarginalEstimate> marginals;
  if (sim == Similarity::kMass) {
    for (const auto& [image, text] : pairs) {
      if (text_slot.emplace(text, texts.size()).second) texts.push_back(text);
    }
    marginals.resize(texts.size());
    ParallelFor(texts.size(), cfg.jobs, [&](size_t i) {
      marginals[i] = EstimateMarginal(table, texts[i], marginal_cfg);
    });
  }

  std::vector<double> scores(pairs.size());
  ParallelFor(pairs.size(), cfg.jobs, [&](size_t i) {
    const auto& [image, text] = pairs[i];
    switch (sim) {
      case Similarity::kItc:
        scores[i] = ItcScore(table.ImageEmbedding(image), table.TextEmbedding(text)).value;
        break;
      case Similarity::kItm: {
        const auto* logit = std::get_if<ItmLogit>(&table.Itm(image, text));
        if (logit == nullptr) {
          throw InvalidInputError("matching-head rows are yes/no log-probs; use itm-vqa");
        }
        scores[i] = ItmScore(*logit).value;
        break;
      }
      case Similarity::kItmVqa: {
        const auto* lp = std::get_if<VqaYesNoLogProbs>(&table.Itm(image, text));
        if (lp == nullptr) {
          throw InvalidInputError("matching-head rows are logits; use itm");
        }
        scores[i] = ItmScoreVqa(*lp).value;
        break;
      }
      case Similarity::kTl:
        scores[i] = TlScore(table.At(image, text).logp, tl_mode).value;
        break;
      case Similarity::kMass:
        scores[i] = MassScore(table.At(image, text).logp,
                              marginals[text_slot.at(text)].logp).value;
        break;
    }
  });

  Json prov;
  prov["similarity"] = cfg.similarity;
  if (sim == Similarity::kTl) prov["tl_mode"] = cfg.tl_mode;
  if (sim == Similarity::kMass) {
    prov["marginal"] = cfg.marginal;
    if (mc) {
      prov["mc_n"] = cfg.mc_n;
      prov["seed"] = cfg.seed;
    }
  }
  Json inputs = InputDigests(args.table);
  if (!args.pairs.empty()) inputs["pairs"] = FileDigest(args.pairs);
  prov["inputs"] = std::move(inputs);

  std::vector<std::pair<std::pair<ItemId, ItemId>, double>> rows;
  rows.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) rows.push_back({pairs[i], scores[i]});
  WriteOutput(args.out, SerializeScores(prov, rows));
  return 0;
}

// ---- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string metric;
  std::string scores;
  std::string first_stage;
  std::string manifest;
  std::string out;
  std::string csv;
  std::string label;
};

std::vector<ItemId> Ids(const auto& items) {
  std::vector<ItemId> ids;
  ids.reserve(items.size());
  for (const auto& it : items) ids.push_back(it.id);
  return ids;
}

void AddWinoground(Json& metrics, const std::string& prefix, const WinogroundScores& s) {
  metrics[prefix + "text"] = s.text;
  metrics[prefix + "image"] = s.image;
  metrics[prefix + "group"] = s.group;
  metrics[prefix + "n"] = s.n;
}

int CmdEval(const RunConfig& cfg, const EvalArgs& args) {
  const ScoreFile scores = LoadScores(args.scores);
  ResultsDoc doc;
  Json& prov = doc.provenance;
  prov["metric"] = args.metric;
  if (!args.label.empty()) prov["label"] = args.label;
  prov["scores"] = {{"digest", FileDigest(args.scores)}, {"provenance", scores.provenance}};
  prov["manifest"] = FileDigest(args.manifest);

  if (args.metric == "retrieval") {
    if (cfg.k_list.empty()) throw UsageError("--k needs at least one value");
    const MixedPolicy mixed = ParseMixedPolicy(cfg.mixed_policy);
    const RetrievalDataset ds = LoadRetrievalManifest(args.manifest);
    const ScoreMatrix second =
        ScoreMatrix::FromPairs(scores.scores, ds.direction, Ids(ds.queries), Ids(ds.candidates));
    std::optional<ScoreMatrix> first;
    std::optional<FirstStage> stage;
    if (!args.first_stage.empty()) {
      const ScoreFile first_file = LoadScores(args.first_stage);
      first = ScoreMatrix::FromPairs(first_file.scores, ds.direction, Ids(ds.queries),
                                     Ids(ds.candidates));
      stage = FirstStage{&*first, cfg.shortlist};
      prov["first_stage"] = {{"digest", FileDigest(args.first_stage)},
                             {"provenance", first_file.provenance}};
      prov["shortlist"] = cfg.shortlist;
    }
    prov["direction"] = std::string(DirectionName(ds.direction));
    prov["k"] = cfg.k_list;
    prov["absolute_bias"] = cfg.absolute_bias;
    prov["mixed_policy"] = cfg.mixed_policy;
    for (size_t k : cfg.k_list) {
      doc.metrics["recall@" + std::to_string(k)] = RecallAtK(second, ds, k, stage, cfg.jobs);
    }
    for (size_t k : cfg.k_list) {
      doc.metrics["bias@" + std::to_string(k)] =
          BiasAtK(second, ds, k, cfg.absolute_bias, mixed, stage, cfg.jobs);
    }
  } else if (args.metric == "winoground") {
    const auto samples = LoadWinogroundManifest(args.manifest);
    if (samples.empty()) throw EmptyDatasetError("winoground manifest is empty");
    AddWinoground(doc.metrics, "", WinogroundEval(scores.scores, samples));
    AddWinoground(doc.metrics, "No-Tag/", WinogroundEval(scores.scores, samples, TagFilter::NoTag()));
    AddWinoground(doc.metrics, "Rest/", WinogroundEval(scores.scores, samples, TagFilter::Rest()));
    std::set<std::string> tags;
    for (const auto& s : samples) tags.insert(s.tags.begin(), s.tags.end());
    for (const auto& tag : tags) {
      AddWinoground(doc.metrics, "tag=" + tag + "/",
                    WinogroundEval(scores.scores, samples, TagFilter::AnyOf({tag})));
    }
  } else if (args.metric == "foil") {
    const auto foils = LoadFoilManifest(args.manifest);
    doc.metrics["accuracy"] = PairwiseRankingAccuracy(scores.scores, foils);
    doc.metrics["n"] = foils.size();
    std::map<std::string, size_t> categories;
    for (const auto& f : foils) ++categories[f.category];
    if (categories.size() > 1 || !categories.count("")) {
      for (const auto& [cat, n] : categories) {
        doc.metrics["category=" + cat + "/accuracy"] =
            PairwiseRankingAccuracy(scores.scores, foils, cat);
        doc.metrics["category=" + cat + "/n"] = n;
      }
    }
  } else if (args.metric == "color") {
    const auto items = LoadColorManifest(args.manifest);
    const auto samples = ResolveColorSamples(scores.scores, items);
    const ColorBiasStats stats = ComputeColorBiasStats(samples);
    doc.metrics["biased_sample_ratio"] = stats.biased_sample_ratio;
    doc.metrics["biased_type_ratio"] = stats.biased_type_ratio;
    doc.metrics["n"] = samples.size();
    for (const auto& [type, mean] : stats.per_type_mean) {
      doc.metrics["type=" + type + "/mean_diff"] = mean;
    }
  } else {
    throw UsageError("unknown metric '" + args.metric + "'");
  }

  WriteOutput(args.out, doc.Serialize());
  if (!args.csv.empty()) {
    std::string csv = "metric,value\n";
    for (auto it = doc.metrics.begin(); it != doc.metrics.end(); ++it) {
      csv += CsvField(it.key()) + "," + DumpJson(it.value()) + "\n";
    }
    WriteOutput(args.csv, csv);
  }
  return 0;
}

// ---- pareto ------------------------------------------------------------------

int CmdPareto(size_t k, const std::vector<std::string>& docs, const std::string& out) {
  const std::string recall_key = "recall@" + std::to_string(k);
  const std::string bias_key = "bias@" + std::to_string(k);
  std::vector<ParetoPoint> points;
  for (const auto& path : docs) {
    const ResultsDoc doc = ResultsDoc::Load(path);
    const auto recall = doc.Metric(recall_key);
    const auto bias = doc.Metric(bias_key);
    if (!recall || !bias) {
      throw MissingEntryError("results document '" + path + "' lacks " + recall_key +
                              " or " + bias_key);
    }
    std::string label = std::filesystem::path(path).stem().string();
    auto it = doc.provenance.find("label");
    if (it != doc.provenance.end() && it->is_string()) label = it->get<std::string>();
    points.push_back({label, *recall, *bias});
  }
  const std::vector<ParetoPoint> frontier = ParetoFrontier(points);
  std::set<std::string> on_frontier;
  for (const auto& p : frontier) on_frontier.insert(p.label);
  std::string csv = "label,recall,bias,abs_bias,frontier\n";
  std::set<std::string> seen;
  for (const auto& p : points) {
    const bool first = seen.insert(p.label).second;
    csv += CsvField(p.label) + "," + FormatDouble(p.recall) + "," + FormatDouble(p.bias) +
           "," + FormatDouble(std::fabs(p.bias)) + "," +
           (first && on_frontier.count(p.label) ? "1" : "0") + "\n";
  }
  WriteOutput(out, csv);
  return 0;
}

// ---- oracle ------------------------------------------------------------------

struct GenArgs {
  RandomModelSpec spec;
  bool symmetric = false;
  bool with_null = false;
  std::string out;
};

int CmdOracleGen(const GenArgs& args) {
  ToyModel model = args.symmetric ? SymmetricPrefixToyModel(args.spec)
                                  : RandomToyModel(args.spec);
  if (args.with_null) model = model.WithMarginalNullImage();
  WriteOutput(args.out, model.ToJson());
  return 0;
}

int CmdOracleExport(const std::string& model_path, const std::string& captions_path,
                    const std::string& out) {
  const ToyModel model = ToyModel::FromJson(ReadFile(model_path));
  std::vector<TokenSequence> captions;
  ExportOptions options;
  if (captions_path.empty()) {
    constexpr size_t kMaxEnumerated = 10000;
    if (model.num_prefixes() > kMaxEnumerated) {
      throw UsageError("model has too many captions to enumerate; pass --captions");
    }
    captions = model.EnumerateCaptions();
  } else {
    ForEachJsonLine(captions_path, [&](size_t, const RawJson& rec) {
      if (!rec.is_object() || !rec.contains("id") || !rec.contains("tokens") ||
          !rec["id"].is_string() || !rec["tokens"].is_array()) {
        throw ParseError("caption record needs 'id' and 'tokens'");
      }
      options.caption_ids.push_back(rec["id"].get<std::string>());
      captions.push_back(rec["tokens"].get<TokenSequence>());
    });
  }
  SaveTable(ExportTables(model, captions, options), out);
  return 0;
}

void MergeInto(ConditionalTable& dst, const ConditionalTable& src) {
  for (const auto& [key, entry] : src.entries()) dst.Add(entry);
  for (const auto& [id, v] : src.image_embeddings()) dst.AddImageEmbedding(id, v);
  for (const auto& [id, v] : src.text_embeddings()) dst.AddTextEmbedding(id, v);
  for (const auto& [key, v] : src.itm()) dst.AddItm(key.first, key.second, v);
}

int CmdOracleFamily(const BiasedFamilySpec& spec, const std::string& out_dir) {
  const std::vector<BiasedInstance> family = MakeBiasedFamily(spec);
  ConditionalTable table;
  std::vector<FoilSample> foils;
  Json instances = Json::array();
  for (size_t n = 0; n < family.size(); ++n) {
    const BiasedInstance& inst = family[n];
    const std::string prefix = "f" + std::to_string(n) + "/";
    ExportOptions options{prefix, {"A", "B"}};
    MergeInto(table, ExportTables(inst.model, {inst.caption_a, inst.caption_b}, options));
    foils.push_back(inst.foil);
    Json meta;
    meta["id"] = "f" + std::to_string(n);
    meta["tl_prob_mean_true"] =
        TlScore(inst.model.ExactConditional("iB", inst.caption_b), TlMode::kProbMean).value;
    meta["tl_prob_mean_foil"] =
        TlScore(inst.model.ExactConditional("iB", inst.caption_a), TlMode::kProbMean).value;
    meta["pmi_true"] = inst.model.ExactPmi("iB", inst.caption_b);
    meta["pmi_foil"] = inst.model.ExactPmi("iB", inst.caption_a);
    instances.push_back(std::move(meta));
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  SaveTable(table, (dir / "table.jsonl").string());
  WriteOutput((dir / "foils.jsonl").string(), SerializeFoilManifest(foils));
  Json meta;
  meta["prior_strength"] = spec.prior_strength;
  meta["n_instances"] = spec.n_instances;
  meta["seed"] = spec.seed;
  meta["guarantees"] = {{"mass_pairwise_accuracy", 1.0},
                        {"tl_prob_mean_pairwise_accuracy", 0.0}};
  meta["instances"] = std::move(instances);
  WriteOutput((dir / "family.json").string(), DumpJson(meta, 1) + "\n");
  return 0;
}

// ---- adapter -----------------------------------------------------------------

struct AdapterArgs {
  int timeout_ms = 30000;
  int retries = 3;
  size_t batch_size = 16;
  size_t in_flight = 4;
};

AdapterOptions MakeAdapterOptions(const AdapterArgs& a) {
  AdapterOptions opts;
  opts.timeout = std::chrono::milliseconds(a.timeout_ms);
  opts.max_retries = a.retries;
  opts.batch_size = a.batch_size;
  opts.max_in_flight = a.in_flight;
  return opts;
}

int CmdAdapterProbe(const RunConfig& cfg, const AdapterArgs& a) {
  AdapterClient client(MakeTransport(cfg.adapter), MakeAdapterOptions(a));
  try {
    const std::string digest = client.IdentityDigest();
    const std::vector<AdapterItem> canary = {
        {std::string(kNullImage), "a photo of a dog"},
        {std::string(kNullImage), "two people walking on a beach"}};
    const auto responses = client.TokenLogprobs(canary);
    std::cout << "PASS adapter=" << cfg.adapter << " identity=" << digest
              << " items=" << responses.size() << "\n";
    return 0;
  } catch (const Error& e) {
    std::cout << "FAIL adapter=" << cfg.adapter << " " << e.kind() << ": " << e.what() << "\n";
    throw;
  }
}

int CmdFetch(const RunConfig& cfg, const AdapterArgs& a, const std::string& manifest,
             const std::string& out) {
  struct Row {
    ItemId image;
    std::string path;
    ItemId text;
    std::string caption;
  };
  std::vector<Row> rows;
  ForEachJsonLine(manifest, [&](size_t, const RawJson& rec) {
    if (!rec.is_object()) throw ParseError("record is not a JSON object");
    for (const char* f : {"image", "path", "text", "caption"}) {
      if (!rec.contains(f) || !rec[f].is_string()) {
        throw ParseError(std::string("missing string field '") + f + "'");
      }
    }
    rows.push_back({rec["image"].get<std::string>(), rec["path"].get<std::string>(),
                    rec["text"].get<std::string>(), rec["caption"].get<std::string>()});
  });
  std::vector<AdapterItem> items;
  std::vector<std::pair<ItemId, ItemId>> keys;
  std::map<ItemId, std::string> captions;
  for (const auto& r : rows) {
    if (IsNullImage(r.image)) throw ReservedIdError("manifest rows must name real images");
    items.push_back({r.path, r.caption});
    keys.emplace_back(r.image, r.text);
    auto [it, fresh] = captions.emplace(r.text, r.caption);
    if (!fresh && it->second != r.caption) {
      throw InvalidInputError("text id '" + r.text + "' has two different captions");
    }
  }
  for (const auto& [text, caption] : captions) {
    items.push_back({std::string(kNullImage), caption});
    keys.emplace_back(std::string(kNullImage), text);
  }
  AdapterClient client(MakeTransport(cfg.adapter), MakeAdapterOptions(a));
  const auto responses = client.TokenLogprobs(items);
  ConditionalTable table;
  for (size_t i = 0; i < responses.size(); ++i) {
    table.Add({keys[i].first, keys[i].second, responses[i].tokens, responses[i].logp});
  }
  SaveTable(table, out);
  return 0;
}

// ---- lexicon -----------------------------------------------------------------

int CmdLexicon(const std::string& mode, const std::string& lexicon_path,
               const std::string& in, const std::string& out) {
  const GenderLexicon lex = GenderLexicon::Load(lexicon_path);
  std::string text;
  ForEachJsonLine(in, [&](size_t, const RawJson& rec) {
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("caption") ||
        !rec["id"].is_string() || !rec["caption"].is_string()) {
      throw ParseError("caption record needs string 'id' and 'caption'");
    }
    const std::string caption = rec["caption"].get<std::string>();
    if (caption.empty()) throw InvalidInputError("empty caption");
    Json outrec;
    outrec["id"] = rec["id"].get<std::string>();
    outrec["caption"] = mode == "neutralize" ? NeutralizeCaption(caption, lex) : caption;
    outrec["gender"] = std::string(GenderName(ToGender(ClassifyCaption(caption, lex))));
    text += DumpJson(outrec) + "\n";
  });
  WriteOutput(out, text);
  return 0;
}

int ExitCodeFor(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kUsage: return 1;
    case ErrorCategory::kValidation: return 2;
    case ErrorCategory::kAdapter: return 3;
  }
  return 2;
}

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Config-file reader that yields to MASSRANK_* variables, so the order is
// flag > environment > config file > default.
class EnvAwareConfig : public CLI::ConfigBase {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> items = CLI::ConfigBase::from_config(input);
    std::erase_if(items, [](const CLI::ConfigItem& item) {
      std::string env = "MASSRANK_";
      for (char c : item.name) {
        env += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      return kEnvBacked.contains(env) && std::getenv(env.c_str()) != nullptr;
    });
    return items;
  }

 private:
  inline static const std::set<std::string> kEnvBacked = {
      "MASSRANK_SIMILARITY", "MASSRANK_TL_MODE",      "MASSRANK_MARGINAL",
      "MASSRANK_MC_N",       "MASSRANK_SEED",         "MASSRANK_SHORTLIST",
      "MASSRANK_K",          "MASSRANK_ABSOLUTE_BIAS", "MASSRANK_MIXED_POLICY",
      "MASSRANK_JOBS",       "MASSRANK_ADAPTER",      "MASSRANK_LEXICON"};
};

}  // namespace

int RunMassrank(int argc, char** argv) {
  CLI::App app{"massrank: language-debiased image-text matching scores and metrics"};
  app.set_config("--config", "", "TOML/INI file with default flag values (flags win)");
  app.config_formatter(std::make_shared<EnvAwareConfig>());
  app.require_subcommand(1);
  RunConfig cfg;
  std::function<int()> action;

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Score (image, text) pairs from a table");
  score->add_option("--table", score_args.table, "Conditional table (.jsonl)")->required();
  score->add_option("--pairs", score_args.pairs, "Pairs to score; default: all in table");
  score->add_option("--out", score_args.out, "Output score file")->required();
  AddScoringFlags(score, cfg);
  score->callback([&] { action = [&] { return CmdScore(cfg, score_args); }; });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Compute metrics from scores and a manifest");
  eval->add_option("--metric", eval_args.metric, "retrieval | winoground | foil | color")
      ->required();
  eval->add_option("--scores", eval_args.scores, "Score file (second stage for retrieval)")
      ->required();
  eval->add_option("--first-stage", eval_args.first_stage,
                   "First-stage score file for two-stage retrieval");
  eval->add_option("--manifest", eval_args.manifest, "Dataset manifest")->required();
  eval->add_option("--out", eval_args.out, "Results document (.json)")->required();
  eval->add_option("--csv", eval_args.csv, "Also write metric,value CSV");
  eval->add_option("--label", eval_args.label, "Label recorded in provenance");
  AddEvalFlags(eval, cfg);
  eval->callback([&] { action = [&] { return CmdEval(cfg, eval_args); }; });

  size_t pareto_k = 1;
  std::vector<std::string> pareto_docs;
  std::string pareto_out;
  auto* pareto = app.add_subcommand("pareto", "Recall/bias points and Pareto frontier as CSV");
  pareto->add_option("--k", pareto_k, "Shared K")->envname("MASSRANK_K")->capture_default_str();
  pareto->add_option("--out", pareto_out, "Output CSV")->required();
  pareto->add_option("docs", pareto_docs, "Results documents")->required();
  pareto->callback([&] { action = [&] { return CmdPareto(pareto_k, pareto_docs, pareto_out); }; });

  auto* oracle = app.add_subcommand("oracle", "Exactly enumerable toy models");
  oracle->require_subcommand(1);
  GenArgs gen_args;
  auto* gen = oracle->add_subcommand("gen", "Generate a random toy model");
  gen->add_option("--images", gen_args.spec.n_images, "Number of images")->capture_default_str();
  gen->add_option("--vocab", gen_args.spec.vocab_size, "Vocabulary size incl. end token")
      ->capture_default_str();
  gen->add_option("--max-len", gen_args.spec.max_len, "Maximum caption length")
      ->capture_default_str();
  gen->add_option("--seed", gen_args.spec.seed, "Seed")->envname("MASSRANK_SEED");
  gen->add_option("--sharpness", gen_args.spec.sharpness, "Row sharpening exponent")
      ->capture_default_str();
  gen->add_flag("--random-prior", gen_args.spec.random_prior, "Draw a random image prior");
  gen->add_flag("--symmetric", gen_args.symmetric,
                "Confine image dependence to the last position");
  gen->add_flag("--with-null", gen_args.with_null,
                "Add a designated null image equal to the exact marginal");
  gen->add_option("--out", gen_args.out, "Output model (.json)")->required();
  gen->callback([&] { action = [&] { return CmdOracleGen(gen_args); }; });

  std::string export_model, export_captions, export_out;
  auto* exp = oracle->add_subcommand("export", "Export exact tables of a toy model");
  exp->add_option("--model", export_model, "Toy model (.json)")->required();
  exp->add_option("--captions", export_captions, "Captions {id, tokens}; default: all");
  exp->add_option("--out", export_out, "Output table (.jsonl)")->required();
  exp->callback([&] {
    action = [&] { return CmdOracleExport(export_model, export_captions, export_out); };
  });

  BiasedFamilySpec family_spec;
  family_spec.n_instances = 100;
  std::string family_out;
  auto* family = oracle->add_subcommand("family", "Emit a language-prior biased family");
  family->add_option("--strength", family_spec.prior_strength, "Prior strength in [0.5, 1)")
      ->capture_default_str();
  family->add_option("--n", family_spec.n_instances, "Instances")->capture_default_str();
  family->add_option("--seed", family_spec.seed, "Seed")->envname("MASSRANK_SEED");
  family->add_option("--out-dir", family_out, "Output directory")->required();
  family->callback([&] { action = [&] { return CmdOracleFamily(family_spec, family_out); }; });

  AdapterArgs adapter_args;
  auto add_adapter_tuning = [&](CLI::App* cmd) {
    AddAdapterFlag(cmd, cfg);
    cmd->add_option("--timeout-ms", adapter_args.timeout_ms, "Per-request timeout")
        ->capture_default_str();
    cmd->add_option("--retries", adapter_args.retries, "Retries on timeouts")
        ->capture_default_str();
    cmd->add_option("--batch-size", adapter_args.batch_size, "Items per request")
        ->capture_default_str();
    cmd->add_option("--in-flight", adapter_args.in_flight, "Concurrent requests")
        ->capture_default_str();
  };
  auto* probe = app.add_subcommand("adapter-probe", "Check an adapter's protocol conformance");
  add_adapter_tuning(probe);
  probe->callback([&] { action = [&] { return CmdAdapterProbe(cfg, adapter_args); }; });

  std::string fetch_manifest, fetch_out;
  auto* fetch = app.add_subcommand("fetch", "Build a table (with null rows) via an adapter");
  add_adapter_tuning(fetch);
  fetch->add_option("--manifest", fetch_manifest, "Rows {image, path, text, caption}")
      ->required();
  fetch->add_option("--out", fetch_out, "Output table (.jsonl)")->required();
  fetch->callback([&] {
    action = [&] { return CmdFetch(cfg, adapter_args, fetch_manifest, fetch_out); };
  });

  std::string lex_mode, lex_path = MASSRANK_DEFAULT_LEXICON, lex_in, lex_out;
  auto* lexicon = app.add_subcommand("lexicon", "Classify or neutralize captions by gender");
  lexicon->add_option("mode", lex_mode, "classify | neutralize")
      ->required()
      ->check(CLI::IsMember({"classify", "neutralize"}));
  lexicon->add_option("--lexicon", lex_path, "Lexicon file")
      ->envname("MASSRANK_LEXICON")
      ->capture_default_str();
  lexicon->add_option("--in", lex_in, "Captions {id, caption}")->required();
  lexicon->add_option("--out", lex_out, "Output (.jsonl)")->required();
  lexicon->callback([&] {
    action = [&] { return CmdLexicon(lex_mode, lex_path, lex_in, lex_out); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    return action ? action() : 1;
  } catch (const Error& e) {
    std::cerr << "massrank: error: " << e.kind() << ": " << OneLine(e.what()) << "\n";
    return ExitCodeFor(e.category());
  } catch (const std::exception& e) {
    std::cerr << "massrank: error: InternalError: " << OneLine(e.what()) << "\n";
    return 2;
  }
}

}  // namespace massrank
