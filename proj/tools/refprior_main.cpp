/* Copyright 2026 The refprior Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// Command-line front end:
//   refprior gen | split | score | train-fusion | eval | export-field
// Failures exit non-zero and print {"error": {"kind", "message"}} to stderr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "refprior/dataset_io.hpp"
#include "refprior/derod.hpp"
#include "refprior/error.hpp"
#include "refprior/fusion.hpp"
#include "refprior/kernels.hpp"
#include "refprior/matching.hpp"
#include "refprior/priors.hpp"
#include "refprior/synthbench.hpp"

namespace {

using namespace refprior;
using ojson = nlohmann::ordered_json;

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string log;
};

void AddCommon(CLI::App* cmd, Common& c, bool out_required = true) {
  cmd->add_option("--seed", c.seed, "RNG seed")->each([&c](const std::string&) {
    c.seed_given = true;
  });
  auto* out = cmd->add_option("--out", c.out, "output path");
  if (out_required) out->required();
  cmd->add_option("--log", c.log, "run log path");
}

struct PriorFlags {
  std::string decay = "linear";
  double sigma = 0.35;
  std::string vocab;
};

void AddPriorFlags(CLI::App* cmd, PriorFlags& f) {
  cmd->add_option("--decay", f.decay, "spatial decay")
      ->check(CLI::IsMember({"linear", "gaussian"}));
  cmd->add_option("--sigma", f.sigma, "gaussian sigma (normalized)");
  cmd->add_option("--vocab", f.vocab, "spatial vocabulary file (word = direction)");
}

PriorConfig MakePriorConfig(const PriorFlags& f) {
  PriorConfig c;
  c.decay.kind = f.decay == "gaussian" ? Decay::kGaussian : Decay::kLinear;
  c.decay.sigma = f.sigma;
  if (!f.vocab.empty()) c.vocabulary = Vocabulary::FromConfigFile(f.vocab);
  return c;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Every output of a command is staged here and committed together.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  void Add(const std::string& path, std::string content) {
    if (!path.empty()) files.emplace_back(path, std::move(content));
  }
  void Commit() const { WriteFilesAtomic(files); }
};

std::string SummaryLog(const std::string& command, const ojson& details) {
  ojson j;
  j["command"] = command;
  j["details"] = details;
  return j.dump(2) + "\n";
}

ojson DatasetWarnings(const Dataset& ds) {
  ojson w;
  w["samples"] = ds.samples.size();
  w["missing_relmaps"] = ds.missing_relmaps;
  w["orphan_relmaps"] = ds.orphan_relmaps;
  w["clamped_values"] = ds.clamped_values;
  return w;
}

void WarnDataset(const Dataset& ds) {
  if (ds.missing_relmaps > 0) {
    std::cerr << "warning: " << ds.missing_relmaps
              << " samples have no relevance map; using neutral h_v\n";
  }
  if (ds.orphan_relmaps > 0) {
    std::cerr << "warning: " << ds.orphan_relmaps << " relevance maps match no sample\n";
  }
  if (ds.clamped_values > 0) {
    std::cerr << "warning: " << ds.clamped_values
              << " relevance values clamped into [0,1]\n";
  }
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  Common common;
  std::string spec;
  std::size_t n = 0;
};

void RunGen(const GenArgs& a) {
  SceneSpec spec = a.spec.empty() ? SceneSpec{} : SceneSpec::FromJson(ReadFile(a.spec));
  if (a.common.seed_given) spec.seed = a.common.seed;
  const auto scenes = Generate(spec, a.n);
  std::vector<Sample> samples;
  std::vector<std::string> ids;
  std::vector<const RelevanceGrid*> grids;
  std::size_t ambiguous = 0;
  for (const auto& s : scenes) {
    samples.push_back(s.sample);
    ids.push_back(s.sample.id);
    grids.push_back(&s.grid);
    ambiguous += s.sample.ambiguous;
  }
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(a.common.out, ec);
  if (ec) throw Error(ErrorKind::kIoError, "cannot create " + a.common.out);
  Outputs out;
  out.Add((fs::path(a.common.out) / "samples.jsonl").string(), SamplesToJsonl(samples));
  out.Add((fs::path(a.common.out) / "relmaps.jsonl").string(), RelmapsToJsonl(ids, grids));
  ojson details;
  details["scenes"] = scenes.size();
  details["ambiguous"] = ambiguous;
  details["spec"] = ojson::parse(spec.ToJson());
  out.Add(a.common.log, SummaryLog("gen", details));
  out.Commit();
}

// ---- split -----------------------------------------------------------------

struct SplitArgs {
  Common common;
  std::string mode;
  std::string spec;
  std::string samples;
};

void RunSplit(const SplitArgs& a) {
  SplitSpec spec;
  if (!a.spec.empty()) {
    spec = SpecFromJson(ReadFile(a.spec));
    const bool low = std::holds_alternative<LowDataSpec>(spec);
    if (low != (a.mode == "lowdata")) {
      throw Error(ErrorKind::kUsage, "--mode " + a.mode + " disagrees with the spec file");
    }
  } else if (a.mode == "lowdata") {
    spec = LowDataSpec{};
  } else {
    spec = FewShotSpec{};
  }
  std::istringstream in(ReadFile(a.samples));
  const auto samples = ParseSamples(in);
  std::vector<LabeledId> labeled;
  for (const auto& s : samples) labeled.push_back({s.id, s.category});
  const auto manifest = SampleSplits(labeled, spec, a.common.seed);
  Outputs out;
  out.Add(a.common.out, manifest.ToJson());
  ojson details;
  for (const auto& [name, ids] : manifest.splits) details[name] = ids.size();
  out.Add(a.common.log, SummaryLog("split", details));
  out.Commit();
}

// ---- score -----------------------------------------------------------------

struct ScoreArgs {
  Common common;
  PriorFlags priors;
  std::string samples, relmaps, mode = "zeroshot", net;
  std::size_t top_n = 0;
};

void RunScore(const ScoreArgs& a) {
  const PriorConfig config = MakePriorConfig(a.priors);
  std::optional<FusionNet> net;
  if (a.mode == "learned") {
    if (a.net.empty()) throw Error(ErrorKind::kUsage, "--mode learned needs --net");
    net = FusionNet::FromJson(ReadFile(a.net));
  }
  const Dataset ds = Ingest(a.samples, a.relmaps.empty() ? std::nullopt
                                                         : std::optional(a.relmaps));
  WarnDataset(ds);
  const auto bundles = parallel::ComputeBundles(ds.samples, ds.grids, config);
  ScoreOptions options;
  options.mode = net ? PredictMode::kLearned : PredictMode::kZeroShot;
  options.net = net ? &*net : nullptr;
  options.top_n = a.top_n;
  const auto preds = parallel::Score(ds.samples, bundles, options);
  Outputs out;
  out.Add(a.common.out, PredictionsToJson(a.mode, preds));
  ojson details = DatasetWarnings(ds);
  details["mode"] = a.mode;
  details["top_n"] = a.top_n;
  out.Add(a.common.log, SummaryLog("score", details));
  out.Commit();
}

// ---- train-fusion ------------------------------------------------------------

struct TrainArgs {
  Common common;
  PriorFlags priors;
  std::string samples, relmaps, manifest, split;
  int epochs = 0;
  double lr = FusionNet::kDefaultLearningRate;
  LossWeights weights;
};

void RunTrain(const TrainArgs& a) {
  const PriorConfig config = MakePriorConfig(a.priors);
  a.weights.Validate();
  Dataset ds = Ingest(a.samples, a.relmaps.empty() ? std::nullopt
                                                   : std::optional(a.relmaps));
  WarnDataset(ds);
  if (!a.manifest.empty()) {
    if (a.split.empty()) throw Error(ErrorKind::kUsage, "--manifest needs --split");
    const auto m = SplitManifest::FromJson(ReadFile(a.manifest));
    const auto* ids = m.Find(a.split);
    if (!ids) throw Error(ErrorKind::kUsage, "manifest has no split '" + a.split + "'");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) index[ds.samples[i].id] = i;
    Dataset subset;
    for (const auto& id : *ids) {
      const auto it = index.find(id);
      if (it == index.end()) {
        throw Error(ErrorKind::kMissingPrediction, "split id '" + id + "' not in samples");
      }
      subset.samples.push_back(ds.samples[it->second]);
      subset.grids.push_back(ds.grids[it->second]);
    }
    ds = std::move(subset);
  }
  if (ds.samples.empty()) throw Error(ErrorKind::kEmptyDataset, "no training samples");

  const auto bundles = parallel::ComputeBundles(ds.samples, ds.grids, config);
  std::vector<TrainingExample> train;
  std::vector<Assignment> assignments;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    auto a_i = Hungarian(BuildCost(ds.samples[i], bundles[i], a.weights));
    if (a_i.pairs.empty()) {
      throw Error(ErrorKind::kNoPositives, "sample '" + ds.samples[i].id + "' has no match");
    }
    train.push_back({bundles[i], a_i.pairs.front().first});
    assignments.push_back(std::move(a_i));
  }
  const auto init = FusionNet::Random(a.common.seed, a.lr);
  const auto result = TrainFusion(init, train, a.epochs, a.weights);

  LossReport mean;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto z = FusionScores(bundles[i], result.net);
    const auto r = ComputeLoss(ds.samples[i], bundles[i], assignments[i], a.weights, z);
    mean.total += r.total;
    mean.cls += r.cls;
    mean.bbox += r.bbox;
    mean.conf += r.conf;
  }
  const double n = static_cast<double>(ds.samples.size());
  ojson report;
  report["samples"] = ds.samples.size();
  report["epochs"] = a.epochs;
  report["objective"] = result.final_loss;
  report["total"] = mean.total / n;
  report["cls"] = mean.cls / n;
  report["bbox"] = mean.bbox / n;
  report["conf"] = mean.conf / n;

  Outputs out;
  out.Add(a.common.out, result.net.ToJson());
  std::string csv = "epoch,objective\n";
  for (std::size_t e = 0; e < result.loss_trace.size(); ++e) {
    csv += std::to_string(e) + "," + Num(result.loss_trace[e]) + "\n";
  }
  csv += std::to_string(result.loss_trace.size()) + "," + Num(result.final_loss) + "\n";
  out.Add(a.common.log, csv);
  out.Commit();
  std::cout << report.dump(2) << "\n";
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  Common common;
  std::string samples, preds;
};

void RunEval(const EvalArgs& a) {
  std::istringstream in(ReadFile(a.samples));
  const auto samples = ParseSamples(in);
  std::map<std::string, std::size_t> predictions;
  for (const auto& p : PredictionsFromJson(ReadFile(a.preds))) predictions[p.id] = p.index;
  const auto report = Evaluate(samples, predictions);
  Outputs out;
  out.Add(a.common.out, report.ToJson());
  out.Add(a.common.log, SummaryLog("eval", ojson::parse(report.ToJson())));
  out.Commit();
  std::cout << report.ToJson();
}

// ---- export-field ----------------------------------------------------------

struct ExportArgs {
  Common common;
  PriorFlags priors;
  std::string terms;
  int res = 64;
  std::string format = "json";
};

void RunExport(const ExportArgs& a) {
  const PriorConfig config = MakePriorConfig(a.priors);
  std::vector<SpatialTerm> terms;
  if (a.terms.find_first_not_of(" \t") != std::string::npos) {
    terms = ExtractSpatialTerms(Tokenize(a.terms), config.vocabulary);
  }
  const auto field = FieldFromTerms(terms, config.decay);
  const auto values = field.Raster(a.res);
  std::string content;
  if (a.format == "text") {
    for (int row = 0; row < a.res; ++row) {
      for (int col = 0; col < a.res; ++col) {
        if (col) content += ' ';
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.4f", values[static_cast<std::size_t>(row) * a.res + col]);
        content += buf;
      }
      content += '\n';
    }
  } else {
    ojson j;
    std::vector<std::string> names;
    for (const auto& t : terms) names.push_back(t.ToString());
    j["terms"] = names;
    j["decay"] = a.priors.decay;
    if (config.decay.kind == Decay::kGaussian) j["sigma"] = config.decay.sigma;
    j["width"] = a.res;
    j["height"] = a.res;
    j["values"] = values;
    content = j.dump() + "\n";
  }
  Outputs out;
  out.Add(a.common.out, content);
  out.Commit();
}

int ReportError(ErrorKind kind, const std::string& message) {
  ojson j;
  j["error"]["kind"] = std::string(ErrorKindName(kind));
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heuristic spatial and visual priors for referring detection"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic corpus");
  AddCommon(gen_cmd, gen.common);
  gen_cmd->add_option("--spec", gen.spec, "scene spec JSON");
  gen_cmd->add_option("--n", gen.n, "number of scenes")->required();

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "build low-data or few-shot manifests");
  AddCommon(split_cmd, split.common);
  split_cmd->add_option("--mode", split.mode)->required()->check(CLI::IsMember({"lowdata", "fewshot"}));
  split_cmd->add_option("--spec", split.spec, "split spec JSON");
  split_cmd->add_option("--samples", split.samples, "samples JSONL")->required();

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "select one candidate per sample");
  AddCommon(score_cmd, score.common);
  AddPriorFlags(score_cmd, score.priors);
  score_cmd->add_option("--samples", score.samples)->required();
  score_cmd->add_option("--relmaps", score.relmaps);
  score_cmd->add_option("--mode", score.mode)->check(CLI::IsMember({"zeroshot", "learned"}));
  score_cmd->add_option("--net", score.net, "fusion net JSON");
  score_cmd->add_option("--top-n", score.top_n, "reference set size (0 = all)");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-fusion", "fit the fusion MLP");
  AddCommon(train_cmd, train.common);
  AddPriorFlags(train_cmd, train.priors);
  train_cmd->add_option("--samples", train.samples)->required();
  train_cmd->add_option("--relmaps", train.relmaps);
  train_cmd->add_option("--epochs", train.epochs)->required()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr", train.lr, "learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--manifest", train.manifest, "split manifest JSON");
  train_cmd->add_option("--split", train.split, "split name inside the manifest");
  train_cmd->add_option("--lambda-cls", train.weights.cls);
  train_cmd->add_option("--lambda-l1", train.weights.l1);
  train_cmd->add_option("--lambda-giou", train.weights.giou);
  train_cmd->add_option("--lambda-conf", train.weights.conf);
  train_cmd->add_option("--lambda-h", train.weights.prior);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "top-1 accuracy of predictions");
  AddCommon(eval_cmd, eval.common);
  eval_cmd->add_option("--samples", eval.samples)->required();
  eval_cmd->add_option("--preds", eval.preds)->required();

  ExportArgs exp;
  auto* exp_cmd = app.add_subcommand("export-field", "rasterize a spatial prior field");
  AddCommon(exp_cmd, exp.common);
  AddPriorFlags(exp_cmd, exp.priors);
  exp_cmd->add_option("--terms", exp.terms, "spatial words, e.g. \"bottom left\"")->required();
  exp_cmd->add_option("--res", exp.res)->check(CLI::PositiveNumber);
  exp_cmd->add_option("--format", exp.format)->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError(ErrorKind::kUsage, e.what());
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);
    if (*gen_cmd) RunGen(gen);
    if (*split_cmd) RunSplit(split);
    if (*score_cmd) RunScore(score);
    if (*train_cmd) RunTrain(train);
    if (*eval_cmd) RunEval(eval);
    if (*exp_cmd) RunExport(exp);
  } catch (const Error& e) {
    return ReportError(e.kind(), e.what());
  } catch (const std::exception& e) {
    return ReportError(ErrorKind::kIoError, e.what());
  }
  return 0;
}
