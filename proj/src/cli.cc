// Copyright 2026 The DCSH Authors.
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
#include "dcsh/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "dcsh/data_io.h"
#include "dcsh/error.h"
#include "dcsh/gradcheck.h"
#include "dcsh/hash_centers.h"
#include "dcsh/network.h"
#include "dcsh/retrieval.h"
#include "dcsh/synthetic.h"
#include "dcsh/train.h"

namespace dcsh {

namespace {

namespace fs = std::filesystem;

// Raised for malformed invocations that CLI11 itself accepts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Folds "--config FILE" into the argument list: every key=value line becomes
// "--key=value" unless the key is already on the command line.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty() || rest.empty()) return rest;

  std::set<std::string> given;
  for (const std::string& a : rest) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
  }
  std::vector<std::string> from_file;
  std::istringstream lines(ReadTextFile(config_path));
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError(config_path + ":" + std::to_string(line_no) +
                       ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (given.count(key) || value.empty()) continue;
    from_file.push_back("--" + key + "=" + value);
  }
  std::vector<std::string> out = {rest.front()};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

// key=value lines reproducing the resolved options of `sub`; loadable with
// --config.
void WriteManifest(const std::string& path, const CLI::App& sub) {
  std::ostringstream m;
  m << "# dcsh " << kToolVersion << " " << sub.get_name() << "\n";
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->get_expected_min() == 0) {
      value = opt->count() > 0 && opt->as<bool>() ? "true" : "false";
    } else if (opt->count() > 0) {
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    if (value.empty()) continue;
    m << name << "=" << value << "\n";
  }
  WriteTextFile(path, m.str());
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, dir + ": " + ec.message());
}

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

struct DataArgs {
  std::string dir;
  std::string features;
  std::string labels;
  std::string splits;

  void Add(CLI::App* app, bool labels_only = false) {
    app->add_option("--data", dir,
                    "Dataset directory (features.bin, labels.txt, splits.txt)");
    if (!labels_only) {
      app->add_option("--features", features, "Feature file (overrides --data)");
      app->add_option("--splits", splits, "Split file (overrides --data)");
    }
    app->add_option("--labels", labels, "Label file (overrides --data)");
  }
  std::string Resolve(const std::string& explicit_path,
                      const std::string& name) const {
    if (!explicit_path.empty()) return explicit_path;
    if (dir.empty()) throw UsageError("need --data or --" + name.substr(0, name.find('.')));
    return Join(dir, name);
  }
  Dataset Load() const {
    return LoadDataset(Resolve(features, "features.bin"),
                       Resolve(labels, "labels.txt"),
                       Resolve(splits, "splits.txt"));
  }
  LabelFile LoadLabels() const {
    return ReadLabels(Resolve(labels, "labels.txt"));
  }
};

std::vector<int> ParseWidths(const std::string& text) {
  std::vector<int> widths;
  if (text == "none" || text.empty()) return widths;
  std::istringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      size_t used = 0;
      const int w = std::stoi(token, &used);
      if (used != token.size() || w < 1) throw std::invalid_argument(token);
      widths.push_back(w);
    } catch (const std::exception&) {
      throw UsageError("--hidden: bad layer width '" + token + "'");
    }
  }
  return widths;
}

SplitFlag ParseSplit(const std::string& name) {
  if (name == "train") return kSplitTrain;
  if (name == "gallery") return kSplitGallery;
  if (name == "query") return kSplitQuery;
  throw UsageError("unknown split '" + name + "'");
}

// Label lookup by sample id for code tables.
std::vector<LabelSet> LabelsFor(const std::vector<int64_t>& ids,
                                const LabelFile& lf, const std::string& what) {
  std::vector<LabelSet> out;
  out.reserve(ids.size());
  for (int64_t id : ids) {
    if (id < 0 || static_cast<size_t>(id) >= lf.labels.size()) {
      throw Error(ErrorCode::kCountMismatch,
                  what + ": id " + std::to_string(id) +
                      " has no entry in the label file");
    }
    out.push_back(lf.labels[id]);
  }
  return out;
}

RelevanceRule ResolveRule(const std::string& rule, const LabelFile& lf) {
  if (rule == "same-class") return RelevanceRule::kSameClass;
  if (rule == "share-any") return RelevanceRule::kShareAnyLabel;
  const bool multi = std::any_of(lf.labels.begin(), lf.labels.end(),
                                 [](const LabelSet& l) { return l.size() > 1; });
  return multi ? RelevanceRule::kShareAnyLabel : RelevanceRule::kSameClass;
}

struct EvalInputs {
  std::vector<Query> queries;
  PackedCodeIndex gallery;
  RelevanceRule rule;
};

EvalInputs LoadEval(const DataArgs& data, const std::string& gallery_path,
                    const std::string& query_path, const std::string& rule) {
  const LabelFile lf = data.LoadLabels();
  CodeTable gallery = ReadCodesText(gallery_path);
  const CodeTable queries = ReadCodesText(query_path);
  std::vector<LabelSet> gallery_labels =
      LabelsFor(gallery.ids, lf, gallery_path);
  const std::vector<LabelSet> query_labels =
      LabelsFor(queries.ids, lf, query_path);
  EvalInputs in{{},
                PackedCodeIndex(gallery.codes, std::move(gallery.ids),
                                std::move(gallery_labels)),
                ResolveRule(rule, lf)};
  for (size_t i = 0; i < queries.ids.size(); ++i) {
    in.queries.push_back({queries.ids[i], queries.codes[i], query_labels[i]});
  }
  return in;
}

}  // namespace

int RunCli(const std::vector<std::string>& raw_args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Deep hashing with CCA losses and updated hash centers", "dcsh"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  app.option_defaults()->always_capture_default();

  // synth
  SyntheticParams synth;
  std::string synth_out;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset");
  synth_cmd->add_option("--n", synth.n, "Total samples");
  synth_cmd->add_option("--dim", synth.dim, "Feature dimension D");
  synth_cmd->add_option("--classes", synth.classes, "Class count C");
  synth.separation = 12.0;
  synth_cmd->add_option("--separation", synth.separation,
                        "Prototype norm (noise is unit Gaussian)");
  synth_cmd->add_option("--multilabel-p", synth.multilabel_p,
                        "Probability of a second label");
  synth_cmd->add_option("--queries", synth.num_queries,
                        "Query count (negative: n/10)");
  synth_cmd->add_option("--train", synth.num_train,
                        "Training samples drawn from the gallery (negative: all)");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  // gen-centers
  int gc_bits = 32;
  int gc_classes = 10;
  uint64_t gc_seed = 1;
  int gc_trials = 100;
  std::string gc_out;
  CLI::App* gc_cmd = app.add_subcommand(
      "gen-centers", "Initial hash centers (Hadamard or best-of-trials Bernoulli)");
  gc_cmd->add_option("--bits", gc_bits, "Code length B")->required();
  gc_cmd->add_option("--classes", gc_classes, "Class count C")->required();
  gc_cmd->add_option("--seed", gc_seed, "Bernoulli seed");
  gc_cmd->add_option("--trials", gc_trials, "Bernoulli candidate sets");
  gc_cmd->add_option("--out", gc_out, "Center file")->required();

  // train
  DataArgs train_data;
  TrainConfig tc;
  int t_bits = 32;
  uint64_t t_seed = 1;
  std::string t_hidden = "256,256";
  int t_intermediate = 0;
  std::string t_alpha = "emphasized";
  std::string t_centers;
  int t_trials = 100;
  std::string t_test = "query";
  std::string t_out;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model");
  train_data.Add(train_cmd);
  train_cmd->add_option("--bits", t_bits, "Code length B");
  train_cmd->add_option("--batch", tc.batch_size, "Batch size M");
  train_cmd->add_option("--lr", tc.lr, "Initial learning rate");
  train_cmd->add_option("--lr-decay", tc.lr_decay, "Learning rate decay factor");
  train_cmd->add_option("--decay-every", tc.decay_every, "Epochs between decays");
  train_cmd->add_option("--epochs", tc.epochs, "Epoch count");
  train_cmd->add_option("--alpha-mode", t_alpha, "emphasized | equalized")
      ->check(CLI::IsMember({"emphasized", "equalized"}));
  train_cmd->add_option("--alpha", tc.alpha,
                        "Explicit classification weight (overrides --alpha-mode)");
  train_cmd->add_option("--seed", t_seed,
                        "Seed for initialization, shuffling, tie-breaks, centers");
  train_cmd->add_option("--hidden", t_hidden,
                        "Comma-separated extractor widths, or none");
  train_cmd->add_option("--intermediate", t_intermediate,
                        "Intermediate width (0: max(4C, 128))");
  train_cmd->add_option("--momentum", tc.momentum, "SGD momentum");
  train_cmd->add_option("--reg", tc.reg, "Autocovariance regularizer");
  train_cmd->add_option("--clamp", tc.clamp, "Eigenvalue clamp");
  train_cmd->add_option("--hash-k", tc.hash_k, "Correlations summed by L_hash (0: k_max)");
  train_cmd->add_option("--class-k", tc.class_k, "Correlations summed by L_class (0: k_max)");
  train_cmd->add_flag("--normalize-center-mean", tc.normalize_center_mean,
                      "Divide the weighted center sum by the weight total");
  train_cmd->add_option("--centers", t_centers,
                        "Initial center file (default: generate)");
  train_cmd->add_option("--center-trials", t_trials, "Bernoulli candidate sets");
  train_cmd->add_option("--test-split", t_test, "query | none")
      ->check(CLI::IsMember({"query", "none"}));
  train_cmd->add_option("--out", t_out, "Output directory")->required();

  // encode
  DataArgs enc_data;
  std::string enc_model;
  std::string enc_split = "gallery";
  std::string enc_out;
  CLI::App* enc_cmd = app.add_subcommand("encode", "Binary codes for one split");
  enc_data.Add(enc_cmd);
  enc_cmd->add_option("--model", enc_model, "Checkpoint file")->required();
  enc_cmd->add_option("--split", enc_split, "train | gallery | query | all")
      ->check(CLI::IsMember({"train", "gallery", "query", "all"}));
  enc_cmd->add_option("--out", enc_out, "Output directory")->required();

  // eval-map / eval-pr
  DataArgs map_data;
  std::string map_gallery, map_queries, map_rule = "auto", map_out;
  int map_k = 5000;
  CLI::App* map_cmd = app.add_subcommand("eval-map", "MAP@k of query codes");
  map_data.Add(map_cmd, /*labels_only=*/true);
  map_cmd->add_option("--gallery", map_gallery, "Gallery code file (text)")->required();
  map_cmd->add_option("--queries", map_queries, "Query code file (text)")->required();
  map_cmd->add_option("--k", map_k, "Ranking depth");
  map_cmd->add_option("--rule", map_rule, "auto | same-class | share-any")
      ->check(CLI::IsMember({"auto", "same-class", "share-any"}));
  map_cmd->add_option("--out", map_out, "Output directory")->required();

  DataArgs pr_data;
  std::string pr_gallery, pr_queries, pr_rule = "auto", pr_out;
  CLI::App* pr_cmd = app.add_subcommand("eval-pr", "Hamming-radius PR curve");
  pr_data.Add(pr_cmd, /*labels_only=*/true);
  pr_cmd->add_option("--gallery", pr_gallery, "Gallery code file (text)")->required();
  pr_cmd->add_option("--queries", pr_queries, "Query code file (text)")->required();
  pr_cmd->add_option("--rule", pr_rule, "auto | same-class | share-any")
      ->check(CLI::IsMember({"auto", "same-class", "share-any"}));
  pr_cmd->add_option("--out", pr_out, "Output directory")->required();

  // query
  std::string q_gallery, q_code;
  int q_topk = 10;
  CLI::App* q_cmd = app.add_subcommand("query", "Nearest gallery codes");
  q_cmd->add_option("--gallery", q_gallery, "Gallery code file (text)")->required();
  q_cmd->add_option("--code", q_code, "Query bit string")->required();
  q_cmd->add_option("--topk", q_topk, "Result count");

  // check-grad
  uint64_t cg_seed = 1;
  int cg_instances = 10;
  double cg_tol = 1e-3;
  CLI::App* cg_cmd = app.add_subcommand("check-grad",
                                        "Finite-difference gradient checks");
  cg_cmd->add_option("--seed", cg_seed, "Instance seed");
  cg_cmd->add_option("--instances", cg_instances, "Instances per check");
  cg_cmd->add_option("--tolerance", cg_tol, "Maximum relative error");

  std::vector<std::string> args;
  try {
    args = ExpandConfig(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*synth_cmd) {
      EnsureDir(synth_out);
      const Dataset ds = GenSynthetic(synth);
      SaveDataset(ds, Join(synth_out, "features.bin"),
                  Join(synth_out, "labels.txt"), Join(synth_out, "splits.txt"));
      WriteManifest(Join(synth_out, "synth.manifest"), *synth_cmd);
      out << "wrote " << ds.size() << " samples (D=" << ds.dim()
          << ", C=" << ds.num_classes << ") to " << synth_out << "\n";
    } else if (*gc_cmd) {
      const HashCenterSet set =
          GenInitialCenters(gc_bits, gc_classes, gc_seed, gc_trials);
      const fs::path parent = fs::path(gc_out).parent_path();
      if (!parent.empty()) EnsureDir(parent.string());
      WriteCenters(gc_out, set);
      WriteManifest(gc_out + ".manifest", *gc_cmd);
      out << (IsPowerOfTwo(gc_bits) && gc_classes <= gc_bits ? "hadamard"
                                                             : "bernoulli")
          << " centers B=" << gc_bits << " C=" << gc_classes
          << " min_distance=" << MinPairwiseDistance(set) << "\n";
    } else if (*train_cmd) {
      const Dataset ds = train_data.Load();
      tc.alpha_mode = t_alpha == "equalized" ? AlphaMode::kEqualized
                                             : AlphaMode::kEmphasized;
      tc.shuffle_seed = t_seed + 1;
      tc.target_seed = t_seed + 2;
      tc.Validate(t_bits, ds.num_classes);
      const LabeledSamples train = ds.Select(kSplitTrain);
      const LabeledSamples test = ds.Select(kSplitQuery);
      for (int c = 0; c < ds.num_classes; ++c) {
        const bool covered =
            std::any_of(train.labels.begin(), train.labels.end(),
                        [c](const LabelSet& l) { return l.contains(c); });
        if (!covered) {
          throw Error(ErrorCode::kCoverage, "class " + std::to_string(c) +
                                                " has no training sample");
        }
      }
      HashCenterSet centers =
          t_centers.empty()
              ? GenInitialCenters(t_bits, ds.num_classes, t_seed, t_trials)
              : ReadCenters(t_centers);

      ModelShape shape;
      shape.input_dim = ds.dim();
      shape.hidden = ParseWidths(t_hidden);
      shape.bits = t_bits;
      shape.classes = ds.num_classes;
      shape.intermediate = t_intermediate;
      DcshModel model = DcshModel::Create(shape, t_seed);

      EnsureDir(Join(t_out, "centers"));
      const TrainHistory history = Train(
          model, tc, train, t_test == "query" ? &test : nullptr,
          std::move(centers), [&](const EpochStats& e) {
            out << "epoch " << e.epoch << " lr " << FormatDouble(e.lr)
                << " train_loss " << FormatDouble(e.train_loss)
                << " (hash " << FormatDouble(e.hash_loss) << ", class "
                << FormatDouble(e.class_loss) << ") test_loss "
                << FormatDouble(e.test_loss) << "\n";
          });
      WriteModel(Join(t_out, "model.bin"), model);
      WriteLossCsv(Join(t_out, "loss.csv"), history.TrainLosses(),
                   history.TestLosses());
      for (const HashCenterSet& set : history.centers) {
        char name[32];
        std::snprintf(name, sizeof(name), "epoch_%03d.txt", set.epoch);
        WriteCenters(Join(Join(t_out, "centers"), name), set);
      }
      WriteManifest(Join(t_out, "train.manifest"), *train_cmd);
      if (!history.epochs.empty()) {
        out << "final train_loss " << FormatDouble(history.epochs.back().train_loss)
            << " lower_bound "
            << FormatDouble(LossLowerBound(tc, t_bits, ds.num_classes)) << "\n";
      }
    } else if (*enc_cmd) {
      const Dataset ds = enc_data.Load();
      const DcshModel model = ReadModel(enc_model);
      LabeledSamples samples;
      if (enc_split == "all") {
        samples.features = ds.features;
        samples.labels = ds.labels;
        for (int i = 0; i < ds.size(); ++i) samples.ids.push_back(i);
      } else {
        samples = ds.Select(ParseSplit(enc_split));
      }
      CodeTable table;
      table.ids = samples.ids;
      table.codes = Binarize(ForwardHashes(model, samples.features));
      EnsureDir(enc_out);
      WriteCodesText(Join(enc_out, enc_split + ".codes.txt"), table);
      WritePackedCodes(Join(enc_out, enc_split + ".codes.bin"), table.codes);
      WriteManifest(Join(enc_out, "encode_" + enc_split + ".manifest"), *enc_cmd);
      out << "encoded " << table.ids.size() << " " << enc_split
          << " samples with B=" << model.bits() << "\n";
    } else if (*map_cmd) {
      const EvalInputs in = LoadEval(map_data, map_gallery, map_queries, map_rule);
      if (map_k > in.gallery.size()) {
        err << "warning: k=" << map_k << " exceeds the gallery size "
            << in.gallery.size() << "; rankings are clipped\n";
      }
      const MapResult result = MapAtK(in.queries, in.gallery, map_k, in.rule);
      EnsureDir(map_out);
      WriteMapCsv(Join(map_out, "map.csv"), map_k, result);
      WriteApCsv(Join(map_out, "ap.csv"), result);
      WriteManifest(Join(map_out, "eval-map.manifest"), *map_cmd);
      out << "MAP@" << map_k << " " << FormatDouble(result.map) << "\n";
    } else if (*pr_cmd) {
      const EvalInputs in = LoadEval(pr_data, pr_gallery, pr_queries, pr_rule);
      const std::vector<PrPoint> curve = PrCurve(in.queries, in.gallery, in.rule);
      EnsureDir(pr_out);
      WritePrCsv(Join(pr_out, "pr.csv"), curve);
      WriteManifest(Join(pr_out, "eval-pr.manifest"), *pr_cmd);
      for (const PrPoint& p : curve) {
        out << "t=" << p.threshold << " recall " << FormatDouble(p.recall)
            << " precision " << FormatDouble(p.precision) << "\n";
      }
    } else if (*q_cmd) {
      CodeTable gallery = ReadCodesText(q_gallery);
      const Codeword code = Codeword::FromString(q_code);
      const PackedCodeIndex index(gallery.codes, std::move(gallery.ids), {});
      const TopK top = QueryTopK(index, code, q_topk);
      if (top.clipped) {
        err << "warning: topk=" << q_topk << " exceeds the gallery size "
            << index.size() << "\n";
      }
      for (const Neighbor& n : top.neighbors) {
        out << n.id << "\t" << n.distance << "\n";
      }
    } else if (*cg_cmd) {
      const GradCheckReport report = RunGradientChecks(cg_seed, cg_instances);
      out << "instance\tcheck\tshape\trel_error\n";
      for (const GradCheckRow& row : report.rows) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%d\t%s\t%dx%d\t%.3e\n", row.instance,
                      row.what.c_str(), row.rows, row.cols, row.rel_error);
        out << buf;
      }
      char summary[128];
      std::snprintf(summary, sizeof(summary),
                    "max dccf %.3e, max backward %.3e, tolerance %.1e\n",
                    report.max_dccf, report.max_backward, cg_tol);
      out << summary;
      if (!(report.max_dccf < cg_tol && report.max_backward < cg_tol)) {
        err << "gradient check FAILED\n";
        return kExitNumeric;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::kNumeric ? kExitNumeric : kExitData;
  }
  return kExitOk;
}

}  // namespace dcsh
