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
#include "dcsh/data_io.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dcsh/error.h"

namespace dcsh {

namespace {

constexpr char kFeatureMagic[8] = {'D', 'C', 'S', 'H', 'F', 'E', 'A', 'T'};
constexpr char kModelMagic[8] = {'D', 'C', 'S', 'H', 'M', 'O', 'D', 'L'};
constexpr char kCodeMagic[8] = {'D', 'C', 'S', 'H', 'C', 'O', 'D', 'E'};

class ByteWriter {
 public:
  void Magic(const char (&magic)[8]) { bytes_.append(magic, 8); }
  void U32(uint32_t v) { Le(v, 4); }
  void U64(uint64_t v) { Le(v, 8); }
  void F64(double v) { Le(std::bit_cast<uint64_t>(v), 8); }
  const std::string& bytes() const { return bytes_; }

 private:
  void Le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<char>(v >> (8 * i)));
  }
  std::string bytes_;
};

class ByteReader {
 public:
  ByteReader(std::string path, std::string bytes)
      : path_(std::move(path)), bytes_(std::move(bytes)) {}

  void Magic(const char (&magic)[8]) {
    Need(8, "magic");
    if (std::memcmp(bytes_.data(), magic, 8) != 0) {
      throw Error(ErrorCode::kFormat, path_ + ": bad magic, expected " +
                                          std::string(magic, 8));
    }
    pos_ += 8;
  }
  void Version(uint32_t expected) {
    const size_t at = pos_;
    const uint32_t v = U32("version");
    if (v != expected) {
      throw Error(ErrorCode::kFormat, path_ + ": offset " + std::to_string(at) +
                                          ": unsupported version " +
                                          std::to_string(v));
    }
  }
  uint32_t U32(const char* what) { return static_cast<uint32_t>(Le(4, what)); }
  uint64_t U64(const char* what) { return Le(8, what); }
  double F64(const char* what) { return std::bit_cast<double>(Le(8, what)); }

  // Throws kCountMismatch unless exactly `n` bytes remain.
  void ExpectRemaining(uint64_t n) const {
    const uint64_t left = bytes_.size() - pos_;
    if (left != n) {
      throw Error(ErrorCode::kCountMismatch,
                  path_ + ": offset " + std::to_string(pos_) + ": header implies " +
                      std::to_string(n) + " payload bytes, file has " +
                      std::to_string(left));
    }
  }
  void ExpectEnd() const { ExpectRemaining(0); }
  size_t pos() const { return pos_; }

 private:
  void Need(size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kCountMismatch,
                  path_ + ": offset " + std::to_string(pos_) +
                      ": truncated while reading " + what);
    }
  }
  uint64_t Le(int n, const char* what) {
    Need(n, what);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += n;
    return v;
  }

  std::string path_;
  std::string bytes_;
  size_t pos_ = 0;
};

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(std::move(current));
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

Error ParseError(ErrorCode code, const std::string& path, size_t line,
                 const std::string& what) {
  return Error(code, path + ":" + std::to_string(line) + ": " + what);
}

// Parses a non-negative decimal integer spanning all of `text`.
bool ParseInt(std::string_view text, long long& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// "key=value" → value as int, or throws naming the line.
int ParseField(const std::string& token, const std::string& key,
               const std::string& path, size_t line) {
  long long v = 0;
  if (token.rfind(key + "=", 0) != 0 ||
      !ParseInt(std::string_view(token).substr(key.size() + 1), v) || v < 0 ||
      v > (1ll << 31) - 1) {
    throw ParseError(ErrorCode::kFormat, path, line,
                     "expected " + key + "=<int>, got '" + token + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, path + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, path + ": write failed");
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void WriteFeatures(const std::string& path, const Matrix& features) {
  ByteWriter w;
  w.Magic(kFeatureMagic);
  w.U32(kFeatureFormatVersion);
  w.U64(static_cast<uint64_t>(features.rows()));
  w.U32(static_cast<uint32_t>(features.cols()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) w.F64(features(i, j));
  }
  WriteTextFile(path, w.bytes());
}

Matrix ReadFeatures(const std::string& path) {
  ByteReader r(path, ReadTextFile(path));
  r.Magic(kFeatureMagic);
  r.Version(kFeatureFormatVersion);
  const uint64_t n = r.U64("sample count");
  const uint32_t d = r.U32("dimension");
  r.ExpectRemaining(n * d * 8);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (uint64_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < d; ++j) {
      const size_t at = r.pos();
      const double v = r.F64("feature");
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kFormat, path + ": offset " + std::to_string(at) +
                                            ": non-finite feature value");
      }
      m(static_cast<Eigen::Index>(i), j) = v;
    }
  }
  return m;
}

void WriteLabels(const std::string& path, const std::vector<LabelSet>& labels,
                 int num_classes) {
  std::string out = "classes=" + std::to_string(num_classes) + "\n";
  for (const LabelSet& l : labels) {
    for (size_t i = 0; i < l.classes().size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(l.classes()[i]);
    }
    out += '\n';
  }
  WriteTextFile(path, out);
}

LabelFile ReadLabels(const std::string& path) {
  const std::vector<std::string> lines = SplitLines(ReadTextFile(path));
  if (lines.empty()) {
    throw ParseError(ErrorCode::kFormat, path, 1, "missing classes= header");
  }
  LabelFile file;
  file.num_classes = ParseField(lines[0], "classes", path, 1);
  if (file.num_classes < 1) {
    throw ParseError(ErrorCode::kFormat, path, 1, "classes must be >= 1");
  }
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    const size_t line_no = ln + 1;
    std::vector<int> classes;
    std::string_view rest = lines[ln];
    if (rest.empty()) {
      throw ParseError(ErrorCode::kLabel, path, line_no, "empty label set");
    }
    while (true) {
      const size_t comma = rest.find(',');
      const std::string_view token = rest.substr(0, comma);
      long long v = 0;
      if (!ParseInt(token, v)) {
        throw ParseError(ErrorCode::kFormat, path, line_no,
                         "bad class index '" + std::string(token) + "'");
      }
      if (v >= file.num_classes) {
        throw ParseError(ErrorCode::kLabelRange, path, line_no,
                         "class index " + std::to_string(v) +
                             " out of range [0, " +
                             std::to_string(file.num_classes) + ")");
      }
      classes.push_back(static_cast<int>(v));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    file.labels.emplace_back(std::move(classes));
  }
  return file;
}

std::string SplitName(uint8_t mask) {
  switch (mask) {
    case kSplitTrain: return "train";
    case kSplitGallery: return "gallery";
    case kSplitQuery: return "query";
    case kSplitGallery | kSplitTrain: return "gallery+train";
    default: break;
  }
  throw Error(ErrorCode::kConfig,
              "no split name for mask " + std::to_string(mask));
}

void WriteSplits(const std::string& path, const std::vector<uint8_t>& splits) {
  std::string out;
  for (uint8_t s : splits) out += SplitName(s) + "\n";
  WriteTextFile(path, out);
}

std::vector<uint8_t> ReadSplits(const std::string& path) {
  const std::vector<std::string> lines = SplitLines(ReadTextFile(path));
  std::vector<uint8_t> splits;
  splits.reserve(lines.size());
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    uint8_t mask = 0;
    std::string_view rest = lines[ln];
    while (true) {
      const size_t plus = rest.find('+');
      const std::string_view token = rest.substr(0, plus);
      if (token == "train") {
        mask |= kSplitTrain;
      } else if (token == "gallery") {
        mask |= kSplitGallery;
      } else if (token == "query") {
        mask |= kSplitQuery;
      } else {
        throw ParseError(ErrorCode::kFormat, path, ln + 1,
                         "unknown split tag '" + std::string(token) + "'");
      }
      if (plus == std::string_view::npos) break;
      rest.remove_prefix(plus + 1);
    }
    if ((mask & kSplitQuery) && (mask & kSplitGallery)) {
      throw ParseError(ErrorCode::kSplitOverlap, path, ln + 1,
                       "sample is tagged both query and gallery");
    }
    if ((mask & kSplitQuery) && (mask & kSplitTrain)) {
      throw ParseError(ErrorCode::kFormat, path, ln + 1,
                       "query samples cannot be train samples");
    }
    splits.push_back(mask);
  }
  return splits;
}

void Dataset::Validate() const {
  const size_t n = static_cast<size_t>(features.rows());
  if (labels.size() != n || splits.size() != n) {
    throw Error(ErrorCode::kCountMismatch,
                "dataset: " + std::to_string(n) + " feature rows, " +
                    std::to_string(labels.size()) + " label lines, " +
                    std::to_string(splits.size()) + " split lines");
  }
  for (size_t i = 0; i < n; ++i) {
    if (labels[i].empty()) {
      throw Error(ErrorCode::kLabel,
                  "dataset: sample " + std::to_string(i) + " has no labels");
    }
    if (labels[i].max_class() >= num_classes) {
      throw Error(ErrorCode::kLabelRange,
                  "dataset: sample " + std::to_string(i) + " carries class " +
                      std::to_string(labels[i].max_class()) +
                      " >= C=" + std::to_string(num_classes));
    }
    if ((splits[i] & kSplitQuery) && (splits[i] & kSplitGallery)) {
      throw Error(ErrorCode::kSplitOverlap,
                  "dataset: sample " + std::to_string(i) +
                      " is both query and gallery");
    }
  }
}

LabeledSamples Dataset::Select(SplitFlag flag) const {
  std::vector<Eigen::Index> rows;
  for (size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] & flag) rows.push_back(static_cast<Eigen::Index>(i));
  }
  LabeledSamples out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) = features.row(rows[r]);
    out.labels.push_back(labels[rows[r]]);
    out.ids.push_back(rows[r]);
  }
  return out;
}

Dataset LoadDataset(const std::string& feature_path,
                    const std::string& label_path,
                    const std::string& split_path) {
  Dataset ds;
  ds.features = ReadFeatures(feature_path);
  LabelFile lf = ReadLabels(label_path);
  ds.labels = std::move(lf.labels);
  ds.num_classes = lf.num_classes;
  ds.splits = ReadSplits(split_path);
  if (ds.labels.size() != static_cast<size_t>(ds.features.rows())) {
    throw Error(ErrorCode::kCountMismatch,
                label_path + ": " + std::to_string(ds.labels.size()) +
                    " label lines but " + feature_path + " holds " +
                    std::to_string(ds.features.rows()) + " samples");
  }
  if (ds.splits.size() != static_cast<size_t>(ds.features.rows())) {
    throw Error(ErrorCode::kCountMismatch,
                split_path + ": " + std::to_string(ds.splits.size()) +
                    " split lines but " + feature_path + " holds " +
                    std::to_string(ds.features.rows()) + " samples");
  }
  ds.Validate();
  return ds;
}

void SaveDataset(const Dataset& dataset, const std::string& feature_path,
                 const std::string& label_path,
                 const std::string& split_path) {
  dataset.Validate();
  WriteFeatures(feature_path, dataset.features);
  WriteLabels(label_path, dataset.labels, dataset.num_classes);
  WriteSplits(split_path, dataset.splits);
}

void WriteCenters(const std::string& path, const HashCenterSet& centers) {
  centers.Validate();
  std::string out = "B=" + std::to_string(centers.bits) +
                    " C=" + std::to_string(centers.classes()) +
                    " epoch=" + std::to_string(centers.epoch) + "\n";
  for (const Codeword& c : centers.centers) out += c.ToString() + "\n";
  WriteTextFile(path, out);
}

HashCenterSet ReadCenters(const std::string& path) {
  const std::vector<std::string> lines = SplitLines(ReadTextFile(path));
  if (lines.empty()) {
    throw ParseError(ErrorCode::kFormat, path, 1, "missing header");
  }
  std::istringstream header(lines[0]);
  std::string tb, tc, te, extra;
  header >> tb >> tc >> te;
  if (header >> extra) {
    throw ParseError(ErrorCode::kFormat, path, 1, "trailing header tokens");
  }
  HashCenterSet set;
  set.bits = ParseField(tb, "B", path, 1);
  const int classes = ParseField(tc, "C", path, 1);
  set.epoch = ParseField(te, "epoch", path, 1);
  if (lines.size() - 1 != static_cast<size_t>(classes)) {
    throw ParseError(ErrorCode::kCountMismatch, path, lines.size(),
                     "header declares C=" + std::to_string(classes) + ", file has " +
                         std::to_string(lines.size() - 1) + " centers");
  }
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].size() != static_cast<size_t>(set.bits)) {
      throw ParseError(ErrorCode::kCountMismatch, path, ln + 1,
                       "center has " + std::to_string(lines[ln].size()) +
                           " bits, expected " + std::to_string(set.bits));
    }
    try {
      set.centers.push_back(Codeword::FromString(lines[ln]));
    } catch (const Error& e) {
      throw ParseError(ErrorCode::kFormat, path, ln + 1, e.what());
    }
  }
  return set;
}

void WriteModel(const std::string& path, const DcshModel& model) {
  ByteWriter w;
  w.Magic(kModelMagic);
  w.U32(kModelFormatVersion);
  w.U32(static_cast<uint32_t>(model.num_layers()));
  for (const AffineLayer& layer : model.layers()) {
    w.U32(static_cast<uint32_t>(layer.weight.rows()));
    w.U32(static_cast<uint32_t>(layer.weight.cols()));
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
        w.F64(layer.weight(i, j));
      }
    }
    for (Eigen::Index j = 0; j < layer.bias.size(); ++j) w.F64(layer.bias(j));
  }
  WriteTextFile(path, w.bytes());
}

DcshModel ReadModel(const std::string& path) {
  ByteReader r(path, ReadTextFile(path));
  r.Magic(kModelMagic);
  r.Version(kModelFormatVersion);
  const uint32_t count = r.U32("layer count");
  std::vector<AffineLayer> layers(count);
  for (AffineLayer& layer : layers) {
    const uint32_t rows = r.U32("layer rows");
    const uint32_t cols = r.U32("layer cols");
    layer.weight.resize(rows, cols);
    layer.bias.resize(cols);
    for (uint32_t i = 0; i < rows; ++i) {
      for (uint32_t j = 0; j < cols; ++j) layer.weight(i, j) = r.F64("weight");
    }
    for (uint32_t j = 0; j < cols; ++j) layer.bias(j) = r.F64("bias");
  }
  r.ExpectEnd();
  try {
    return DcshModel(std::move(layers));
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, path + ": " + e.what());
  }
}

void WriteCodesText(const std::string& path, const CodeTable& table) {
  if (table.ids.size() != table.codes.size()) {
    throw Error(ErrorCode::kDimension, "WriteCodesText: ids/codes mismatch");
  }
  std::string out;
  for (size_t i = 0; i < table.ids.size(); ++i) {
    out += std::to_string(table.ids[i]) + "\t" + table.codes[i].ToString() + "\n";
  }
  WriteTextFile(path, out);
}

CodeTable ReadCodesText(const std::string& path) {
  const std::vector<std::string> lines = SplitLines(ReadTextFile(path));
  CodeTable table;
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    const size_t tab = line.find('\t');
    long long id = 0;
    if (tab == std::string::npos ||
        !ParseInt(std::string_view(line).substr(0, tab), id)) {
      throw ParseError(ErrorCode::kFormat, path, ln + 1,
                       "expected <id>\\t<bits>");
    }
    try {
      table.codes.push_back(Codeword::FromString(line.substr(tab + 1)));
    } catch (const Error& e) {
      throw ParseError(ErrorCode::kFormat, path, ln + 1, e.what());
    }
    if (!table.codes.empty() &&
        table.codes.back().bits() != table.codes.front().bits()) {
      throw ParseError(ErrorCode::kCountMismatch, path, ln + 1,
                       "code length differs from the first line");
    }
    table.ids.push_back(id);
  }
  return table;
}

void WritePackedCodes(const std::string& path,
                      const std::vector<Codeword>& codes) {
  const int bits = codes.empty() ? 0 : codes.front().bits();
  ByteWriter w;
  w.Magic(kCodeMagic);
  w.U32(kCodeFormatVersion);
  w.U64(codes.size());
  w.U32(static_cast<uint32_t>(bits));
  for (const Codeword& c : codes) {
    if (c.bits() != bits) {
      throw Error(ErrorCode::kDimension, "WritePackedCodes: mixed lengths");
    }
    for (uint64_t word : c.words()) w.U64(word);
  }
  WriteTextFile(path, w.bytes());
}

std::vector<Codeword> ReadPackedCodes(const std::string& path) {
  ByteReader r(path, ReadTextFile(path));
  r.Magic(kCodeMagic);
  r.Version(kCodeFormatVersion);
  const uint64_t n = r.U64("code count");
  const uint32_t bits = r.U32("bit count");
  const int words = Codeword::WordsFor(static_cast<int>(bits));
  r.ExpectRemaining(n * words * 8);
  const uint64_t tail_mask =
      bits % 64 == 0 ? ~uint64_t{0} : (uint64_t{1} << (bits % 64)) - 1;
  std::vector<Codeword> codes;
  codes.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    Codeword code(static_cast<int>(bits));
    for (int w = 0; w < words; ++w) {
      const size_t at = r.pos();
      const uint64_t word = r.U64("code word");
      if (w == words - 1 && (word & ~tail_mask) != 0) {
        throw Error(ErrorCode::kFormat, path + ": offset " + std::to_string(at) +
                                            ": padding bits set");
      }
      for (int b = 0; b < 64 && w * 64 + b < static_cast<int>(bits); ++b) {
        code.set(w * 64 + b, (word >> b) & 1u);
      }
    }
    codes.push_back(std::move(code));
  }
  return codes;
}

void WriteLossCsv(const std::string& path, const std::vector<double>& train,
                  const std::vector<double>& test) {
  std::string out = "epoch,train_loss,test_loss\n";
  for (size_t e = 0; e < train.size(); ++e) {
    out += std::to_string(e) + "," + FormatDouble(train[e]) + ",";
    if (e < test.size() && !std::isnan(test[e])) out += FormatDouble(test[e]);
    out += "\n";
  }
  WriteTextFile(path, out);
}

void WritePrCsv(const std::string& path, const std::vector<PrPoint>& curve) {
  std::string out = "threshold,recall,precision\n";
  for (const PrPoint& p : curve) {
    out += std::to_string(p.threshold) + "," + FormatDouble(p.recall) + "," +
           FormatDouble(p.precision) + "\n";
  }
  WriteTextFile(path, out);
}

void WriteMapCsv(const std::string& path, int k, const MapResult& result) {
  WriteTextFile(path, "k,map\n" + std::to_string(k) + "," +
                          FormatDouble(result.map) + "\n");
}

void WriteApCsv(const std::string& path, const MapResult& result) {
  std::string out = "id,ap\n";
  for (size_t i = 0; i < result.ids.size(); ++i) {
    out += std::to_string(result.ids[i]) + "," + FormatDouble(result.ap[i]) + "\n";
  }
  WriteTextFile(path, out);
}

}  // namespace dcsh
