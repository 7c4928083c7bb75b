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
#ifndef DCSH_DATA_IO_H_
#define DCSH_DATA_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dcsh/codeword.h"
#include "dcsh/dataset.h"
#include "dcsh/hash_centers.h"
#include "dcsh/network.h"
#include "dcsh/retrieval.h"

namespace dcsh {

// Readers and writers for every on-disk artifact. Binary formats are
// little-endian regardless of host; text formats use '\n' line endings.
// Parse failures throw Error with the file name and line (or byte offset).

inline constexpr uint32_t kFeatureFormatVersion = 1;
inline constexpr uint32_t kModelFormatVersion = 1;
inline constexpr uint32_t kCodeFormatVersion = 1;

// "DCSHFEAT", u32 version, u64 N, u32 D, N·D f64 row-major.
void WriteFeatures(const std::string& path, const Matrix& features);
Matrix ReadFeatures(const std::string& path);

// "classes=<C>" then one comma-separated index list per sample.
struct LabelFile {
  int num_classes = 0;
  std::vector<LabelSet> labels;
};
void WriteLabels(const std::string& path, const std::vector<LabelSet>& labels,
                 int num_classes);
LabelFile ReadLabels(const std::string& path);

// One of train / gallery / query / gallery+train per line.
void WriteSplits(const std::string& path, const std::vector<uint8_t>& splits);
std::vector<uint8_t> ReadSplits(const std::string& path);
std::string SplitName(uint8_t mask);

Dataset LoadDataset(const std::string& feature_path,
                    const std::string& label_path,
                    const std::string& split_path);
void SaveDataset(const Dataset& dataset, const std::string& feature_path,
                 const std::string& label_path, const std::string& split_path);

// "B=<int> C=<int> epoch=<int>" then C lines of B '0'/'1' characters.
void WriteCenters(const std::string& path, const HashCenterSet& centers);
HashCenterSet ReadCenters(const std::string& path);

// "DCSHMODL", u32 version, u32 layer count, then per layer u32 rows, u32 cols,
// rows·cols f64 weights row-major, cols f64 biases.
void WriteModel(const std::string& path, const DcshModel& model);
DcshModel ReadModel(const std::string& path);

// "<id>\t<bits>" per line.
struct CodeTable {
  std::vector<int64_t> ids;
  std::vector<Codeword> codes;
};
void WriteCodesText(const std::string& path, const CodeTable& table);
CodeTable ReadCodesText(const std::string& path);

// "DCSHCODE", u32 version, u64 N, u32 B, N·ceil(B/64) u64 words.
void WritePackedCodes(const std::string& path,
                      const std::vector<Codeword>& codes);
std::vector<Codeword> ReadPackedCodes(const std::string& path);

// "epoch,train_loss,test_loss"; test_loss empty when not measured (NaN).
void WriteLossCsv(const std::string& path, const std::vector<double>& train,
                  const std::vector<double>& test);
// "threshold,recall,precision"
void WritePrCsv(const std::string& path, const std::vector<PrPoint>& curve);
// "k,map" summary, and "id,ap" per query.
void WriteMapCsv(const std::string& path, int k, const MapResult& result);
void WriteApCsv(const std::string& path, const MapResult& result);

// Shortest decimal string that round-trips to the same double.
std::string FormatDouble(double value);

// Writes `content` to `path`, throwing kIo on failure.
void WriteTextFile(const std::string& path, const std::string& content);
std::string ReadTextFile(const std::string& path);

}  // namespace dcsh

#endif  // DCSH_DATA_IO_H_
