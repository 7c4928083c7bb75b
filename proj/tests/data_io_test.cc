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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "dcsh/error.h"
#include "dcsh/hash_centers.h"
#include "dcsh/network.h"
#include "dcsh/synthetic.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace dcsh {
namespace {

namespace fs = std::filesystem;

class DataIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(::testing::TempDir()) /
           (std::string("dcsh_io_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  ErrorCode CodeOf(const std::function<void()>& fn, std::string* what = nullptr) {
    try {
      fn();
    } catch (const Error& e) {
      if (what) *what = e.what();
      return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::kIo;
  }

  fs::path dir_;
};

// Little-endian raw bytes, written without the library's writer.
template <typename T>
void Put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

std::string FeatureBytes(uint64_t n, uint32_t d, const std::vector<double>& v,
                         uint32_t version = 1, const char* magic = "DCSHFEAT") {
  std::string out(magic, 8);
  Put<uint32_t>(out, version);
  Put<uint64_t>(out, n);
  Put<uint32_t>(out, d);
  for (double x : v) Put<double>(out, x);
  return out;
}

TEST_F(DataIoTest, HandWrittenFixture) {
  WriteTextFile(Path("f.bin"),
                FeatureBytes(3, 2, {1.5, -2.0, 0.25, 3.0, -0.125, 8.0}));
  WriteTextFile(Path("l.txt"), "classes=4\n0\n1,3\n2\n");
  WriteTextFile(Path("s.txt"), "gallery+train\nquery\ngallery\n");
  const Dataset ds = LoadDataset(Path("f.bin"), Path("l.txt"), Path("s.txt"));
  Matrix want(3, 2);
  want << 1.5, -2.0, 0.25, 3.0, -0.125, 8.0;
  EXPECT_EQ(ds.features, want);
  EXPECT_EQ(ds.num_classes, 4);
  EXPECT_EQ(ds.labels, (std::vector<LabelSet>{LabelSet{0}, LabelSet{1, 3},
                                              LabelSet{2}}));
  EXPECT_EQ(ds.splits, (std::vector<uint8_t>{kSplitGallery | kSplitTrain,
                                             kSplitQuery, kSplitGallery}));
  const LabeledSamples gallery = ds.Select(kSplitGallery);
  EXPECT_EQ(gallery.ids, (std::vector<int64_t>{0, 2}));
  EXPECT_EQ(ds.Select(kSplitTrain).ids, (std::vector<int64_t>{0}));
  EXPECT_EQ(ds.Select(kSplitQuery).features.row(0)(1), 3.0);
}

TEST_F(DataIoTest, DatasetRoundTripIsBitIdentical) {
  SyntheticParams params;
  params.n = 120;
  params.multilabel_p = 0.3;
  params.num_train = 50;
  const Dataset ds = GenSynthetic(params);
  SaveDataset(ds, Path("f.bin"), Path("l.txt"), Path("s.txt"));
  const Dataset back = LoadDataset(Path("f.bin"), Path("l.txt"), Path("s.txt"));
  EXPECT_EQ(back.features, ds.features);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.splits, ds.splits);
  EXPECT_EQ(back.num_classes, ds.num_classes);
  SaveDataset(back, Path("f2.bin"), Path("l2.txt"), Path("s2.txt"));
  EXPECT_EQ(ReadTextFile(Path("f.bin")), ReadTextFile(Path("f2.bin")));
  EXPECT_EQ(ReadTextFile(Path("l.txt")), ReadTextFile(Path("l2.txt")));
  EXPECT_EQ(ReadTextFile(Path("s.txt")), ReadTextFile(Path("s2.txt")));
}

TEST_F(DataIoTest, FeatureValuesRoundTripExactly) {
  Matrix m(2, 3);
  m << 0.1, -0.0, std::numeric_limits<double>::denorm_min(), 1e308, -1e-308,
      1.0 / 3.0;
  WriteFeatures(Path("f.bin"), m);
  const Matrix back = ReadFeatures(Path("f.bin"));
  EXPECT_EQ(std::memcmp(back.data(), m.data(), sizeof(double) * 6), 0);
}

TEST_F(DataIoTest, LabelIndexOutOfRangeNamesLine) {
  WriteTextFile(Path("l.txt"), "classes=3\n0\n1,2\n2,3\n");
  std::string what;
  EXPECT_EQ(CodeOf([&] { ReadLabels(Path("l.txt")); }, &what),
            ErrorCode::kLabelRange);
  EXPECT_NE(what.find("l.txt:4"), std::string::npos) << what;
}

TEST_F(DataIoTest, LabelFormatErrors) {
  WriteTextFile(Path("a.txt"), "0\n1\n");
  EXPECT_EQ(CodeOf([&] { ReadLabels(Path("a.txt")); }), ErrorCode::kFormat);
  WriteTextFile(Path("b.txt"), "classes=3\n0\nx\n");
  std::string what;
  EXPECT_EQ(CodeOf([&] { ReadLabels(Path("b.txt")); }, &what),
            ErrorCode::kFormat);
  EXPECT_NE(what.find("b.txt:3"), std::string::npos) << what;
  WriteTextFile(Path("c.txt"), "classes=3\n0\n\n");
  EXPECT_EQ(CodeOf([&] { ReadLabels(Path("c.txt")); }), ErrorCode::kLabel);
}

TEST_F(DataIoTest, FeatureHeaderErrors) {
  WriteTextFile(Path("magic.bin"),
                FeatureBytes(1, 1, {1.0}, 1, "DCSHXXXX"));
  EXPECT_EQ(CodeOf([&] { ReadFeatures(Path("magic.bin")); }),
            ErrorCode::kFormat);
  WriteTextFile(Path("version.bin"), FeatureBytes(1, 1, {1.0}, 2));
  std::string what;
  EXPECT_EQ(CodeOf([&] { ReadFeatures(Path("version.bin")); }, &what),
            ErrorCode::kFormat);
  EXPECT_NE(what.find("offset 8"), std::string::npos) << what;
  WriteTextFile(Path("short.bin"), FeatureBytes(2, 2, {1.0, 2.0, 3.0}));
  EXPECT_EQ(CodeOf([&] { ReadFeatures(Path("short.bin")); }),
            ErrorCode::kCountMismatch);
  EXPECT_EQ(CodeOf([&] { ReadFeatures(Path("missing.bin")); }),
            ErrorCode::kIo);
}

TEST_F(DataIoTest, CountMismatchAcrossFiles) {
  WriteTextFile(Path("f.bin"), FeatureBytes(2, 1, {1.0, 2.0}));
  WriteTextFile(Path("l.txt"), "classes=2\n0\n1\n0\n");
  WriteTextFile(Path("s.txt"), "gallery\nquery\n");
  EXPECT_EQ(CodeOf([&] {
              LoadDataset(Path("f.bin"), Path("l.txt"), Path("s.txt"));
            }),
            ErrorCode::kCountMismatch);
}

TEST_F(DataIoTest, SplitErrors) {
  WriteTextFile(Path("a.txt"), "gallery\nquery+gallery\n");
  std::string what;
  EXPECT_EQ(CodeOf([&] { ReadSplits(Path("a.txt")); }, &what),
            ErrorCode::kSplitOverlap);
  EXPECT_NE(what.find("a.txt:2"), std::string::npos) << what;
  WriteTextFile(Path("b.txt"), "probe\n");
  EXPECT_EQ(CodeOf([&] { ReadSplits(Path("b.txt")); }), ErrorCode::kFormat);
}

TEST_F(DataIoTest, SplitNames) {
  WriteTextFile(Path("s.txt"), "train\ngallery\nquery\ngallery+train\n");
  const std::vector<uint8_t> s = ReadSplits(Path("s.txt"));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(SplitName(s[0]), "train");
  EXPECT_EQ(SplitName(s[3]), "gallery+train");
  WriteSplits(Path("s2.txt"), s);
  EXPECT_EQ(ReadTextFile(Path("s2.txt")), ReadTextFile(Path("s.txt")));
}

TEST_F(DataIoTest, CentersRoundTrip) {
  HashCenterSet set = GenBernoulliCenters(48, 10, 7, 10);
  set.epoch = 12;
  WriteCenters(Path("c.txt"), set);
  EXPECT_EQ(ReadCenters(Path("c.txt")), set);
  WriteTextFile(Path("bad.txt"), "B=4 C=2 epoch=0\n1010\n110\n");
  EXPECT_EQ(CodeOf([&] { ReadCenters(Path("bad.txt")); }),
            ErrorCode::kCountMismatch);
}

TEST_F(DataIoTest, ModelRoundTrip) {
  ModelShape shape;
  shape.input_dim = 7;
  shape.hidden = {9};
  shape.bits = 12;
  shape.classes = 3;
  const DcshModel model = DcshModel::Create(shape, 4);
  WriteModel(Path("m.bin"), model);
  const DcshModel back = ReadModel(Path("m.bin"));
  ASSERT_EQ(back.num_layers(), model.num_layers());
  for (int l = 0; l < model.num_layers(); ++l) {
    EXPECT_EQ(back.layers()[l].weight, model.layers()[l].weight);
    EXPECT_EQ(back.layers()[l].bias, model.layers()[l].bias);
  }
  const std::string bytes = ReadTextFile(Path("m.bin"));
  EXPECT_EQ(bytes.substr(0, 8), "DCSHMODL");
  WriteTextFile(Path("trunc.bin"), bytes.substr(0, bytes.size() - 3));
  EXPECT_EQ(CodeOf([&] { ReadModel(Path("trunc.bin")); }),
            ErrorCode::kCountMismatch);
}

TEST_F(DataIoTest, CodesRoundTrip) {
  std::mt19937_64 rng(1);
  CodeTable table;
  for (int i = 0; i < 6; ++i) {
    Codeword c(67);
    for (int j = 0; j < 67; ++j) c.set(j, rng() & 1);
    table.codes.push_back(c);
    table.ids.push_back(1000 - i);
  }
  WriteCodesText(Path("c.txt"), table);
  const CodeTable back = ReadCodesText(Path("c.txt"));
  EXPECT_EQ(back.ids, table.ids);
  EXPECT_EQ(back.codes, table.codes);
  const std::string first_line = ReadTextFile(Path("c.txt")).substr(0, 72);
  EXPECT_EQ(first_line, "1000\t" + table.codes[0].ToString());

  WritePackedCodes(Path("c.bin"), table.codes);
  EXPECT_EQ(ReadPackedCodes(Path("c.bin")), table.codes);
  // 8 magic + 4 version + 8 N + 4 B + 6 codes × 2 words.
  std::string bytes = ReadTextFile(Path("c.bin"));
  EXPECT_EQ(bytes.size(), 24u + 6 * 16);
  bytes[24 + 15] = static_cast<char>(0x80);  // a padding bit of code 0
  WriteTextFile(Path("pad.bin"), bytes);
  EXPECT_EQ(CodeOf([&] { ReadPackedCodes(Path("pad.bin")); }),
            ErrorCode::kFormat);
}

TEST_F(DataIoTest, CsvFormats) {
  WriteLossCsv(Path("loss.csv"), {-1.5, -2.25},
               {std::numeric_limits<double>::quiet_NaN(), -2.0});
  EXPECT_EQ(ReadTextFile(Path("loss.csv")),
            "epoch,train_loss,test_loss\n0,-1.5,\n1,-2.25,-2\n");
  WritePrCsv(Path("pr.csv"), {{0, 0.5, 1.0}, {1, 1.0, 0.75}});
  EXPECT_EQ(ReadTextFile(Path("pr.csv")),
            "threshold,recall,precision\n0,0.5,1\n1,1,0.75\n");
  MapResult r;
  r.map = 0.75;
  r.ids = {3, 4};
  r.ap = {1.0, 0.5};
  WriteMapCsv(Path("map.csv"), 100, r);
  WriteApCsv(Path("ap.csv"), r);
  EXPECT_EQ(ReadTextFile(Path("map.csv")), "k,map\n100,0.75\n");
  EXPECT_EQ(ReadTextFile(Path("ap.csv")), "id,ap\n3,1\n4,0.5\n");
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(-38.0), "-38");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(FormatDouble(third)), third);
}

TEST(SyntheticTest, SingleLabelAndDeterministic) {
  SyntheticParams params;
  const Dataset a = GenSynthetic(params);
  const Dataset b = GenSynthetic(params);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.splits, b.splits);
  for (const LabelSet& l : a.labels) EXPECT_EQ(l.size(), 1);
  params.seed = 2;
  EXPECT_NE(GenSynthetic(params).features, a.features);
}

TEST(SyntheticTest, SplitProportions) {
  SyntheticParams params;
  params.n = 1000;
  params.num_train = 500;
  const Dataset ds = GenSynthetic(params);
  EXPECT_EQ(ds.Select(kSplitQuery).size(), 100);
  EXPECT_EQ(ds.Select(kSplitGallery).size(), 900);
  EXPECT_EQ(ds.Select(kSplitTrain).size(), 500);
  // Stratified: every class equally represented among the queries.
  std::vector<int> per_class(10, 0);
  for (const LabelSet& l : ds.Select(kSplitQuery).labels) {
    ++per_class[l.classes()[0]];
  }
  for (int c : per_class) EXPECT_EQ(c, 10);
  for (uint8_t s : ds.splits) {
    EXPECT_FALSE((s & kSplitQuery) && (s & kSplitGallery));
    if (s & kSplitTrain) {
      EXPECT_TRUE(s & kSplitGallery);
    }
  }
}

TEST(SyntheticTest, MultiLabelFraction) {
  SyntheticParams params;
  params.n = 4000;
  params.classes = 20;
  params.multilabel_p = 0.4;
  const Dataset ds = GenSynthetic(params);
  int doubles = 0;
  for (const LabelSet& l : ds.labels) {
    ASSERT_LE(l.size(), 2);
    doubles += l.size() == 2;
  }
  EXPECT_NEAR(doubles / 4000.0, 0.4, 0.03);
}

TEST(SyntheticTest, NearestPrototypeClassifierRegression) {
  SyntheticParams params;
  params.n = 1000;
  params.dim = 32;
  params.classes = 10;
  params.separation = 6.0;
  params.seed = 1;
  const Dataset ds = GenSynthetic(params);
  Matrix means = Matrix::Zero(10, 32);
  std::vector<int> count(10, 0);
  for (int i = 0; i < ds.size(); ++i) {
    const int c = ds.labels[i].classes()[0];
    means.row(c) += ds.features.row(i);
    ++count[c];
  }
  for (int c = 0; c < 10; ++c) means.row(c) /= count[c];
  int correct = 0;
  for (int i = 0; i < ds.size(); ++i) {
    Eigen::Index best = 0;
    (means.rowwise() - ds.features.row(i)).rowwise().squaredNorm().minCoeff(
        &best);
    correct += static_cast<int>(best) == ds.labels[i].classes()[0];
  }
  EXPECT_GE(correct / 1000.0, 0.99);
  EXPECT_EQ(correct, 1000);
}

TEST(SyntheticTest, ParameterChecks) {
  SyntheticParams params;
  params.dim = 5;
  EXPECT_THROW(GenSynthetic(params), Error);
  params = {};
  params.multilabel_p = 1.0;
  EXPECT_THROW(GenSynthetic(params), Error);
  params = {};
  params.num_train = 10000;
  EXPECT_THROW(GenSynthetic(params), Error);
}

TEST(CodewordTest, StringsAndBits) {
  const Codeword c = Codeword::FromString("1001");
  EXPECT_EQ(c.bits(), 4);
  EXPECT_TRUE(c.get(0));
  EXPECT_FALSE(c.get(1));
  EXPECT_EQ(c.words()[0], 0b1001u);
  EXPECT_EQ(c.ToString(), "1001");
  EXPECT_THROW(Codeword::FromString("10a1"), Error);
  EXPECT_EQ(Codeword::WordsFor(64), 1);
  EXPECT_EQ(Codeword::WordsFor(65), 2);
}

TEST(LabelSetTest, CanonicalForm) {
  const LabelSet l({3, 1, 3});
  EXPECT_EQ(l.classes(), (std::vector<int>{1, 3}));
  EXPECT_EQ(l, (LabelSet{1, 3}));
  EXPECT_TRUE(l.contains(3));
  EXPECT_FALSE(l.contains(2));
  EXPECT_EQ(l.max_class(), 3);
  EXPECT_TRUE(l.Intersects(LabelSet{0, 3}));
  EXPECT_FALSE(l.Intersects(LabelSet{0, 2}));
  EXPECT_THROW(LabelSet({-1}), Error);
}

}  // namespace
}  // namespace dcsh
