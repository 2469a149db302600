// Copyright 2026 The GraphKV Authors.
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

#include "graphkv/io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include <gtest/gtest.h>

#include "graphkv/errors.h"
#include "test_util.h"

namespace graphkv::io {
namespace {

namespace fs = std::filesystem;

const fs::path kGolden = GRAPHKV_GOLDEN_DIR;

std::string Header(std::uint32_t version, std::vector<std::uint64_t> dims) {
  std::string out = "GKT1";
  auto put = [&out](std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  put(version, 4);
  put(dims.size(), 4);
  for (std::uint64_t d : dims) put(d, 8);
  return out;
}

TEST(TensorTest, RoundTripRandom) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = testing::RandomMatrix(rng, rng.NextU64() % 7, 1 + rng.NextU64() % 9);
    const Matrix back = DecodeTensor(EncodeTensor(m));
    EXPECT_EQ(back, m);
  }
}

TEST(TensorTest, NegativeZeroSurvivesBitwise) {
  const Matrix m(1, 2, {-0.0f, 0.0f});
  const Matrix back = DecodeTensor(EncodeTensor(m));
  EXPECT_TRUE(std::signbit(back.at(0, 0)));
  EXPECT_FALSE(std::signbit(back.at(0, 1)));
}

TEST(TensorTest, EmptyIsHeaderOnly) {
  EXPECT_EQ(EncodeTensor(Matrix(0, 0)).size(), 28u);
  EXPECT_EQ(EncodeTensor(Matrix(0, 5)).size(), 28u);
  const Matrix back = DecodeTensor(EncodeTensor(Matrix(0, 5)));
  EXPECT_EQ(back.rows(), 0u);
  EXPECT_EQ(back.cols(), 5u);
}

TEST(TensorTest, LayoutIsLittleEndian) {
  const std::string bytes = EncodeTensor(Matrix(1, 1, {1.0f}));
  ASSERT_EQ(bytes.size(), 32u);
  EXPECT_EQ(bytes.substr(0, 4), "GKT1");
  EXPECT_EQ(bytes.substr(0, 28), Header(1, {1, 1}));
  // 1.0f = 0x3f800000
  EXPECT_EQ(bytes.substr(28), std::string("\x00\x00\x80\x3f", 4));
}

TEST(TensorTest, BadMagic) {
  std::string bytes = EncodeTensor(Matrix(1, 1, {1.0f}));
  bytes[3] = '2';
  EXPECT_THROW(DecodeTensor(bytes), BadMagicError);
  EXPECT_THROW(DecodeTensor("GK"), TruncatedError);
}

TEST(TensorTest, VersionMismatch) {
  EXPECT_THROW(DecodeTensor(Header(2, {0, 0})), VersionMismatchError);
}

TEST(TensorTest, Truncated) {
  const std::string bytes = EncodeTensor(Matrix(2, 2, {1, 2, 3, 4}));
  for (std::size_t cut : {5u, 11u, 20u, 28u, 31u}) {
    EXPECT_THROW(DecodeTensor(bytes.substr(0, cut)), TruncatedError) << cut;
  }
}

TEST(TensorTest, TrailingBytesRejected) {
  EXPECT_THROW(DecodeTensor(EncodeTensor(Matrix(1, 1, {1.0f})) + "x"), IoError);
}

TEST(TensorTest, AbsurdDimsRejectedBeforeAllocating) {
  EXPECT_THROW(DecodeTensor(Header(1, {std::uint64_t{1} << 32, std::uint64_t{1} << 32})),
               IoError);
  EXPECT_THROW(DecodeTensor(Header(1, {~std::uint64_t{0}, 3})), IoError);
  EXPECT_THROW(DecodeTensor(Header(1, {1000, 1000})), TruncatedError);
}

TEST(TensorTest, RankRules) {
  // Rank 1 reads as one row; rank 3 is rejected.
  std::string v = Header(1, {2});
  v += std::string("\x00\x00\x80\x3f\x00\x00\x00\x40", 8);
  EXPECT_EQ(DecodeTensor(v), Matrix(1, 2, {1.0f, 2.0f}));
  EXPECT_THROW(DecodeTensor(Header(1, {1, 1, 0})), IoError);
}

TEST(TensorTest, NonFinitePayloadRejectedInMatrices) {
  std::string bytes = Header(1, {1, 1});
  const auto nan = std::bit_cast<std::uint32_t>(std::numeric_limits<float>::quiet_NaN());
  for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((nan >> (8 * i)) & 0xff));
  EXPECT_THROW(DecodeTensor(bytes), IoError);
}

TEST(TensorTest, GoldenFilesDecode) {
  EXPECT_EQ(read_tensor(kGolden / "empty_0x0.gkt"), Matrix(0, 0));
  EXPECT_EQ(read_tensor(kGolden / "one_1x1.gkt"), Matrix(1, 1, {1.5f}));
  const Matrix mixed = read_tensor(kGolden / "mixed_2x3.gkt");
  EXPECT_EQ(mixed, Matrix(2, 3, {1.0f, -2.0f, 0.5f, -0.0f, 3.25f, 1e-3f}));
  EXPECT_TRUE(std::signbit(mixed.at(1, 0)));
  EXPECT_EQ(read_tensor(kGolden / "vector_3.gkt"), Matrix(1, 3, {0.25f, 0.5f, 0.75f}));
}

TEST(TensorTest, EncoderMatchesGoldenBytes) {
  EXPECT_EQ(EncodeTensor(Matrix(0, 0)), ReadFile(kGolden / "empty_0x0.gkt"));
  EXPECT_EQ(EncodeTensor(Matrix(1, 1, {1.5f})), ReadFile(kGolden / "one_1x1.gkt"));
  EXPECT_EQ(EncodeTensor(Matrix(2, 3, {1.0f, -2.0f, 0.5f, -0.0f, 3.25f, 1e-3f})),
            ReadFile(kGolden / "mixed_2x3.gkt"));
}

TEST(ScoresTest, GoldenAndRoundTrip) {
  const double ninf = -std::numeric_limits<double>::infinity();
  const ScoreVector golden = ReadScores(kGolden / "scores_1x4.gkt");
  EXPECT_EQ(golden, ScoreVector({1.0, double{0.8f}, double{0.2f}, ninf}));

  const fs::path dir = testing::ScratchDir("io_scores");
  WriteScores(dir / "s.gkt", ScoreVector({1.0, 0.8, 0.2, ninf}));
  EXPECT_EQ(ReadFile(dir / "s.gkt"), ReadFile(kGolden / "scores_1x4.gkt"));
  EXPECT_THROW(ReadScores(kGolden / "mixed_2x3.gkt"), IoError);
  EXPECT_EQ(ReadScores(kGolden / "vector_3.gkt").size(), 3u);
}

TEST(FileTest, MissingFileIsIoError) {
  EXPECT_THROW(read_tensor("/nonexistent/graphkv/x.gkt"), IoError);
}

TEST(ManifestTest, RoundTripAndRelativePaths) {
  const fs::path dir = testing::ScratchDir("io_manifest");
  Rng rng(2);
  write_tensor(dir / "k.gkt", testing::RandomMatrix(rng, 4, 3));
  write_tensor(dir / "v.gkt", testing::RandomMatrix(rng, 4, 3));
  WorkloadManifest m;
  m.keys = "k.gkt";
  m.values = "v.gkt";
  m.labels = std::vector<std::size_t>{0, 0, 1, 1};
  WriteManifest(dir / "manifest.json", m);

  const WorkloadManifest back = ReadManifest(dir / "manifest.json");
  EXPECT_EQ(back.keys, dir / "k.gkt");
  EXPECT_FALSE(back.queries.has_value());
  EXPECT_EQ(back.labels, m.labels);

  const LoadedWorkload w = LoadWorkload(dir / "manifest.json");
  EXPECT_EQ(w.cache.num_tokens(), 4u);
  EXPECT_EQ(w.cache.values.cols(), 3u);
}

TEST(ManifestTest, Rejections) {
  const fs::path dir = testing::ScratchDir("io_manifest_bad");
  write_tensor(dir / "k.gkt", Matrix(2, 2, {1, 2, 3, 4}));
  write_tensor(dir / "v3.gkt", Matrix(3, 2));
  WriteFile(dir / "unknown.json", R"({"keys": "k.gkt", "values": "k.gkt", "extra": 1})");
  EXPECT_THROW(ReadManifest(dir / "unknown.json"), IoError);
  WriteFile(dir / "broken.json", "{");
  EXPECT_THROW(ReadManifest(dir / "broken.json"), IoError);
  WriteFile(dir / "nokeys.json", R"({"values": "k.gkt"})");
  EXPECT_THROW(ReadManifest(dir / "nokeys.json"), IoError);
  WriteFile(dir / "labels.json", R"({"keys": "k.gkt", "values": "k.gkt", "labels": [0]})");
  EXPECT_THROW(LoadWorkload(dir / "labels.json"), IoError);
  WriteFile(dir / "shape.json", R"({"keys": "k.gkt", "values": "v3.gkt"})");
  EXPECT_THROW(LoadWorkload(dir / "shape.json"), IoError);
}

}  // namespace
}  // namespace graphkv::io
