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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "graphkv/errors.h"

namespace graphkv::io {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t ReadLE(int width, const char* what) {
    if (remaining() < static_cast<std::size_t>(width)) {
      throw TruncatedError(std::string("GKT1: truncated ") + what);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += width;
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

struct RawTensor {
  std::vector<std::uint64_t> dims;
  std::vector<float> data;
};

std::string EncodeRaw(const std::vector<std::uint64_t>& dims,
                      std::span<const float> data) {
  std::string out(kTensorMagic, 4);
  PutU32(out, kTensorVersion);
  PutU32(out, static_cast<std::uint32_t>(dims.size()));
  for (std::uint64_t d : dims) PutU64(out, d);
  out.reserve(out.size() + data.size() * 4);
  for (float x : data) PutU32(out, std::bit_cast<std::uint32_t>(x));
  return out;
}

RawTensor DecodeRaw(const std::string& bytes) {
  const std::size_t prefix = std::min<std::size_t>(bytes.size(), 4);
  if (std::memcmp(bytes.data(), kTensorMagic, prefix) != 0) {
    throw BadMagicError("not a GKT1 tensor (bad magic)");
  }
  Reader in(bytes);
  in.ReadLE(4, "magic");
  const auto version = static_cast<std::uint32_t>(in.ReadLE(4, "version"));
  if (version != kTensorVersion) {
    throw VersionMismatchError("GKT1: unsupported version " +
                               std::to_string(version));
  }
  const auto ndim = static_cast<std::uint32_t>(in.ReadLE(4, "ndim"));
  if (ndim > 8) throw IoError("GKT1: rank " + std::to_string(ndim) + " too large");
  RawTensor t;
  std::uint64_t elements = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const std::uint64_t d = in.ReadLE(8, "dims");
    t.dims.push_back(d);
    if (d != 0 && elements > kMaxTensorElements / d) {
      throw IoError("GKT1: declared size exceeds 2^40 elements");
    }
    elements *= d;
  }
  if (elements > kMaxTensorElements) {
    throw IoError("GKT1: declared size exceeds 2^40 elements");
  }
  if (in.remaining() < elements * 4) {
    throw TruncatedError("GKT1: payload holds " + std::to_string(in.remaining()) +
                         " bytes, header declares " + std::to_string(elements * 4));
  }
  if (in.remaining() > elements * 4) {
    throw IoError("GKT1: trailing bytes after payload");
  }
  t.data.resize(elements);
  for (std::uint64_t i = 0; i < elements; ++i) {
    t.data[i] = std::bit_cast<float>(static_cast<std::uint32_t>(in.ReadLE(4, "payload")));
  }
  return t;
}

std::pair<std::size_t, std::size_t> AsRowsCols(const RawTensor& t) {
  if (t.dims.size() == 2) return {t.dims[0], t.dims[1]};
  if (t.dims.size() == 1) return {1, t.dims[0]};
  throw IoError("GKT1: expected a rank-1 or rank-2 tensor, got rank " +
                std::to_string(t.dims.size()));
}

fs::path Resolve(const fs::path& base_dir, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

}  // namespace

std::string EncodeTensor(const Matrix& m) {
  return EncodeRaw({m.rows(), m.cols()}, m.data());
}

Matrix DecodeTensor(const std::string& bytes) {
  RawTensor t = DecodeRaw(bytes);
  const auto [rows, cols] = AsRowsCols(t);
  try {
    return Matrix(rows, cols, std::move(t.data));
  } catch (const ArgumentError& e) {
    throw IoError(std::string("GKT1: ") + e.what());
  }
}

std::string ReadFile(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot create " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

void write_tensor(const fs::path& path, const Matrix& m) {
  WriteFile(path, EncodeTensor(m));
}

Matrix read_tensor(const fs::path& path) { return DecodeTensor(ReadFile(path)); }

void WriteScores(const fs::path& path, const ScoreVector& s) {
  std::vector<float> narrow(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) narrow[i] = static_cast<float>(s[i]);
  WriteFile(path, EncodeRaw({1, s.size()}, narrow));
}

ScoreVector ReadScores(const fs::path& path) {
  const RawTensor t = DecodeRaw(ReadFile(path));
  const auto [rows, cols] = AsRowsCols(t);
  if (rows != 1) throw IoError("score tensor must have a single row");
  std::vector<double> wide(t.data.begin(), t.data.end());
  for (double v : wide) {
    if (std::isnan(v)) throw IoError("score tensor contains NaN");
  }
  return ScoreVector(std::move(wide));
}

WorkloadManifest ReadManifest(const fs::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw IoError("manifest " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw IoError("manifest must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "keys" && key != "values" && key != "queries" &&
        key != "labels" && key != "spec") {
      throw IoError("manifest: unknown key '" + key + "'");
    }
  }
  const fs::path base = path.parent_path();
  WorkloadManifest m;
  try {
    m.keys = Resolve(base, j.at("keys").get<std::string>());
    m.values = Resolve(base, j.at("values").get<std::string>());
    if (j.contains("queries") && !j["queries"].is_null()) {
      m.queries = Resolve(base, j["queries"].get<std::string>());
    }
    if (j.contains("labels") && !j["labels"].is_null()) {
      m.labels = j["labels"].get<std::vector<std::size_t>>();
    }
    if (j.contains("spec") && !j["spec"].is_null()) m.spec = j["spec"];
  } catch (const json::exception& e) {
    throw IoError("manifest " + path.string() + ": " + e.what());
  }
  return m;
}

void WriteManifest(const fs::path& path, const WorkloadManifest& m) {
  json j;
  j["keys"] = m.keys.generic_string();
  j["values"] = m.values.generic_string();
  j["queries"] = m.queries ? json(m.queries->generic_string()) : json(nullptr);
  j["labels"] = m.labels ? json(*m.labels) : json(nullptr);
  j["spec"] = m.spec ? *m.spec : json(nullptr);
  WriteFile(path, j.dump(2) + "\n");
}

LoadedWorkload LoadWorkload(const fs::path& manifest_path) {
  const WorkloadManifest m = ReadManifest(manifest_path);
  Matrix keys = read_tensor(m.keys);
  Matrix values = read_tensor(m.values);
  std::optional<Matrix> queries;
  if (m.queries) queries = read_tensor(*m.queries);
  if (m.labels && m.labels->size() != keys.rows()) {
    throw IoError("manifest: label count does not match key rows");
  }
  LoadedWorkload w;
  try {
    w.cache = LayerCache(std::move(keys), std::move(values), std::move(queries));
  } catch (const ArgumentError& e) {
    throw IoError(std::string("manifest tensors inconsistent: ") + e.what());
  }
  w.labels = m.labels;
  w.spec = m.spec;
  return w;
}

}  // namespace graphkv::io
