// Copyright 2026 The Obsaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "obsaudit/dataset_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "absl/strings/str_cat.h"

namespace obsaudit {
namespace {

constexpr char kMagic[] = "obsaudit-dataset 1";

void AppendDouble(std::string& out, double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  out.append(buffer, end);
}

template <typename T>
bool ParseField(std::string_view field, T& value) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

absl::Status WriteDataset(const LabeledDataset& data, const std::string& path) {
  if (absl::Status status = data.Validate(); !status.ok()) return status;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("WriteDataset: cannot open ", path, " for writing"));
  }
  std::string buffer;
  absl::StrAppend(&buffer, kMagic, "\n", "n ", data.n, " k ", data.k, " d ",
                  data.d, "\n");
  for (int j = 0; j < data.d; ++j) absl::StrAppend(&buffer, "x", j, ",");
  buffer += "y\n";
  for (int64_t i = 0; i < data.n; ++i) {
    for (double v : data.row(i)) {
      AppendDouble(buffer, v);
      buffer += ',';
    }
    absl::StrAppend(&buffer, data.y0[i], "\n");
    if (buffer.size() > (1 << 20)) {
      out << buffer;
      buffer.clear();
    }
  }
  out << buffer;
  out.flush();
  if (!out) {
    return absl::DataLossError(absl::StrCat("WriteDataset: write to ", path,
                                            " failed"));
  }
  return absl::OkStatus();
}

absl::StatusOr<LabeledDataset> ReadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("ReadDataset: cannot open ", path));
  }
  auto error = [&path](int64_t line, absl::string_view what) {
    return absl::InvalidArgumentError(
        absl::StrCat("ReadDataset: ", path, ":", line, ": ", what));
  };

  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    return error(1, "missing 'obsaudit-dataset 1' header");
  }
  LabeledDataset data;
  {
    if (!std::getline(in, line)) return error(2, "missing shape line");
    std::istringstream shape(line);
    std::string n_key, k_key, d_key;
    if (!(shape >> n_key >> data.n >> k_key >> data.k >> d_key >> data.d) ||
        n_key != "n" || k_key != "k" || d_key != "d") {
      return error(2, "expected 'n <n> k <k> d <d>'");
    }
    if (data.n < 0 || data.k < 2 || data.d < 1) {
      return error(2, "invalid shape values");
    }
  }
  if (!std::getline(in, line)) return error(3, "missing column header");

  data.x.reserve(static_cast<size_t>(data.n) * data.d);
  data.y0.reserve(data.n);
  for (int64_t i = 0; i < data.n; ++i) {
    const int64_t line_no = i + 4;
    if (!std::getline(in, line)) return error(line_no, "unexpected end of file");
    std::string_view rest(line);
    for (int j = 0; j <= data.d; ++j) {
      const size_t comma = rest.find(',');
      const bool last = j == data.d;
      if (last != (comma == std::string_view::npos)) {
        return error(line_no, absl::StrCat("expected ", data.d + 1, " fields"));
      }
      const std::string_view field = last ? rest : rest.substr(0, comma);
      if (last) {
        int label;
        if (!ParseField(field, label)) return error(line_no, "bad label");
        data.y0.push_back(label);
      } else {
        double value;
        if (!ParseField(field, value)) return error(line_no, "bad feature");
        data.x.push_back(value);
        rest.remove_prefix(comma + 1);
      }
    }
  }
  if (absl::Status status = data.Validate(); !status.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("ReadDataset: ", path, ": ", status.message()));
  }
  return data;
}

}  // namespace obsaudit
