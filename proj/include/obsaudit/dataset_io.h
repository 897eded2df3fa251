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

#ifndef OBSAUDIT_DATASET_IO_H_
#define OBSAUDIT_DATASET_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obsaudit/gaussian_mixture.h"

namespace obsaudit {

// Delimited-text dataset file:
//
//   obsaudit-dataset 1
//   n <n> k <k> d <d>
//   x0,x1,...,x<d-1>,y
//   <d comma-separated features>,<label>     (n rows)
//
// Features are written in shortest round-trip form, so a write/read cycle
// reproduces the dataset bit for bit.
absl::Status WriteDataset(const LabeledDataset& data, const std::string& path);
absl::StatusOr<LabeledDataset> ReadDataset(const std::string& path);

}  // namespace obsaudit

#endif  // OBSAUDIT_DATASET_IO_H_
