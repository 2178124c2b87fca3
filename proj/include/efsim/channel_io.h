// Copyright 2026 The efsim Authors
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

#ifndef EFSIM_CHANNEL_IO_H
#define EFSIM_CHANNEL_IO_H

#include <yaml-cpp/yaml.h>

#include "efsim/channels.h"

namespace efsim {

/// Matrix as a list of rows, each a list of [re, im] pairs.
YAML::Node matrix_to_yaml(const Matrix &m);
Matrix matrix_from_yaml(const YAML::Node &node);

YAML::Node channel_to_yaml(const KrausChannel &channel);
/// Accepts `{kind: ..., p: ..., [weights, unitaries, ideal]}` or
/// `{operators: [...], [dominant_index]}`. Throws std::invalid_argument.
KrausChannel channel_from_yaml(const YAML::Node &node);

}  // namespace efsim

#endif
