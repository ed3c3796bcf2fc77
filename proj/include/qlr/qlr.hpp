// Copyright 2026 The qlr Authors
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

#pragma once

#include "qlr/benchmark.hpp"
#include "qlr/channels.hpp"
#include "qlr/generator.hpp"
#include "qlr/io.hpp"
#include "qlr/metrics.hpp"
#include "qlr/params.hpp"
#include "qlr/pauli.hpp"
#include "qlr/propagate.hpp"
#include "qlr/reconstruct.hpp"
#include "qlr/svg.hpp"
#include "qlr/synthetic.hpp"
#include "qlr/version.hpp"
