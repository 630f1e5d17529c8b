// Copyright 2026 The biphoton-cavity Authors
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

#include "biphoton/cavity.hpp"
#include "biphoton/config.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/grid.hpp"
#include "biphoton/io.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/state.hpp"
#include "biphoton/sweep.hpp"
#include "biphoton/transfer_curve.hpp"
#include "biphoton/units.hpp"
