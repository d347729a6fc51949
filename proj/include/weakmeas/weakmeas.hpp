// Copyright 2026 The weakmeas developers
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

#include "weakmeas/config.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/io.hpp"
#include "weakmeas/measure.hpp"
#include "weakmeas/pointer.hpp"
#include "weakmeas/qcore.hpp"
#include "weakmeas/rng.hpp"
#include "weakmeas/scenarios.hpp"
#include "weakmeas/tsvf.hpp"
#include "weakmeas/version.hpp"
