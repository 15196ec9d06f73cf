// Copyright 2026 The abcpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABCPT_ABCPT_HPP
#define ABCPT_ABCPT_HPP

#include "abcpt/config.hpp"
#include "abcpt/diagnostics.hpp"
#include "abcpt/error.hpp"
#include "abcpt/model.hpp"
#include "abcpt/parallel_tempering.hpp"
#include "abcpt/rings.hpp"
#include "abcpt/rng.hpp"
#include "abcpt/samplers.hpp"
#include "abcpt/schedule.hpp"
#include "abcpt/tb_model.hpp"
#include "abcpt/toy_model.hpp"
#include "abcpt/trace.hpp"

#endif  // ABCPT_ABCPT_HPP
