// SPDX-License-Identifier: Apache-2.0
//
// qlos - quasi line-of-sight THz channel and beam training simulator
// Copyright (C) 2026 The qlos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef QLOS_HPP
#define QLOS_HPP

#include "types.hpp"
#include "scenario.hpp"
#include "numerics.hpp"
#include "channel.hpp"
#include "beam.hpp"
#include "codebook.hpp"
#include "search.hpp"
#include "eval.hpp"
#include "config.hpp"
#include "io.hpp"

#endif
