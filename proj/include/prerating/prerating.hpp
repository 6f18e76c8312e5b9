// Copyright 2026 The prerating Authors
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

#pragma once

#include "prerating/equilibrium.hpp"
#include "prerating/fixture.hpp"
#include "prerating/generators.hpp"
#include "prerating/io.hpp"
#include "prerating/rating_core.hpp"
#include "prerating/score.hpp"
#include "prerating/tournament.hpp"
#include "prerating/version.hpp"
