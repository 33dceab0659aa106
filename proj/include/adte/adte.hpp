/*
 * Copyright 2026 The ADTE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "adte/bias.hpp"
#include "adte/config.hpp"
#include "adte/entropy.hpp"
#include "adte/error.hpp"
#include "adte/io.hpp"
#include "adte/metrics.hpp"
#include "adte/pipeline.hpp"
#include "adte/record.hpp"
#include "adte/selection.hpp"
#include "adte/studies.hpp"
#include "adte/synth.hpp"
