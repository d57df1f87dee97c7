/*
 * Copyright 2026 The CPS V2V Simulator Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "cps/engine/config.hpp"
#include "cps/engine/metrics.hpp"

namespace cps::engine {

/// Runs one scenario to completion and returns its metrics with the
/// summary filled in. Deterministic in (config, seed). Throws ConfigError
/// for invalid configurations.
MetricsRecord run(const ScenarioConfig& config);

}  // namespace cps::engine
