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

#include <span>
#include <vector>

#include "cps/broadcast/sender_er.hpp"

namespace cps::broadcast {

/// Greedy cover: repeatedly takes the set with the most uncovered elements,
/// ties by lowest index. Returns indices in selection order. Sets must be
/// sorted.
std::vector<std::size_t> greedy_set_cover(std::span<const std::vector<VehicleId>> sets);

/// Receivers whose ERs the sender advertises; their union is the sender ER.
std::vector<VehicleId> select_signaling_cover(const SenderER& er);

}  // namespace cps::broadcast
