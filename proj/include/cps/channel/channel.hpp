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

#include <cstdint>
#include <span>

#include "cps/common/geometry.hpp"
#include "cps/common/ids.hpp"

namespace cps::channel {

enum class FadingKind { None, Rayleigh, Nakagami };

/// Log-distance path loss with lognormal shadowing and optional fast fading.
/// Shadowing is frozen per (unordered pair, coherence epoch); fast fading is
/// redrawn every slot and normalized to unit mean power.
struct ChannelParams {
  double tx_power_dbm = 26.0;
  double d_ref = 1.0;                 // m
  double path_loss_ref_db = 47.86;    // free space at 5.9 GHz and 1 m
  double exponent = 3.0;
  double shadowing_sigma_db = 0.0;
  FadingKind fading = FadingKind::None;
  double nakagami_m = 3.0;
  double noise_dbm = -99.0;
  std::int64_t coherence_slots = 400;

  void validate() const;
  double noise_mw() const;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Deterministic path-loss-only received power at distance `d`.
/// Distances below d_ref are clamped to d_ref.
double mean_received_power_mw(const ChannelParams& p, double d);

/// Path loss plus the frozen shadowing term of the current coherence epoch,
/// without fast fading: the "average" signal power of the pair.
double average_received_power_mw(const ChannelParams& p, VehicleId tx, Vec2 tx_pos, VehicleId rx,
                                 Vec2 rx_pos, Slot slot, std::uint64_t seed);

/// Shadowing term in dB for the unordered pair at `slot`'s coherence epoch.
double shadowing_db(const ChannelParams& p, VehicleId a, VehicleId b, Slot slot, std::uint64_t seed);

/// Unit-mean fast-fading power gain for the directed pair at `slot`.
double fading_gain(const ChannelParams& p, VehicleId tx, VehicleId rx, Slot slot, std::uint64_t seed);

/// Instantaneous received power: tx power - PL(d_ref) - 10 n log10(d/d_ref)
/// + shadowing + fading. Deterministic per (pair, slot, seed).
double received_power_mw(const ChannelParams& p, VehicleId tx, Vec2 tx_pos, VehicleId rx,
                         Vec2 rx_pos, Slot slot, std::uint64_t seed);

/// signal / (noise + sum of interferers), all in mW.
double slot_sinr(double signal_mw, std::span<const double> interferers_mw, double noise_mw);

}  // namespace cps::channel
