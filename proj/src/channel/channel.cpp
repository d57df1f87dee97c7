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
#include "cps/channel/channel.hpp"

#include <algorithm>
#include <cmath>

#include "cps/common/error.hpp"
#include "cps/common/rng.hpp"

namespace cps::channel {

namespace {
constexpr std::uint64_t kShadowStream = 0x5badULL;
constexpr std::uint64_t kFadingStream = 0xfadeULL;
}  // namespace

void ChannelParams::validate() const {
  if (!(exponent > 0.0)) throw ConfigError("channel.exponent", "must be > 0");
  if (!(shadowing_sigma_db >= 0.0)) throw ConfigError("channel.shadowing_sigma_db", "must be >= 0");
  if (coherence_slots < 1) throw ConfigError("channel.coherence_slots", "must be >= 1");
  if (!(d_ref > 0.0)) throw ConfigError("channel.d_ref", "must be > 0");
  if (fading == FadingKind::Nakagami && !(nakagami_m >= 0.5)) {
    throw ConfigError("channel.nakagami_m", "must be >= 0.5");
  }
}

double ChannelParams::noise_mw() const { return dbm_to_mw(noise_dbm); }

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double mean_received_power_mw(const ChannelParams& p, double d) {
  d = std::max(d, p.d_ref);
  const double dbm = p.tx_power_dbm - p.path_loss_ref_db - 10.0 * p.exponent * std::log10(d / p.d_ref);
  return dbm_to_mw(dbm);
}

double shadowing_db(const ChannelParams& p, VehicleId a, VehicleId b, Slot slot, std::uint64_t seed) {
  if (p.shadowing_sigma_db <= 0.0) return 0.0;
  const auto epoch = static_cast<std::uint64_t>(slot / p.coherence_slots);
  StreamRng rng = keyed_rng(seed, kShadowStream, std::min(a, b), std::max(a, b), epoch);
  return p.shadowing_sigma_db * rng.normal();
}

double fading_gain(const ChannelParams& p, VehicleId tx, VehicleId rx, Slot slot, std::uint64_t seed) {
  switch (p.fading) {
    case FadingKind::None:
      return 1.0;
    case FadingKind::Rayleigh: {
      StreamRng rng = keyed_rng(seed, kFadingStream, tx, rx, static_cast<std::uint64_t>(slot));
      return rng.exponential(1.0);
    }
    case FadingKind::Nakagami: {
      StreamRng rng = keyed_rng(seed, kFadingStream, tx, rx, static_cast<std::uint64_t>(slot));
      return rng.gamma(p.nakagami_m) / p.nakagami_m;
    }
  }
  return 1.0;
}

double average_received_power_mw(const ChannelParams& p, VehicleId tx, Vec2 tx_pos, VehicleId rx,
                                 Vec2 rx_pos, Slot slot, std::uint64_t seed) {
  const double base = mean_received_power_mw(p, distance(tx_pos, rx_pos));
  const double shadow = shadowing_db(p, tx, rx, slot, seed);
  return shadow == 0.0 ? base : base * std::pow(10.0, shadow / 10.0);
}

double received_power_mw(const ChannelParams& p, VehicleId tx, Vec2 tx_pos, VehicleId rx,
                         Vec2 rx_pos, Slot slot, std::uint64_t seed) {
  return average_received_power_mw(p, tx, tx_pos, rx, rx_pos, slot, seed) *
         fading_gain(p, tx, rx, slot, seed);
}

double slot_sinr(double signal_mw, std::span<const double> interferers_mw, double noise_mw) {
  double denom = noise_mw;
  for (double i : interferers_mw) denom += i;
  return signal_mw / denom;
}

}  // namespace cps::channel
