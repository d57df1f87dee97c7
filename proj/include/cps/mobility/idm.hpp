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

namespace cps::mobility {

/// Parameters of the ACC-enhanced intelligent driver model.
struct IdmParams {
  double v0 = 30.0;      // desired speed, m/s
  double T_gap = 1.0;    // desired time gap, s
  double s0 = 2.0;       // minimum standstill gap, m
  double delta = 4.0;    // acceleration exponent
  double a_max = 1.0;    // maximum acceleration, m/s^2
  double b_comf = 1.5;   // comfortable deceleration, m/s^2
  double c_acc = 0.99;   // ACC blend coefficient in [0, 1]

  /// Throws ConfigError unless every parameter is positive and c_acc in [0,1].
  void validate() const;
};

/// Desired dynamic gap s*(v, v - v_l).
double idm_desired_gap(double v, double v_lead, const IdmParams& p);

/// Free-road acceleration. Below v0 the vehicle accelerates toward v0;
/// above it decelerates with at most b_comf.
double idm_accel_free(double v, const IdmParams& p);

/// Improved IDM acceleration (four branches on v <> v0 and z <> 1 where
/// z = s*/s). Throws CollisionError when gap <= 0.
double idm_accel_iidm(double gap, double v, double v_lead, const IdmParams& p);

/// Constant-acceleration heuristic with the lead's effective acceleration
/// min(a_lead, a_max). Throws CollisionError when gap <= 0.
double idm_accel_cah(double gap, double v, double v_lead, double a_lead, const IdmParams& p);

/// ACC model: IIDM unless the CAH acceleration is higher, in which case the
/// two are blended with coefficient c_acc.
double idm_accel_acc(double gap, double v, double v_lead, double a_lead, const IdmParams& p);

}  // namespace cps::mobility
