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
#include "cps/mobility/idm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cps/common/error.hpp"

namespace cps::mobility {

void IdmParams::validate() const {
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("idm.") + name, "must be > 0");
  };
  positive("v0", v0);
  positive("T_gap", T_gap);
  positive("s0", s0);
  positive("delta", delta);
  positive("a_max", a_max);
  positive("b_comf", b_comf);
  if (!(c_acc >= 0.0 && c_acc <= 1.0)) throw ConfigError("idm.c_acc", "must be in [0, 1]");
}

double idm_desired_gap(double v, double v_lead, const IdmParams& p) {
  const double dynamic = v * p.T_gap + v * (v - v_lead) / (2.0 * std::sqrt(p.a_max * p.b_comf));
  return p.s0 + std::max(0.0, dynamic);
}

double idm_accel_free(double v, const IdmParams& p) {
  const double ratio = v / p.v0;
  if (v <= p.v0) return p.a_max * (1.0 - std::pow(ratio, p.delta));
  return -p.b_comf * (1.0 - std::pow(ratio, p.a_max * p.delta / p.b_comf));
}

namespace {
void require_gap(double gap) {
  if (!(gap > 0.0)) throw CollisionError("nonpositive gap " + std::to_string(gap));
}
}  // namespace

double idm_accel_iidm(double gap, double v, double v_lead, const IdmParams& p) {
  require_gap(gap);
  const double z = idm_desired_gap(v, v_lead, p) / gap;
  const double a_free = idm_accel_free(v, p);
  if (v <= p.v0) {
    if (z >= 1.0) return p.a_max * (1.0 - z * z);
    // At v == v0 a_free is 0 and the exponent diverges; the product is 0.
    if (a_free <= 0.0) return 0.0;
    return a_free * (1.0 - std::pow(z, 2.0 * p.a_max / a_free));
  }
  if (z >= 1.0) return a_free + p.a_max * (1.0 - z * z);
  return a_free;
}

double idm_accel_cah(double gap, double v, double v_lead, double a_lead, const IdmParams& p) {
  require_gap(gap);
  const double a_eff = std::min(a_lead, p.a_max);
  const double denom = v_lead * v_lead - 2.0 * gap * a_eff;
  // A zero denominator (stopped lead with zero acceleration) falls through to
  // the kinematic branch, which is the limit of the first one.
  if (v_lead * (v - v_lead) <= -2.0 * gap * a_eff && denom > 0.0) {
    return v * v * a_eff / denom;
  }
  const double dv = v - v_lead;
  return a_eff - (dv >= 0.0 ? dv * dv : 0.0) / (2.0 * gap);
}

double idm_accel_acc(double gap, double v, double v_lead, double a_lead, const IdmParams& p) {
  const double iidm = idm_accel_iidm(gap, v, v_lead, p);
  const double cah = idm_accel_cah(gap, v, v_lead, a_lead, p);
  if (iidm >= cah) return iidm;
  return (1.0 - p.c_acc) * iidm + p.c_acc * (cah + p.b_comf * std::tanh((iidm - cah) / p.b_comf));
}

}  // namespace cps::mobility
