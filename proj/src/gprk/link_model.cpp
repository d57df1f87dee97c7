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
#include "cps/gprk/link_model.hpp"

#include <algorithm>
#include <cmath>

#include "cps/common/error.hpp"

namespace cps::gprk {

LinkModel update_ewma(LinkModel link, double measured_Y) {
  if (!(measured_Y >= 0.0 && measured_Y <= 1.0)) {
    throw DomainError("reliability sample outside [0, 1]");
  }
  if (link.samples == 0) {
    link.y_prev = measured_Y;
    link.y_ewma = measured_Y;
  } else {
    link.y_prev = link.y_ewma;
    link.y_ewma = link.c_ewma * link.y_prev + (1.0 - link.c_ewma) * measured_Y;
  }
  link.last_Y = measured_Y;
  ++link.samples;
  link.consecutive_at_target = measured_Y >= link.t_rel ? link.consecutive_at_target + 1 : 0;
  link.converged = link.consecutive_at_target >= 2;
  return link;
}

namespace {

double tangent_slope(const InverseRadioModel& inverse, double t) {
  const double h = std::min({1e-5, 0.5 * t, 0.5 * (1.0 - t)});
  const double d = (inverse(t + h) - inverse(t - h)) / (2.0 * h);
  return 1.0 / d;
}

}  // namespace

InterferenceBudget compute_delta_I(const LinkModel& link, const InverseRadioModel& inverse,
                                   double mu_U) {
  const double t = link.t_rel;
  if (!(t > 0.0 && t < 1.0)) throw DomainError("reliability target outside (0, 1)");
  if (!(link.c_ewma >= 0.0 && link.c_ewma < 1.0)) throw DomainError("c outside [0, 1)");
  const double y_meas = std::clamp(link.last_Y, kReliabilityClamp, 1.0 - kReliabilityClamp);

  double a = 0.0;
  if (std::abs(t - y_meas) < kSingularityTolerance) {
    a = tangent_slope(inverse, t);
  } else {
    a = (t - y_meas) / (inverse(t) - inverse(y_meas));
  }
  if (!std::isfinite(a) || a <= 0.0) throw DomainError("inverse radio model is not increasing");

  const double c = link.c_ewma;
  InterferenceBudget out;
  out.a_t = a;
  out.mu_U = mu_U;
  out.delta_I = ((1.0 + c) * link.y_ewma - c * link.y_prev - t) / ((1.0 - c) * a) - mu_U;
  return out;
}

void MuUEstimator::observe(double mean_out_of_er_interference_mw) {
  if (has_last_) {
    const double change = mean_out_of_er_interference_mw - last_;
    value_ = (1.0 - weight_) * value_ + weight_ * change;
  }
  last_ = mean_out_of_er_interference_mw;
  has_last_ = true;
}

}  // namespace cps::gprk
