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
#include "cps/tracking/ukf.hpp"

#include <algorithm>
#include <cmath>

#include "cps/common/error.hpp"

namespace cps::tracking {

namespace {

constexpr double kMinDesiredSpeed = 0.5;
constexpr double kMinTimeGap = 0.1;
constexpr double kMinGap = 0.1;
constexpr double kJitter = 1e-9;

void symmetrize(StateMatrix& m) { m = 0.5 * (m + m.transpose()).eval(); }

void project(StateVector& x) {
  x[kSpeed] = std::max(0.0, x[kSpeed]);
  x[kDesiredSpeed] = std::max(kMinDesiredSpeed, x[kDesiredSpeed]);
  x[kTimeGap] = std::max(kMinTimeGap, x[kTimeGap]);
}

}  // namespace

void UkfParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("ukf.alpha", "must be in (0, 1]");
  if (pos_noise < 0 || accel_noise < 0 || gap_noise < 0 || v0_walk < 0 || time_gap_walk < 0) {
    throw ConfigError("ukf", "noise levels must be >= 0");
  }
  if (!(meas_sigma > 0.0)) throw ConfigError("ukf.meas_sigma", "must be > 0");
  if (!(outlier_sigma > 0.0)) throw ConfigError("ukf.outlier_sigma", "must be > 0");
}

StateMatrix psd_sqrt(const StateMatrix& cov) {
  Eigen::LDLT<StateMatrix> ldlt(cov);
  StateMatrix l = ldlt.matrixL();
  const StateVector d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  StateMatrix m = l * d.asDiagonal();
  return ldlt.transpositionsP().transpose() * m;
}

SigmaPoints sigma_points(const StateVector& mean, const StateMatrix& cov, const UkfParams& p) {
  const double n = kStateDim;
  const double lambda = p.alpha * p.alpha * (n + p.kappa) - n;
  const StateMatrix s = psd_sqrt((n + lambda) * cov);
  SigmaPoints sp;
  sp.points.col(0) = mean;
  for (int i = 0; i < kStateDim; ++i) {
    sp.points.col(1 + i) = mean + s.col(i);
    sp.points.col(1 + kStateDim + i) = mean - s.col(i);
  }
  sp.wm.setConstant(1.0 / (2.0 * (n + lambda)));
  sp.wc = sp.wm;
  sp.wm[0] = lambda / (n + lambda);
  sp.wc[0] = sp.wm[0] + (1.0 - p.alpha * p.alpha + p.beta);
  return sp;
}

StateVector process_model(const StateVector& x, double dt, const mobility::IdmParams& base,
                          const LeadInfo& lead) {
  mobility::IdmParams idm = base;
  idm.v0 = std::max(kMinDesiredSpeed, x[kDesiredSpeed]);
  idm.T_gap = std::max(kMinTimeGap, x[kTimeGap]);
  const double v = std::max(0.0, x[kSpeed]);
  double a = 0.0;
  if (lead.present) {
    a = mobility::idm_accel_acc(std::max(kMinGap, x[kGap]), v, lead.v_lead, lead.a_lead, idm);
  } else {
    a = mobility::idm_accel_free(v, idm);
  }
  StateVector out = x;
  const double v_next = std::max(0.0, v + a * dt);
  out[kSpeed] = v_next;
  out[kPos] = x[kPos] + v_next * dt;
  if (lead.present) out[kGap] = x[kGap] + (lead.v_lead - v_next) * dt;
  return out;
}

StateMatrix process_noise(double dt, const UkfParams& p) {
  StateVector q;
  q << p.pos_noise * p.pos_noise, p.accel_noise * p.accel_noise, p.gap_noise * p.gap_noise,
      p.v0_walk * p.v0_walk, p.time_gap_walk * p.time_gap_walk;
  return (q * dt).asDiagonal();
}

TrackState ukf_predict(const TrackState& track, double dt, const UkfParams& p,
                       const LeadInfo& lead) {
  if (!(dt > 0.0)) throw DomainError("prediction step must be positive");
  const SigmaPoints sp = sigma_points(track.mean, track.cov, p);
  Eigen::Matrix<double, kStateDim, 2 * kStateDim + 1> y;
  for (int i = 0; i < y.cols(); ++i) y.col(i) = process_model(sp.points.col(i), dt, track.idm, lead);
  StateVector mean = y * sp.wm;
  StateMatrix cov = process_noise(dt, p);
  for (int i = 0; i < y.cols(); ++i) {
    const StateVector d = y.col(i) - mean;
    cov += sp.wc[i] * d * d.transpose();
  }
  symmetrize(cov);
  project(mean);
  TrackState out = track;
  out.mean = mean;
  out.cov = cov;
  if ((out.cov.diagonal().array() < 0.0).any()) out.cov += kJitter * StateMatrix::Identity();
  return out;
}

TrackState make_track(double measured_pos, double speed_guess, double gap_guess,
                      const mobility::IdmParams& idm, SegmentId segment, int lane, Slot now,
                      const UkfParams& p) {
  TrackState t;
  t.idm = idm;
  t.segment = segment;
  t.lane = lane;
  t.last_update = now;
  t.mean << measured_pos, speed_guess, gap_guess, idm.v0, idm.T_gap;
  StateVector var;
  var << p.meas_sigma * p.meas_sigma, p.prior_speed_sigma * p.prior_speed_sigma,
      p.prior_gap_sigma * p.prior_gap_sigma, p.prior_v0_sigma * p.prior_v0_sigma,
      p.prior_time_gap_sigma * p.prior_time_gap_sigma;
  t.cov = var.asDiagonal();
  project(t.mean);
  return t;
}

void reset_gap(TrackState& track, double gap, double variance) {
  track.mean[kGap] = gap;
  track.cov.row(kGap).setZero();
  track.cov.col(kGap).setZero();
  track.cov(kGap, kGap) = variance;
}

TrackState reset_to_measurement(const TrackState& track, double measured_pos, SegmentId segment,
                                int lane, Slot now, const UkfParams& p) {
  TrackState t = make_track(measured_pos, track.mean[kSpeed], track.mean[kGap], track.idm,
                            segment, lane, now, p);
  t.mean[kDesiredSpeed] = track.mean[kDesiredSpeed];
  t.mean[kTimeGap] = track.mean[kTimeGap];
  return t;
}

UpdateResult ukf_update(const TrackState& track, double measured_pos, const UkfParams& p,
                        std::optional<double> measured_gap) {
  if (!std::isfinite(measured_pos)) throw DomainError("measurement must be finite");
  const int m = measured_gap ? 2 : 1;
  const SigmaPoints sp = sigma_points(track.mean, track.cov, p);
  Eigen::MatrixXd z(m, sp.points.cols());
  z.row(0) = sp.points.row(kPos);
  if (m == 2) z.row(1) = sp.points.row(kGap);
  const Eigen::VectorXd z_mean = z * sp.wm;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd pxz = Eigen::MatrixXd::Zero(kStateDim, m);
  for (int i = 0; i < z.cols(); ++i) {
    const Eigen::VectorXd dz = z.col(i) - z_mean;
    const StateVector dx = sp.points.col(i) - track.mean;
    s += sp.wc[i] * dz * dz.transpose();
    pxz += sp.wc[i] * dx * dz.transpose();
  }
  const double r = p.meas_sigma * p.meas_sigma;
  s(0, 0) += r;
  if (m == 2) s(1, 1) += 2.0 * r;

  Eigen::VectorXd obs(m);
  obs[0] = measured_pos;
  if (m == 2) obs[1] = *measured_gap;
  const Eigen::VectorXd innov = obs - z_mean;

  UpdateResult out{track, true, false};
  if (std::abs(innov[0]) > p.outlier_sigma * std::sqrt(s(0, 0))) {
    out.accepted = false;
    out.track.consecutive_rejections++;
    if (out.track.consecutive_rejections >= p.max_rejections) {
      out.track = reset_to_measurement(track, measured_pos, track.segment, track.lane,
                                       track.last_update, p);
      out.reset = true;
    }
    return out;
  }
  const Eigen::MatrixXd gain = pxz * s.inverse();
  out.track.mean = track.mean + gain * innov;
  out.track.cov = track.cov - gain * s * gain.transpose();
  symmetrize(out.track.cov);
  project(out.track.mean);
  out.track.consecutive_rejections = 0;
  if ((out.track.cov.diagonal().array() < 0.0).any()) {
    out.track.cov += kJitter * StateMatrix::Identity();
  }
  return out;
}

bool is_symmetric_psd(const StateMatrix& m, double tol) {
  if (!(m - m.transpose()).isZero(tol)) return false;
  Eigen::SelfAdjointEigenSolver<StateMatrix> es(m);
  const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

void ConstantVelocityExtrapolator::observe(double t, double pos) {
  if (count_ > 0 && t > t_last_) speed_ = (pos - pos_last_) / (t - t_last_);
  t_last_ = t;
  pos_last_ = pos;
  ++count_;
}

double ConstantVelocityExtrapolator::predict(double t) const {
  return pos_last_ + speed_ * (t - t_last_);
}

}  // namespace cps::tracking
