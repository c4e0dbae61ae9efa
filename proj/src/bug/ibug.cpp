#include <algorithm>
#include <cmath>

#include "navevo/bug.hpp"

namespace navevo::bug {

namespace {

// Algorithm 1 compares intensities for equality; "equal" here means within a
// relative 1e-9.
bool same_intensity(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

}  // namespace

IbugController::IbugController(SensorConfig sensors, double control_dt, PrimitiveParams params)
    : sensors_(std::move(sensors)),
      dt_(control_dt),
      params_(params),
      orient_(params),
      forward_(sensors_, params),
      follow_(sensors_, params) {}

void IbugController::reset() {
  state_ = IbugState{};
  time_ = 0.0;
  started_ = false;
  trace_.clear();
  forward_ = Forward(sensors_, params_);
  follow_ = Follow(sensors_, params_);
}

void IbugController::begin_iteration(const Observation& obs) {
  state_.i_leave = intensity(obs.target_range);
  state_.phase = Phase::orienting;
  orient_.start(obs);
}

void IbugController::after_forward(const Observation& obs) {
  const double h = intensity(obs.target_range);
  ForwardRecord rec;
  rec.time = time_;
  rec.i_leave = state_.i_leave;
  rec.intensity_after = h;
  rec.reason = forward_.reason();
  rec.moved = !same_intensity(state_.i_leave, h);
  if (rec.moved) state_.i_hit = h;
  rec.i_hit_after = state_.i_hit;
  trace_.push_back(rec);
  state_.phase = Phase::following;
  follow_.start(obs);
}

WheelSpeeds IbugController::act(const Observation& obs) {
  const double h = intensity(obs.target_range);
  if (!started_) {
    started_ = true;
    begin_iteration(obs);
    state_.i_hit = state_.i_leave;
  }
  std::optional<WheelSpeeds> cmd;
  // A primitive that ends this tick hands over to the next one immediately.
  // Following never ends on its first tick, so this settles quickly.
  for (int transitions = 0; !cmd && transitions < 8; ++transitions) {
    switch (state_.phase) {
      case Phase::orienting:
        cmd = orient_.step(obs, dt_);
        if (!cmd) {
          state_.phase = Phase::forwarding;
          forward_.start(obs);
        }
        break;
      case Phase::forwarding:
        cmd = forward_.step(obs);
        if (!cmd) {
          if (forward_.reason() == ForwardStop::target) {
            cmd = WheelSpeeds{};
            break;
          }
          after_forward(obs);
        }
        break;
      case Phase::following:
        cmd = follow_.step(obs, dt_);
        if (!cmd) {
          if (h <= state_.i_hit) {
            follow_.start(obs);
          } else {
            begin_iteration(obs);
          }
        }
        break;
    }
  }
  if (!cmd) cmd = follow_.command(obs, dt_);
  state_.last_intensity = h;
  time_ += dt_;
  return *cmd;
}

EpisodeResult run_ibug(const World& world, const EpisodeLimits& limits, const EpisodeOptions& options) {
  IbugController controller(SensorConfig::ibug24(), limits.control_dt);
  return run_episode(controller, world, limits, SensorConfig::ibug24(), InputMask::full, options);
}

}  // namespace navevo::bug
