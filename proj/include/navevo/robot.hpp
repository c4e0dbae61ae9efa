#pragma once

namespace navevo::robot {

// Foot-Bot-like body; these are declared defaults, the platform's exact
// constants are not published.
inline constexpr double kRadius = 0.085;
inline constexpr double kAxleLength = 0.14;
inline constexpr double kMaxWheelSpeed = 0.2;
inline constexpr double kTargetRadius = 0.3;

}  // namespace navevo::robot
