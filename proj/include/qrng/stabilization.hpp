#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace qrng {

// Gains act on the normalized monitored power error; the command is the
// actuator phase in rad. Defaults are artifact constants tuned once against
// the normalized plant, not values from any datasheet.
struct PidConfig {
    double kp = 0.8;
    double ki = 150.0;  // 1/s
    double kd = 0.0;    // s
    double setpoint = 0.5;  // quadrature: half of max monitored power
    double output_lo = -3.0;
    double output_hi = 3.0;
    double loop_period = 1e-3;  // s
    bool anti_windup = true;

    void validate() const;
};

// Interferometer seen from the monitor port: power = (1 - cos(phi)) / 2
// with phi = phi0 + actuator_phase.
struct PlantState {
    double phi0 = 1.5707963267948966;  // rad, starts at quadrature
    double drift_rate_std = 0.0;       // rad/sqrt(s) random-walk drift
    double actuator_phase = 0.0;

    double monitored_power() const;
};

struct PidState {
    double integral = 0.0;
    double prev_error = 0.0;
    bool has_prev = false;
};

struct PidOutput {
    double command = 0.0;  // actuator phase command, clamped to limits
    PidState state;
};

// One discrete positional PID update on error = setpoint - measurement.
// With anti-windup the integral does not accumulate while the output is
// saturated. Throws std::invalid_argument when measurement is outside [0,1].
PidOutput pid_step(const PidConfig& config, const PidState& state, double measurement);

struct LoopTracePoint {
    std::uint64_t step = 0;
    double measurement = 0.0;
    double command = 0.0;
    double phase_error = 0.0;  // operating-point distance from quadrature, rad
};

// step -> additive phi0 disturbance applied before that iteration.
using DisturbanceSchedule = std::map<std::uint64_t, double>;

struct LoopResult {
    std::vector<LoopTracePoint> trace;
    double rms_phase_error = 0.0;
    double final_phase_error = 0.0;
};

// Runs the closed loop for `iterations` steps. The drift walk is
// deterministic given rng_seed.
LoopResult run_loop(const PidConfig& pid, PlantState plant, std::uint64_t iterations,
                    const DisturbanceSchedule& disturbances = {}, std::uint64_t rng_seed = 1);

}  // namespace qrng
