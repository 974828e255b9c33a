#include "qrng/stabilization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrng/rng.hpp"

namespace qrng {

void PidConfig::validate() const {
    if (!(output_lo < output_hi))
        throw std::invalid_argument("pid: output limits must satisfy lo < hi");
    if (!(loop_period > 0.0))
        throw std::invalid_argument("pid: loop period must be positive");
    if (!(setpoint > 0.0 && setpoint < 1.0))
        throw std::invalid_argument("pid: setpoint must lie in (0, 1)");
}

double PlantState::monitored_power() const {
    return (1.0 - std::cos(phi0 + actuator_phase)) / 2.0;
}

PidOutput pid_step(const PidConfig& config, const PidState& state, double measurement) {
    config.validate();
    if (!(measurement >= 0.0 && measurement <= 1.0))
        throw std::invalid_argument("pid_step: measurement must lie in [0, 1]");

    const double dt = config.loop_period;
    const double error = config.setpoint - measurement;

    PidOutput out;
    out.state = state;
    out.state.integral += error * dt;
    const double derivative =
        state.has_prev ? (error - state.prev_error) / dt : 0.0;
    double u = config.kp * error + config.ki * out.state.integral + config.kd * derivative;

    if (u > config.output_hi || u < config.output_lo) {
        if (config.anti_windup) out.state.integral -= error * dt;
        u = u > config.output_hi ? config.output_hi : config.output_lo;
    }

    out.state.prev_error = error;
    out.state.has_prev = true;
    out.command = u;
    return out;
}

LoopResult run_loop(const PidConfig& pid, PlantState plant, std::uint64_t iterations,
                    const DisturbanceSchedule& disturbances, std::uint64_t rng_seed) {
    pid.validate();
    Rng rng(derive_seed(rng_seed, 0x1005));
    const double drift_step_std = plant.drift_rate_std * std::sqrt(pid.loop_period);

    LoopResult result;
    result.trace.reserve(iterations);
    PidState state;
    double sum_sq = 0.0;

    for (std::uint64_t step = 0; step < iterations; ++step) {
        if (auto it = disturbances.find(step); it != disturbances.end())
            plant.phi0 += it->second;
        if (drift_step_std > 0.0) plant.phi0 += drift_step_std * rng.normal();

        const double measurement = plant.monitored_power();
        const PidOutput out = pid_step(pid, state, measurement);
        state = out.state;
        plant.actuator_phase = out.command;

        // Distance from the quadrature point, wrapped to (-pi, pi].
        double err = plant.phi0 + plant.actuator_phase - std::numbers::pi / 2.0;
        err = std::remainder(err, 2.0 * std::numbers::pi);

        result.trace.push_back({step, measurement, out.command, err});
        sum_sq += err * err;
    }

    if (iterations > 0) {
        result.rms_phase_error = std::sqrt(sum_sq / static_cast<double>(iterations));
        result.final_phase_error = result.trace.back().phase_error;
    }
    return result;
}

}  // namespace qrng
