#ifndef DVFSIM_TASK_MODEL_HPP
#define DVFSIM_TASK_MODEL_HPP

#include <dvfsim/scaling_domain.hpp>

#include <string>

namespace dvfsim {

/// Calibrated power/performance parameters of one task.
///
/// Runtime power at a setting (v, fc, fm) is
///     base_power + mem_power_coeff * fm + core_power_coeff * v^2 * fc
/// and execution time is
///     scaled_work * (core_weight / fc + (1 - core_weight) / fm) + fixed_time.
///
/// Power is in abstract power units (calibrate to Watts externally), time in
/// slots, energy in power units x slots.
struct TaskProfile {
    std::string id;
    double base_power = 0.0;      ///< scaling-independent power, CPU share included
    double mem_power_coeff = 0.0; ///< power per unit memory frequency
    double core_power_coeff = 0.0;///< power per (voltage^2 x core frequency)
    double scaled_work = 0.0;     ///< frequency-sensitive work, in time units
    double core_weight = 0.0;     ///< share of scaled work bound to the core clock, in [0,1]
    double fixed_time = 0.0;      ///< frequency-insensitive time
    double arrival = 0.0;         ///< arrival slot
    double deadline = 0.0;        ///< absolute deadline, slot scale

    /// Execution time at the default setting (1,1,1).
    double default_time() const { return scaled_work + fixed_time; }
    /// Power at the default setting (1,1,1).
    double default_power() const {
        return base_power + mem_power_coeff + core_power_coeff;
    }
    /// Time available between arrival and deadline.
    double slack() const { return deadline - arrival; }

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Average power of `task` at `setting`, in power units.
double run_power(const DvfsSetting& setting, const TaskProfile& task);

/// Execution time of `task` at `setting`, in slots.
double exec_time(const DvfsSetting& setting, const TaskProfile& task);

/// Runtime energy: run_power x exec_time (always computed as that product).
double run_energy(const DvfsSetting& setting, const TaskProfile& task);

/// Recovers the model coefficients from default-setting anchors: the power
/// pair (p0, p_star) and time pair (t0, t_star) measured at (1,1,1).
/// Throws CalibrationError when p_star <= p0 + gamma or t_star <= t0.
TaskProfile calibrate(std::string id, double p0, double p_star, double gamma,
                      double t0, double t_star, double delta,
                      double arrival, double deadline);

} // namespace dvfsim

#endif
