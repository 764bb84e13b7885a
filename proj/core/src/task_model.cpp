#include <dvfsim/task_model.hpp>

#include <cmath>
#include <utility>

namespace dvfsim {

void TaskProfile::validate() const {
    if (!(base_power >= 0.0) || !std::isfinite(base_power))
        throw ValidationError("p0", "must be finite and >= 0");
    if (!(mem_power_coeff >= 0.0) || !std::isfinite(mem_power_coeff))
        throw ValidationError("gamma", "must be finite and >= 0");
    if (!(core_power_coeff > 0.0) || !std::isfinite(core_power_coeff))
        throw ValidationError("c", "must be finite and > 0");
    if (!(scaled_work > 0.0) || !std::isfinite(scaled_work))
        throw ValidationError("d_work", "must be finite and > 0");
    if (!(fixed_time >= 0.0) || !std::isfinite(fixed_time))
        throw ValidationError("t0", "must be finite and >= 0");
    if (!(core_weight >= 0.0) || !(core_weight <= 1.0))
        throw ValidationError("delta", "must lie in [0, 1]");
    if (!(deadline > arrival))
        throw ValidationError("deadline", "must exceed arrival");
}

double run_power(const DvfsSetting& s, const TaskProfile& task) {
    return task.base_power + task.mem_power_coeff * s.mem_freq +
           task.core_power_coeff * s.voltage * s.voltage * s.core_freq;
}

double exec_time(const DvfsSetting& s, const TaskProfile& task) {
    return task.scaled_work * (task.core_weight / s.core_freq +
                               (1.0 - task.core_weight) / s.mem_freq) +
           task.fixed_time;
}

double run_energy(const DvfsSetting& s, const TaskProfile& task) {
    return run_power(s, task) * exec_time(s, task);
}

TaskProfile calibrate(std::string id, double p0, double p_star, double gamma,
                      double t0, double t_star, double delta,
                      double arrival, double deadline) {
    if (!(p_star > p0 + gamma))
        throw CalibrationError("task " + id + ": default power " +
                               std::to_string(p_star) +
                               " leaves no core power share (need p* > p0 + gamma)");
    if (!(t_star > t0))
        throw CalibrationError("task " + id + ": default time " +
                               std::to_string(t_star) +
                               " leaves no scalable work (need t* > t0)");
    TaskProfile task;
    task.id = std::move(id);
    task.base_power = p0;
    task.mem_power_coeff = gamma;
    task.core_power_coeff = p_star - p0 - gamma;
    task.scaled_work = t_star - t0;
    task.core_weight = delta;
    task.fixed_time = t0;
    task.arrival = arrival;
    task.deadline = deadline;
    task.validate();
    return task;
}

} // namespace dvfsim
