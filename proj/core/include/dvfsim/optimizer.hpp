#ifndef DVFSIM_OPTIMIZER_HPP
#define DVFSIM_OPTIMIZER_HPP

#include <dvfsim/task_model.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace dvfsim {

/// Whether a task must be sped up to make its deadline (deadline-prior) or
/// may run at its energy-optimal setting (energy-prior).
enum class Priority { energy_prior, deadline_prior };

/// A task with its chosen voltage/frequency setting.
struct OptimizedTask {
    TaskProfile profile;
    DvfsSetting setting{1.0, 1.0, 1.0};
    double exec = 0.0;     ///< execution time at `setting`
    double power = 0.0;    ///< average power at `setting`
    double min_exec = 0.0; ///< fastest achievable execution time in the domain
    Priority priority = Priority::energy_prior;

    double energy() const { return power * exec; }
    /// Fraction of the arrival-to-deadline window the task occupies.
    double utilization() const { return exec / profile.slack(); }
};

/// The energy-minimal memory frequency for a fixed core setting, clamped to
/// the domain. With mem_power_coeff = 0 the memory clock is free power-wise
/// and the maximum is returned.
double optimal_mem_freq(double voltage, double core_freq,
                        const TaskProfile& task, const ScalingDomain& domain);

/// Execution time at the fastest legal setting.
double min_exec_time(const TaskProfile& task, const ScalingDomain& domain);

/// Deadline-prior iff the window d - a is shorter than the energy-optimal
/// execution time (strict).
Priority classify(const TaskProfile& task, double unconstrained_exec);

/// The energy-minimal setting ignoring the deadline. The core frequency of
/// the result sits on the voltage cap curve; the search is 1-D in voltage
/// with the memory frequency given in closed form.
OptimizedTask optimize_unconstrained(const TaskProfile& task,
                                     const ScalingDomain& domain);

/// The energy-minimal setting whose execution time equals `budget`.
/// When `budget` is not shorter than the unconstrained optimum's time, the
/// unconstrained optimum is returned unchanged. Throws
/// InfeasibleDeadlineError when `budget` is unreachable.
OptimizedTask optimize_with_deadline(const TaskProfile& task, double budget,
                                     const ScalingDomain& domain);

/// A task whose deadline cannot be met even at the fastest setting.
struct InfeasibleTask {
    TaskProfile profile;
    double min_exec; ///< fastest time, still above the window d - a
};

/// The per-set voltage/frequency configuration pass: every feasible task gets
/// its final setting, deadline-prior tasks are re-tuned so their execution
/// time equals their window.
struct ConfiguredTaskSet {
    std::size_t deadline_prior_count = 0;
    std::vector<OptimizedTask> tasks;
    std::vector<InfeasibleTask> infeasible;
};

/// With dvfs disabled every task runs at the default setting (1,1,1) and
/// tasks with a window shorter than their default time are infeasible.
ConfiguredTaskSet configure_tasks(std::span<const TaskProfile> tasks,
                                  const ScalingDomain& domain,
                                  bool dvfs = true);

} // namespace dvfsim

#endif
