#include <dvfsim/optimizer.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dvfsim {

namespace {

// Minimizes f over [lo, hi]: a 64-interval coarse scan picks the bracket
// (the energy along the voltage cap need not be unimodal), then
// golden-section refines it to `tol` on the decision variable.
template <typename F>
double minimize_scalar(F&& f, double lo, double hi, double tol = 1e-6) {
    if (!(hi > lo)) return lo;
    constexpr int kScanIntervals = 64;
    double best_x = lo;
    double best_v = f(lo);
    for (int i = 1; i <= kScanIntervals; ++i) {
        const double x = lo + (hi - lo) * i / kScanIntervals;
        const double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    const double step = (hi - lo) / kScanIntervals;
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    const double mid = 0.5 * (a + b);
    return f(mid) <= best_v ? mid : best_x;
}

[[noreturn]] void infeasible(const TaskProfile& task, double budget, double floor) {
    std::ostringstream msg;
    msg << "task " << task.id << ": budget " << budget
        << " below the fastest achievable time " << floor;
    throw InfeasibleDeadlineError(msg.str());
}

} // namespace

double optimal_mem_freq(double voltage, double core_freq,
                        const TaskProfile& task, const ScalingDomain& domain) {
    if (!(core_freq > 0.0))
        throw DomainError("optimal_mem_freq requires a positive core frequency");
    if (task.mem_power_coeff <= 0.0)
        return domain.max_mem_freq(); // memory clock costs nothing, run it flat out
    const double mem_work = task.scaled_work * (1.0 - task.core_weight);
    const double core_time =
        task.fixed_time + task.scaled_work * task.core_weight / core_freq;
    if (core_time <= 0.0)
        return domain.max_mem_freq(); // stationary point runs away to +inf
    const double core_power =
        task.base_power + task.core_power_coeff * voltage * voltage * core_freq;
    const double stationary =
        std::sqrt(core_power * mem_work / (task.mem_power_coeff * core_time));
    return std::clamp(stationary, domain.min_mem_freq(), domain.max_mem_freq());
}

double min_exec_time(const TaskProfile& task, const ScalingDomain& domain) {
    return exec_time(domain.max_setting(), task);
}

Priority classify(const TaskProfile& task, double unconstrained_exec) {
    return task.slack() < unconstrained_exec ? Priority::deadline_prior
                                             : Priority::energy_prior;
}

OptimizedTask optimize_unconstrained(const TaskProfile& task,
                                     const ScalingDomain& domain) {
    const FreqCapCurve& curve = domain.curve();
    auto energy_on_cap = [&](double v) {
        const double fc = curve(v);
        const double fm = optimal_mem_freq(v, fc, task, domain);
        return run_energy({v, fc, fm}, task);
    };
    double v = minimize_scalar(energy_on_cap, domain.min_voltage(),
                               domain.max_voltage());
    // The default voltage always enters the candidate set; the result is
    // never worse than the factory setting when (1,1,1) is in the domain.
    if (domain.min_voltage() <= 1.0 && 1.0 <= domain.max_voltage() &&
        energy_on_cap(1.0) < energy_on_cap(v))
        v = 1.0;

    OptimizedTask out;
    out.profile = task;
    const double fc = curve(v);
    const double fm = optimal_mem_freq(v, fc, task, domain);
    out.setting = {v, fc, fm};
    out.exec = exec_time(out.setting, task);
    out.power = run_power(out.setting, task);
    out.min_exec = min_exec_time(task, domain);
    out.priority = classify(task, out.exec);
    return out;
}

OptimizedTask optimize_with_deadline(const TaskProfile& task, double budget,
                                     const ScalingDomain& domain) {
    OptimizedTask unc = optimize_unconstrained(task, domain);
    if (budget >= unc.exec - 1e-9) return unc; // constraint inactive
    const double floor_time = unc.min_exec;
    if (budget < floor_time - 1e-9) infeasible(task, budget, floor_time);

    const double core_work = task.scaled_work * task.core_weight;
    const double mem_work = task.scaled_work * (1.0 - task.core_weight);
    const double slack = budget - task.fixed_time;
    const double fc_cap = domain.max_core_freq();
    const double fc_floor = domain.min_core_freq();
    const double cap_at_min_voltage = domain.curve()(domain.min_voltage());

    auto voltage_for = [&](double fc) {
        return fc > cap_at_min_voltage ? domain.min_voltage_for(fc)
                                       : domain.min_voltage();
    };

    DvfsSetting setting{};
    if (core_work <= 0.0) {
        // Memory-bound task: the budget pins the memory clock; the core runs
        // as cold as the domain allows.
        double fm = mem_work / slack;
        if (fm > domain.max_mem_freq() + 1e-9 || fm < domain.min_mem_freq() - 1e-9)
            infeasible(task, budget, floor_time);
        fm = std::clamp(fm, domain.min_mem_freq(), domain.max_mem_freq());
        setting = {domain.min_voltage(), fc_floor, fm};
    } else if (mem_work <= 0.0) {
        // Core-bound task: the budget pins the core clock.
        double fc = core_work / slack;
        if (fc > fc_cap + 1e-9 || fc < fc_floor - 1e-9)
            infeasible(task, budget, floor_time);
        fc = std::clamp(fc, fc_floor, fc_cap);
        const double v = voltage_for(fc);
        setting = {v, fc, optimal_mem_freq(v, fc, task, domain)};
    } else {
        // Each memory frequency determines the core frequency that keeps the
        // execution time at the budget; minimize power along that surface.
        const double time_at_cap = slack - core_work / fc_cap;
        if (time_at_cap <= 0.0) infeasible(task, budget, floor_time);
        double fm_lo = std::max(domain.min_mem_freq(), mem_work / time_at_cap);
        double fm_hi = domain.max_mem_freq();
        const double time_at_floor = slack - core_work / fc_floor;
        if (time_at_floor > 0.0)
            fm_hi = std::min(fm_hi, mem_work / time_at_floor);
        if (fm_lo > fm_hi + 1e-9) infeasible(task, budget, floor_time);
        fm_hi = std::max(fm_hi, fm_lo);

        auto fc_of = [&](double fm) { return core_work / (slack - mem_work / fm); };
        auto power_of = [&](double fm) {
            const double fc = std::clamp(fc_of(fm), fc_floor, fc_cap);
            return run_power({voltage_for(fc), fc, fm}, task);
        };
        const double fm = minimize_scalar(power_of, fm_lo, fm_hi);
        const double fc = std::clamp(fc_of(fm), fc_floor, fc_cap);
        setting = {voltage_for(fc), fc, fm};
    }

    OptimizedTask out;
    out.profile = task;
    out.setting = setting;
    out.exec = exec_time(setting, task);
    out.power = run_power(setting, task);
    out.min_exec = floor_time;
    out.priority = classify(task, unc.exec);
    if (std::abs(out.exec - budget) > 1e-6)
        throw InternalError("deadline-constrained setting missed the budget for task " +
                            task.id);
    return out;
}

ConfiguredTaskSet configure_tasks(std::span<const TaskProfile> tasks,
                                  const ScalingDomain& domain, bool dvfs) {
    ConfiguredTaskSet out;
    out.tasks.reserve(tasks.size());
    for (const TaskProfile& task : tasks) {
        if (!dvfs) {
            if (task.slack() < task.default_time() - 1e-9) {
                out.infeasible.push_back({task, task.default_time()});
                continue;
            }
            OptimizedTask fixed;
            fixed.profile = task;
            fixed.setting = kDefaultSetting;
            fixed.exec = task.default_time();
            fixed.power = task.default_power();
            fixed.min_exec = task.default_time();
            fixed.priority = Priority::energy_prior;
            out.tasks.push_back(std::move(fixed));
            continue;
        }
        const double floor_time = min_exec_time(task, domain);
        if (task.slack() < floor_time - 1e-9) {
            out.infeasible.push_back({task, floor_time});
            continue;
        }
        OptimizedTask opt = optimize_unconstrained(task, domain);
        if (opt.priority == Priority::deadline_prior) {
            opt = optimize_with_deadline(task, task.slack(), domain);
            ++out.deadline_prior_count;
        }
        out.tasks.push_back(std::move(opt));
    }
    return out;
}

} // namespace dvfsim
