#ifndef DVFSIM_SCHEDULER_HPP
#define DVFSIM_SCHEDULER_HPP

#include <dvfsim/cluster.hpp>

#include <string>
#include <vector>

namespace dvfsim {

enum class Algorithm { edl, edf_best_fit, edf_worst_fit, lpt_first_fit, bin_packing };
enum class Mode { offline, online };

const char* to_string(Algorithm algorithm);
const char* to_string(Mode mode);
Algorithm algorithm_from_string(const std::string& name);
Mode mode_from_string(const std::string& name);

struct SchedulerConfig {
    Algorithm algorithm = Algorithm::edl;
    double theta = 1.0; ///< deferral threshold; only the EDL scheduler uses it
    bool dvfs = true;   ///< false runs every task at the default setting
    Mode mode = Mode::offline;

    void validate() const;
};

/// Where one task landed: pair, start time, and its final setting.
struct TaskPlacement {
    std::string task_id;
    int pair = 0;
    double start = 0.0;
    DvfsSetting setting{1.0, 1.0, 1.0};
    double exec = 0.0;
    double power = 0.0;
    bool readjusted = false; ///< setting re-tuned at placement time
};

struct Placement {
    std::vector<TaskPlacement> tasks;
    int occupied_pairs = 0; ///< m1
    int server_count = 0;   ///< offline grouping size / online peak powered
    std::vector<std::vector<int>> server_pairs; ///< offline grouping
    std::vector<int> powered_per_slot;          ///< online M(T), index = slot
};

struct ScheduleResult {
    Placement placement;
    EnergyLedger ledger;
    EventLog log;
    ConfiguredTaskSet configured;      ///< settings after the configuration pass
    std::vector<std::string> rejected; ///< online arrivals past the horizon
};

/// Batch scheduling of tasks all arriving at time 0, ending with the
/// pairs-to-servers grouping and the offline energy accounting.
ScheduleResult schedule_offline(std::span<const TaskProfile> tasks,
                                const SchedulerConfig& scheduler,
                                const ClusterConfig& cluster,
                                const ScalingDomain& domain);

/// Slot-driven scheduling of an arrival stream (arrival 0 is the initial
/// batch) with dynamic server sleep. Supports the EDL and bin-packing
/// algorithms; arrivals after `horizon` are rejected.
ScheduleResult schedule_online(std::span<const TaskProfile> tasks, int horizon,
                               const SchedulerConfig& scheduler,
                               const ClusterConfig& cluster,
                               const ScalingDomain& domain);

/// Dispatches on `scheduler.mode`.
ScheduleResult run_schedule(std::span<const TaskProfile> tasks, int horizon,
                            const SchedulerConfig& scheduler,
                            const ClusterConfig& cluster,
                            const ScalingDomain& domain);

} // namespace dvfsim

#endif
