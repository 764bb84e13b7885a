#include <dvfsim/scheduler.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace dvfsim {

const char* to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::edl: return "edl";
    case Algorithm::edf_best_fit: return "edf-bf";
    case Algorithm::edf_worst_fit: return "edf-wf";
    case Algorithm::lpt_first_fit: return "lpt-ff";
    case Algorithm::bin_packing: return "bin-packing";
    }
    return "?";
}

const char* to_string(Mode mode) {
    return mode == Mode::offline ? "offline" : "online";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "edl") return Algorithm::edl;
    if (name == "edf-bf") return Algorithm::edf_best_fit;
    if (name == "edf-wf") return Algorithm::edf_worst_fit;
    if (name == "lpt-ff") return Algorithm::lpt_first_fit;
    if (name == "bin-packing" || name == "bin") return Algorithm::bin_packing;
    throw ValidationError("algorithm", "unknown algorithm '" + name + "'");
}

Mode mode_from_string(const std::string& name) {
    if (name == "offline") return Mode::offline;
    if (name == "online") return Mode::online;
    throw ValidationError("mode", "unknown mode '" + name + "'");
}

void SchedulerConfig::validate() const {
    if (!(theta > 0.0) || !(theta <= 1.0))
        throw ValidationError("theta", "must lie in (0, 1]");
}

namespace {

constexpr double kFitTol = 1e-9;

// Ties on deadline break to the lower task id, keeping runs reproducible.
bool edf_before(const OptimizedTask& a, const OptimizedTask& b) {
    if (a.profile.deadline != b.profile.deadline)
        return a.profile.deadline < b.profile.deadline;
    return a.profile.id < b.profile.id;
}

bool lpt_before(const OptimizedTask& a, const OptimizedTask& b) {
    if (a.exec != b.exec) return a.exec > b.exec;
    return a.profile.id < b.profile.id;
}

class OfflineBoard {
  public:
    OfflineBoard(const ClusterConfig& cluster) : cluster_(cluster) {}

    int new_pair() {
        if (static_cast<int>(pairs_.size()) >= cluster_.total_pairs)
            throw CapacityError("offline schedule needs more than " +
                                std::to_string(cluster_.total_pairs) +
                                " CPU-GPU pairs");
        pairs_.emplace_back();
        return static_cast<int>(pairs_.size()) - 1;
    }

    void place(const OptimizedTask& task, int pair, double start,
               bool readjusted, Placement& out) {
        pairs_[pair].assign(task, start);
        out.tasks.push_back({task.profile.id, pair, start, task.setting,
                             task.exec, task.power, readjusted});
    }

    int count() const { return static_cast<int>(pairs_.size()); }
    double finish(int pair) const { return pairs_[pair].busy_until; }
    const std::vector<PairSchedule>& pairs() const { return pairs_; }

    // Pair with the smallest finish time; ties to the lowest index.
    int min_finish_pair() const {
        int best = -1;
        for (int p = 0; p < count(); ++p)
            if (best < 0 || pairs_[p].busy_until < pairs_[best].busy_until)
                best = p;
        return best;
    }

  private:
    const ClusterConfig& cluster_;
    std::vector<PairSchedule> pairs_;
};

// Placement rule shared by the three offline baselines: scan the open pairs
// for ones the task fits on as-is, pick per the variant's fit metric, open a
// fresh pair when none fits.
int baseline_pick(const OfflineBoard& board, const OptimizedTask& task,
                  Algorithm algorithm) {
    int best = -1;
    for (int p = 0; p < board.count(); ++p) {
        const double mu = board.finish(p);
        if (task.profile.deadline - mu < task.exec - kFitTol) continue;
        switch (algorithm) {
        case Algorithm::edf_best_fit:
            if (best < 0 || mu > board.finish(best)) best = p;
            break;
        case Algorithm::edf_worst_fit:
            if (best < 0 || mu < board.finish(best)) best = p;
            break;
        case Algorithm::lpt_first_fit:
            return p;
        default:
            break;
        }
    }
    return best;
}

void schedule_offline_packed(const ConfiguredTaskSet& configured,
                             OfflineBoard& board, Placement& out) {
    // Worst-fit on task utilization; a pair's utilization may not exceed 1.
    // Deadlines are verified when materializing the queue, since utilization
    // alone does not guarantee them for non-preemptive tasks.
    std::vector<const OptimizedTask*> order;
    order.reserve(configured.tasks.size());
    for (const OptimizedTask& t : configured.tasks) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* a, auto* b) { return edf_before(*a, *b); });

    std::vector<double> utilization;
    for (const OptimizedTask* task : order) {
        const double u = task->utilization();
        int pick = -1;
        for (int p = 0; p < board.count(); ++p) {
            if (utilization[p] + u > 1.0 + kFitTol) continue;
            if (task->profile.deadline - board.finish(p) < task->exec - kFitTol)
                continue;
            if (pick < 0 || utilization[p] < utilization[pick]) pick = p;
        }
        if (pick < 0) {
            pick = board.new_pair();
            utilization.push_back(0.0);
        }
        board.place(*task, pick, board.finish(pick), false, out);
        utilization[pick] += u;
    }
}

} // namespace

ScheduleResult schedule_offline(std::span<const TaskProfile> tasks,
                                const SchedulerConfig& scheduler,
                                const ClusterConfig& cluster,
                                const ScalingDomain& domain) {
    scheduler.validate();
    cluster.validate();
    for (const TaskProfile& t : tasks)
        if (t.arrival != 0.0)
            throw ValidationError("arrival",
                                  "offline mode requires every arrival at slot 0");

    ScheduleResult result;
    result.configured = configure_tasks(tasks, domain, scheduler.dvfs);
    const ConfiguredTaskSet& configured = result.configured;
    OfflineBoard board(cluster);

    if (scheduler.algorithm == Algorithm::bin_packing) {
        schedule_offline_packed(configured, board, result.placement);
    } else {
        // Deadline-prior tasks run first, one fresh pair each.
        std::vector<const OptimizedTask*> energy_prior;
        for (const OptimizedTask& t : configured.tasks) {
            if (t.priority == Priority::deadline_prior)
                board.place(t, board.new_pair(), 0.0, false, result.placement);
            else
                energy_prior.push_back(&t);
        }
        auto order = scheduler.algorithm == Algorithm::lpt_first_fit
                         ? +[](const OptimizedTask* a, const OptimizedTask* b) {
                               return lpt_before(*a, *b);
                           }
                         : +[](const OptimizedTask* a, const OptimizedTask* b) {
                               return edf_before(*a, *b);
                           };
        std::stable_sort(energy_prior.begin(), energy_prior.end(), order);

        for (const OptimizedTask* task : energy_prior) {
            if (scheduler.algorithm == Algorithm::edl) {
                const int spt = board.min_finish_pair();
                const double window =
                    spt < 0 ? -1.0 : task->profile.deadline - board.finish(spt);
                if (spt >= 0 && window >= task->exec - kFitTol) {
                    board.place(*task, spt, board.finish(spt), false,
                                result.placement);
                    continue;
                }
                const double shortest =
                    std::max(scheduler.theta * task->exec, task->min_exec);
                if (spt >= 0 && scheduler.dvfs && window >= shortest - kFitTol &&
                    window < task->exec) {
                    OptimizedTask tuned =
                        optimize_with_deadline(task->profile, window, domain);
                    board.place(tuned, spt, board.finish(spt), true,
                                result.placement);
                    continue;
                }
                board.place(*task, board.new_pair(), 0.0, false, result.placement);
            } else {
                int pick = baseline_pick(board, *task, scheduler.algorithm);
                if (pick < 0)
                    board.place(*task, board.new_pair(), 0.0, false,
                                result.placement);
                else
                    board.place(*task, pick, board.finish(pick), false,
                                result.placement);
            }
        }
    }

    ServerMapping mapping;
    result.ledger = account_offline(board.pairs(), cluster, &result.log, &mapping);
    result.placement.occupied_pairs = board.count();
    result.placement.server_count = static_cast<int>(mapping.servers.size());
    result.placement.server_pairs = std::move(mapping.servers);
    return result;
}

namespace {

struct SlotBatch {
    int slot = 0;
    std::vector<const TaskProfile*> tasks;
};

// Configures one arriving task. Returns false (and records it) when the
// deadline is unreachable even at the fastest setting.
bool configure_arrival(const TaskProfile& task, int now, bool dvfs,
                       const ScalingDomain& domain, OptimizedTask& out,
                       ConfiguredTaskSet& configured) {
    const double window = task.deadline - now;
    if (!dvfs) {
        if (window < task.default_time() - kFitTol) {
            configured.infeasible.push_back({task, task.default_time()});
            return false;
        }
        out = OptimizedTask{};
        out.profile = task;
        out.setting = kDefaultSetting;
        out.exec = task.default_time();
        out.power = task.default_power();
        out.min_exec = task.default_time();
        out.priority = Priority::energy_prior;
        configured.tasks.push_back(out);
        return true;
    }
    const double floor_time = min_exec_time(task, domain);
    if (window < floor_time - kFitTol) {
        configured.infeasible.push_back({task, floor_time});
        return false;
    }
    out = optimize_unconstrained(task, domain);
    if (out.priority == Priority::deadline_prior) {
        out = optimize_with_deadline(task, window, domain);
        ++configured.deadline_prior_count;
    }
    configured.tasks.push_back(out);
    return true;
}

} // namespace

ScheduleResult schedule_online(std::span<const TaskProfile> tasks, int horizon,
                               const SchedulerConfig& scheduler,
                               const ClusterConfig& cluster,
                               const ScalingDomain& domain) {
    scheduler.validate();
    cluster.validate();
    if (horizon < 0) throw ValidationError("horizon", "must be >= 0");
    if (scheduler.algorithm != Algorithm::edl &&
        scheduler.algorithm != Algorithm::bin_packing)
        throw ValidationError("algorithm",
                              std::string(to_string(scheduler.algorithm)) +
                                  " schedules offline batches only");

    ScheduleResult result;
    std::map<int, std::vector<const TaskProfile*>> arrivals;
    for (const TaskProfile& t : tasks) {
        const double slot = std::floor(t.arrival);
        if (slot != t.arrival || slot < 0.0)
            throw ValidationError("arrival", "task " + t.id +
                                                 ": online arrivals are whole slots");
        if (slot > horizon) {
            result.rejected.push_back(t.id);
            continue;
        }
        arrivals[static_cast<int>(slot)].push_back(&t);
    }

    OnlineCluster board(cluster);
    // Pair utilization for the worst-fit packing of the initial batch.
    std::vector<double> utilization(static_cast<std::size_t>(cluster.total_pairs), 0.0);
    std::size_t remaining = 0;
    for (auto& [slot, batch] : arrivals) remaining += batch.size();

    for (int now = 0;; ++now) {
        if (now > 0) board.begin_slot(now);

        auto batch_it = arrivals.find(now);
        if (batch_it != arrivals.end()) {
            remaining -= batch_it->second.size();
            // Configure the slot's arrivals, then serve them EDF.
            std::vector<OptimizedTask> batch;
            batch.reserve(batch_it->second.size());
            for (const TaskProfile* t : batch_it->second) {
                OptimizedTask opt;
                if (configure_arrival(*t, now, scheduler.dvfs, domain, opt,
                                      result.configured))
                    batch.push_back(std::move(opt));
            }
            std::stable_sort(batch.begin(), batch.end(), edf_before);

            for (const OptimizedTask& task : batch) {
                const OptimizedTask* chosen = &task;
                OptimizedTask tuned;
                int pair = -1;
                double start = now;
                bool readjusted = false;

                if (scheduler.algorithm == Algorithm::edl || now > 0) {
                    // EDL everywhere; the bin-packing variant reuses it for
                    // T > 0 with the first-fit pair choice and no retuning.
                    std::optional<int> pick;
                    if (scheduler.algorithm == Algorithm::edl) {
                        pick = board.min_finish_pair();
                    } else {
                        pick = board.first_pair_where([&](int p) {
                            const double s = std::max<double>(now, board.finish_time(p));
                            return task.profile.deadline - s >= task.exec - kFitTol;
                        });
                    }
                    if (pick) {
                        const double s = std::max<double>(now, board.finish_time(*pick));
                        const double window = task.profile.deadline - s;
                        if (window >= task.exec - kFitTol) {
                            pair = *pick;
                            start = s;
                        } else if (scheduler.algorithm == Algorithm::edl &&
                                   scheduler.dvfs) {
                            const double shortest = std::max(
                                scheduler.theta * task.exec, task.min_exec);
                            if (window >= shortest - kFitTol) {
                                tuned = optimize_with_deadline(task.profile,
                                                               window, domain);
                                chosen = &tuned;
                                pair = *pick;
                                start = s;
                                readjusted = true;
                            }
                        }
                    }
                } else {
                    // Initial batch of the bin-packing algorithm: worst fit
                    // on utilization, capped at 1 per pair, deadlines checked
                    // on the materialized queue.
                    const double u = task.utilization();
                    int pick = -1;
                    for (int p = 0; p < cluster.total_pairs; ++p) {
                        if (!board.pair_powered(p)) continue;
                        if (utilization[p] + u > 1.0 + kFitTol) continue;
                        const double s = std::max<double>(now, board.finish_time(p));
                        if (task.profile.deadline - s < task.exec - kFitTol)
                            continue;
                        if (pick < 0 || utilization[p] < utilization[pick])
                            pick = p;
                    }
                    if (pick >= 0) {
                        pair = pick;
                        start = std::max<double>(now, board.finish_time(pick));
                    }
                }

                if (pair < 0) {
                    pair = board.open_server();
                    start = now;
                }
                board.assign(*chosen, pair, start);
                utilization[pair] += chosen->utilization();
                result.placement.tasks.push_back(
                    {chosen->profile.id, pair, start, chosen->setting,
                     chosen->exec, chosen->power, readjusted});
            }
        }

        result.placement.powered_per_slot.push_back(board.powered_servers());
        if (remaining == 0 && board.powered_servers() == 0) break;
    }

    result.ledger = board.ledger();
    result.placement.occupied_pairs = board.occupied_pairs();
    result.placement.server_count = board.ledger().occupied_servers_max;
    result.log = board.take_log();
    return result;
}

ScheduleResult run_schedule(std::span<const TaskProfile> tasks, int horizon,
                            const SchedulerConfig& scheduler,
                            const ClusterConfig& cluster,
                            const ScalingDomain& domain) {
    return scheduler.mode == Mode::offline
               ? schedule_offline(tasks, scheduler, cluster, domain)
               : schedule_online(tasks, horizon, scheduler, cluster, domain);
}

} // namespace dvfsim
