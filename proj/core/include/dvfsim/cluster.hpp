#ifndef DVFSIM_CLUSTER_HPP
#define DVFSIM_CLUSTER_HPP

#include <dvfsim/optimizer.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dvfsim {

/// The machine model: identical CPU-GPU pairs grouped into servers of
/// `pairs_per_server` each. A server can only be off when none of its pairs
/// holds work; pairs on a partially busy server idle at `idle_power`.
struct ClusterConfig {
    int total_pairs = 2048;
    int pairs_per_server = 1;  ///< l
    double idle_power = 37.0;  ///< per idle pair, power units
    double turn_on_cost = 90.0;///< per pair, power units x slots
    int sleep_slots = 2;       ///< full idle slots before a server may turn off

    /// The threshold that balances one turn-on against the grace-window idle
    /// energy: floor(turn_on_cost / idle_power), at least 1.
    static int derived_sleep_slots(double turn_on_cost, double idle_power);

    int server_count() const { return total_pairs / pairs_per_server; }
    void validate() const;
};

enum class EventKind { task_start, task_end, idle, turn_on, turn_off };

const char* to_string(EventKind kind);

/// One append-only record of the simulation timeline. Energy deltas are
/// attached to task_end (runtime energy), idle, and turn_on events.
struct Event {
    double time = 0.0;
    EventKind kind = EventKind::task_start;
    int pair = -1;
    std::string task;
    double energy = 0.0;
};

using EventLog = std::vector<Event>;

/// Running three-way energy decomposition of one simulation.
struct EnergyLedger {
    double e_run = 0.0;
    double e_idle = 0.0;
    double e_overhead = 0.0;
    long turn_on_count = 0; ///< counted per pair
    int occupied_servers_max = 0;

    double e_total() const { return e_run + e_idle + e_overhead; }
};

/// Independent recomputation of a ledger from the event log, plus the
/// post-hoc deadline audit.
struct AuditResult {
    double e_run = 0.0;
    double e_idle = 0.0;
    double e_overhead = 0.0;
    std::vector<std::string> deadline_violations;

    bool matches(const EnergyLedger& ledger, double rel_tol = 1e-9) const;
};

AuditResult audit_log(const EventLog& log, std::span<const TaskProfile> tasks);

/// One task placed on a pair: it runs over [start, start + task.exec).
struct ScheduledTask {
    OptimizedTask task;
    double start = 0.0;
};

/// The work assigned to one CPU-GPU pair, in execution order.
struct PairSchedule {
    std::vector<ScheduledTask> tasks;
    double busy_until = 0.0; ///< finish time of the last assigned task

    /// Appends a task starting at `start`. Throws InternalError when the
    /// start precedes the current queue end or the task would finish past its
    /// deadline; a correct scheduler never trips either check.
    void assign(const OptimizedTask& task, double start);
};

/// The grouping of occupied pairs into servers (longest-busy pairs first,
/// chunks of `pairs_per_server`), which minimizes the summed idle time.
struct ServerMapping {
    std::vector<std::vector<int>> servers; ///< pair indices per server
    std::vector<double> makespans;         ///< per server
    double idle_time = 0.0; ///< sum of (makespan - pair busy time), padding included
};

ServerMapping map_servers(const std::vector<double>& busy_times,
                          int pairs_per_server);

/// Offline energy accounting: runtime energy from the placed tasks, idle
/// energy from the server mapping, no turn-on overhead. Appends the task and
/// idle events to `log` when given.
EnergyLedger account_offline(const std::vector<PairSchedule>& pairs,
                             const ClusterConfig& config,
                             EventLog* log = nullptr,
                             ServerMapping* mapping_out = nullptr);

/// The slot-quantized online cluster: fixed servers, busy/idle/off pair
/// states, dynamic sleep after `sleep_slots` fully idle slots, and per-slot
/// energy accrual. One instance owns one simulation run.
class OnlineCluster {
  public:
    explicit OnlineCluster(const ClusterConfig& config);

    /// Advances the timeline to slot boundary `slot`: completes tasks
    /// finishing in (slot-1, slot], accrues idle energy for that slot on
    /// every powered server, then turns off servers that have been fully
    /// idle for the sleep threshold.
    void begin_slot(int slot);

    /// The powered pair with the smallest finish time (ties to the lowest
    /// index), or nothing when every server is off.
    std::optional<int> min_finish_pair() const;

    /// The lowest-indexed powered pair satisfying `fits(pair)`, or nothing.
    template <typename Pred>
    std::optional<int> first_pair_where(Pred&& fits) const {
        for (int p = 0; p < config_.total_pairs; ++p)
            if (server_on_[p / config_.pairs_per_server] && fits(p))
                return p;
        return std::nullopt;
    }

    /// Powers `server`, making all its pairs available and charging
    /// turn_on_cost per pair. Powering an already-on server is a no-op
    /// counted by redundant_turn_on_count().
    void turn_on(int server);

    /// Powers the first off server and returns the index of its first pair.
    /// Throws CapacityError when every server is already on.
    int open_server();

    /// Places a task on a powered pair at `start` (must be >= both the
    /// pair's queue end and the current slot).
    void assign(const OptimizedTask& task, int pair, double start);

    /// Runs slots forward (no arrivals) until every server is off.
    void drain();

    double finish_time(int pair) const { return pairs_[pair].busy_until; }
    bool pair_powered(int pair) const {
        return server_on_[pair / config_.pairs_per_server];
    }
    int powered_servers() const { return powered_servers_; }
    int occupied_pairs() const { return occupied_pairs_; }
    int current_slot() const { return slot_; }
    long redundant_turn_on_count() const { return redundant_turn_ons_; }

    const EnergyLedger& ledger() const { return ledger_; }
    const EventLog& log() const { return log_; }
    EventLog take_log() { return std::move(log_); }

  private:
    struct Pair {
        std::vector<ScheduledTask> queue;
        std::size_t completed = 0; ///< tasks already accounted as finished
        double busy_until = 0.0;
        bool ever_used = false;
    };
    struct Server {
        bool on = false;
        int fully_idle_since = -1; ///< slot boundary, -1 while busy or off
    };

    void turn_off_server(int server);
    double busy_overlap(const Pair& pair, double lo, double hi) const;

    ClusterConfig config_;
    std::vector<Pair> pairs_;
    std::vector<Server> servers_;
    std::vector<char> server_on_; // mirrors servers_[].on for fast scans
    EnergyLedger ledger_;
    EventLog log_;
    int slot_ = 0;
    int powered_servers_ = 0;
    int occupied_pairs_ = 0;
    long redundant_turn_ons_ = 0;
};

} // namespace dvfsim

#endif
