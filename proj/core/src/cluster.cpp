#include <dvfsim/cluster.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace dvfsim {

int ClusterConfig::derived_sleep_slots(double turn_on_cost, double idle_power) {
    if (idle_power <= 0.0) return 1;
    return std::max(1, static_cast<int>(std::floor(turn_on_cost / idle_power)));
}

void ClusterConfig::validate() const {
    if (total_pairs <= 0) throw ValidationError("total_pairs", "must be positive");
    if (pairs_per_server <= 0)
        throw ValidationError("pairs_per_server", "must be positive");
    if (total_pairs % pairs_per_server != 0)
        throw ValidationError("total_pairs",
                              "must be divisible by pairs_per_server");
    if (idle_power < 0.0) throw ValidationError("idle_power", "must be >= 0");
    if (turn_on_cost < 0.0) throw ValidationError("turn_on_cost", "must be >= 0");
    if (sleep_slots < 1) throw ValidationError("sleep_slots", "must be >= 1");
}

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::task_start: return "task_start";
    case EventKind::task_end: return "task_end";
    case EventKind::idle: return "idle";
    case EventKind::turn_on: return "turn_on";
    case EventKind::turn_off: return "turn_off";
    }
    return "?";
}

bool AuditResult::matches(const EnergyLedger& ledger, double rel_tol) const {
    auto close = [rel_tol](double a, double b) {
        return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
    };
    return close(e_run, ledger.e_run) && close(e_idle, ledger.e_idle) &&
           close(e_overhead, ledger.e_overhead);
}

AuditResult audit_log(const EventLog& log, std::span<const TaskProfile> tasks) {
    std::unordered_map<std::string_view, double> deadline_of;
    deadline_of.reserve(tasks.size());
    for (const TaskProfile& t : tasks) deadline_of.emplace(t.id, t.deadline);

    AuditResult out;
    for (const Event& ev : log) {
        switch (ev.kind) {
        case EventKind::task_end: {
            out.e_run += ev.energy;
            auto it = deadline_of.find(ev.task);
            if (it != deadline_of.end() && ev.time > it->second + 1e-9)
                out.deadline_violations.push_back(ev.task);
            break;
        }
        case EventKind::idle: out.e_idle += ev.energy; break;
        case EventKind::turn_on: out.e_overhead += ev.energy; break;
        default: break;
        }
    }
    return out;
}

void PairSchedule::assign(const OptimizedTask& task, double start) {
    if (start < busy_until - 1e-9)
        throw InternalError("task " + task.profile.id +
                            " scheduled before the pair's queue end");
    const double end = start + task.exec;
    if (end > task.profile.deadline + 1e-6)
        throw InternalError("task " + task.profile.id +
                            " scheduled past its deadline");
    tasks.push_back({task, start});
    busy_until = end;
}

ServerMapping map_servers(const std::vector<double>& busy_times,
                          int pairs_per_server) {
    ServerMapping out;
    const int n = static_cast<int>(busy_times.size());
    if (n == 0) return out;
    std::vector<int> order(busy_times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return busy_times[a] > busy_times[b];
    });
    for (int at = 0; at < n; at += pairs_per_server) {
        std::vector<int> group(order.begin() + at,
                               order.begin() + std::min(n, at + pairs_per_server));
        const double makespan = busy_times[group.front()];
        for (int idx : group) out.idle_time += makespan - busy_times[idx];
        // Unoccupied pairs padding a partially used server idle for its
        // whole makespan.
        out.idle_time +=
            makespan * (pairs_per_server - static_cast<int>(group.size()));
        out.servers.push_back(std::move(group));
        out.makespans.push_back(makespan);
    }
    return out;
}

EnergyLedger account_offline(const std::vector<PairSchedule>& pairs,
                             const ClusterConfig& config, EventLog* log,
                             ServerMapping* mapping_out) {
    EnergyLedger ledger;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        for (const ScheduledTask& st : pairs[p].tasks) {
            const double energy = st.task.energy();
            ledger.e_run += energy;
            if (log) {
                log->push_back({st.start, EventKind::task_start,
                                static_cast<int>(p), st.task.profile.id, 0.0});
                log->push_back({st.start + st.task.exec, EventKind::task_end,
                                static_cast<int>(p), st.task.profile.id, energy});
            }
        }
    }

    std::vector<double> busy;
    busy.reserve(pairs.size());
    for (const PairSchedule& pair : pairs) busy.push_back(pair.busy_until);
    ServerMapping mapping = map_servers(busy, config.pairs_per_server);
    ledger.e_idle = config.idle_power * mapping.idle_time;
    ledger.occupied_servers_max = static_cast<int>(mapping.servers.size());

    if (log && config.idle_power > 0.0) {
        int virtual_pad = static_cast<int>(pairs.size());
        for (std::size_t s = 0; s < mapping.servers.size(); ++s) {
            const double makespan = mapping.makespans[s];
            for (int idx : mapping.servers[s]) {
                const double gap = makespan - busy[idx];
                if (gap > 0.0)
                    log->push_back({makespan, EventKind::idle, idx, {},
                                    config.idle_power * gap});
            }
            const int pad = config.pairs_per_server -
                            static_cast<int>(mapping.servers[s].size());
            for (int j = 0; j < pad; ++j)
                log->push_back({makespan, EventKind::idle, virtual_pad++, {},
                                config.idle_power * makespan});
        }
    }
    if (mapping_out) *mapping_out = std::move(mapping);
    return ledger;
}

OnlineCluster::OnlineCluster(const ClusterConfig& config) : config_(config) {
    config_.validate();
    pairs_.resize(config_.total_pairs);
    servers_.resize(config_.server_count());
    server_on_.assign(servers_.size(), 0);
}

double OnlineCluster::busy_overlap(const Pair& pair, double lo, double hi) const {
    double total = 0.0;
    for (std::size_t i = pair.completed; i < pair.queue.size(); ++i) {
        const ScheduledTask& st = pair.queue[i];
        if (st.start >= hi) break;
        const double end = st.start + st.task.exec;
        if (end <= lo) continue;
        total += std::min(end, hi) - std::max(st.start, lo);
    }
    // Tasks completed this slot still overlap its head.
    for (std::size_t i = pair.completed; i-- > 0;) {
        const ScheduledTask& st = pair.queue[i];
        const double end = st.start + st.task.exec;
        if (end <= lo) break;
        total += std::min(end, hi) - std::max(st.start, lo);
    }
    return total;
}

void OnlineCluster::begin_slot(int slot) {
    if (slot != slot_ + 1)
        throw InternalError("online cluster must advance one slot at a time");
    slot_ = slot;
    const double lo = slot - 1.0;
    const double hi = slot;
    const int l = config_.pairs_per_server;

    for (std::size_t s = 0; s < servers_.size(); ++s) {
        if (!servers_[s].on) continue;
        bool all_idle = true;
        for (int k = 0; k < l; ++k) {
            Pair& pair = pairs_[s * l + k];
            // Departures: tasks finishing in (slot-1, slot].
            while (pair.completed < pair.queue.size()) {
                const ScheduledTask& st = pair.queue[pair.completed];
                const double end = st.start + st.task.exec;
                if (end > hi) break;
                ledger_.e_run += st.task.energy();
                log_.push_back({end, EventKind::task_end,
                                static_cast<int>(s * l + k), st.task.profile.id,
                                st.task.energy()});
                ++pair.completed;
            }
            // Idle accrual for the slot just ended.
            const double idle = 1.0 - busy_overlap(pair, lo, hi);
            if (idle > 1e-12 && config_.idle_power > 0.0) {
                const double energy = config_.idle_power * idle;
                ledger_.e_idle += energy;
                log_.push_back({hi, EventKind::idle,
                                static_cast<int>(s * l + k), {}, energy});
            }
            if (pair.completed < pair.queue.size() || pair.busy_until > hi)
                all_idle = false;
        }
        // Dynamic sleep: off after sleep_slots fully idle slot boundaries.
        if (!all_idle) {
            servers_[s].fully_idle_since = -1;
        } else if (servers_[s].fully_idle_since < 0) {
            servers_[s].fully_idle_since = slot;
        } else if (slot - servers_[s].fully_idle_since >= config_.sleep_slots) {
            turn_off_server(static_cast<int>(s));
        }
    }
}

void OnlineCluster::turn_off_server(int server) {
    servers_[server].on = false;
    servers_[server].fully_idle_since = -1;
    server_on_[server] = 0;
    --powered_servers_;
    const int l = config_.pairs_per_server;
    for (int k = 0; k < l; ++k)
        log_.push_back({static_cast<double>(slot_), EventKind::turn_off,
                        server * l + k, {}, 0.0});
}

std::optional<int> OnlineCluster::min_finish_pair() const {
    std::optional<int> best;
    const int l = config_.pairs_per_server;
    for (std::size_t s = 0; s < servers_.size(); ++s) {
        if (!servers_[s].on) continue;
        for (int k = 0; k < l; ++k) {
            const int p = static_cast<int>(s * l + k);
            if (!best || pairs_[p].busy_until < pairs_[*best].busy_until)
                best = p;
        }
    }
    return best;
}

void OnlineCluster::turn_on(int server) {
    if (servers_[server].on) {
        ++redundant_turn_ons_;
        return;
    }
    servers_[server].on = true;
    servers_[server].fully_idle_since = slot_;
    server_on_[server] = 1;
    ++powered_servers_;
    ledger_.occupied_servers_max =
        std::max(ledger_.occupied_servers_max, powered_servers_);
    const int l = config_.pairs_per_server;
    ledger_.turn_on_count += l;
    ledger_.e_overhead += config_.turn_on_cost * l;
    for (int k = 0; k < l; ++k)
        log_.push_back({static_cast<double>(slot_), EventKind::turn_on,
                        server * l + k, {}, config_.turn_on_cost});
}

int OnlineCluster::open_server() {
    for (std::size_t s = 0; s < servers_.size(); ++s) {
        if (servers_[s].on) continue;
        turn_on(static_cast<int>(s));
        return static_cast<int>(s) * config_.pairs_per_server;
    }
    throw CapacityError("all " + std::to_string(servers_.size()) +
                        " servers are already on");
}

void OnlineCluster::assign(const OptimizedTask& task, int pair, double start) {
    const int server = pair / config_.pairs_per_server;
    if (!servers_[server].on)
        throw InternalError("task " + task.profile.id + " assigned to an off pair");
    Pair& target = pairs_[pair];
    if (start < target.busy_until - 1e-9 || start < slot_ - 1e-9)
        throw InternalError("task " + task.profile.id + " scheduled in the past");
    const double end = start + task.exec;
    if (end > task.profile.deadline + 1e-6)
        throw InternalError("task " + task.profile.id +
                            " scheduled past its deadline");
    if (!target.ever_used) {
        target.ever_used = true;
        ++occupied_pairs_;
    }
    target.queue.push_back({task, start});
    target.busy_until = end;
    servers_[server].fully_idle_since = -1;
    log_.push_back({start, EventKind::task_start, pair, task.profile.id, 0.0});
}

void OnlineCluster::drain() {
    while (powered_servers_ > 0) begin_slot(slot_ + 1);
}

} // namespace dvfsim
