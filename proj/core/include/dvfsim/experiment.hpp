#ifndef DVFSIM_EXPERIMENT_HPP
#define DVFSIM_EXPERIMENT_HPP

#include <dvfsim/scheduler.hpp>
#include <dvfsim/workload.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dvfsim {

enum class DomainPreset { wide, narrow };
enum class ReportFormat { csv, json };

const ScalingDomain& domain_for(DomainPreset preset);
const char* to_string(DomainPreset preset);
DomainPreset domain_preset_from_string(const std::string& name);

/// A sweep over algorithm x pairs-per-server x theta x utilization x dvfs x
/// seed cells. Every cell of one (utilization, seed) combination runs on the
/// same generated task set; savings are measured against the non-DVFS l=1
/// run of that task set. In online mode the utilization axis drives the
/// arrival stream and the initial batch stays at `u_off`.
struct ExperimentSpec {
    Mode mode = Mode::offline;
    std::vector<Algorithm> algorithms{Algorithm::edl};
    std::vector<int> pairs_per_server{1};
    std::vector<double> thetas{1.0};
    std::vector<double> utilizations{0.4};
    std::vector<std::uint64_t> seeds{1};
    std::vector<bool> dvfs{true};
    DomainPreset domain = DomainPreset::wide;

    int total_pairs = 256;
    int horizon = 1440;
    double u_off = 0.4;
    int library_size = 20;
    std::uint64_t library_seed = 20;
    double baseline_pairs = 0.0; ///< 0 picks total_pairs / 2
    double idle_power = 37.0;
    double turn_on_cost = 90.0;
    int sleep_slots = 0; ///< 0 derives floor(turn_on_cost / idle_power)
    int workers = 1;
    bool timings = false; ///< emit measured wall time (breaks byte-identity)

    void validate() const;
    double resolved_baseline_pairs() const {
        return baseline_pairs > 0.0 ? baseline_pairs : total_pairs / 2.0;
    }
    int resolved_sleep_slots() const {
        return sleep_slots > 0
                   ? sleep_slots
                   : ClusterConfig::derived_sleep_slots(turn_on_cost, idle_power);
    }
};

struct RunRow {
    Mode mode = Mode::offline;
    Algorithm algorithm = Algorithm::edl;
    bool dvfs = true;
    int pairs_per_server = 1;
    double theta = 1.0;
    double utilization = 0.0;
    std::uint64_t seed = 0;
    double e_run = 0.0;
    double e_idle = 0.0;
    double e_overhead = 0.0;
    double e_total = 0.0;
    int occupied_pairs = 0;
    int max_servers = 0;
    int infeasible = 0;
    double savings_total = 0.0; ///< 1 - e_total / baseline e_total
    double savings_run = 0.0;   ///< 1 - e_run / baseline e_run
    double wall_ms = 0.0;
    std::string error; ///< non-empty when the run failed
};

struct AggregateRow {
    Algorithm algorithm = Algorithm::edl;
    bool dvfs = true;
    int pairs_per_server = 1;
    double theta = 1.0;
    double utilization = 0.0;
    int count = 0;
    double mean_e_run = 0.0, sd_e_run = 0.0;
    double mean_e_idle = 0.0, sd_e_idle = 0.0;
    double mean_e_overhead = 0.0, sd_e_overhead = 0.0;
    double mean_e_total = 0.0, sd_e_total = 0.0;
    double mean_savings_total = 0.0, sd_savings_total = 0.0;
    double mean_savings_run = 0.0, sd_savings_run = 0.0;
};

struct RunReport {
    ExperimentSpec spec;
    std::vector<RunRow> rows;
    std::vector<AggregateRow> aggregates;

    bool partial() const; ///< any failed run or infeasible task
};

RunReport run_experiment(const ExperimentSpec& spec);

void write_report_csv(const RunReport& report, std::ostream& out);
void write_report_json(const RunReport& report, std::ostream& out);

} // namespace dvfsim

#endif
