// Command-line driver: per-task DVFS configuration tables, single simulation
// runs with event logs, parameter sweeps, and workload generation.

#include <dvfsim/experiment.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace dvfsim;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitPartial = 2;

std::unique_ptr<std::ofstream> file_sink;

std::ostream& open_sink(const std::string& path) {
    if (path.empty()) return std::cout;
    file_sink = std::make_unique<std::ofstream>(path);
    if (!*file_sink) throw Error("cannot open '" + path + "' for writing");
    return *file_sink;
}

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

struct OptimizeOptions {
    std::string tasks_path;
    std::string domain = "wide";
    std::string dvfs = "on";
    std::string format = "csv";
    std::string out;
};

int run_optimize(const OptimizeOptions& opt) {
    const auto tasks = load_tasks(opt.tasks_path);
    const ScalingDomain& domain =
        domain_for(domain_preset_from_string(opt.domain));
    const ConfiguredTaskSet configured =
        configure_tasks(tasks, domain, opt.dvfs != "off");

    std::ostream& out = open_sink(opt.out);
    if (opt.format == "json") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const OptimizedTask& t : configured.tasks) {
            nlohmann::ordered_json row;
            row["id"] = t.profile.id;
            row["priority"] = t.priority == Priority::deadline_prior
                                  ? "deadline-prior"
                                  : "energy-prior";
            row["voltage"] = t.setting.voltage;
            row["core_freq"] = t.setting.core_freq;
            row["mem_freq"] = t.setting.mem_freq;
            row["exec_time"] = t.exec;
            row["power"] = t.power;
            row["energy"] = t.energy();
            row["min_exec_time"] = t.min_exec;
            doc.push_back(std::move(row));
        }
        for (const InfeasibleTask& t : configured.infeasible) {
            nlohmann::ordered_json row;
            row["id"] = t.profile.id;
            row["priority"] = "infeasible";
            row["min_exec_time"] = t.min_exec;
            row["window"] = t.profile.slack();
            doc.push_back(std::move(row));
        }
        out << doc.dump(2) << '\n';
    } else {
        out << "id,priority,voltage,core_freq,mem_freq,exec_time,power,energy\n";
        for (const OptimizedTask& t : configured.tasks) {
            out << t.profile.id << ','
                << (t.priority == Priority::deadline_prior ? "deadline-prior"
                                                           : "energy-prior")
                << ',' << fmt(t.setting.voltage) << ','
                << fmt(t.setting.core_freq) << ',' << fmt(t.setting.mem_freq)
                << ',' << fmt(t.exec) << ',' << fmt(t.power) << ','
                << fmt(t.energy()) << '\n';
        }
        for (const InfeasibleTask& t : configured.infeasible)
            out << t.profile.id << ",infeasible,,,,,,\n";
    }
    return configured.infeasible.empty() ? kExitOk : kExitPartial;
}

struct ScheduleOptions {
    std::string tasks_path;
    std::string mode = "offline";
    std::string algorithm = "edl";
    double theta = 1.0;
    int pairs_per_server = 1;
    std::string dvfs = "on";
    std::string domain = "wide";
    int total_pairs = 256;
    int slots = 1440;
    double idle_power = 37.0;
    double turn_on_cost = 90.0;
    int sleep_slots = 0;
    double utilization = 0.4;
    double u_off = 0.4;
    std::uint64_t seed = 1;
    int library_size = 20;
    std::uint64_t library_seed = 20;
    double baseline_pairs = 0.0;
    bool events = false;
    std::string format = "json";
    std::string out;
};

int run_schedule(const ScheduleOptions& opt) {
    const Mode mode = mode_from_string(opt.mode);
    GeneratedWorkload workload;
    if (!opt.tasks_path.empty()) {
        workload.tasks = load_tasks(opt.tasks_path);
        workload.horizon = opt.slots;
    } else {
        GeneratorConfig gen;
        gen.seed = opt.seed;
        gen.mode = mode;
        gen.target_utilization = opt.utilization;
        gen.u_off = opt.u_off;
        gen.u_on = opt.utilization;
        gen.horizon = opt.slots;
        gen.baseline_pairs = opt.baseline_pairs > 0.0 ? opt.baseline_pairs
                                                      : opt.total_pairs / 2.0;
        workload =
            generate_tasks(build_library(opt.library_seed, opt.library_size), gen);
    }

    SchedulerConfig scheduler;
    scheduler.algorithm = algorithm_from_string(opt.algorithm);
    scheduler.theta = opt.theta;
    scheduler.dvfs = opt.dvfs != "off";
    scheduler.mode = mode;

    ClusterConfig cluster;
    cluster.total_pairs = opt.total_pairs;
    cluster.pairs_per_server = opt.pairs_per_server;
    cluster.idle_power = opt.idle_power;
    cluster.turn_on_cost = opt.turn_on_cost;
    cluster.sleep_slots =
        opt.sleep_slots > 0
            ? opt.sleep_slots
            : ClusterConfig::derived_sleep_slots(opt.turn_on_cost, opt.idle_power);

    const ScalingDomain& domain =
        domain_for(domain_preset_from_string(opt.domain));
    const ScheduleResult result = dvfsim::run_schedule(
        workload.tasks, workload.horizon, scheduler, cluster, domain);

    std::ostream& out = open_sink(opt.out);
    if (opt.format == "json") {
        nlohmann::ordered_json doc;
        doc["mode"] = opt.mode;
        doc["algorithm"] = opt.algorithm;
        doc["theta"] = opt.theta;
        doc["pairs_per_server"] = opt.pairs_per_server;
        doc["dvfs"] = scheduler.dvfs;
        nlohmann::ordered_json ledger;
        ledger["e_run"] = result.ledger.e_run;
        ledger["e_idle"] = result.ledger.e_idle;
        ledger["e_overhead"] = result.ledger.e_overhead;
        ledger["e_total"] = result.ledger.e_total();
        ledger["turn_on_count"] = result.ledger.turn_on_count;
        ledger["max_servers"] = result.ledger.occupied_servers_max;
        doc["ledger"] = std::move(ledger);
        doc["occupied_pairs"] = result.placement.occupied_pairs;
        doc["infeasible"] = result.configured.infeasible.size();
        doc["rejected"] = result.rejected.size();
        nlohmann::ordered_json placement = nlohmann::ordered_json::array();
        for (const TaskPlacement& p : result.placement.tasks) {
            nlohmann::ordered_json row;
            row["task"] = p.task_id;
            row["pair"] = p.pair;
            row["start"] = p.start;
            row["exec_time"] = p.exec;
            row["voltage"] = p.setting.voltage;
            row["core_freq"] = p.setting.core_freq;
            row["mem_freq"] = p.setting.mem_freq;
            row["power"] = p.power;
            row["readjusted"] = p.readjusted;
            placement.push_back(std::move(row));
        }
        doc["placement"] = std::move(placement);
        if (opt.events) {
            nlohmann::ordered_json events = nlohmann::ordered_json::array();
            for (const Event& ev : result.log) {
                nlohmann::ordered_json row;
                row["time"] = ev.time;
                row["kind"] = to_string(ev.kind);
                row["pair"] = ev.pair;
                if (!ev.task.empty()) row["task"] = ev.task;
                row["energy"] = ev.energy;
                events.push_back(std::move(row));
            }
            doc["events"] = std::move(events);
        }
        out << doc.dump(2) << '\n';
    } else {
        out << "# e_run=" << fmt(result.ledger.e_run)
            << " e_idle=" << fmt(result.ledger.e_idle)
            << " e_overhead=" << fmt(result.ledger.e_overhead)
            << " e_total=" << fmt(result.ledger.e_total())
            << " m1=" << result.placement.occupied_pairs
            << " max_servers=" << result.ledger.occupied_servers_max
            << " infeasible=" << result.configured.infeasible.size()
            << " rejected=" << result.rejected.size() << '\n';
        out << "task,pair,start,exec_time,voltage,core_freq,mem_freq,power,readjusted\n";
        for (const TaskPlacement& p : result.placement.tasks)
            out << p.task_id << ',' << p.pair << ',' << fmt(p.start) << ','
                << fmt(p.exec) << ',' << fmt(p.setting.voltage) << ','
                << fmt(p.setting.core_freq) << ',' << fmt(p.setting.mem_freq)
                << ',' << fmt(p.power) << ',' << (p.readjusted ? 1 : 0) << '\n';
        if (opt.events) {
            out << "time,kind,pair,task,energy\n";
            for (const Event& ev : result.log)
                out << fmt(ev.time) << ',' << to_string(ev.kind) << ','
                    << ev.pair << ',' << ev.task << ',' << fmt(ev.energy)
                    << '\n';
        }
    }
    return result.configured.infeasible.empty() && result.rejected.empty()
               ? kExitOk
               : kExitPartial;
}

struct SweepOptions {
    std::string mode = "offline";
    std::vector<std::string> algorithms{"edl"};
    std::vector<int> pairs_per_server{1};
    std::vector<double> thetas{1.0};
    std::vector<double> utilizations{0.4};
    std::vector<std::uint64_t> seeds;
    int seed_count = 0;
    std::vector<std::string> dvfs{"on"};
    std::string domain = "wide";
    int total_pairs = 256;
    int slots = 1440;
    double u_off = 0.4;
    int library_size = 20;
    std::uint64_t library_seed = 20;
    double baseline_pairs = 0.0;
    double idle_power = 37.0;
    double turn_on_cost = 90.0;
    int sleep_slots = 0;
    int workers = 1;
    bool timings = false;
    std::string format = "csv";
    std::string out;
};

int run_sweep(const SweepOptions& opt) {
    ExperimentSpec spec;
    spec.mode = mode_from_string(opt.mode);
    spec.algorithms.clear();
    for (const std::string& name : opt.algorithms)
        spec.algorithms.push_back(algorithm_from_string(name));
    spec.pairs_per_server = opt.pairs_per_server;
    spec.thetas = opt.thetas;
    spec.utilizations = opt.utilizations;
    if (!opt.seeds.empty()) {
        spec.seeds = opt.seeds;
    } else {
        const int count = opt.seed_count > 0 ? opt.seed_count : 1;
        spec.seeds.clear();
        for (int s = 1; s <= count; ++s) spec.seeds.push_back(s);
    }
    spec.dvfs.clear();
    for (const std::string& flag : opt.dvfs) spec.dvfs.push_back(flag != "off");
    spec.domain = domain_preset_from_string(opt.domain);
    spec.total_pairs = opt.total_pairs;
    spec.horizon = opt.slots;
    spec.u_off = opt.u_off;
    spec.library_size = opt.library_size;
    spec.library_seed = opt.library_seed;
    spec.baseline_pairs = opt.baseline_pairs;
    spec.idle_power = opt.idle_power;
    spec.turn_on_cost = opt.turn_on_cost;
    spec.sleep_slots = opt.sleep_slots;
    spec.workers = opt.workers;
    spec.timings = opt.timings;

    const RunReport report = run_experiment(spec);
    std::ostream& out = open_sink(opt.out);
    if (opt.format == "json")
        write_report_json(report, out);
    else
        write_report_csv(report, out);
    return report.partial() ? kExitPartial : kExitOk;
}

struct GenOptions {
    std::string mode = "offline";
    double utilization = 0.4;
    double u_off = 0.4;
    std::uint64_t seed = 1;
    int slots = 1440;
    int library_size = 20;
    std::uint64_t library_seed = 20;
    double baseline_pairs = 128.0;
    int scale_min = 10;
    int scale_max = 50;
    std::string out;
    std::string library_out;
};

int run_gen(const GenOptions& opt) {
    GeneratorConfig gen;
    gen.seed = opt.seed;
    gen.mode = mode_from_string(opt.mode);
    gen.target_utilization = opt.utilization;
    gen.u_off = opt.u_off;
    gen.u_on = opt.utilization;
    gen.horizon = opt.slots;
    gen.scale_min = opt.scale_min;
    gen.scale_max = opt.scale_max;
    gen.baseline_pairs = opt.baseline_pairs;

    const auto library = build_library(opt.library_seed, opt.library_size);
    const GeneratedWorkload workload = generate_tasks(library, gen);
    save_tasks(opt.out, workload.tasks);
    if (!opt.library_out.empty()) save_library(opt.library_out, library);
    std::cerr << "wrote " << workload.tasks.size() << " tasks to " << opt.out
              << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-aware deadline scheduling simulator for CPU-GPU "
                 "clusters with GPU voltage/frequency scaling"};
    app.require_subcommand(1);
    app.set_config("--config", "", "configuration file; subcommand options live in [subcommand] sections");

    OptimizeOptions optimize;
    CLI::App* cmd_optimize = app.add_subcommand(
        "optimize", "Per-task voltage/frequency configuration table");

    cmd_optimize->add_option("tasks", optimize.tasks_path, "task-set file")
        ->required();
    cmd_optimize->add_option("--domain", optimize.domain, "wide|narrow");
    cmd_optimize->add_option("--dvfs", optimize.dvfs, "on|off");
    cmd_optimize->add_option("--format", optimize.format, "csv|json");
    cmd_optimize->add_option("--out", optimize.out, "output path (default stdout)");

    ScheduleOptions schedule;
    CLI::App* cmd_schedule =
        app.add_subcommand("schedule", "One simulation run with its event log");

    cmd_schedule->add_option("--tasks", schedule.tasks_path,
                             "task-set file (omit to generate)");
    cmd_schedule->add_option("--mode", schedule.mode, "offline|online");
    cmd_schedule->add_option("--algorithm", schedule.algorithm,
                             "edl|edf-bf|edf-wf|lpt-ff|bin-packing");
    cmd_schedule->add_option("--theta", schedule.theta, "deferral threshold (0,1]");
    cmd_schedule->add_option("--pairs-per-server", schedule.pairs_per_server,
                             "pairs per server (l)");
    cmd_schedule->add_option("--dvfs", schedule.dvfs, "on|off");
    cmd_schedule->add_option("--domain", schedule.domain, "wide|narrow");
    cmd_schedule->add_option("--total-pairs", schedule.total_pairs,
                             "cluster capacity in pairs");
    cmd_schedule->add_option("--slots", schedule.slots, "online horizon in slots");
    cmd_schedule->add_option("--idle-power", schedule.idle_power,
                             "idle power per pair");
    cmd_schedule->add_option("--turn-on-cost", schedule.turn_on_cost,
                             "turn-on energy per pair");
    cmd_schedule->add_option("--sleep-slots", schedule.sleep_slots,
                             "idle slots before sleep (0 = derived)");
    cmd_schedule->add_option("--utilization", schedule.utilization,
                             "generated task-set utilization");
    cmd_schedule->add_option("--u-off", schedule.u_off,
                             "online initial-batch utilization");
    cmd_schedule->add_option("--seed", schedule.seed, "generator seed");
    cmd_schedule->add_option("--library-size", schedule.library_size,
                             "application library size");
    cmd_schedule->add_option("--library-seed", schedule.library_seed,
                             "application library seed");
    cmd_schedule->add_option("--baseline-pairs", schedule.baseline_pairs,
                             "utilization normalization base (0 = total/2)");
    cmd_schedule->add_flag("--events", schedule.events, "include the event log");
    cmd_schedule->add_option("--format", schedule.format, "csv|json");
    cmd_schedule->add_option("--out", schedule.out, "output path (default stdout)");

    SweepOptions sweep;
    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "Parameter sweep producing a run report");

    cmd_sweep->add_option("--mode", sweep.mode, "offline|online");
    cmd_sweep->add_option("--algorithm", sweep.algorithms,
                          "algorithms to sweep");
    cmd_sweep->add_option("--pairs-per-server", sweep.pairs_per_server,
                          "l values to sweep");
    cmd_sweep->add_option("--theta", sweep.thetas, "theta values to sweep");
    cmd_sweep->add_option("--utilization", sweep.utilizations,
                          "utilization values to sweep");
    cmd_sweep->add_option("--seed", sweep.seeds, "explicit seed list");
    cmd_sweep->add_option("--seeds", sweep.seed_count,
                          "seed count (uses 1..N when --seed absent)");
    cmd_sweep->add_option("--dvfs", sweep.dvfs, "on and/or off");
    cmd_sweep->add_option("--domain", sweep.domain, "wide|narrow");
    cmd_sweep->add_option("--total-pairs", sweep.total_pairs,
                          "cluster capacity in pairs");
    cmd_sweep->add_option("--slots", sweep.slots, "online horizon in slots");
    cmd_sweep->add_option("--u-off", sweep.u_off,
                          "online initial-batch utilization");
    cmd_sweep->add_option("--library-size", sweep.library_size,
                          "application library size");
    cmd_sweep->add_option("--library-seed", sweep.library_seed,
                          "application library seed");
    cmd_sweep->add_option("--baseline-pairs", sweep.baseline_pairs,
                          "utilization normalization base (0 = total/2)");
    cmd_sweep->add_option("--idle-power", sweep.idle_power, "idle power per pair");
    cmd_sweep->add_option("--turn-on-cost", sweep.turn_on_cost,
                          "turn-on energy per pair");
    cmd_sweep->add_option("--sleep-slots", sweep.sleep_slots,
                          "idle slots before sleep (0 = derived)");
    cmd_sweep->add_option("--workers", sweep.workers, "concurrent runs");
    cmd_sweep->add_flag("--timings", sweep.timings,
                        "measure wall time per run (non-reproducible output)");
    cmd_sweep->add_option("--format", sweep.format, "csv|json");
    cmd_sweep->add_option("--out", sweep.out, "output path (default stdout)");

    GenOptions gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "Generate a task-set file");

    cmd_gen->add_option("--mode", gen.mode, "offline|online");
    cmd_gen->add_option("--utilization", gen.utilization,
                        "target utilization (online: arrival stream)");
    cmd_gen->add_option("--u-off", gen.u_off, "online initial-batch utilization");
    cmd_gen->add_option("--seed", gen.seed, "generator seed");
    cmd_gen->add_option("--slots", gen.slots, "online horizon in slots");
    cmd_gen->add_option("--library-size", gen.library_size,
                        "application library size");
    cmd_gen->add_option("--library-seed", gen.library_seed,
                        "application library seed");
    cmd_gen->add_option("--baseline-pairs", gen.baseline_pairs,
                        "utilization normalization base");
    cmd_gen->add_option("--scale-min", gen.scale_min, "task length factor minimum");
    cmd_gen->add_option("--scale-max", gen.scale_max, "task length factor maximum");
    cmd_gen->add_option("--out", gen.out, "task-set output path")->required();
    cmd_gen->add_option("--library-out", gen.library_out,
                        "also save the application library");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_optimize->parsed()) return run_optimize(optimize);
        if (cmd_schedule->parsed()) return run_schedule(schedule);
        if (cmd_sweep->parsed()) return run_sweep(sweep);
        if (cmd_gen->parsed()) return run_gen(gen);
    } catch (const dvfsim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitOk;
}
