#include <dvfsim/experiment.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace dvfsim {

const ScalingDomain& domain_for(DomainPreset preset) {
    static const ScalingDomain wide = ScalingDomain::wide();
    static const ScalingDomain narrow = ScalingDomain::narrow();
    return preset == DomainPreset::wide ? wide : narrow;
}

const char* to_string(DomainPreset preset) {
    return preset == DomainPreset::wide ? "wide" : "narrow";
}

DomainPreset domain_preset_from_string(const std::string& name) {
    if (name == "wide") return DomainPreset::wide;
    if (name == "narrow") return DomainPreset::narrow;
    throw ValidationError("domain", "unknown domain preset '" + name + "'");
}

void ExperimentSpec::validate() const {
    if (algorithms.empty() || pairs_per_server.empty() || thetas.empty() ||
        utilizations.empty() || seeds.empty() || dvfs.empty())
        throw ValidationError("spec", "every sweep axis needs at least one value");
    for (double theta : thetas)
        if (!(theta > 0.0) || theta > 1.0)
            throw ValidationError("theta", "must lie in (0, 1]");
    for (int l : pairs_per_server) {
        if (l <= 0) throw ValidationError("pairs_per_server", "must be positive");
        if (total_pairs % l != 0)
            throw ValidationError("pairs_per_server",
                                  "must divide total_pairs evenly");
    }
    for (double u : utilizations)
        if (!(u > 0.0)) throw ValidationError("utilization", "must be > 0");
    if (u_off < 0.0) throw ValidationError("u_off", "must be >= 0");
    if (total_pairs <= 0) throw ValidationError("total_pairs", "must be positive");
    if (horizon < 1) throw ValidationError("slots", "must be >= 1");
    if (workers < 1) throw ValidationError("workers", "must be >= 1");
    if (library_size < 1) throw ValidationError("library_size", "must be >= 1");
}

bool RunReport::partial() const {
    for (const RunRow& row : rows)
        if (!row.error.empty() || row.infeasible > 0) return true;
    return false;
}

namespace {

ClusterConfig cluster_for(const ExperimentSpec& spec, int pairs_per_server) {
    ClusterConfig cluster;
    cluster.total_pairs = spec.total_pairs;
    cluster.pairs_per_server = pairs_per_server;
    cluster.idle_power = spec.idle_power;
    cluster.turn_on_cost = spec.turn_on_cost;
    cluster.sleep_slots = spec.resolved_sleep_slots();
    return cluster;
}

GeneratorConfig generator_for(const ExperimentSpec& spec, double utilization,
                              std::uint64_t seed) {
    GeneratorConfig gen;
    gen.seed = seed;
    gen.mode = spec.mode;
    gen.horizon = spec.horizon;
    gen.baseline_pairs = spec.resolved_baseline_pairs();
    if (spec.mode == Mode::offline) {
        gen.target_utilization = utilization;
    } else {
        gen.u_off = spec.u_off;
        gen.u_on = utilization;
    }
    return gen;
}

struct CellKey {
    std::size_t algorithm, l, theta, dvfs;
};

} // namespace

RunReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    RunReport report;
    report.spec = spec;

    const auto library = build_library(spec.library_seed, spec.library_size);
    const ScalingDomain& domain = domain_for(spec.domain);

    const std::size_t n_alg = spec.algorithms.size();
    const std::size_t n_l = spec.pairs_per_server.size();
    const std::size_t n_theta = spec.thetas.size();
    const std::size_t n_dvfs = spec.dvfs.size();
    const std::size_t n_u = spec.utilizations.size();
    const std::size_t n_seed = spec.seeds.size();
    const std::size_t cells = n_alg * n_l * n_theta * n_dvfs * n_u;
    report.rows.resize(cells * n_seed);

    // Rows are laid out cell-major (algorithm, l, theta, dvfs, utilization)
    // with seeds innermost, so the report order is stable no matter how the
    // work is split across workers.
    auto row_index = [&](std::size_t a, std::size_t l, std::size_t t,
                         std::size_t d, std::size_t u, std::size_t s) {
        return ((((a * n_l + l) * n_theta + t) * n_dvfs + d) * n_u + u) * n_seed + s;
    };

    for (std::size_t a = 0; a < n_alg; ++a)
        for (std::size_t l = 0; l < n_l; ++l)
            for (std::size_t t = 0; t < n_theta; ++t)
                for (std::size_t d = 0; d < n_dvfs; ++d)
                    for (std::size_t u = 0; u < n_u; ++u)
                        for (std::size_t s = 0; s < n_seed; ++s) {
                            RunRow& row = report.rows[row_index(a, l, t, d, u, s)];
                            row.mode = spec.mode;
                            row.algorithm = spec.algorithms[a];
                            row.dvfs = spec.dvfs[d];
                            row.pairs_per_server = spec.pairs_per_server[l];
                            row.theta = spec.thetas[t];
                            row.utilization = spec.utilizations[u];
                            row.seed = spec.seeds[s];
                        }

    // One job per (utilization, seed): generates the task set, runs the
    // baseline, then fills every cell's row for that task set. A failure
    // before the per-cell runs marks the whole group.
    auto run_group = [&](std::size_t ui, std::size_t si) {
        const double utilization = spec.utilizations[ui];
        const std::uint64_t seed = spec.seeds[si];
        GeneratedWorkload workload;
        try {
            workload = generate_tasks(library, generator_for(spec, utilization, seed));
        } catch (const std::exception& e) {
            for (std::size_t a = 0; a < n_alg; ++a)
                for (std::size_t l = 0; l < n_l; ++l)
                    for (std::size_t t = 0; t < n_theta; ++t)
                        for (std::size_t d = 0; d < n_dvfs; ++d)
                            report.rows[row_index(a, l, t, d, ui, si)].error =
                                std::string("workload generation failed: ") +
                                e.what();
            return;
        }

        SchedulerConfig baseline_scheduler;
        baseline_scheduler.algorithm = Algorithm::edl;
        baseline_scheduler.theta = 1.0;
        baseline_scheduler.dvfs = false;
        baseline_scheduler.mode = spec.mode;
        double base_total = 0.0;
        double base_run = 0.0;
        std::string base_error;
        try {
            const ScheduleResult base =
                run_schedule(workload.tasks, workload.horizon, baseline_scheduler,
                             cluster_for(spec, 1), domain);
            base_total = base.ledger.e_total();
            base_run = base.ledger.e_run;
        } catch (const Error& e) {
            base_error = e.what();
        }

        for (std::size_t a = 0; a < n_alg; ++a)
            for (std::size_t l = 0; l < n_l; ++l)
                for (std::size_t t = 0; t < n_theta; ++t)
                    for (std::size_t d = 0; d < n_dvfs; ++d) {
                        RunRow& row =
                            report.rows[row_index(a, l, t, d, ui, si)];
                        SchedulerConfig scheduler;
                        scheduler.algorithm = spec.algorithms[a];
                        scheduler.theta = spec.thetas[t];
                        scheduler.dvfs = spec.dvfs[d];
                        scheduler.mode = spec.mode;
                        const auto started = std::chrono::steady_clock::now();
                        try {
                            const ScheduleResult run = run_schedule(
                                workload.tasks, workload.horizon, scheduler,
                                cluster_for(spec, spec.pairs_per_server[l]),
                                domain);
                            row.e_run = run.ledger.e_run;
                            row.e_idle = run.ledger.e_idle;
                            row.e_overhead = run.ledger.e_overhead;
                            row.e_total = run.ledger.e_total();
                            row.occupied_pairs = run.placement.occupied_pairs;
                            row.max_servers = run.ledger.occupied_servers_max;
                            row.infeasible =
                                static_cast<int>(run.configured.infeasible.size() +
                                                 run.rejected.size());
                            if (!base_error.empty()) {
                                row.error = "baseline failed: " + base_error;
                            } else {
                                if (base_total > 0.0)
                                    row.savings_total = 1.0 - row.e_total / base_total;
                                if (base_run > 0.0)
                                    row.savings_run = 1.0 - row.e_run / base_run;
                            }
                        } catch (const Error& e) {
                            row.error = e.what();
                        }
                        if (spec.timings) {
                            const auto elapsed =
                                std::chrono::steady_clock::now() - started;
                            row.wall_ms =
                                std::chrono::duration<double, std::milli>(elapsed)
                                    .count();
                        }
                    }
    };

    const std::size_t groups = n_u * n_seed;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(spec.workers), groups);
    if (workers <= 1) {
        for (std::size_t g = 0; g < groups; ++g) run_group(g / n_seed, g % n_seed);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t g = next.fetch_add(1); g < groups;
                     g = next.fetch_add(1))
                    run_group(g / n_seed, g % n_seed);
            });
        for (std::thread& thread : pool) thread.join();
    }

    // Aggregates: mean and sample standard deviation over seeds, per cell.
    for (std::size_t a = 0; a < n_alg; ++a)
        for (std::size_t l = 0; l < n_l; ++l)
            for (std::size_t t = 0; t < n_theta; ++t)
                for (std::size_t d = 0; d < n_dvfs; ++d)
                    for (std::size_t u = 0; u < n_u; ++u) {
                        AggregateRow agg;
                        agg.algorithm = spec.algorithms[a];
                        agg.dvfs = spec.dvfs[d];
                        agg.pairs_per_server = spec.pairs_per_server[l];
                        agg.theta = spec.thetas[t];
                        agg.utilization = spec.utilizations[u];
                        auto accumulate = [&](auto value_of, double& mean,
                                              double& sd) {
                            double sum = 0.0;
                            int n = 0;
                            for (std::size_t s = 0; s < n_seed; ++s) {
                                const RunRow& row =
                                    report.rows[row_index(a, l, t, d, u, s)];
                                if (!row.error.empty()) continue;
                                sum += value_of(row);
                                ++n;
                            }
                            if (n == 0) return;
                            mean = sum / n;
                            double ss = 0.0;
                            for (std::size_t s = 0; s < n_seed; ++s) {
                                const RunRow& row =
                                    report.rows[row_index(a, l, t, d, u, s)];
                                if (!row.error.empty()) continue;
                                const double diff = value_of(row) - mean;
                                ss += diff * diff;
                            }
                            sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
                            agg.count = n;
                        };
                        accumulate([](const RunRow& r) { return r.e_run; },
                                   agg.mean_e_run, agg.sd_e_run);
                        accumulate([](const RunRow& r) { return r.e_idle; },
                                   agg.mean_e_idle, agg.sd_e_idle);
                        accumulate([](const RunRow& r) { return r.e_overhead; },
                                   agg.mean_e_overhead, agg.sd_e_overhead);
                        accumulate([](const RunRow& r) { return r.e_total; },
                                   agg.mean_e_total, agg.sd_e_total);
                        accumulate([](const RunRow& r) { return r.savings_total; },
                                   agg.mean_savings_total, agg.sd_savings_total);
                        accumulate([](const RunRow& r) { return r.savings_run; },
                                   agg.mean_savings_run, agg.sd_savings_run);
                        report.aggregates.push_back(agg);
                    }
    return report;
}

namespace {

// Six significant digits, locale-independent.
std::string num(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

} // namespace

void write_report_csv(const RunReport& report, std::ostream& out) {
    out << "kind,mode,algorithm,dvfs,l,theta,utilization,seed,count,"
           "e_run,e_idle,e_overhead,e_total,m1,max_servers,infeasible,"
           "savings_total,savings_run,wall_ms,error\n";
    for (const RunRow& r : report.rows) {
        out << "run," << to_string(r.mode) << ',' << to_string(r.algorithm)
            << ',' << (r.dvfs ? "on" : "off") << ',' << r.pairs_per_server
            << ',' << num(r.theta) << ',' << num(r.utilization) << ','
            << r.seed << ",," << num(r.e_run) << ',' << num(r.e_idle) << ','
            << num(r.e_overhead) << ',' << num(r.e_total) << ','
            << r.occupied_pairs << ',' << r.max_servers << ',' << r.infeasible
            << ',' << num(r.savings_total) << ',' << num(r.savings_run) << ','
            << num(r.wall_ms) << ',' << r.error << '\n';
    }
    const char* mode = to_string(report.spec.mode);
    for (const AggregateRow& a : report.aggregates) {
        out << "mean," << mode << ',' << to_string(a.algorithm) << ','
            << (a.dvfs ? "on" : "off") << ',' << a.pairs_per_server << ','
            << num(a.theta) << ',' << num(a.utilization) << ",," << a.count
            << ',' << num(a.mean_e_run) << ',' << num(a.mean_e_idle) << ','
            << num(a.mean_e_overhead) << ',' << num(a.mean_e_total) << ",,,,"
            << num(a.mean_savings_total) << ',' << num(a.mean_savings_run)
            << ",,\n";
        out << "stddev," << mode << ',' << to_string(a.algorithm) << ','
            << (a.dvfs ? "on" : "off") << ',' << a.pairs_per_server << ','
            << num(a.theta) << ',' << num(a.utilization) << ",," << a.count
            << ',' << num(a.sd_e_run) << ',' << num(a.sd_e_idle) << ','
            << num(a.sd_e_overhead) << ',' << num(a.sd_e_total) << ",,,,"
            << num(a.sd_savings_total) << ',' << num(a.sd_savings_run)
            << ",,\n";
    }
}

void write_report_json(const RunReport& report, std::ostream& out) {
    nlohmann::ordered_json doc;
    const ExperimentSpec& spec = report.spec;
    nlohmann::ordered_json spec_json;
    spec_json["mode"] = to_string(spec.mode);
    {
        std::vector<std::string> names;
        for (Algorithm a : spec.algorithms) names.emplace_back(to_string(a));
        spec_json["algorithms"] = names;
    }
    spec_json["pairs_per_server"] = spec.pairs_per_server;
    spec_json["thetas"] = spec.thetas;
    spec_json["utilizations"] = spec.utilizations;
    spec_json["seeds"] = spec.seeds;
    spec_json["dvfs"] = spec.dvfs;
    spec_json["domain"] = to_string(spec.domain);
    spec_json["total_pairs"] = spec.total_pairs;
    spec_json["slots"] = spec.horizon;
    spec_json["u_off"] = spec.u_off;
    spec_json["library_size"] = spec.library_size;
    spec_json["library_seed"] = spec.library_seed;
    spec_json["baseline_pairs"] = spec.resolved_baseline_pairs();
    spec_json["idle_power"] = spec.idle_power;
    spec_json["turn_on_cost"] = spec.turn_on_cost;
    spec_json["sleep_slots"] = spec.resolved_sleep_slots();
    doc["spec"] = std::move(spec_json);

    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const RunRow& r : report.rows) {
        nlohmann::ordered_json row;
        row["mode"] = to_string(r.mode);
        row["algorithm"] = to_string(r.algorithm);
        row["dvfs"] = r.dvfs;
        row["l"] = r.pairs_per_server;
        row["theta"] = r.theta;
        row["utilization"] = r.utilization;
        row["seed"] = r.seed;
        row["e_run"] = r.e_run;
        row["e_idle"] = r.e_idle;
        row["e_overhead"] = r.e_overhead;
        row["e_total"] = r.e_total;
        row["m1"] = r.occupied_pairs;
        row["max_servers"] = r.max_servers;
        row["infeasible"] = r.infeasible;
        row["savings_total"] = r.savings_total;
        row["savings_run"] = r.savings_run;
        row["wall_ms"] = r.wall_ms;
        if (!r.error.empty()) row["error"] = r.error;
        runs.push_back(std::move(row));
    }
    doc["runs"] = std::move(runs);

    nlohmann::ordered_json aggregates = nlohmann::ordered_json::array();
    for (const AggregateRow& a : report.aggregates) {
        nlohmann::ordered_json row;
        row["algorithm"] = to_string(a.algorithm);
        row["dvfs"] = a.dvfs;
        row["l"] = a.pairs_per_server;
        row["theta"] = a.theta;
        row["utilization"] = a.utilization;
        row["count"] = a.count;
        row["mean_e_run"] = a.mean_e_run;
        row["sd_e_run"] = a.sd_e_run;
        row["mean_e_idle"] = a.mean_e_idle;
        row["sd_e_idle"] = a.sd_e_idle;
        row["mean_e_overhead"] = a.mean_e_overhead;
        row["sd_e_overhead"] = a.sd_e_overhead;
        row["mean_e_total"] = a.mean_e_total;
        row["sd_e_total"] = a.sd_e_total;
        row["mean_savings_total"] = a.mean_savings_total;
        row["sd_savings_total"] = a.sd_savings_total;
        row["mean_savings_run"] = a.mean_savings_run;
        row["sd_savings_run"] = a.sd_savings_run;
        aggregates.push_back(std::move(row));
    }
    doc["aggregates"] = std::move(aggregates);
    out << doc.dump(2) << '\n';
}

} // namespace dvfsim
