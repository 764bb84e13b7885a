#ifndef DVFSIM_WORKLOAD_HPP
#define DVFSIM_WORKLOAD_HPP

#include <dvfsim/rng.hpp>
#include <dvfsim/scheduler.hpp>
#include <dvfsim/task_model.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace dvfsim {

/// One synthetic benchmark application: power expressed through the default
/// power and two ratios, performance through the base-scale work split.
struct AppLibraryEntry {
    double p_star = 0.0;      ///< default power, in [175, 206]
    double gamma_ratio = 0.0; ///< gamma / p_star, in [0.1, 0.2]
    double p0_ratio = 0.0;    ///< p0 / p_star, in [0.20, 0.41]
    double delta = 0.0;       ///< core-frequency sensitivity, in [0.07, 0.91]
    double d_work = 0.0;      ///< base frequency-sensitive work, in [1.66, 7.61]
    double t0 = 0.0;          ///< base fixed time, in [0.1, 0.95]

    void validate() const;
};

/// Reproducible task-set generation. target_utilization is normalized so
/// that 1.0 means the summed task utilization equals `baseline_pairs`.
struct GeneratorConfig {
    std::uint64_t seed = 1;
    Mode mode = Mode::offline;
    double target_utilization = 0.4; ///< offline-mode target
    double u_off = 0.4;              ///< online mode: initial batch target
    double u_on = 1.6;               ///< online mode: arrival stream target
    int horizon = 1440;              ///< arrival slots, [1, horizon]
    int scale_min = 10;              ///< task length factor lower bound
    int scale_max = 50;              ///< task length factor upper bound
    double baseline_pairs = 1024.0;  ///< utilization normalization base

    void validate() const;
};

/// Samples `size` applications uniformly inside the published parameter
/// ranges. Deterministic per seed.
std::vector<AppLibraryEntry> build_library(std::uint64_t seed, int size);

struct GeneratedWorkload {
    std::vector<TaskProfile> tasks;
    std::vector<int> arrivals_per_slot; ///< n(T), T in [1, horizon]; empty offline
    int horizon = 0;
};

/// Draws tasks from the library until the summed utilization reaches the
/// target exactly (the last task's utilization is set to the residual).
/// Online mode generates the initial batch plus a Poisson arrival stream.
GeneratedWorkload generate_tasks(const std::vector<AppLibraryEntry>& library,
                                 const GeneratorConfig& config);

/// Per-slot arrival counts: Poisson at rate total/horizon, then adjusted
/// one slot at a time until the counts sum to exactly `total`.
std::vector<int> generate_arrivals(int total, int horizon, Rng& rng);

/// Task-set files: versioned header line, then one whitespace-separated
/// record per line with fields
///   id arrival deadline p0 gamma p_star t0 t_star delta
/// Round-trips are lossless; loading re-runs calibration and validation.
void save_tasks(std::ostream& out, std::span<const TaskProfile> tasks);
void save_tasks(const std::string& path, std::span<const TaskProfile> tasks);
std::vector<TaskProfile> load_tasks(std::istream& in);
std::vector<TaskProfile> load_tasks(const std::string& path);

/// Library files: same shape with fields
///   p_star gamma_ratio p0_ratio delta d_work t0
void save_library(std::ostream& out, std::span<const AppLibraryEntry> library);
void save_library(const std::string& path, std::span<const AppLibraryEntry> library);
std::vector<AppLibraryEntry> load_library(std::istream& in);
std::vector<AppLibraryEntry> load_library(const std::string& path);

} // namespace dvfsim

#endif
