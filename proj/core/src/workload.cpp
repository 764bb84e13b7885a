#include <dvfsim/workload.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dvfsim {

namespace {

void check_range(const char* field, double value, double lo, double hi) {
    if (!(value >= lo) || !(value <= hi)) {
        std::ostringstream msg;
        msg << "value " << value << " outside [" << lo << ", " << hi << "]";
        throw ValidationError(field, msg.str());
    }
}

} // namespace

void AppLibraryEntry::validate() const {
    check_range("p_star", p_star, 175.0, 206.0);
    check_range("gamma_ratio", gamma_ratio, 0.1, 0.2);
    check_range("p0_ratio", p0_ratio, 0.20, 0.41);
    check_range("delta", delta, 0.07, 0.91);
    check_range("d_work", d_work, 1.66, 7.61);
    check_range("t0", t0, 0.1, 0.95);
}

void GeneratorConfig::validate() const {
    if (mode == Mode::offline && !(target_utilization > 0.0))
        throw ValidationError("utilization", "must be > 0");
    if (u_off < 0.0 || u_on < 0.0)
        throw ValidationError("utilization", "online targets must be >= 0");
    if (horizon < 1) throw ValidationError("horizon", "must be >= 1");
    if (scale_min < 1 || scale_min > scale_max)
        throw ValidationError("scale_range", "need 1 <= scale_min <= scale_max");
    if (!(baseline_pairs > 0.0))
        throw ValidationError("baseline_pairs", "must be > 0");
}

std::vector<AppLibraryEntry> build_library(std::uint64_t seed, int size) {
    if (size < 1) throw ValidationError("library_size", "must be >= 1");
    Rng rng(seed);
    std::vector<AppLibraryEntry> library(static_cast<std::size_t>(size));
    for (AppLibraryEntry& app : library) {
        app.p_star = rng.uniform(175.0, 206.0);
        app.gamma_ratio = rng.uniform(0.1, 0.2);
        app.p0_ratio = rng.uniform(0.20, 0.41);
        app.delta = rng.uniform(0.07, 0.91);
        app.d_work = rng.uniform(1.66, 7.61);
        app.t0 = rng.uniform(0.1, 0.95);
    }
    return library;
}

namespace {

struct Draw {
    const AppLibraryEntry* app;
    int scale;
    double utilization;
};

// Draws tasks until the summed utilization reaches `target` exactly; the
// final draw's utilization is replaced by the residual.
std::vector<Draw> draw_until(double target,
                             const std::vector<AppLibraryEntry>& library,
                             const GeneratorConfig& config, Rng& rng) {
    std::vector<Draw> draws;
    double remaining = target;
    while (remaining > 0.0) {
        Draw draw;
        draw.app = &library[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(library.size()) - 1))];
        draw.scale = static_cast<int>(rng.uniform_int(config.scale_min,
                                                      config.scale_max));
        double u = rng.uniform();
        while (u == 0.0) u = rng.uniform();
        if (u >= remaining) {
            draw.utilization = remaining;
            draws.push_back(draw);
            break;
        }
        draw.utilization = u;
        draws.push_back(draw);
        remaining -= u;
    }
    return draws;
}

TaskProfile materialize(const Draw& draw, double arrival, int index) {
    const AppLibraryEntry& app = *draw.app;
    const double t0 = draw.scale * app.t0;
    const double t_star = draw.scale * (app.t0 + app.d_work);
    const double deadline = arrival + t_star / draw.utilization;
    return calibrate("T" + std::to_string(index), app.p0_ratio * app.p_star,
                     app.p_star, app.gamma_ratio * app.p_star, t0, t_star,
                     app.delta, arrival, deadline);
}

} // namespace

std::vector<int> generate_arrivals(int total, int horizon, Rng& rng) {
    if (total < 0) throw ValidationError("arrivals", "must be >= 0");
    if (horizon < 1) throw ValidationError("horizon", "must be >= 1");
    std::vector<int> counts(static_cast<std::size_t>(horizon), 0);
    const double rate = static_cast<double>(total) / horizon;
    long sum = 0;
    for (int& n : counts) {
        n = rng.poisson(rate);
        sum += n;
    }
    while (sum < total) {
        ++counts[static_cast<std::size_t>(rng.uniform_int(0, horizon - 1))];
        ++sum;
    }
    while (sum > total) {
        auto& slot = counts[static_cast<std::size_t>(rng.uniform_int(0, horizon - 1))];
        if (slot > 0) {
            --slot;
            --sum;
        }
    }
    return counts;
}

GeneratedWorkload generate_tasks(const std::vector<AppLibraryEntry>& library,
                                 const GeneratorConfig& config) {
    config.validate();
    if (library.empty()) throw ValidationError("library", "must not be empty");
    for (const AppLibraryEntry& app : library) app.validate();

    Rng rng(config.seed);
    GeneratedWorkload out;
    out.horizon = config.horizon;

    if (config.mode == Mode::offline) {
        const double target = config.target_utilization * config.baseline_pairs;
        int index = 0;
        for (const Draw& draw : draw_until(target, library, config, rng))
            out.tasks.push_back(materialize(draw, 0.0, ++index));
        return out;
    }

    const std::vector<Draw> initial =
        draw_until(config.u_off * config.baseline_pairs, library, config, rng);
    const std::vector<Draw> stream =
        draw_until(config.u_on * config.baseline_pairs, library, config, rng);
    out.arrivals_per_slot = generate_arrivals(static_cast<int>(stream.size()),
                                              config.horizon, rng);
    int index = 0;
    for (const Draw& draw : initial)
        out.tasks.push_back(materialize(draw, 0.0, ++index));
    std::size_t next = 0;
    for (int slot = 1; slot <= config.horizon; ++slot)
        for (int i = 0; i < out.arrivals_per_slot[static_cast<std::size_t>(slot - 1)]; ++i)
            out.tasks.push_back(materialize(stream[next++], slot, ++index));
    return out;
}

namespace {

constexpr const char* kTaskMagic = "dvfsim-taskset";
constexpr const char* kLibraryMagic = "dvfsim-library";
constexpr int kFormatVersion = 1;

void check_header(std::istream& in, const char* magic) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty file, expected header", 1);
    std::istringstream fields(line);
    std::string name;
    int version = 0;
    if (!(fields >> name >> version) || name != magic)
        throw ParseError(std::string("expected header '") + magic + " <version>'", 1);
    if (version != kFormatVersion)
        throw ParseError("unsupported format version " + std::to_string(version), 1);
}

double parse_double(const std::string& token, const char* field, long line) {
    try {
        std::size_t used = 0;
        const double value = std::stod(token, &used);
        if (used != token.size())
            throw ParseError(std::string("bad number for '") + field + "'", line);
        return value;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad number for '") + field + "'", line);
    }
}

template <typename Fn>
void for_each_record(std::istream& in, const char* magic, Fn&& handle) {
    check_header(in, magic);
    std::string line;
    long number = 1;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        handle(line, number);
    }
}

} // namespace

void save_tasks(std::ostream& out, std::span<const TaskProfile> tasks) {
    out << kTaskMagic << ' ' << kFormatVersion << '\n';
    out << "# id arrival deadline p0 gamma p_star t0 t_star delta\n";
    out << std::setprecision(17);
    for (const TaskProfile& t : tasks) {
        out << t.id << ' ' << t.arrival << ' ' << t.deadline << ' '
            << t.base_power << ' ' << t.mem_power_coeff << ' '
            << t.default_power() << ' ' << t.fixed_time << ' '
            << t.default_time() << ' ' << t.core_weight << '\n';
    }
}

std::vector<TaskProfile> load_tasks(std::istream& in) {
    static const char* kFields[] = {"id",    "arrival", "deadline",
                                    "p0",    "gamma",   "p_star",
                                    "t0",    "t_star",  "delta"};
    std::vector<TaskProfile> tasks;
    for_each_record(in, kTaskMagic, [&](const std::string& line, long number) {
        std::istringstream fields(line);
        std::string token[9];
        for (int i = 0; i < 9; ++i)
            if (!(fields >> token[i]))
                throw ParseError(std::string("missing field '") + kFields[i] + "'",
                                 number);
        std::string extra;
        if (fields >> extra)
            throw ParseError("unexpected trailing field '" + extra + "'", number);
        double value[9] = {};
        for (int i = 1; i < 9; ++i)
            value[i] = parse_double(token[i], kFields[i], number);
        tasks.push_back(calibrate(token[0], value[3], value[5], value[4],
                                  value[6], value[7], value[8], value[1],
                                  value[2]));
    });
    return tasks;
}

void save_library(std::ostream& out, std::span<const AppLibraryEntry> library) {
    out << kLibraryMagic << ' ' << kFormatVersion << '\n';
    out << "# p_star gamma_ratio p0_ratio delta d_work t0\n";
    out << std::setprecision(17);
    for (const AppLibraryEntry& app : library) {
        out << app.p_star << ' ' << app.gamma_ratio << ' ' << app.p0_ratio
            << ' ' << app.delta << ' ' << app.d_work << ' ' << app.t0 << '\n';
    }
}

std::vector<AppLibraryEntry> load_library(std::istream& in) {
    static const char* kFields[] = {"p_star", "gamma_ratio", "p0_ratio",
                                    "delta",  "d_work",      "t0"};
    std::vector<AppLibraryEntry> library;
    for_each_record(in, kLibraryMagic, [&](const std::string& line, long number) {
        std::istringstream fields(line);
        std::string token[6];
        for (int i = 0; i < 6; ++i)
            if (!(fields >> token[i]))
                throw ParseError(std::string("missing field '") + kFields[i] + "'",
                                 number);
        std::string extra;
        if (fields >> extra)
            throw ParseError("unexpected trailing field '" + extra + "'", number);
        AppLibraryEntry app;
        app.p_star = parse_double(token[0], kFields[0], number);
        app.gamma_ratio = parse_double(token[1], kFields[1], number);
        app.p0_ratio = parse_double(token[2], kFields[2], number);
        app.delta = parse_double(token[3], kFields[3], number);
        app.d_work = parse_double(token[4], kFields[4], number);
        app.t0 = parse_double(token[5], kFields[5], number);
        app.validate();
        library.push_back(app);
    });
    return library;
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

void save_tasks(const std::string& path, std::span<const TaskProfile> tasks) {
    auto out = open_output(path);
    save_tasks(out, tasks);
}

std::vector<TaskProfile> load_tasks(const std::string& path) {
    auto in = open_input(path);
    return load_tasks(in);
}

void save_library(const std::string& path, std::span<const AppLibraryEntry> library) {
    auto out = open_output(path);
    save_library(out, library);
}

std::vector<AppLibraryEntry> load_library(const std::string& path) {
    auto in = open_input(path);
    return load_library(in);
}

} // namespace dvfsim
