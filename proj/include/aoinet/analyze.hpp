#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aoinet::analyze {

/// One row of the shared runs CSV.
struct RunRow {
    std::string config_hash;
    std::string policy;
    std::string access;
    std::string queue;
    std::uint32_t n_sources = 0;
    double lambda_hz = 0.0;
    std::uint64_t seed = 0;
    double horizon_s = 0.0;
    double naoi_s = 0.0;
    double throughput_bps = 0.0;
    std::uint64_t deliveries = 0;
    std::uint64_t drops = 0;
    std::uint64_t timeouts = 0;
};

/// Reads rows, insisting on the exact schema. Throws std::runtime_error
/// naming the first mismatched column.
std::vector<RunRow> read_runs_csv(std::istream& in, const std::string& filename);

/// (policy, access, queue) system label plus the experiment point.
struct GroupKey {
    std::string system;  // "policy/access/queue"
    std::uint32_t n_sources = 0;
    double lambda_hz = 0.0;

    bool operator<(const GroupKey& other) const;
};

struct GroupStats {
    GroupKey key;
    std::size_t runs = 0;
    double naoi_mean = 0.0;
    double naoi_std = 0.0;  // sample standard deviation across seeds
    double throughput_mean = 0.0;
};

std::vector<GroupStats> summarize(const std::vector<RunRow>& rows);

/// NAoI ratio of every system against a baseline at the same experiment
/// point. Default baseline: the system with the highest mean NAoI at that
/// point.
struct RatioRow {
    GroupKey key;
    std::string baseline;
    double ratio = 0.0;  // baseline / this system (improvement factor)
};

std::vector<RatioRow> improvement_ratios(const std::vector<GroupStats>& groups,
                                         const std::optional<std::string>& baseline_system);

/// Least-squares fit of NAoI against n_sources for one system label, over
/// per-seed rows.
struct LinearFit {
    std::string system;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

std::optional<LinearFit> fit_naoi_vs_n(const std::vector<RunRow>& rows,
                                       const std::string& system);

/// M/M/1 sweep table (from the mm1 subcommand).
struct Mm1Row {
    double rho = 0.0;
    double mu = 0.0;
    std::string discipline;  // fcfs | lcfs1
    std::string kind;        // oracle | sim
    double age_s = 0.0;
    std::uint64_t deliveries = 0;
    std::uint64_t seed = 0;
};

std::string mm1_csv_header();
std::string mm1_csv_row(const Mm1Row& row);
std::vector<Mm1Row> read_mm1_csv(std::istream& in, const std::string& filename);

struct Mm1Summary {
    std::string discipline;
    double argmin_rho = 0.0;       // over oracle rows
    double min_age_s = 0.0;
    double max_rel_error = 0.0;    // sim vs oracle at matching rho
};

std::vector<Mm1Summary> summarize_mm1(const std::vector<Mm1Row>& rows);

/// Raw delivery log (instance_id, gen_us, recv_us): recompute the network
/// average age over [0, horizon] from first principles.
double naoi_from_deliveries(std::istream& in, const std::string& filename, double horizon_s);

}  // namespace aoinet::analyze
