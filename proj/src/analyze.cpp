#include "aoinet/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "aoinet/age.hpp"
#include "aoinet/sim/metrics.hpp"

namespace aoinet::analyze {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.push_back("");
    }
    return out;
}

void check_header(const std::string& got, const std::string& want, const std::string& filename) {
    const auto g = split_csv_line(got);
    const auto w = split_csv_line(want);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i >= g.size() || g[i] != w[i]) {
            throw std::runtime_error(filename + ": schema mismatch at column " +
                                     std::to_string(i + 1) + ": expected '" + w[i] + "', got '" +
                                     (i < g.size() ? g[i] : "<missing>") + "'");
        }
    }
    if (g.size() != w.size()) {
        throw std::runtime_error(filename + ": schema mismatch: unexpected extra column '" +
                                 g[w.size()] + "'");
    }
}

}  // namespace

std::vector<RunRow> read_runs_csv(std::istream& in, const std::string& filename) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(filename + ": empty file");
    }
    check_header(line, sim::csv_header(), filename);
    std::vector<RunRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 13) {
            throw std::runtime_error(filename + ":" + std::to_string(lineno) +
                                     ": expected 13 fields, got " + std::to_string(f.size()));
        }
        RunRow r;
        try {
            r.config_hash = f[0];
            r.policy = f[1];
            r.access = f[2];
            r.queue = f[3];
            r.n_sources = static_cast<std::uint32_t>(std::stoul(f[4]));
            r.lambda_hz = std::stod(f[5]);
            r.seed = std::stoull(f[6]);
            r.horizon_s = std::stod(f[7]);
            r.naoi_s = std::stod(f[8]);
            r.throughput_bps = std::stod(f[9]);
            r.deliveries = std::stoull(f[10]);
            r.drops = std::stoull(f[11]);
            r.timeouts = std::stoull(f[12]);
        } catch (const std::exception&) {
            throw std::runtime_error(filename + ":" + std::to_string(lineno) + ": bad field");
        }
        rows.push_back(r);
    }
    return rows;
}

bool GroupKey::operator<(const GroupKey& other) const {
    if (n_sources != other.n_sources) return n_sources < other.n_sources;
    if (lambda_hz != other.lambda_hz) return lambda_hz < other.lambda_hz;
    return system < other.system;
}

static std::string system_of(const RunRow& r) {
    return r.policy + "/" + r.access + "/" + r.queue;
}

std::vector<GroupStats> summarize(const std::vector<RunRow>& rows) {
    std::map<GroupKey, std::vector<const RunRow*>> groups;
    for (const RunRow& r : rows) {
        groups[GroupKey{system_of(r), r.n_sources, r.lambda_hz}].push_back(&r);
    }
    std::vector<GroupStats> out;
    for (const auto& [key, members] : groups) {
        GroupStats g;
        g.key = key;
        g.runs = members.size();
        for (const RunRow* r : members) {
            g.naoi_mean += r->naoi_s;
            g.throughput_mean += r->throughput_bps;
        }
        g.naoi_mean /= static_cast<double>(members.size());
        g.throughput_mean /= static_cast<double>(members.size());
        if (members.size() > 1) {
            double ss = 0.0;
            for (const RunRow* r : members) {
                ss += (r->naoi_s - g.naoi_mean) * (r->naoi_s - g.naoi_mean);
            }
            g.naoi_std = std::sqrt(ss / static_cast<double>(members.size() - 1));
        }
        out.push_back(g);
    }
    return out;
}

std::vector<RatioRow> improvement_ratios(const std::vector<GroupStats>& groups,
                                         const std::optional<std::string>& baseline_system) {
    // bucket by experiment point
    std::map<std::pair<std::uint32_t, double>, std::vector<const GroupStats*>> points;
    for (const GroupStats& g : groups) {
        points[{g.key.n_sources, g.key.lambda_hz}].push_back(&g);
    }
    std::vector<RatioRow> out;
    for (const auto& [point, members] : points) {
        const GroupStats* base = nullptr;
        if (baseline_system) {
            for (const GroupStats* g : members) {
                if (g->key.system == *baseline_system) base = g;
            }
        } else {
            for (const GroupStats* g : members) {
                if (!base || g->naoi_mean > base->naoi_mean) base = g;
            }
        }
        if (!base || base->naoi_mean <= 0.0) continue;
        for (const GroupStats* g : members) {
            if (g == base || g->naoi_mean <= 0.0) continue;
            out.push_back(RatioRow{g->key, base->key.system, base->naoi_mean / g->naoi_mean});
        }
    }
    return out;
}

std::optional<LinearFit> fit_naoi_vs_n(const std::vector<RunRow>& rows,
                                       const std::string& system) {
    std::vector<std::pair<double, double>> pts;
    for (const RunRow& r : rows) {
        if (system_of(r) == system) {
            pts.emplace_back(static_cast<double>(r.n_sources), r.naoi_s);
        }
    }
    if (pts.size() < 2) {
        return std::nullopt;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        return std::nullopt;
    }
    LinearFit fit;
    fit.system = system;
    fit.points = pts.size();
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (const auto& [x, y] : pts) {
        const double pred = fit.slope * x + fit.intercept;
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - ymean) * (y - ymean);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

std::string mm1_csv_header() { return "rho,mu,discipline,kind,age_s,deliveries,seed"; }

std::string mm1_csv_row(const Mm1Row& row) {
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%s,%s,%.9g,%llu,%llu", row.rho, row.mu,
                  row.discipline.c_str(), row.kind.c_str(), row.age_s,
                  static_cast<unsigned long long>(row.deliveries),
                  static_cast<unsigned long long>(row.seed));
    return std::string(buf);
}

std::vector<Mm1Row> read_mm1_csv(std::istream& in, const std::string& filename) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(filename + ": empty file");
    }
    check_header(line, mm1_csv_header(), filename);
    std::vector<Mm1Row> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) {
            throw std::runtime_error(filename + ":" + std::to_string(lineno) + ": bad row");
        }
        Mm1Row r;
        r.rho = std::stod(f[0]);
        r.mu = std::stod(f[1]);
        r.discipline = f[2];
        r.kind = f[3];
        r.age_s = std::stod(f[4]);
        r.deliveries = std::stoull(f[5]);
        r.seed = std::stoull(f[6]);
        rows.push_back(r);
    }
    return rows;
}

std::vector<Mm1Summary> summarize_mm1(const std::vector<Mm1Row>& rows) {
    std::map<std::string, Mm1Summary> by_disc;
    for (const Mm1Row& r : rows) {
        if (r.kind != "oracle") continue;
        auto [it, fresh] = by_disc.try_emplace(r.discipline);
        Mm1Summary& s = it->second;
        if (fresh || r.age_s < s.min_age_s) {
            s.discipline = r.discipline;
            s.argmin_rho = r.rho;
            s.min_age_s = r.age_s;
        }
    }
    for (const Mm1Row& r : rows) {
        if (r.kind != "sim") continue;
        for (const Mm1Row& o : rows) {
            if (o.kind == "oracle" && o.discipline == r.discipline && o.rho == r.rho &&
                o.age_s > 0.0) {
                auto it = by_disc.find(r.discipline);
                if (it != by_disc.end()) {
                    it->second.max_rel_error = std::max(
                        it->second.max_rel_error, std::abs(r.age_s - o.age_s) / o.age_s);
                }
            }
        }
    }
    std::vector<Mm1Summary> out;
    for (const auto& [disc, summary] : by_disc) {
        out.push_back(summary);
    }
    return out;
}

double naoi_from_deliveries(std::istream& in, const std::string& filename, double horizon_s) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(filename + ": empty file");
    }
    check_header(line, "instance_id,gen_us,recv_us", filename);
    std::map<InstanceId, AgeTracker> trackers;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) {
            throw std::runtime_error(filename + ":" + std::to_string(lineno) + ": bad row");
        }
        const InstanceId id = static_cast<InstanceId>(std::stoul(f[0]));
        const Timestamp gen{std::stoull(f[1])};
        const Timestamp recv{std::stoull(f[2])};
        // The first row for an instance marks its registration: the tracker
        // is born there with the virtual fresh delivery, matching the live
        // destination.
        auto [it, fresh] = trackers.try_emplace(id, recv);
        if (!fresh) {
            it->second.observe_delivery(gen, recv);
        }
    }
    if (trackers.empty()) {
        return 0.0;
    }
    const Timestamp horizon = Timestamp::from_seconds(horizon_s);
    for (auto& [id, t] : trackers) {
        t.advance_to(horizon);
    }
    return naoi(trackers, horizon).naoi;
}

}  // namespace aoinet::analyze
