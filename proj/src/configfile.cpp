#include "aoinet/configfile.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace aoinet {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Parsed {
    // section -> key -> entry
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::string filename;

    [[noreturn]] void fail(int line, const std::string& message) const {
        throw ConfigError(filename + ":" + std::to_string(line) + ": " + message);
    }
};

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Parsed tokenize(const std::string& text, const std::string& filename) {
    Parsed out;
    out.filename = filename;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                out.fail(lineno, "unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                out.fail(lineno, "empty section name");
            }
            out.sections[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            out.fail(lineno, "expected 'key = value'");
        }
        if (section.empty()) {
            out.fail(lineno, "key outside any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            out.fail(lineno, "empty key");
        }
        auto& sec = out.sections[section];
        if (sec.count(key)) {
            out.fail(lineno, "duplicate key '" + key + "'");
        }
        sec[key] = Entry{value, lineno, false};
    }
    return out;
}

class Reader {
public:
    Reader(Parsed& parsed, const std::string& section) : parsed_(parsed), section_(section) {}

    bool has(const std::string& key) const {
        auto sec = parsed_.sections.find(section_);
        return sec != parsed_.sections.end() && sec->second.count(key);
    }

    std::string str(const std::string& key, const std::string& fallback) {
        Entry* e = get(key);
        return e ? e->value : fallback;
    }

    double num(const std::string& key, double fallback) {
        Entry* e = get(key);
        if (!e) return fallback;
        try {
            std::size_t pos = 0;
            const double v = std::stod(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            parsed_.fail(e->line, "key '" + key + "': expected a number, got '" + e->value + "'");
        }
    }

    std::uint64_t uns(const std::string& key, std::uint64_t fallback) {
        Entry* e = get(key);
        if (!e) return fallback;
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            parsed_.fail(e->line,
                         "key '" + key + "': expected an unsigned integer, got '" + e->value + "'");
        }
    }

    bool boolean(const std::string& key, bool fallback) {
        Entry* e = get(key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1") return true;
        if (e->value == "false" || e->value == "0") return false;
        parsed_.fail(e->line, "key '" + key + "': expected true/false");
    }

    std::vector<std::string> list(const std::string& key, const std::string& fallback) {
        const std::string joined = str(key, fallback);
        std::vector<std::string> out;
        std::string item;
        std::istringstream in(joined);
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) {
        Entry* e = get(key);
        parsed_.fail(e ? e->line : 0, "key '" + key + "': " + message);
    }

private:
    Entry* get(const std::string& key) {
        auto sec = parsed_.sections.find(section_);
        if (sec == parsed_.sections.end()) return nullptr;
        auto it = sec->second.find(key);
        if (it == sec->second.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    Parsed& parsed_;
    std::string section_;
};

void reject_unknown(const Parsed& parsed, const std::vector<std::string>& known_sections) {
    for (const auto& [section, entries] : parsed.sections) {
        if (std::find(known_sections.begin(), known_sections.end(), section) ==
            known_sections.end()) {
            int line = entries.empty() ? 0 : entries.begin()->second.line;
            throw ConfigError(parsed.filename + ":" + std::to_string(line) +
                              ": unknown section [" + section + "]");
        }
        for (const auto& [key, entry] : entries) {
            if (!entry.used) {
                throw ConfigError(parsed.filename + ":" + std::to_string(entry.line) +
                                  ": unknown key '" + key + "' in [" + section + "]");
            }
        }
    }
}

sim::SimConfig parse_sim(Parsed& parsed) {
    sim::SimConfig cfg;
    Reader simr(parsed, "sim");
    const std::string access = simr.str("access", "polling");
    if (access == "polling") {
        cfg.access = sim::AccessMode::Polling;
    } else if (access == "random") {
        cfg.access = sim::AccessMode::RandomAccess;
    } else {
        simr.fail("access", "expected polling|random");
    }
    const std::string policy = simr.str("policy", "mw");
    if (policy == "mw") {
        cfg.policy = Policy::MaxWeight;
    } else if (policy == "maf") {
        cfg.policy = Policy::MaxAgeFirst;
    } else if (policy == "rr") {
        cfg.policy = Policy::RoundRobin;
    } else {
        simr.fail("policy", "expected mw|maf|rr");
    }
    cfg.horizon = Timestamp::from_seconds(simr.num("horizon_s", 10.0));
    cfg.mtu_payload = static_cast<std::uint32_t>(simr.uns("mtu_payload", 1400));
    cfg.estimator_window_s = simr.num("estimator_window_s", 0.5);
    cfg.poll_loss = simr.boolean("poll_loss", false);
    if (simr.has("timeout_us")) {
        cfg.timeout_us = simr.uns("timeout_us", 0);
    }
    cfg.abandon_after_timeouts =
        static_cast<std::uint32_t>(simr.uns("abandon_after_timeouts", 0));

    Reader queue(parsed, "queue");
    const std::string qkind = queue.str("kind", "lcfs1");
    if (qkind == "lcfs1") {
        cfg.queue.kind = QueueSpec::Kind::Lcfs1;
    } else if (qkind == "fcfs") {
        cfg.queue.kind = QueueSpec::Kind::Fcfs;
    } else {
        queue.fail("kind", "expected lcfs1|fcfs");
    }
    cfg.queue.fcfs_capacity = queue.uns("fcfs_capacity", 1000);
    const std::string drop = queue.str("fcfs_drop", "tail");
    if (drop == "tail") {
        cfg.queue.fcfs_drop = DropPolicy::TailDrop;
    } else if (drop == "head") {
        cfg.queue.fcfs_drop = DropPolicy::HeadDrop;
    } else {
        queue.fail("fcfs_drop", "expected tail|head");
    }

    Reader timing(parsed, "timing");
    cfg.timing.poll_tx_us = timing.uns("poll_tx_us", 30);
    cfg.timing.turnaround_us = timing.uns("turnaround_us", 10);
    cfg.timing.data_rate_bps = timing.num("data_rate_bps", 12e6);

    Reader ra(parsed, "random_access");
    if (ra.has("fixed_attempt_prob")) {
        cfg.random_access.fixed_attempt_prob = ra.num("fixed_attempt_prob", 0.0);
    }
    cfg.random_access.min_cw = static_cast<std::uint32_t>(ra.uns("min_cw", 16));
    cfg.random_access.max_cw = static_cast<std::uint32_t>(ra.uns("max_cw", 1024));
    cfg.random_access.max_retries = static_cast<std::uint32_t>(ra.uns("max_retries", 7));

    Reader sources(parsed, "sources");
    const std::uint64_t n = sources.uns("n", 1);
    sim::TrafficSpec traffic;
    const std::string tkind = sources.str("traffic", "poisson");
    if (tkind == "poisson") {
        traffic.kind = sim::TrafficSpec::Kind::Poisson;
    } else if (tkind == "periodic") {
        traffic.kind = sim::TrafficSpec::Kind::Periodic;
    } else {
        sources.fail("traffic", "expected poisson|periodic");
    }
    traffic.rate_hz = sources.num("rate_hz", 100.0);
    traffic.size_bytes = static_cast<std::uint32_t>(sources.uns("size_bytes", 150));
    std::vector<double> pattern;
    for (const std::string& tok : sources.list("p_pattern", sources.str("p", "1.0"))) {
        try {
            pattern.push_back(std::stod(tok));
        } catch (...) {
            sources.fail(sources.has("p_pattern") ? "p_pattern" : "p", "bad probability list");
        }
    }
    if (pattern.empty()) {
        pattern.push_back(1.0);
    }
    cfg.sources.clear();
    for (std::uint64_t i = 0; i < n; ++i) {
        sim::SourceSpec s;
        s.source_id = static_cast<std::uint16_t>(i + 1);
        s.info_type = 0;
        s.traffic = traffic;
        s.channel_p = pattern[i % pattern.size()];
        cfg.sources.push_back(s);
    }
    return cfg;
}

harness::HarnessConfig parse_harness(Parsed& parsed) {
    harness::HarnessConfig cfg;
    Reader h(parsed, "harness");
    const std::string role = h.str("role", "destination");
    if (role == "destination") {
        cfg.role = harness::Role::Destination;
    } else if (role == "source") {
        cfg.role = harness::Role::Source;
    } else {
        h.fail("role", "expected destination|source");
    }
    cfg.bind = h.str("bind", cfg.bind);
    cfg.peer = h.str("peer", cfg.peer);
    cfg.source_id = static_cast<std::uint16_t>(h.uns("source_id", 1));
    cfg.profiles = h.list("profiles", "gps");
    cfg.duration_s = h.num("duration_s", 60.0);
    cfg.timeout_ms = static_cast<std::uint32_t>(h.uns("timeout_ms", 300));
    cfg.sync_exchanges = static_cast<std::uint32_t>(h.uns("sync_exchanges", 8));
    cfg.mtu_payload = static_cast<std::uint32_t>(h.uns("mtu_payload", 1400));
    cfg.jitter = h.num("jitter", 0.1);
    cfg.resync_s = h.num("resync_s", 0.0);
    const std::string policy = h.str("policy", "mw");
    if (policy == "mw") {
        cfg.policy = Policy::MaxWeight;
    } else if (policy == "maf") {
        cfg.policy = Policy::MaxAgeFirst;
    } else if (policy == "rr") {
        cfg.policy = Policy::RoundRobin;
    } else {
        h.fail("policy", "expected mw|maf|rr");
    }
    cfg.window_s = h.num("window_s", 0.5);
    cfg.metrics_path = h.str("metrics_path", "");
    cfg.deliveries_path = h.str("deliveries_path", "");
    return cfg;
}

}  // namespace

ExperimentFile parse_experiment(const std::string& text, const std::string& filename) {
    Parsed parsed = tokenize(text, filename);
    ExperimentFile exp;

    Reader meta(parsed, "meta");
    const std::uint64_t seed = meta.uns("seed", 1);
    exp.git_describe = meta.str("git_describe", "");
    meta.str("config_hash", "");  // informational; recomputed on render

    const bool is_harness = parsed.sections.count("harness") != 0;
    if (is_harness) {
        exp.kind = ExperimentFile::Kind::Harness;
        exp.harness = parse_harness(parsed);
        exp.harness.seed = seed;
        reject_unknown(parsed, {"meta", "harness"});
        const auto errors = exp.harness.validate();
        if (!errors.empty()) {
            throw ConfigError(filename + ":0: invalid harness config: " + errors.front());
        }
    } else {
        exp.kind = ExperimentFile::Kind::Sim;
        exp.sim = parse_sim(parsed);
        exp.sim.seed = seed;
        reject_unknown(parsed, {"meta", "sim", "queue", "timing", "random_access", "sources"});
        const auto errors = exp.sim.validate();
        if (!errors.empty()) {
            throw ConfigError(filename + ":0: invalid sim config: " + errors.front());
        }
    }
    return exp;
}

ExperimentFile load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment(text.str(), path);
}

namespace {

std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

void render_sim(std::ostringstream& out, const sim::SimConfig& cfg) {
    // expressibility check: uniform sources (cycled channel pattern allowed)
    std::vector<double> pattern;
    for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
        const sim::SourceSpec& s = cfg.sources[i];
        if (s.source_id != i + 1 || s.info_type != 0 ||
            s.traffic.kind != cfg.sources[0].traffic.kind ||
            s.traffic.rate_hz != cfg.sources[0].traffic.rate_hz ||
            s.traffic.size_bytes != cfg.sources[0].traffic.size_bytes) {
            throw ConfigError("render: sources are not a uniform population");
        }
    }
    for (const sim::SourceSpec& s : cfg.sources) {
        pattern.push_back(s.channel_p);
    }
    // shrink the pattern to its shortest cycle
    for (std::size_t len = 1; len <= pattern.size(); ++len) {
        bool cycles = true;
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            if (pattern[i] != pattern[i % len]) {
                cycles = false;
                break;
            }
        }
        if (cycles) {
            pattern.resize(len);
            break;
        }
    }

    out << "[sim]\n";
    out << "access = " << access_name(cfg.access) << "\n";
    out << "policy = " << policy_name(cfg.policy) << "\n";
    out << "horizon_s = " << fmt_num(cfg.horizon.seconds()) << "\n";
    out << "mtu_payload = " << cfg.mtu_payload << "\n";
    out << "estimator_window_s = " << fmt_num(cfg.estimator_window_s) << "\n";
    out << "poll_loss = " << (cfg.poll_loss ? "true" : "false") << "\n";
    if (cfg.timeout_us) {
        out << "timeout_us = " << *cfg.timeout_us << "\n";
    }
    out << "abandon_after_timeouts = " << cfg.abandon_after_timeouts << "\n\n";

    out << "[queue]\n";
    out << "kind = " << (cfg.queue.kind == QueueSpec::Kind::Lcfs1 ? "lcfs1" : "fcfs") << "\n";
    out << "fcfs_capacity = " << cfg.queue.fcfs_capacity << "\n";
    out << "fcfs_drop = " << (cfg.queue.fcfs_drop == DropPolicy::TailDrop ? "tail" : "head")
        << "\n\n";

    out << "[timing]\n";
    out << "poll_tx_us = " << cfg.timing.poll_tx_us << "\n";
    out << "turnaround_us = " << cfg.timing.turnaround_us << "\n";
    out << "data_rate_bps = " << fmt_num(cfg.timing.data_rate_bps) << "\n\n";

    out << "[random_access]\n";
    if (cfg.random_access.fixed_attempt_prob) {
        out << "fixed_attempt_prob = " << fmt_num(*cfg.random_access.fixed_attempt_prob) << "\n";
    }
    out << "min_cw = " << cfg.random_access.min_cw << "\n";
    out << "max_cw = " << cfg.random_access.max_cw << "\n";
    out << "max_retries = " << cfg.random_access.max_retries << "\n\n";

    out << "[sources]\n";
    out << "n = " << cfg.sources.size() << "\n";
    out << "traffic = "
        << (cfg.sources[0].traffic.kind == sim::TrafficSpec::Kind::Poisson ? "poisson"
                                                                           : "periodic")
        << "\n";
    out << "rate_hz = " << fmt_num(cfg.sources[0].traffic.rate_hz) << "\n";
    out << "size_bytes = " << cfg.sources[0].traffic.size_bytes << "\n";
    if (pattern.size() == 1) {
        out << "p = " << fmt_num(pattern[0]) << "\n";
    } else {
        out << "p_pattern = ";
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            out << (i ? "," : "") << fmt_num(pattern[i]);
        }
        out << "\n";
    }
}

void render_harness(std::ostringstream& out, const harness::HarnessConfig& cfg) {
    out << "[harness]\n";
    out << "role = " << (cfg.role == harness::Role::Destination ? "destination" : "source")
        << "\n";
    out << "bind = " << cfg.bind << "\n";
    out << "peer = " << cfg.peer << "\n";
    out << "source_id = " << cfg.source_id << "\n";
    out << "profiles = ";
    for (std::size_t i = 0; i < cfg.profiles.size(); ++i) {
        out << (i ? "," : "") << cfg.profiles[i];
    }
    out << "\n";
    out << "duration_s = " << fmt_num(cfg.duration_s) << "\n";
    out << "timeout_ms = " << cfg.timeout_ms << "\n";
    out << "sync_exchanges = " << cfg.sync_exchanges << "\n";
    out << "mtu_payload = " << cfg.mtu_payload << "\n";
    out << "jitter = " << fmt_num(cfg.jitter) << "\n";
    out << "resync_s = " << fmt_num(cfg.resync_s) << "\n";
    out << "policy = " << policy_name(cfg.policy) << "\n";
    out << "window_s = " << fmt_num(cfg.window_s) << "\n";
    if (!cfg.metrics_path.empty()) {
        out << "metrics_path = " << cfg.metrics_path << "\n";
    }
    if (!cfg.deliveries_path.empty()) {
        out << "deliveries_path = " << cfg.deliveries_path << "\n";
    }
}

}  // namespace

std::string render_experiment(const ExperimentFile& exp) {
    std::ostringstream out;
    out << "[meta]\n";
    out << "seed = " << (exp.kind == ExperimentFile::Kind::Sim ? exp.sim.seed : exp.harness.seed)
        << "\n";
    if (!exp.git_describe.empty()) {
        out << "git_describe = " << exp.git_describe << "\n";
    }
    out << "config_hash = "
        << (exp.kind == ExperimentFile::Kind::Sim ? exp.sim.config_hash()
                                                  : exp.harness.config_hash())
        << "\n\n";
    if (exp.kind == ExperimentFile::Kind::Sim) {
        render_sim(out, exp.sim);
    } else {
        render_harness(out, exp.harness);
    }
    return out.str();
}

}  // namespace aoinet
