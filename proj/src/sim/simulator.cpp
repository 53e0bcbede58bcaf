#include "aoinet/sim/simulator.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "aoinet/age.hpp"
#include "aoinet/sim/event_queue.hpp"
#include "aoinet/sim/rng.hpp"

namespace aoinet::sim {

namespace {

std::string stream_name(const char* prefix, InstanceId id) {
    return std::string(prefix) + ":" + std::to_string(id);
}

void fill_identity(MetricsLog& log, const SimConfig& cfg) {
    log.config_hash = cfg.config_hash();
    log.policy = cfg.policy_label();
    log.access = access_name(cfg.access);
    log.queue = cfg.queue_label();
    log.n_sources = static_cast<std::uint32_t>(cfg.sources.size());
    log.lambda_hz = cfg.mean_rate_hz();
    log.seed = cfg.seed;
    log.horizon_s = cfg.horizon.seconds();
}

// ------------------------------------------------------------- polling sim

class PollingSim {
public:
    PollingSim(const SimConfig& cfg, std::vector<TraceEntry>* trace) : cfg_(cfg), trace_(trace) {
        DestinationMachine::Config dcfg;
        dcfg.policy = cfg.policy;
        dcfg.estimator_window = Duration::from_seconds(cfg.estimator_window_s);
        dcfg.abandon_after_timeouts = cfg.abandon_after_timeouts;
        dest_.emplace(dcfg);
        for (const SourceSpec& spec : cfg.sources) {
            const InstanceId id = make_instance_id(spec.source_id, spec.info_type);
            SourceMachine::Config scfg;
            scfg.source_id = spec.source_id;
            scfg.info_type = spec.info_type;
            scfg.mtu_payload = cfg.mtu_payload;
            scfg.queue = cfg.queue;
            instances_.emplace(id, Runtime{spec, SourceMachine(scfg),
                                           Stream(cfg.seed, stream_name("traffic", id)),
                                           Stream(cfg.seed, stream_name("channel", id))});
            dest_->register_instance(id, Timestamp{0});
        }
        timeout_us_ = cfg.effective_timeout_us();
    }

    MetricsLog run() {
        for (auto& [id, rt] : instances_) {
            schedule_arrival(id, first_interarrival(rt));
        }
        DestinationMachine::StepResult first = dest_->start(Timestamp{0});
        record_trace(TraceEntry{TraceEntry::Kind::DestStart, first.poll->instance(), Timestamp{0},
                                {}, {}, first.poll});
        handle_result(std::move(first), Timestamp{0});

        while (!queue_.empty() && queue_.next_time() <= cfg_.horizon) {
            queue_.run_next();
        }
        return collect();
    }

private:
    struct Runtime {
        SourceSpec spec;
        SourceMachine machine;
        Stream traffic;
        Stream channel;
        std::uint64_t generated = 0;
        std::uint64_t lost_data = 0;      // channel-lost complete updates
        std::uint64_t inflight_data = 0;  // scheduled receptions not yet processed
    };

    void record_trace(TraceEntry entry) {
        if (trace_) {
            trace_->push_back(std::move(entry));
        }
    }

    Duration first_interarrival(Runtime& rt) const { return interarrival(rt); }

    Duration interarrival(Runtime& rt) const {
        if (rt.spec.traffic.kind == TrafficSpec::Kind::Poisson) {
            return Duration::from_seconds(rt.traffic.exponential(rt.spec.traffic.rate_hz));
        }
        return Duration{static_cast<std::int64_t>(1e6 / rt.spec.traffic.rate_hz + 0.5)};
    }

    void schedule_arrival(InstanceId id, Duration delta) {
        const Timestamp at = queue_.now() + delta;
        queue_.schedule(at, EventClass::Arrival, [this, id](Timestamp t) {
            Runtime& rt = instances_.at(id);
            ++rt.generated;
            Update u;
            u.gen_timestamp = t;
            u.info_type = rt.spec.info_type;
            u.payload.assign(rt.spec.traffic.size_bytes, 0);
            record_trace(TraceEntry{TraceEntry::Kind::SourceUpdate, id, t, u, {}, std::nullopt});
            rt.machine.update_generated(std::move(u));
            schedule_arrival(id, interarrival(rt));
        });
    }

    void handle_result(DestinationMachine::StepResult&& result, Timestamp t) {
        if (!result.poll) {
            return;
        }
        const Packet poll = *result.poll;
        const InstanceId id = poll.instance();
        Runtime& rt = instances_.at(id);
        ++serial_;
        const std::uint64_t s = serial_;
        const bool poll_ok = !cfg_.poll_loss || rt.channel.bernoulli(rt.spec.channel_p);
        if (poll_ok) {
            queue_.schedule(t + Duration{static_cast<std::int64_t>(cfg_.timing.poll_tx_us)},
                            EventClass::Reception,
                            [this, poll](Timestamp t2) { source_poll(poll, t2); });
        }
        queue_.schedule(t + Duration{static_cast<std::int64_t>(timeout_us_)}, EventClass::Timer,
                        [this, s](Timestamp t2) { dest_timeout(s, t2); });
    }

    void source_poll(const Packet& poll, Timestamp t) {
        const InstanceId id = poll.instance();
        Runtime& rt = instances_.at(id);
        std::optional<Packet> resp = rt.machine.poll_received(poll, t);
        record_trace(TraceEntry{TraceEntry::Kind::SourcePoll, id, t, {}, poll, resp});
        if (!resp) {
            return;
        }
        const std::uint64_t tx = cfg_.timing.data_tx_us(resp->wire_size());
        const Timestamp arrive =
            t + Duration{static_cast<std::int64_t>(cfg_.timing.turnaround_us + tx)};
        if (rt.channel.bernoulli(rt.spec.channel_p)) {
            if (resp->kind == PacketKind::Data) {
                ++rt.inflight_data;
            }
            const std::uint64_t s = serial_;
            queue_.schedule(arrive, EventClass::Reception,
                            [this, r = std::move(*resp), s](Timestamp t2) { dest_receive(r, s, t2); });
        } else if (resp->kind == PacketKind::Data) {
            ++rt.lost_data;  // single-packet update gone; fragments are repolled
        }
    }

    void dest_receive(const Packet& packet, std::uint64_t serial, Timestamp t) {
        Runtime& rt = instances_.at(packet.instance());
        if (packet.kind == PacketKind::Data) {
            --rt.inflight_data;
        }
        if (serial != serial_) {
            // The destination already moved on; with a sane timeout this is
            // unreachable (the validator enforces timeout >= exchange time).
            if (packet.kind == PacketKind::Data) {
                ++rt.lost_data;
            }
            return;
        }
        DestinationMachine::StepResult result = dest_->on_received(packet, t);
        record_trace(TraceEntry{TraceEntry::Kind::DestReceived, packet.instance(), t, {}, packet,
                                result.poll});
        handle_result(std::move(result), t);
    }

    void dest_timeout(std::uint64_t serial, Timestamp t) {
        if (serial != serial_) {
            return;  // a response for this poll was already processed
        }
        DestinationMachine::StepResult result = dest_->on_timeout(t);
        record_trace(
            TraceEntry{TraceEntry::Kind::DestTimeout, result.poll->instance(), t, {}, {}, result.poll});
        handle_result(std::move(result), t);
    }

    MetricsLog collect() {
        dest_->finalize(cfg_.horizon);
        const NetworkAgeReport report = dest_->report(cfg_.horizon);

        MetricsLog log;
        fill_identity(log, cfg_);
        log.naoi_s = report.naoi;
        log.timeouts = dest_->timeout_count();

        std::uint64_t payload_total = 0;
        for (auto& [id, rt] : instances_) {
            const auto& counters = dest_->counters(id);
            InstanceMetrics m;
            m.id = id;
            m.avg_age_s = report.per_source_average.at(id);
            m.generated = rt.generated;
            m.delivered = counters.deliveries;
            m.dropped = rt.machine.queue_drop_count() + rt.lost_data;
            m.polls = counters.polls;
            m.timeouts = counters.timeouts;
            m.payload_bytes = counters.payload_bytes;
            m.queue_residual = rt.machine.queue_occupancy();
            const std::uint64_t released =
                rt.generated - rt.machine.queue_drop_count() - m.queue_residual;
            m.pending = released - m.delivered - rt.lost_data;
            log.per_instance.push_back(m);
            log.deliveries += m.delivered;
            log.drops += m.dropped;
            payload_total += m.payload_bytes;
        }
        log.throughput_bps = static_cast<double>(payload_total) * 8.0 / cfg_.horizon.seconds();
        return log;
    }

    const SimConfig& cfg_;
    std::vector<TraceEntry>* trace_;
    EventQueue queue_;
    std::optional<DestinationMachine> dest_;
    std::map<InstanceId, Runtime> instances_;
    std::uint64_t serial_ = 0;
    std::uint64_t timeout_us_ = 0;
};

// ------------------------------------------------------- random access sim

class RandomAccessSim {
public:
    explicit RandomAccessSim(const SimConfig& cfg) : cfg_(cfg) {
        slot_us_ = cfg.timing.data_tx_us(cfg.max_frame_bytes());
        for (const SourceSpec& spec : cfg.sources) {
            const InstanceId id = make_instance_id(spec.source_id, spec.info_type);
            RaSource src{spec,
                         Lcfs1Queue{},
                         FcfsQueue(cfg.queue.fcfs_capacity, cfg.queue.fcfs_drop),
                         Stream(cfg.seed, stream_name("traffic", id)),
                         Stream(cfg.seed, stream_name("channel", id)),
                         Stream(cfg.seed, stream_name("backoff", id)),
                         AgeTracker{},
                         cfg.random_access.min_cw};
            src.next_arrival = draw_interarrival(src, 0);
            sources_.emplace(id, std::move(src));
        }
    }

    MetricsLog run() {
        const std::uint64_t horizon = cfg_.horizon.us;
        std::vector<RaSource*> attempters;
        for (std::uint64_t t0 = 0; t0 + slot_us_ <= horizon; t0 += slot_us_) {
            const Timestamp t1{t0 + slot_us_};
            attempters.clear();
            for (auto& [id, src] : sources_) {
                ingest_arrivals(src, t0);
                acquire_frame(src);
                if (!src.frame) {
                    continue;
                }
                if (cfg_.random_access.fixed_attempt_prob) {
                    if (src.channel.bernoulli(*cfg_.random_access.fixed_attempt_prob)) {
                        attempters.push_back(&src);
                    }
                } else if (src.backoff == 0) {
                    attempters.push_back(&src);
                } else {
                    --src.backoff;
                }
            }
            if (attempters.size() == 1) {
                RaSource& src = *attempters.front();
                if (src.channel.bernoulli(src.spec.channel_p)) {
                    src.tracker.observe_delivery(src.frame->gen_timestamp, t1);
                    ++src.delivered;
                    src.payload_bytes += src.frame->size();
                    src.frame.reset();
                    src.cw = cfg_.random_access.min_cw;
                    src.retries = 0;
                } else {
                    fail(src);
                }
            } else if (attempters.size() >= 2) {
                ++collisions_;
                for (RaSource* src : attempters) {
                    fail(*src);
                }
            }
        }
        for (auto& [id, src] : sources_) {
            ingest_arrivals(src, horizon);
        }
        return collect();
    }

private:
    struct RaSource {
        SourceSpec spec;
        Lcfs1Queue lcfs;
        FcfsQueue fcfs;
        Stream traffic;
        Stream channel;
        Stream backoff_stream;
        AgeTracker tracker;
        std::uint32_t cw = 16;
        std::uint32_t backoff = 0;
        std::uint32_t retries = 0;
        std::optional<Update> frame{};
        std::uint64_t next_arrival = 0;
        std::uint64_t generated = 0;
        std::uint64_t retry_dropped = 0;
        std::uint64_t delivered = 0;
        std::uint64_t payload_bytes = 0;
    };

    std::uint64_t draw_interarrival(RaSource& src, std::uint64_t from) {
        if (src.spec.traffic.kind == TrafficSpec::Kind::Poisson) {
            return from + static_cast<std::uint64_t>(
                              src.traffic.exponential(src.spec.traffic.rate_hz) * 1e6 + 0.5);
        }
        return from + static_cast<std::uint64_t>(1e6 / src.spec.traffic.rate_hz + 0.5);
    }

    void ingest_arrivals(RaSource& src, std::uint64_t until) {
        while (src.next_arrival <= until) {
            Update u;
            u.gen_timestamp = Timestamp{src.next_arrival};
            u.info_type = src.spec.info_type;
            u.payload.assign(src.spec.traffic.size_bytes, 0);
            ++src.generated;
            if (cfg_.queue.kind == QueueSpec::Kind::Lcfs1) {
                src.lcfs.push(std::move(u));
            } else {
                src.fcfs.push(std::move(u));
            }
            src.next_arrival = draw_interarrival(src, src.next_arrival);
        }
    }

    void acquire_frame(RaSource& src) {
        if (src.frame) {
            return;
        }
        std::optional<Update> next =
            cfg_.queue.kind == QueueSpec::Kind::Lcfs1 ? src.lcfs.take() : src.fcfs.pop();
        if (!next) {
            return;
        }
        src.frame = std::move(next);
        src.retries = 0;
        src.cw = cfg_.random_access.min_cw;
        if (!cfg_.random_access.fixed_attempt_prob) {
            src.backoff = static_cast<std::uint32_t>(src.backoff_stream.below(src.cw));
        }
    }

    void fail(RaSource& src) {
        ++src.retries;
        if (src.retries > cfg_.random_access.max_retries) {
            ++src.retry_dropped;
            src.frame.reset();
            src.retries = 0;
            src.cw = cfg_.random_access.min_cw;
            return;
        }
        src.cw = std::min(src.cw * 2, cfg_.random_access.max_cw);
        if (!cfg_.random_access.fixed_attempt_prob) {
            src.backoff = static_cast<std::uint32_t>(src.backoff_stream.below(src.cw));
        }
    }

    MetricsLog collect() {
        MetricsLog log;
        fill_identity(log, cfg_);
        log.collisions = collisions_;

        std::map<InstanceId, AgeTracker> trackers;
        for (auto& [id, src] : sources_) {
            src.tracker.advance_to(cfg_.horizon);
            trackers.emplace(id, src.tracker);
        }
        const NetworkAgeReport report = naoi(trackers, cfg_.horizon);
        log.naoi_s = report.naoi;

        std::uint64_t payload_total = 0;
        for (auto& [id, src] : sources_) {
            InstanceMetrics m;
            m.id = id;
            m.avg_age_s = report.per_source_average.at(id);
            m.generated = src.generated;
            m.delivered = src.delivered;
            const std::uint64_t queue_drops = cfg_.queue.kind == QueueSpec::Kind::Lcfs1
                                                  ? src.lcfs.replaced_count() +
                                                        src.lcfs.stale_discard_count()
                                                  : src.fcfs.drop_count();
            m.dropped = queue_drops + src.retry_dropped;
            m.payload_bytes = src.payload_bytes;
            m.queue_residual = cfg_.queue.kind == QueueSpec::Kind::Lcfs1
                                   ? (src.lcfs.empty() ? 0 : 1)
                                   : src.fcfs.size();
            m.pending = src.frame ? 1 : 0;
            log.per_instance.push_back(m);
            log.deliveries += m.delivered;
            log.drops += m.dropped;
            payload_total += m.payload_bytes;
        }
        log.throughput_bps = static_cast<double>(payload_total) * 8.0 / cfg_.horizon.seconds();
        return log;
    }

    const SimConfig& cfg_;
    std::map<InstanceId, RaSource> sources_;
    std::uint64_t slot_us_ = 0;
    std::uint64_t collisions_ = 0;
};

}  // namespace

MetricsLog run(const SimConfig& config, std::vector<TraceEntry>* trace) {
    const std::vector<std::string> errors = config.validate();
    if (!errors.empty()) {
        std::string what = "invalid simulation config:";
        for (const std::string& e : errors) {
            what += "\n  " + e;
        }
        throw std::invalid_argument(what);
    }
    if (config.access == AccessMode::Polling) {
        return PollingSim(config, trace).run();
    }
    return RandomAccessSim(config).run();
}

SimConfig sweep_point(const SimConfig& base, SweepAxis axis, double value, std::size_t index) {
    SimConfig cfg = base;
    cfg.seed = base.seed ^ static_cast<std::uint64_t>(index);
    switch (axis) {
        case SweepAxis::Lambda:
            for (SourceSpec& s : cfg.sources) {
                s.traffic.rate_hz = value;
            }
            break;
        case SweepAxis::NSources: {
            const std::size_t n = static_cast<std::size_t>(value);
            if (n == 0 || base.sources.empty()) {
                throw std::invalid_argument("sweep: n_sources points must be positive");
            }
            cfg.sources.clear();
            for (std::size_t i = 0; i < n; ++i) {
                SourceSpec s = base.sources[i % base.sources.size()];
                s.source_id = static_cast<std::uint16_t>(i + 1);
                cfg.sources.push_back(s);
            }
            break;
        }
        case SweepAxis::Capacity:
            cfg.queue.fcfs_capacity = static_cast<std::size_t>(value);
            break;
    }
    return cfg;
}

SweepResult sweep(const SimConfig& base, SweepAxis axis, const std::vector<double>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("sweep: empty grid");
    }
    SweepResult result;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            result.rows.push_back(run(sweep_point(base, axis, grid[i], i)));
        } catch (const std::exception& e) {
            result.errors.push_back(SweepPointError{i, grid[i], e.what()});
        }
    }
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = csv_header() + "\n";
    for (const MetricsLog& row : result.rows) {
        out += csv_row(row) + "\n";
    }
    return out;
}

}  // namespace aoinet::sim
