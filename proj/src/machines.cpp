#include "aoinet/machines.hpp"

#include <stdexcept>

namespace aoinet {

const char* policy_name(Policy p) {
    switch (p) {
        case Policy::MaxWeight: return "mw";
        case Policy::MaxAgeFirst: return "maf";
        case Policy::RoundRobin: return "rr";
    }
    return "?";
}

// ---------------------------------------------------------------- sources

SourceMachine::SourceMachine(Config config)
    : cfg_(config), fcfs_(config.queue.fcfs_capacity, config.queue.fcfs_drop) {}

void SourceMachine::update_generated(Update update) {
    update.info_type = cfg_.info_type;
    if (cfg_.queue.kind == QueueSpec::Kind::Lcfs1) {
        lcfs_.push(std::move(update));
    } else {
        fcfs_.push(std::move(update));
    }
}

Packet SourceMachine::empty_packet(Timestamp now) const {
    Packet p;
    p.kind = PacketKind::Empty;
    p.source_id = cfg_.source_id;
    p.info_type = cfg_.info_type;
    p.seq = next_seq_;
    p.gen_timestamp = now;
    return p;
}

Packet SourceMachine::serve_next(Timestamp now) {
    std::optional<Update> update = cfg_.queue.kind == QueueSpec::Kind::Lcfs1 ? lcfs_.take()
                                                                             : fcfs_.pop();
    if (!update) {
        return empty_packet(now);
    }
    std::vector<Packet> packets = fragment(*update, cfg_.source_id, next_seq_++, cfg_.mtu_payload);
    if (packets.size() == 1) {
        return packets[0];
    }
    stream_ = packets;
    frag_fifo_.clear();
    for (std::size_t i = 1; i < packets.size(); ++i) {
        frag_fifo_.push(packets[i]);
    }
    current_ = packets[0];
    return packets[0];
}

std::optional<Packet> SourceMachine::poll_received(const Packet& poll, Timestamp now) {
    if (poll.kind != PacketKind::Poll) {
        ++malformed_polls_;
        return std::nullopt;
    }
    if (!current_) {
        return serve_next(now);
    }
    // Draining. The poll's frag fields acknowledge the last fragment the
    // destination got; a null ack means it gave up on the partial stream.
    const bool null_ack = poll.frag_index == 0 && poll.frag_total == 0;
    if (null_ack) {
        ++restarts_;
        frag_fifo_.clear();
        for (std::size_t i = 1; i < stream_.size(); ++i) {
            frag_fifo_.push(stream_[i]);
        }
        current_ = stream_[0];
        return *current_;
    }
    if (poll.seq == current_->seq && poll.frag_index == current_->frag_index) {
        if (current_->frag_index + 1 == current_->frag_total) {
            // Final fragment acknowledged: this same poll solicits the next
            // update.
            current_.reset();
            stream_.clear();
            return serve_next(now);
        }
        current_ = frag_fifo_.pop();
        return *current_;
    }
    ++retransmits_;
    return *current_;
}

std::uint64_t SourceMachine::queue_push_count() const {
    return cfg_.queue.kind == QueueSpec::Kind::Lcfs1 ? lcfs_.push_count() : fcfs_.push_count();
}

std::uint64_t SourceMachine::queue_drop_count() const {
    return cfg_.queue.kind == QueueSpec::Kind::Lcfs1
               ? lcfs_.replaced_count() + lcfs_.stale_discard_count()
               : fcfs_.drop_count();
}

std::size_t SourceMachine::queue_occupancy() const {
    return cfg_.queue.kind == QueueSpec::Kind::Lcfs1 ? (lcfs_.empty() ? 0 : 1) : fcfs_.size();
}

bool SourceMachine::queue_empty() const {
    return cfg_.queue.kind == QueueSpec::Kind::Lcfs1 ? lcfs_.empty() : fcfs_.empty();
}

// ------------------------------------------------------------- reassembly

std::optional<Update> Reassembler::accept(const Packet& frag) {
    if (cur_ && frag.seq == cur_->seq) {
        if (frag.frag_index == cur_->next_index) {
            cur_->buffer.insert(cur_->buffer.end(), frag.payload.begin(), frag.payload.end());
            ++cur_->next_index;
            last_good_ = Ack{frag.seq, frag.frag_index, frag.frag_total};
            if (cur_->next_index == cur_->total) {
                Update u;
                u.gen_timestamp = cur_->gen;
                u.info_type = cur_->info_type;
                u.payload = std::move(cur_->buffer);
                cur_.reset();
                return u;
            }
            return std::nullopt;
        }
        if (frag.frag_index + 1 == cur_->next_index) {
            ++duplicates_;  // retransmission after a lost ack
            return std::nullopt;
        }
        ++ignored_;
        return std::nullopt;
    }
    if (!cur_ || newer(frag.seq, cur_->seq)) {
        if (frag.frag_index != 0) {
            // Mid-stream join: the protocol never produces this (the source
            // only advances past a fragment we acknowledged).
            ++ignored_;
            return std::nullopt;
        }
        cur_ = Stream{frag.seq, frag.frag_total, 1, frag.info_type, frag.gen_timestamp,
                      frag.payload};
        last_good_ = Ack{frag.seq, 0, frag.frag_total};
        return std::nullopt;
    }
    ++ignored_;  // stale sequence
    return std::nullopt;
}

void Reassembler::supersede(std::uint32_t seq) {
    if (cur_ && newer(seq, cur_->seq)) {
        cur_.reset();
        if (last_good_ && newer(seq, last_good_->seq)) {
            last_good_.reset();
        }
    }
}

void Reassembler::abandon() {
    cur_.reset();
    last_good_.reset();
}

// ------------------------------------------------------------ destination

void DestinationMachine::register_instance(InstanceId id, Timestamp now) {
    auto [it, inserted] = instances_.try_emplace(
        id, id, now, cfg_.estimator_window, cfg_.skew_bound);
    if (inserted) {
        estimate_view_.clear();
        estimate_view_.reserve(instances_.size());
        for (const auto& [iid, st] : instances_) {
            estimate_view_.push_back(&st.estimate);
        }
    }
}

Packet DestinationMachine::emit_poll(Timestamp now) {
    InstanceId chosen = 0;
    switch (cfg_.policy) {
        case Policy::MaxWeight:
            chosen = mw_select(estimate_view_, now, &mw_inconsistencies_).chosen;
            break;
        case Policy::MaxAgeFirst:
            chosen = maf_select(estimate_view_, now).chosen;
            break;
        case Policy::RoundRobin: {
            auto it = rr_last_ ? instances_.upper_bound(*rr_last_) : instances_.begin();
            if (it == instances_.end()) {
                it = instances_.begin();
            }
            chosen = it->first;
            break;
        }
    }
    rr_last_ = chosen;
    awaiting_ = chosen;
    InstanceState& st = instances_.at(chosen);
    ++st.counters.polls;
    st.estimate.record(PollEvent::PollSent, now);

    Packet poll;
    poll.kind = PacketKind::Poll;
    poll.source_id = instance_source(chosen);
    poll.info_type = instance_info(chosen);
    if (auto ack = st.reassembler.ack()) {
        poll.seq = ack->seq;
        poll.frag_index = ack->index;
        poll.frag_total = ack->total;
    }
    return poll;
}

void DestinationMachine::deliver(InstanceState& st, InstanceId id, Timestamp gen,
                                 std::vector<std::uint8_t> payload, Timestamp now,
                                 std::vector<CompletedUpdate>& out) {
    const std::uint64_t before = st.tracker.delivery_count();
    st.tracker.observe_delivery(gen, now);
    ++st.counters.deliveries;
    st.counters.payload_bytes += payload.size();
    out.push_back(CompletedUpdate{id, gen, std::move(payload),
                                  st.tracker.delivery_count() != before});
}

std::vector<CompletedUpdate> DestinationMachine::process_reception(const Packet& packet,
                                                                   Timestamp now) {
    std::vector<CompletedUpdate> delivered;
    const InstanceId id = packet.instance();
    auto it = instances_.find(id);
    if (it == instances_.end()) {
        return delivered;
    }
    InstanceState& st = it->second;
    if (awaiting_ == id) {
        consecutive_timeouts_ = 0;
    }

    Timestamp gen = packet.gen_timestamp;
    if (packet.kind == PacketKind::Data || packet.kind == PacketKind::Frag) {
        if (gen > now) {
            if ((gen - now).us > cfg_.skew_bound.us) {
                ++skew_errors_;  // broken clock on the other side; drop
                return delivered;
            }
            gen = now;
            ++skew_clamps_;
        }
    }

    switch (packet.kind) {
        case PacketKind::Data: {
            st.estimate.record(PollEvent::DataReceived, now);
            st.estimate.on_data(gen, now);
            st.reassembler.supersede(packet.seq);
            deliver(st, id, gen, packet.payload, now, delivered);
            break;
        }
        case PacketKind::Empty: {
            st.estimate.record(PollEvent::EmptyReceived, now);
            st.estimate.on_empty(now);
            break;
        }
        case PacketKind::Frag: {
            st.estimate.record(PollEvent::DataReceived, now);
            if (std::optional<Update> u = st.reassembler.accept(packet)) {
                st.estimate.on_data(gen, now);
                deliver(st, id, gen, std::move(u->payload), now, delivered);
            } else {
                st.estimate.on_fragment(gen, now);
            }
            break;
        }
        default:
            break;  // callers filter to source responses
    }
    return delivered;
}

DestinationMachine::StepResult DestinationMachine::start(Timestamp now) {
    if (instances_.empty()) {
        throw std::logic_error("DestinationMachine::start: no registered instances");
    }
    return StepResult{emit_poll(now), {}};
}

namespace {

bool is_source_response(PacketKind kind) {
    return kind == PacketKind::Data || kind == PacketKind::Empty || kind == PacketKind::Frag;
}

}  // namespace

DestinationMachine::StepResult DestinationMachine::on_received(const Packet& packet,
                                                               Timestamp now) {
    StepResult result;
    if (is_source_response(packet.kind)) {
        register_instance(packet.instance(), now);
        result.delivered = process_reception(packet, now);
    } else {
        ++malformed_;
    }
    if (!instances_.empty()) {
        result.poll = emit_poll(now);
    }
    return result;
}

DestinationMachine::StepResult DestinationMachine::on_timeout(Timestamp now) {
    if (instances_.empty()) {
        throw std::logic_error("DestinationMachine::on_timeout: no registered instances");
    }
    ++timeout_count_;
    if (awaiting_) {
        InstanceState& st = instances_.at(*awaiting_);
        ++st.counters.timeouts;
        ++consecutive_timeouts_;
        if (cfg_.abandon_after_timeouts > 0 && consecutive_timeouts_ >= cfg_.abandon_after_timeouts &&
            st.reassembler.partial()) {
            st.reassembler.abandon();
            consecutive_timeouts_ = 0;
        }
    }
    return StepResult{emit_poll(now), {}};
}

std::vector<CompletedUpdate> DestinationMachine::on_unsolicited(const Packet& packet,
                                                                Timestamp now) {
    if (!is_source_response(packet.kind)) {
        ++malformed_;
        return {};
    }
    register_instance(packet.instance(), now);
    return process_reception(packet, now);
}

void DestinationMachine::finalize(Timestamp horizon) {
    for (auto& [id, st] : instances_) {
        st.tracker.advance_to(horizon);
    }
}

NetworkAgeReport DestinationMachine::report(Timestamp horizon) const {
    std::map<InstanceId, AgeTracker> trackers;
    for (const auto& [id, st] : instances_) {
        trackers.emplace(id, st.tracker);
    }
    return naoi(trackers, horizon);
}

NetworkAgeReport DestinationMachine::report_at(Timestamp now) const {
    std::map<InstanceId, AgeTracker> trackers;
    for (const auto& [id, st] : instances_) {
        AgeTracker copy = st.tracker;
        copy.advance_to(now);
        trackers.emplace(id, copy);
    }
    return naoi(trackers, now);
}

const AgeTracker& DestinationMachine::tracker(InstanceId id) const {
    return instances_.at(id).tracker;
}

const SourceEstimate& DestinationMachine::estimate(InstanceId id) const {
    return instances_.at(id).estimate;
}

const DestinationMachine::InstanceCounters& DestinationMachine::counters(InstanceId id) const {
    return instances_.at(id).counters;
}

std::vector<InstanceId> DestinationMachine::instance_ids() const {
    std::vector<InstanceId> ids;
    ids.reserve(instances_.size());
    for (const auto& [id, st] : instances_) {
        ids.push_back(id);
    }
    return ids;
}

}  // namespace aoinet
