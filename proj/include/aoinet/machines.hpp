#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "aoinet/age.hpp"
#include "aoinet/queueing.hpp"
#include "aoinet/scheduling.hpp"
#include "aoinet/time.hpp"
#include "aoinet/wire.hpp"

namespace aoinet {

enum class Policy : std::uint8_t { MaxWeight, MaxAgeFirst, RoundRobin };

const char* policy_name(Policy p);

/// Queue discipline in front of a source machine. LCFS-1 is the default;
/// FCFS exists for baseline comparisons.
struct QueueSpec {
    enum class Kind : std::uint8_t { Lcfs1, Fcfs } kind = Kind::Lcfs1;
    std::size_t fcfs_capacity = 1000;
    DropPolicy fcfs_drop = DropPolicy::TailDrop;
};

/// Source-side automaton for one (source_id, info_type) instance.
///
/// Generated updates are queued; nothing is ever transmitted spontaneously.
/// Every well-formed poll produces exactly one outbound packet: the next
/// update (whole or first fragment), the next/retransmitted fragment while
/// draining, or an EMPTY when the queue has nothing. While draining, fresh
/// updates keep landing in the queue but the in-flight fragment stream is
/// never replaced.
class SourceMachine {
public:
    struct Config {
        std::uint16_t source_id = 0;
        std::uint8_t info_type = 0;
        std::size_t mtu_payload = 1400;
        QueueSpec queue;
    };

    explicit SourceMachine(Config config);

    void update_generated(Update update);

    /// Exactly one packet per poll; nullopt only for malformed input.
    std::optional<Packet> poll_received(const Packet& poll, Timestamp now);

    bool draining() const { return current_.has_value(); }
    InstanceId instance() const { return make_instance_id(cfg_.source_id, cfg_.info_type); }

    std::uint64_t malformed_poll_count() const { return malformed_polls_; }
    std::uint64_t retransmit_count() const { return retransmits_; }
    std::uint64_t restart_count() const { return restarts_; }

    // queue counters, for conservation accounting
    std::uint64_t queue_push_count() const;
    std::uint64_t queue_drop_count() const;
    std::size_t queue_occupancy() const;
    bool queue_empty() const;

private:
    Packet serve_next(Timestamp now);
    Packet empty_packet(Timestamp now) const;

    Config cfg_;
    Lcfs1Queue lcfs_;
    FcfsQueue fcfs_;
    FragmentFifo<Packet> frag_fifo_;        // fragments not yet sent
    std::vector<Packet> stream_;            // full fragment set, for restarts
    std::optional<Packet> current_;         // sent, awaiting acknowledgment
    std::uint32_t next_seq_ = 0;
    std::uint64_t malformed_polls_ = 0;
    std::uint64_t retransmits_ = 0;
    std::uint64_t restarts_ = 0;
};

/// One delivered (complete) update surfaced by the destination.
struct CompletedUpdate {
    InstanceId instance = 0;
    Timestamp gen_timestamp;
    std::vector<std::uint8_t> payload;
    bool fresh = false;  // advanced the age path (not stale)
};

/// In-order fragment reassembly for one instance. Duplicates of the last
/// fragment are tolerated (lost-ack retransmissions); a newer sequence
/// discards any partial state of the old one.
class Reassembler {
public:
    struct Ack {
        std::uint32_t seq = 0;
        std::uint16_t index = 0;
        std::uint16_t total = 0;
    };

    std::optional<Update> accept(const Packet& frag);

    /// A newer complete update for this instance makes any partial older
    /// stream obsolete.
    void supersede(std::uint32_t seq);

    /// Give up on the current partial stream; the next poll's null ack tells
    /// the source to restart from fragment zero.
    void abandon();

    std::optional<Ack> ack() const { return last_good_; }
    bool partial() const { return cur_.has_value(); }
    std::uint64_t duplicate_count() const { return duplicates_; }
    std::uint64_t ignored_count() const { return ignored_; }

private:
    struct Stream {
        std::uint32_t seq = 0;
        std::uint16_t total = 0;
        std::uint16_t next_index = 0;
        std::uint8_t info_type = 0;
        Timestamp gen;
        std::vector<std::uint8_t> buffer;
    };

    static bool newer(std::uint32_t a, std::uint32_t b) {
        return static_cast<std::int32_t>(a - b) > 0;
    }

    std::optional<Stream> cur_;
    std::optional<Ack> last_good_;
    std::uint64_t duplicates_ = 0;
    std::uint64_t ignored_ = 0;
};

/// Destination-side automaton: estimator state, age trackers, reassembly and
/// the polling decision. Every processed event (reception or timeout) emits
/// exactly one poll; timers, sockets and clocks live in the caller.
class DestinationMachine {
public:
    struct Config {
        Policy policy = Policy::MaxWeight;
        Duration estimator_window = Duration::from_seconds(0.5);
        Duration skew_bound = Duration::from_millis(10);
        std::uint32_t abandon_after_timeouts = 0;  // 0 = retransmit forever
    };

    struct StepResult {
        std::optional<Packet> poll;
        std::vector<CompletedUpdate> delivered;
    };

    explicit DestinationMachine(Config config) : cfg_(config) {}

    void register_instance(InstanceId id, Timestamp now);
    bool has_instance(InstanceId id) const { return instances_.count(id) != 0; }
    std::size_t instance_count() const { return instances_.size(); }

    /// Kick off the poll loop. Requires at least one registered instance.
    StepResult start(Timestamp now);

    StepResult on_received(const Packet& packet, Timestamp now);
    StepResult on_timeout(Timestamp now);

    /// Reception outside the poll-response exchange (late responses,
    /// registrations while another poll is outstanding). Updates estimates
    /// and trackers but does not emit a poll, preserving the
    /// one-outstanding-poll invariant.
    std::vector<CompletedUpdate> on_unsolicited(const Packet& packet, Timestamp now);

    std::optional<InstanceId> awaiting() const { return awaiting_; }

    /// Integrate every tracker forward to the horizon.
    void finalize(Timestamp horizon);
    NetworkAgeReport report(Timestamp horizon) const;

    /// Snapshot report at `now` without advancing the live trackers.
    NetworkAgeReport report_at(Timestamp now) const;

    struct InstanceCounters {
        std::uint64_t polls = 0;
        std::uint64_t timeouts = 0;
        std::uint64_t deliveries = 0;   // complete updates, stale included
        std::uint64_t payload_bytes = 0;
    };

    const AgeTracker& tracker(InstanceId id) const;
    const SourceEstimate& estimate(InstanceId id) const;
    const InstanceCounters& counters(InstanceId id) const;
    std::vector<InstanceId> instance_ids() const;

    std::uint64_t timeout_count() const { return timeout_count_; }
    std::uint64_t malformed_count() const { return malformed_; }
    std::uint64_t skew_clamp_count() const { return skew_clamps_; }
    std::uint64_t skew_error_count() const { return skew_errors_; }
    std::uint64_t mw_inconsistency_count() const { return mw_inconsistencies_; }

private:
    struct InstanceState {
        SourceEstimate estimate;
        AgeTracker tracker;
        Reassembler reassembler;
        InstanceCounters counters;
        InstanceState(InstanceId id, Timestamp now, Duration window, Duration skew)
            : estimate(id, now, window), tracker(now, skew) {}
    };

    std::vector<CompletedUpdate> process_reception(const Packet& packet, Timestamp now);
    Packet emit_poll(Timestamp now);
    void deliver(InstanceState& st, InstanceId id, Timestamp gen, std::vector<std::uint8_t> payload,
                 Timestamp now, std::vector<CompletedUpdate>& out);

    Config cfg_;
    std::map<InstanceId, InstanceState> instances_;
    std::vector<const SourceEstimate*> estimate_view_;  // rebuilt on registration
    std::optional<InstanceId> awaiting_;
    std::optional<InstanceId> rr_last_;
    std::uint32_t consecutive_timeouts_ = 0;
    std::uint64_t timeout_count_ = 0;
    std::uint64_t malformed_ = 0;
    std::uint64_t skew_clamps_ = 0;
    std::uint64_t skew_errors_ = 0;
    std::uint64_t mw_inconsistencies_ = 0;
};

}  // namespace aoinet
