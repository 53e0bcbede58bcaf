#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "aoinet/time.hpp"

namespace aoinet::sim {

/// Event priority classes; lower runs first at equal times.
enum class EventClass : std::uint8_t { Arrival = 0, Reception = 1, Timer = 2 };

/// Time-ordered pending events with a deterministic tie order:
/// (time, class, insertion sequence). Scheduling into the past throws.
class EventQueue {
public:
    using Action = std::function<void(Timestamp)>;

    void schedule(Timestamp at, EventClass cls, Action action) {
        if (at < now_) {
            throw std::logic_error("EventQueue: scheduling into the past");
        }
        heap_.push(Entry{at, cls, next_seq_++, std::move(action)});
    }

    bool empty() const { return heap_.empty(); }
    Timestamp now() const { return now_; }
    Timestamp next_time() const { return heap_.top().at; }

    /// Pop and run the next event. Returns the event time.
    Timestamp run_next() {
        Entry e = std::move(const_cast<Entry&>(heap_.top()));
        heap_.pop();
        now_ = e.at;
        e.action(e.at);
        return e.at;
    }

private:
    struct Entry {
        Timestamp at;
        EventClass cls;
        std::uint64_t seq;
        Action action;

        bool operator>(const Entry& other) const {
            if (at != other.at) return at > other.at;
            if (cls != other.cls) return cls > other.cls;
            return seq > other.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    Timestamp now_{};
    std::uint64_t next_seq_ = 0;
};

}  // namespace aoinet::sim
