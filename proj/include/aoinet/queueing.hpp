#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "aoinet/time.hpp"

namespace aoinet {

/// One timestamped information update, immutable once enqueued.
struct Update {
    Timestamp gen_timestamp;
    std::uint8_t info_type = 0;
    std::vector<std::uint8_t> payload;

    std::size_t size() const { return payload.size(); }
};

enum class DropPolicy : std::uint8_t { TailDrop, HeadDrop };

/// Observes updates the queue discards. Dropped packets may still carry
/// usable information (e.g. for trajectory smoothing), so callers can tap
/// them here; nothing in the toolkit consumes them by default.
using DropHook = std::function<void(const Update&)>;

/// Arrival-order queue with optional capacity. Tail-drop discards the
/// arriving update when full; head-drop evicts the oldest to make room.
class FcfsQueue {
public:
    FcfsQueue() = default;
    explicit FcfsQueue(std::size_t capacity, DropPolicy drop = DropPolicy::TailDrop)
        : capacity_(capacity), drop_(drop) {}

    void push(Update update) {
        ++push_count_;
        if (capacity_ && items_.size() >= *capacity_) {
            ++drop_count_;
            if (drop_ == DropPolicy::TailDrop) {
                if (drop_hook_) {
                    drop_hook_(update);
                }
                return;
            }
            if (drop_hook_) {
                drop_hook_(items_.front());
            }
            items_.pop_front();
        }
        items_.push_back(std::move(update));
    }

    void set_drop_hook(DropHook hook) { drop_hook_ = std::move(hook); }

    std::optional<Update> pop() {
        if (items_.empty()) {
            return std::nullopt;
        }
        Update u = std::move(items_.front());
        items_.pop_front();
        ++pop_count_;
        return u;
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::uint64_t drop_count() const { return drop_count_; }
    std::uint64_t push_count() const { return push_count_; }
    std::uint64_t pop_count() const { return pop_count_; }

private:
    std::deque<Update> items_;
    std::optional<std::size_t> capacity_;  // nullopt = unbounded
    DropPolicy drop_ = DropPolicy::TailDrop;
    DropHook drop_hook_;
    std::uint64_t drop_count_ = 0;
    std::uint64_t push_count_ = 0;
    std::uint64_t pop_count_ = 0;
};

/// Head-drop queue of size one: only the freshest update is kept. A push
/// with an equal timestamp wins (the newer push carries equally fresh
/// information and determinism wants one rule).
class Lcfs1Queue {
public:
    void push(Update update) {
        ++push_count_;
        if (slot_ && update.gen_timestamp < slot_->gen_timestamp) {
            ++stale_discard_count_;
            if (drop_hook_) {
                drop_hook_(update);
            }
            return;
        }
        if (slot_) {
            ++replaced_count_;
            if (drop_hook_) {
                drop_hook_(*slot_);
            }
        }
        slot_ = std::move(update);
    }

    void set_drop_hook(DropHook hook) { drop_hook_ = std::move(hook); }

    std::optional<Update> take() {
        if (!slot_) {
            return std::nullopt;
        }
        std::optional<Update> u = std::move(slot_);
        slot_.reset();
        ++take_count_;
        return u;
    }

    const std::optional<Update>& peek() const { return slot_; }
    bool empty() const { return !slot_.has_value(); }
    std::uint64_t replaced_count() const { return replaced_count_; }
    std::uint64_t stale_discard_count() const { return stale_discard_count_; }
    std::uint64_t push_count() const { return push_count_; }
    std::uint64_t take_count() const { return take_count_; }

private:
    std::optional<Update> slot_;
    DropHook drop_hook_;
    std::uint64_t replaced_count_ = 0;
    std::uint64_t stale_discard_count_ = 0;
    std::uint64_t push_count_ = 0;
    std::uint64_t take_count_ = 0;
};

/// Plain FIFO for pending fragments, kept separate from the update queue so
/// an in-flight fragment stream is never disturbed by fresh arrivals.
template <class T>
class FragmentFifo {
public:
    void push(T item) { items_.push_back(std::move(item)); }

    std::optional<T> pop() {
        if (items_.empty()) {
            return std::nullopt;
        }
        T item = std::move(items_.front());
        items_.pop_front();
        return item;
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    void clear() { items_.clear(); }

private:
    std::deque<T> items_;
};

}  // namespace aoinet
