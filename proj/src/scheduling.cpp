#include "aoinet/scheduling.hpp"

#include <algorithm>
#include <stdexcept>

namespace aoinet {

SourceEstimate::SourceEstimate(InstanceId id, Timestamp origin, Duration window)
    : id_(id), freshest_gen_(origin), window_(window) {}

void SourceEstimate::evict(Timestamp now) const {
    const std::uint64_t cutoff = now.us >= static_cast<std::uint64_t>(window_.us)
                                     ? now.us - static_cast<std::uint64_t>(window_.us)
                                     : 0;
    while (!log_.empty() && log_.front().first.us < cutoff) {
        if (log_.front().second == PollEvent::PollSent) {
            --polls_in_window_;
        } else {
            --rx_in_window_;
        }
        log_.pop_front();
    }
}

void SourceEstimate::record(PollEvent event, Timestamp now) {
    if (!log_.empty() && now < log_.back().first) {
        throw std::logic_error("SourceEstimate::record: event time regression");
    }
    log_.emplace_back(now, event);
    if (event == PollEvent::PollSent) {
        ++polls_in_window_;
    } else {
        ++rx_in_window_;
    }
    evict(now);
}

std::pair<std::uint64_t, std::uint64_t> SourceEstimate::window_counts(Timestamp now) const {
    evict(now);
    return {polls_in_window_, rx_in_window_};
}

double SourceEstimate::reliability(Timestamp now) const {
    const auto [polls, rx] = window_counts(now);
    const double p = (static_cast<double>(rx) + 1.0) / (static_cast<double>(polls) + 1.0);
    return std::min(p, 1.0);
}

void SourceEstimate::on_data(Timestamp gen, Timestamp now) {
    if (gen > freshest_gen_) {
        freshest_gen_ = gen;
    }
    hol_s_ = age(now);
}

void SourceEstimate::on_empty(Timestamp now) { hol_s_ = age(now); }

void SourceEstimate::on_fragment(Timestamp gen, Timestamp now) {
    hol_s_ = std::min((now - gen).seconds(), age(now));
}

double SourceEstimate::age(Timestamp now) const { return (now - freshest_gen_).seconds(); }

double SourceEstimate::hol() const { return hol_s_; }

double mw_index(double reliability, double age_s, double hol_s,
                std::uint64_t* inconsistency_count) {
    double gap = age_s - hol_s;
    if (gap < 0.0) {
        if (inconsistency_count) {
            ++*inconsistency_count;
        }
        gap = 0.0;
    }
    return reliability * gap * gap;
}

namespace {

template <class IndexFn>
PollDecision select_argmax(std::span<const SourceEstimate* const> estimates, IndexFn index) {
    if (estimates.empty()) {
        throw std::domain_error("policy selection over an empty instance set");
    }
    PollDecision decision;
    decision.index_values.reserve(estimates.size());
    bool first = true;
    double best = 0.0;
    for (const SourceEstimate* est : estimates) {
        const double value = index(*est);
        decision.index_values.emplace_back(est->id(), value);
        if (first || value > best) {  // strict: ties keep the least id (span is id-sorted)
            best = value;
            decision.chosen = est->id();
            first = false;
        }
    }
    return decision;
}

std::vector<const SourceEstimate*> view_of(const std::map<InstanceId, SourceEstimate>& estimates) {
    std::vector<const SourceEstimate*> view;
    view.reserve(estimates.size());
    for (const auto& [id, est] : estimates) {
        view.push_back(&est);
    }
    return view;
}

}  // namespace

PollDecision mw_select(std::span<const SourceEstimate* const> estimates, Timestamp now,
                       std::uint64_t* inconsistency_count) {
    return select_argmax(estimates, [&](const SourceEstimate& est) {
        return mw_index(est.reliability(now), est.age(now), est.hol(), inconsistency_count);
    });
}

PollDecision mw_select(const std::map<InstanceId, SourceEstimate>& estimates, Timestamp now,
                       std::uint64_t* inconsistency_count) {
    return mw_select(view_of(estimates), now, inconsistency_count);
}

PollDecision maf_select(std::span<const SourceEstimate* const> estimates, Timestamp now) {
    return select_argmax(estimates, [&](const SourceEstimate& est) { return est.age(now); });
}

PollDecision maf_select(const std::map<InstanceId, SourceEstimate>& estimates, Timestamp now) {
    return maf_select(view_of(estimates), now);
}

PollDecision rr_select(const std::map<InstanceId, SourceEstimate>& estimates,
                       std::optional<InstanceId> last) {
    if (estimates.empty()) {
        throw std::domain_error("policy selection over an empty instance set");
    }
    PollDecision decision;
    if (!last) {
        decision.chosen = estimates.begin()->first;
        return decision;
    }
    auto it = estimates.upper_bound(*last);
    if (it == estimates.end()) {
        it = estimates.begin();
    }
    decision.chosen = it->first;
    return decision;
}

}  // namespace aoinet
