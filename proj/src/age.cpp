#include "aoinet/age.hpp"

#include <stdexcept>
#include <string>

namespace aoinet {

AgeTracker::AgeTracker(Timestamp start, Duration skew_bound)
    : start_(start), last_fresh_(start), last_update_(start), skew_bound_(skew_bound) {}

double AgeTracker::age_at(Timestamp now) const {
    if (now < last_update_) {
        throw std::logic_error("age_at: query time " + std::to_string(now.us) +
                               "us precedes last update " + std::to_string(last_update_.us) + "us");
    }
    return (now - last_fresh_).seconds();
}

void AgeTracker::advance_to(Timestamp now) {
    if (now < last_update_) {
        throw std::logic_error("advance_to: time moved backwards");
    }
    const std::uint64_t dt = now.us - last_update_.us;
    const std::uint64_t age_start = last_update_.us - last_fresh_.us;
    // trapezoid from age_start to age_start+dt, doubled to stay integral
    integral2_us2_ += static_cast<unsigned __int128>(2 * age_start + dt) * dt;
    last_update_ = now;
}

void AgeTracker::observe_delivery(Timestamp gen, Timestamp now) {
    if (gen > now) {
        if ((gen - now).us > skew_bound_.us) {
            throw std::domain_error("observe_delivery: generation timestamp " +
                                    std::to_string(gen.us) + "us is ahead of now " +
                                    std::to_string(now.us) + "us beyond the skew bound");
        }
        gen = now;
        ++skew_clamp_count_;
    }
    advance_to(now);
    if (gen > last_fresh_) {
        last_fresh_ = gen;
        ++delivery_count_;
    } else {
        ++stale_count_;
    }
}

double AgeTracker::time_average_age(Timestamp horizon) const {
    if (horizon <= start_) {
        throw std::domain_error("time_average_age: horizon must exceed the start time");
    }
    if (last_update_ != horizon) {
        throw std::logic_error("time_average_age: tracker integrated to " +
                               std::to_string(last_update_.us) + "us, horizon is " +
                               std::to_string(horizon.us) + "us");
    }
    const double integral_s2 = static_cast<double>(integral2_us2_) * 0.5e-12;
    return integral_s2 / (horizon - start_).seconds();
}

NetworkAgeReport naoi(const std::map<InstanceId, AgeTracker>& trackers, Timestamp horizon) {
    if (trackers.empty()) {
        throw std::domain_error("naoi: no trackers");
    }
    NetworkAgeReport report;
    report.horizon = (horizon - Timestamp{}).seconds();
    double sum = 0.0;
    for (const auto& [id, tracker] : trackers) {
        const double avg = tracker.time_average_age(horizon);
        report.per_source_average[id] = avg;
        sum += avg;
    }
    report.naoi = sum / static_cast<double>(trackers.size());
    return report;
}

}  // namespace aoinet
