#include "aoinet/sim/mm1.hpp"

#include <cmath>
#include <stdexcept>

#include "aoinet/age.hpp"
#include "aoinet/queueing.hpp"
#include "aoinet/sim/rng.hpp"

namespace aoinet::sim {

double mm1_age_oracle(double lambda, double mu, Mm1Discipline discipline) {
    if (lambda <= 0.0 || mu <= 0.0) {
        throw std::domain_error("mm1_age_oracle: rates must be positive");
    }
    const double rho = lambda / mu;
    if (discipline == Mm1Discipline::Fcfs) {
        if (rho >= 1.0) {
            throw std::invalid_argument("mm1_age_oracle: FCFS requires lambda < mu");
        }
        return (1.0 + 1.0 / rho + rho * rho / (1.0 - rho)) / mu;
    }
    const double num = ((((2.0 * rho + 7.0) * rho + 8.0) * rho + 7.0) * rho + 4.0) * rho + 1.0;
    const double den = rho * (rho + 1.0) * (rho + 1.0) * (rho * rho + rho + 1.0);
    return num / den / mu;
}

double mm1_simulate(double lambda, double mu, Mm1Discipline discipline,
                    std::uint64_t min_deliveries, std::uint64_t seed) {
    if (lambda <= 0.0 || mu <= 0.0 || min_deliveries == 0) {
        throw std::domain_error("mm1_simulate: rates and delivery count must be positive");
    }
    Stream arrivals(seed, "mm1-arrivals");
    Stream services(seed, "mm1-services");
    auto exp_us = [](Stream& s, double rate) {
        return static_cast<std::uint64_t>(std::llround(s.exponential(rate) * 1e6));
    };

    AgeTracker tracker;
    FcfsQueue fcfs;    // unbounded
    Lcfs1Queue lcfs;
    const bool is_fcfs = discipline == Mm1Discipline::Fcfs;

    std::uint64_t t = 0;
    std::uint64_t next_arrival = exp_us(arrivals, lambda);
    bool serving = false;
    std::uint64_t service_done = 0;
    Timestamp service_gen;
    std::uint64_t delivered = 0;

    auto start_service = [&](Update u, std::uint64_t now) {
        serving = true;
        service_gen = u.gen_timestamp;
        service_done = now + exp_us(services, mu);
    };

    while (delivered < min_deliveries) {
        if (serving && service_done <= next_arrival) {
            t = service_done;
            tracker.observe_delivery(service_gen, Timestamp{t});
            ++delivered;
            std::optional<Update> next = is_fcfs ? fcfs.pop() : lcfs.take();
            if (next) {
                start_service(std::move(*next), t);
            } else {
                serving = false;
            }
        } else {
            t = next_arrival;
            Update u;
            u.gen_timestamp = Timestamp{t};
            if (!serving) {
                start_service(std::move(u), t);
            } else if (is_fcfs) {
                fcfs.push(std::move(u));
            } else {
                lcfs.push(std::move(u));
            }
            next_arrival = t + exp_us(arrivals, lambda);
        }
    }
    return tracker.time_average_age(Timestamp{t});
}

}  // namespace aoinet::sim
