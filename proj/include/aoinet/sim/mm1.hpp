#pragma once

#include <cstdint>

namespace aoinet::sim {

enum class Mm1Discipline : std::uint8_t { Fcfs, Lcfs1 };

/// Closed-form time-average age of the M/M/1 status-update system.
///
/// FCFS: (1/mu)(1 + 1/rho + rho^2/(1-rho)), rho = lambda/mu < 1.
/// LCFS-1 (one waiting slot holding only the freshest update, service never
/// preempted): (1/mu)(2r^5+7r^4+8r^3+7r^2+4r+1)/(r(r+1)^2(r^2+r+1)).
/// Both validated against mm1_simulate; see the oracle test suite.
/// Throws std::domain_error on nonpositive rates, std::invalid_argument for
/// FCFS with lambda >= mu (unstable).
double mm1_age_oracle(double lambda, double mu, Mm1Discipline discipline);

/// Brute-force discrete-event M/M/1 using the production queue and age
/// classes: Poisson arrivals, exponential service, delivery updates an
/// AgeTracker. Returns the time-average age after `min_deliveries`
/// deliveries. Arrival/service streams depend only on (seed), so FCFS and
/// LCFS-1 runs with the same seed are paired.
double mm1_simulate(double lambda, double mu, Mm1Discipline discipline,
                    std::uint64_t min_deliveries, std::uint64_t seed);

}  // namespace aoinet::sim
