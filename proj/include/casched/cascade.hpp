#pragma once

#include <cstdint>
#include <vector>

#include "casched/model.hpp"

namespace casched {

// One realized run. decisions is indexed by area id (+1 accept, -1 reject);
// trajectory[t-1] is the deployment number I_t after time t.
struct CascadeRun {
    std::vector<std::int8_t> decisions;
    std::vector<int> trajectory;
    int adopters = 0;
};

// Executes the influence-spread process for fixed initial preferences. At
// each time t the scheduled area v sees D(v), the sum of decisions of its
// already-decided neighbors (undecided neighbors contribute 0):
//   D(v) >=  c_v  ->  accept
//   D(v) <= -c_v  ->  reject
//   otherwise     ->  follow prefs[v]
CascadeRun run_deterministic(const Society& society, const Schedule& schedule,
                             const PreferenceVector& prefs);

// Draws prefs[v] = Accept with probability p_v (independently, in id order).
PreferenceVector draw_preferences(const Society& society, std::uint64_t seed);

// draw_preferences + run_deterministic; same seed, same run.
CascadeRun run_random(const Society& society, const Schedule& schedule, std::uint64_t seed);

struct MonteCarloResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
};

// Mean adopters over `trials` independent runs. Trial i uses seed
// nth_seed(seed, i), and the accumulators are integer sums, so the parallel
// version returns exactly the serial result for any thread count.
MonteCarloResult monte_carlo(const Society& society, const Schedule& schedule,
                             std::int64_t trials, std::uint64_t seed);
MonteCarloResult monte_carlo_serial(const Society& society, const Schedule& schedule,
                                    std::int64_t trials, std::uint64_t seed);

namespace detail {

// Update loop on preallocated buffers (trajectory may be null). Assumes
// validated inputs; returns the adopter count.
int run_core(const Society& society, const Schedule& schedule, const PreferenceVector& prefs,
             std::int8_t* decisions, int* trajectory);

}  // namespace detail

}  // namespace casched
