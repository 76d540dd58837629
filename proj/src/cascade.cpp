#include "casched/cascade.hpp"

#include <cmath>

#include "casched/rng.hpp"

namespace casched {

namespace detail {

int run_core(const Society& society, const Schedule& schedule, const PreferenceVector& prefs,
             std::int8_t* decisions, int* trajectory) {
    const int n = society.size();
    for (int v = 0; v < n; ++v) decisions[v] = 0;
    long long deployment = 0;
    for (int t = 0; t < n; ++t) {
        const int v = schedule.order[t];
        const Area& area = society.areas[v];
        long long d;
        if (society.complete) {
            d = deployment;  // every decided area is a neighbor
        } else {
            d = 0;
            for (int u : society.adjacency[v]) d += decisions[u];
        }
        std::int8_t x;
        if (d >= area.c)
            x = 1;
        else if (d <= -area.c)
            x = -1;
        else
            x = prefs[v] == Pref::Accept ? 1 : -1;
        decisions[v] = x;
        deployment += x;
        if (trajectory) trajectory[t] = static_cast<int>(deployment);
    }
    return static_cast<int>((deployment + n) / 2);
}

}  // namespace detail

CascadeRun run_deterministic(const Society& society, const Schedule& schedule,
                             const PreferenceVector& prefs) {
    validate_schedule(society, schedule);
    if (prefs.size() != static_cast<std::size_t>(society.size()))
        throw ValidationError("preference vector length does not match society size");
    CascadeRun run;
    run.decisions.resize(society.size());
    run.trajectory.resize(society.size());
    run.adopters =
        detail::run_core(society, schedule, prefs, run.decisions.data(), run.trajectory.data());
    return run;
}

PreferenceVector draw_preferences(const Society& society, std::uint64_t seed) {
    SplitMix64 rng(seed);
    PreferenceVector prefs(society.size());
    for (int v = 0; v < society.size(); ++v)
        prefs[v] = rng.next_double() < society.areas[v].p ? Pref::Accept : Pref::Reject;
    return prefs;
}

CascadeRun run_random(const Society& society, const Schedule& schedule, std::uint64_t seed) {
    return run_deterministic(society, schedule, draw_preferences(society, seed));
}

namespace {

MonteCarloResult finish(std::int64_t trials, long long sum, long long sumsq) {
    MonteCarloResult r;
    r.trials = trials;
    r.mean = static_cast<double>(sum) / static_cast<double>(trials);
    if (trials > 1) {
        double var = (static_cast<double>(sumsq) -
                      static_cast<double>(sum) * static_cast<double>(sum) / static_cast<double>(trials)) /
                     static_cast<double>(trials - 1);
        if (var < 0.0) var = 0.0;
        r.std_error = std::sqrt(var / static_cast<double>(trials));
    }
    return r;
}

}  // namespace

MonteCarloResult monte_carlo_serial(const Society& society, const Schedule& schedule,
                                    std::int64_t trials, std::uint64_t seed) {
    validate_schedule(society, schedule);
    if (trials < 1) throw ValidationError("trials must be at least 1");
    long long sum = 0, sumsq = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        const CascadeRun run = run_random(society, schedule, nth_seed(seed, static_cast<std::uint64_t>(i)));
        sum += run.adopters;
        sumsq += static_cast<long long>(run.adopters) * run.adopters;
    }
    return finish(trials, sum, sumsq);
}

MonteCarloResult monte_carlo(const Society& society, const Schedule& schedule, std::int64_t trials,
                             std::uint64_t seed) {
    validate_schedule(society, schedule);
    if (trials < 1) throw ValidationError("trials must be at least 1");
    long long sum = 0, sumsq = 0;
    // Integer accumulators: the result is exactly the serial one for any
    // thread count.
#pragma omp parallel for schedule(static) reduction(+ : sum, sumsq)
    for (std::int64_t i = 0; i < trials; ++i) {
        const CascadeRun run = run_random(society, schedule, nth_seed(seed, static_cast<std::uint64_t>(i)));
        sum += run.adopters;
        sumsq += static_cast<long long>(run.adopters) * run.adopters;
    }
    return finish(trials, sum, sumsq);
}

}  // namespace casched
