#include <cmath>
#include <cstring>

#include "casched/cascade.hpp"
#include "casched/exact.hpp"
#include "doctest.h"
#include "helpers.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace casched;

namespace {

Society example1() { return make_society({Area{0, 0.2, 1}, Area{1, 0.5, 2}, Area{2, 0.8, 3}}); }

Society example3_graph() {
    std::vector<Area> areas;
    for (int v = 0; v < 4; ++v) areas.push_back(Area{v, 0.6, 1});
    return make_society(std::move(areas), {{0, 3}, {1, 3}, {2, 3}});
}

bool runs_equal(const CascadeRun& a, const CascadeRun& b) {
    return a.decisions == b.decisions && a.trajectory == b.trajectory && a.adopters == b.adopters;
}

}  // namespace

TEST_CASE("the followers of the first adopter never consult their preferences") {
    const Society s = example1();
    const Schedule sched{{2, 0, 1}};
    for (Pref p0 : {Pref::Accept, Pref::Reject})
        for (Pref p1 : {Pref::Accept, Pref::Reject}) {
            const CascadeRun run = run_deterministic(s, sched, {p0, p1, Pref::Accept});
            CHECK(run.adopters == 3);
            CHECK(run.decisions == std::vector<std::int8_t>{1, 1, 1});
            CHECK(run.trajectory == std::vector<int>{1, 2, 3});
        }
}

TEST_CASE("all-accept preferences adopt everywhere") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.next() % 9);
        const Society s = trial % 2 == 0 ? testutil::random_complete_society(n, rng)
                                         : testutil::random_partial_society(n, rng);
        const CascadeRun run =
            run_deterministic(s, testutil::random_schedule(n, rng), PreferenceVector(n, Pref::Accept));
        CHECK(run.adopters == n);
    }
}

TEST_CASE("hand-executed partial-propagation run") {
    const CascadeRun run = run_deterministic(example3_graph(), Schedule{{0, 1, 2, 3}},
                                             {Pref::Accept, Pref::Accept, Pref::Reject, Pref::Reject});
    CHECK(run.adopters == 3);
    CHECK(run.decisions == std::vector<std::int8_t>{1, 1, -1, 1});
    CHECK(run.trajectory == std::vector<int>{1, 2, 1, 2});
}

TEST_CASE("preference length must match the society") {
    CHECK_THROWS_AS(run_deterministic(example1(), Schedule{{0, 1, 2}}, PreferenceVector(2)),
                    ValidationError);
}

TEST_CASE("run_random is reproducible") {
    SplitMix64 rng(99);
    const Society s = testutil::random_partial_society(8, rng);
    const Schedule sched = testutil::random_schedule(8, rng);
    CHECK(runs_equal(run_random(s, sched, 123), run_random(s, sched, 123)));
}

TEST_CASE("degenerate probabilities pin every run") {
    std::vector<Area> sure, never;
    for (int v = 0; v < 5; ++v) {
        sure.push_back(Area{v, 1.0, 1});
        never.push_back(Area{v, 0.0, 6});  // thresholds unreachable
    }
    const Society all_accept = make_society(sure);
    const Society all_reject = make_society(never);
    for (std::uint64_t seed : {0ull, 5ull, 77ull}) {
        CHECK(run_random(all_accept, identity_schedule(5), seed).adopters == 5);
        CHECK(run_random(all_reject, identity_schedule(5), seed).adopters == 0);
    }
}

TEST_CASE("trajectory moves by one step and matches the adopter count") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng.next() % 10);
        const Society s = trial % 2 == 0 ? testutil::random_complete_society(n, rng)
                                         : testutil::random_partial_society(n, rng);
        const CascadeRun run = run_random(s, testutil::random_schedule(n, rng), rng.next());
        int prev = 0;
        for (int t = 0; t < n; ++t) {
            CHECK(std::abs(run.trajectory[t] - prev) == 1);
            prev = run.trajectory[t];
        }
        CHECK(run.adopters == (run.trajectory[n - 1] + n) / 2);
    }
}

TEST_CASE("undecided margins defer to the preference, decided margins override it") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 8);
        const Society s = trial % 2 == 0 ? testutil::random_complete_society(n, rng)
                                         : testutil::random_partial_society(n, rng);
        const Schedule sched = testutil::random_schedule(n, rng);
        const PreferenceVector prefs = draw_preferences(s, rng.next());
        const CascadeRun run = run_deterministic(s, sched, prefs);

        std::vector<int> decided_at(n, 0);
        for (int t = 0; t < n; ++t) decided_at[sched.order[t]] = t;
        for (int t = 0; t < n; ++t) {
            const int v = sched.order[t];
            long long d = 0;
            if (s.complete) {
                d = t == 0 ? 0 : run.trajectory[t - 1];
            } else {
                for (int u : s.adjacency[v])
                    if (decided_at[u] < t) d += run.decisions[u];
            }
            if (d >= s.areas[v].c)
                CHECK(run.decisions[v] == 1);
            else if (d <= -s.areas[v].c)
                CHECK(run.decisions[v] == -1);
            else
                CHECK(run.decisions[v] == (prefs[v] == Pref::Accept ? 1 : -1));
        }
    }
}

TEST_CASE("complete topology equals its explicit edge list") {
    SplitMix64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.next() % 8);
        const Society complete = testutil::random_complete_society(n, rng);
        const Society listed = make_society(complete.areas, complete_edge_list(n));
        const Schedule sched = testutil::random_schedule(n, rng);
        const PreferenceVector prefs = draw_preferences(complete, rng.next());
        CHECK(runs_equal(run_deterministic(complete, sched, prefs),
                         run_deterministic(listed, sched, prefs)));
    }
}

TEST_CASE("monte carlo handles degenerate and reference instances") {
    std::vector<Area> sure;
    for (int v = 0; v < 4; ++v) sure.push_back(Area{v, 1.0, 1});
    const MonteCarloResult all = monte_carlo(make_society(sure), identity_schedule(4), 1000, 0);
    CHECK(all.mean == 4.0);
    CHECK(all.std_error == 0.0);

    const MonteCarloResult ex1 = monte_carlo(example1(), Schedule{{2, 0, 1}}, 200000, 0);
    CHECK(std::abs(ex1.mean - 2.4) <= 3 * ex1.std_error);

    const Society ex2 = make_society({Area{0, 0.4, 1}, Area{1, 0.3, 2}, Area{2, 0.0, 2}});
    const MonteCarloResult r2 = monte_carlo(ex2, Schedule{{1, 0, 2}}, 200000, 0);
    CHECK(std::abs(r2.mean - 0.9) <= 3 * r2.std_error);

    CHECK_THROWS_AS(monte_carlo(example1(), Schedule{{0, 1, 2}}, 0, 0), ValidationError);
}

TEST_CASE("parallel monte carlo equals the serial reference bit for bit") {
    SplitMix64 rng(71);
    const Society s = testutil::random_complete_society(9, rng);
    const Schedule sched = testutil::random_schedule(9, rng);
    const MonteCarloResult serial = monte_carlo_serial(s, sched, 20000, 42);
    const MonteCarloResult parallel = monte_carlo(s, sched, 20000, 42);
    CHECK(serial.mean == parallel.mean);
    CHECK(serial.std_error == parallel.std_error);

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const MonteCarloResult one = monte_carlo(s, sched, 20000, 42);
    omp_set_num_threads(saved);
    CHECK(one.mean == parallel.mean);
    CHECK(one.std_error == parallel.std_error);
#endif
}

TEST_CASE("monte carlo converges to the exact expectation") {
    SplitMix64 rng(81);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 9);
        const Society s = testutil::random_complete_society(n, rng);
        const Schedule sched = testutil::random_schedule(n, rng);
        const double exact = evaluate_dp(s, sched);
        const MonteCarloResult mc = monte_carlo(s, sched, 40000, 1000 + trial);
        const double slack = mc.std_error > 0 ? 4 * mc.std_error : 1e-12;
        CHECK(std::abs(mc.mean - exact) <= slack);
    }
}
