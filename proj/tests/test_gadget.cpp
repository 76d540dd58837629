#include <cmath>

#include "casched/cascade.hpp"
#include "casched/exact.hpp"
#include "casched/gadget.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace casched;

namespace {

ReliabilityInstance edge_st(double p) { return {2, {{0, 1}}, 0, 1, p}; }

ReliabilityInstance path_sut(double p) { return {3, {{0, 1}, {1, 2}}, 0, 2, p}; }

// s -> u, s -> w, u -> t, w -> t with s=0, u=1, w=2, t=3.
ReliabilityInstance diamond(double p) { return {4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 0, 3, p}; }

// Random layered DAG: s = 0, t = m-1, every later vertex links back to one
// or two earlier ones, so indegrees stay positive and t is a sink.
ReliabilityInstance random_dag(int m, double p, SplitMix64& rng) {
    ReliabilityInstance inst{m, {}, 0, m - 1, p};
    for (int v = 1; v < m; ++v) {
        const int first = static_cast<int>(rng.next() % static_cast<std::uint64_t>(v));
        inst.edges.emplace_back(first, v);
        if (v >= 2 && rng.next() % 2 == 0) {
            int second = static_cast<int>(rng.next() % static_cast<std::uint64_t>(v));
            if (second == first) second = (second + 1) % v;
            if (second != first && second != m - 1) inst.edges.emplace_back(second, v);
        }
    }
    return inst;
}

}  // namespace

TEST_CASE("the smallest gadget matches the construction table") {
    const GadgetInstance g = build_gadget(edge_st(0.5));
    REQUIRE(g.society.size() == 4);
    CHECK(g.society.areas[0] == Area{0, 0.5, 1});  // s'
    CHECK(g.society.areas[1] == Area{1, 1.0, 1});  // b_t, threshold = indegree(t)
    CHECK(g.society.areas[2] == Area{2, 0.5, 1});  // f_t
    CHECK(g.society.areas[3] == Area{3, 0.0, 2});  // t'
    CHECK(g.schedule.order == std::vector<int>{0, 1, 2, 3});
    CHECK(g.vertex_map[0].v_prime == 0);
    CHECK(g.vertex_map[1].blocker == 1);
    CHECK(g.vertex_map[1].forwarder == 2);
    CHECK(g.vertex_map[1].v_prime == 3);
    CHECK(g.society.edges ==
          std::vector<std::pair<int, int>>{{0, 1}, {1, 3}, {2, 3}});
}

TEST_CASE("the diamond gadget sizes the blocking thresholds by indegree") {
    const GadgetInstance g = build_gadget(diamond(0.4));
    CHECK(g.society.size() == 10);
    const int b_t = g.vertex_map[3].blocker;
    CHECK(g.society.areas[b_t].p == 1.0);
    CHECK(g.society.areas[b_t].c == 2);
}

TEST_CASE("a two-hop path multiplies the survival coins") {
    const GadgetInstance g = build_gadget(path_sut(0.5));
    const BruteForceReport scan = bruteforce_scan(g.society, g.schedule);
    CHECK(std::abs(scan.accept_prob[g.vertex_map[2].v_prime] - 0.125) <= 1e-12);
}

TEST_CASE("reliability brute force handles the textbook instances") {
    CHECK(std::abs(reliability_bruteforce(edge_st(0.5), true) - 0.25) <= 1e-15);
    CHECK(std::abs(reliability_bruteforce(edge_st(0.5), false) - 0.5) <= 1e-15);
    CHECK(reliability_bruteforce(diamond(1.0), true) == 1.0);
    SplitMix64 rng(1);
    CHECK_THROWS_AS(reliability_bruteforce(random_dag(21, 0.5, rng), true), CapError);
}

TEST_CASE("gadget acceptance equals per-target reliability on random DAGs") {
    SplitMix64 rng(83);
    const double ps[] = {0.3, 0.5, 0.7};
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 3 + static_cast<int>(rng.next() % 6);
        const ReliabilityInstance inst = random_dag(m, ps[trial % 3], rng);
        const GadgetInstance g = build_gadget(inst);
        const BruteForceReport scan = bruteforce_scan(g.society, g.schedule);
        for (int v = 0; v < m; ++v) {
            if (v == inst.s) continue;
            const double expected = reliability_bruteforce(inst, true, v);
            CHECK(std::abs(scan.accept_prob[g.vertex_map[v].v_prime] - expected) <= 1e-9);
        }
    }
}

TEST_CASE("blockers fire exactly when a predecessor adopted") {
    SplitMix64 rng(89);
    const ReliabilityInstance inst = random_dag(5, 0.5, rng);
    const GadgetInstance g = build_gadget(inst);
    const int n = g.society.size();

    std::vector<int> free_ids;  // the survival coins: s' and every f_v
    PreferenceVector base(n, Pref::Reject);
    for (int v = 0; v < n; ++v) {
        if (g.society.areas[v].p == 1.0) base[v] = Pref::Accept;
        if (g.society.areas[v].p == 0.5) free_ids.push_back(v);
    }
    REQUIRE(free_ids.size() == 5);

    std::vector<std::vector<int>> preds(inst.m);
    for (const auto& [u, v] : inst.edges) preds[v].push_back(u);

    for (std::uint64_t mask = 0; mask < (1u << free_ids.size()); ++mask) {
        PreferenceVector prefs = base;
        for (std::size_t j = 0; j < free_ids.size(); ++j)
            prefs[free_ids[j]] = (mask >> j) & 1 ? Pref::Accept : Pref::Reject;
        const CascadeRun run = run_deterministic(g.society, g.schedule, prefs);
        for (int v = 0; v < inst.m; ++v) {
            if (v == inst.s) continue;
            bool predecessor_adopted = false;
            for (int u : preds[v])
                predecessor_adopted =
                    predecessor_adopted || run.decisions[g.vertex_map[u].v_prime] == 1;
            CHECK((run.decisions[g.vertex_map[v].blocker] == 1) == predecessor_adopted);
            const bool conjunction = run.decisions[g.vertex_map[v].blocker] == 1 &&
                                     run.decisions[g.vertex_map[v].forwarder] == 1;
            CHECK((run.decisions[g.vertex_map[v].v_prime] == 1) == conjunction);
        }
    }
}

TEST_CASE("lambda decomposition on the single edge") {
    const LambdaReport r = lambda_decomposition(build_gadget(edge_st(0.5)));
    CHECK(std::abs(r.alpha - 0.25) <= 1e-12);
    // s' + b_t + f_t + t' = 0.5 + 0.75 + 0.5 + 0.25... b_t accepts unless
    // the predecessor s' rejected, so Pr = 0.5; lambda = 0.5+0.5+0.5+0.25.
    CHECK(std::abs(r.lambda - 1.75) <= 1e-12);
}

TEST_CASE("certain survival reaches everything downstream of the source") {
    SplitMix64 rng(97);
    const ReliabilityInstance inst = random_dag(6, 1.0, rng);
    const LambdaReport r = lambda_decomposition(build_gadget(inst));
    CHECK(std::abs(r.alpha - 5.0) <= 1e-12);  // every non-source vertex is reachable
}

TEST_CASE("alpha splits into per-target reliabilities") {
    const ReliabilityInstance inst = diamond(0.5);
    const LambdaReport r = lambda_decomposition(build_gadget(inst));
    double expected = 0.0;
    for (int v = 1; v < inst.m; ++v) expected += reliability_bruteforce(inst, true, v);
    CHECK(std::abs(r.alpha - expected) <= 1e-12);
}

TEST_CASE("lambda decomposition rejects p = 0") {
    CHECK_THROWS_AS(lambda_decomposition(build_gadget(edge_st(0.0))), ValidationError);
}

TEST_CASE("reliability validation rejects malformed instances") {
    CHECK_THROWS_AS(validate_reliability({2, {{0, 1}, {1, 0}}, 0, 1, 0.5}), ValidationError);  // cycle
    CHECK_THROWS_AS(validate_reliability({3, {{0, 2}}, 0, 2, 0.5}), ValidationError);  // isolated vertex
    CHECK_THROWS_AS(validate_reliability({2, {{0, 1}}, 0, 0, 0.5}), ValidationError);  // s == t
    CHECK_THROWS_AS(validate_reliability({3, {{0, 1}, {2, 0}}, 0, 1, 0.5}), ValidationError);  // into s
    CHECK_THROWS_AS(validate_reliability({3, {{0, 2}, {2, 1}}, 0, 2, 0.5}), ValidationError);  // t out
    CHECK_THROWS_AS(validate_reliability({2, {{0, 1}}, 0, 1, 1.5}), ValidationError);  // p range
}

TEST_CASE("dag files parse with validation") {
    const ReliabilityInstance inst = parse_dag(R"({"m":3,"edges":[[0,1],[1,2]],"s":0,"t":2,"p":0.5})");
    CHECK(inst.m == 3);
    CHECK(inst.p == 0.5);
    CHECK_THROWS_AS(parse_dag(R"({"m":3,"edges":[],"s":0,"t":2})"), ValidationError);
    CHECK_THROWS_AS(parse_dag("[]"), ValidationError);
}
