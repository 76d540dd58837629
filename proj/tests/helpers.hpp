#pragma once

#include <utility>
#include <vector>

#include "casched/model.hpp"
#include "casched/rng.hpp"

namespace testutil {

using casched::Area;
using casched::Schedule;
using casched::Society;
using casched::SplitMix64;

inline std::vector<int> random_permutation(int n, SplitMix64& rng) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

inline Society random_complete_society(int n, SplitMix64& rng) {
    std::vector<Area> areas;
    for (int v = 0; v < n; ++v)
        areas.push_back(Area{v, rng.next_double(),
                             1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n))});
    return make_society(std::move(areas));
}

inline Society uniform_p_society(int n, double p, SplitMix64& rng) {
    std::vector<Area> areas;
    for (int v = 0; v < n; ++v)
        areas.push_back(Area{v, p, 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n))});
    return make_society(std::move(areas));
}

// Random connected-ish sparse graph: each vertex beyond the first links back
// to one or two earlier vertices.
inline Society random_partial_society(int n, SplitMix64& rng) {
    std::vector<Area> areas;
    for (int v = 0; v < n; ++v)
        areas.push_back(Area{v, rng.next_double(),
                             1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n))});
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        const int links = 1 + static_cast<int>(rng.next() % 2);
        int prev = -1;
        for (int l = 0; l < links && l < v; ++l) {
            int u = static_cast<int>(rng.next() % static_cast<std::uint64_t>(v));
            if (u == prev) u = (u + 1) % v;
            if (u == prev) break;
            edges.emplace_back(u, v);
            prev = u;
        }
    }
    return make_society(std::move(areas), std::move(edges));
}

inline Schedule random_schedule(int n, SplitMix64& rng) { return Schedule{random_permutation(n, rng)}; }

}  // namespace testutil
