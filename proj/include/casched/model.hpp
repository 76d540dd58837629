#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "casched/common.hpp"

namespace casched {

// One population unit. p is the initial acceptance probability, c the
// threshold: once the absolute margin of earlier accept-minus-reject
// decisions reaches c, the area follows the majority instead of its own
// preference.
struct Area {
    int id = 0;
    double p = 0.0;
    int c = 1;

    double q() const { return 1.0 - p; }
    bool operator==(const Area&) const = default;
};

// Areas plus the influence graph. complete == true means influences
// propagate between every two areas; otherwise only along `edges`
// (undirected, normalized to u < v and sorted).
struct Society {
    std::vector<Area> areas;
    bool complete = true;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adjacency;  // empty for complete topology

    int size() const { return static_cast<int>(areas.size()); }

    bool operator==(const Society& o) const {
        return areas == o.areas && complete == o.complete && edges == o.edges;
    }
};

// order[t-1] is the area scheduled at time t.
struct Schedule {
    std::vector<int> order;
    bool operator==(const Schedule&) const = default;
};

// A (p, c) class together with how many areas share it.
struct TypeProfile {
    double p = 0.0;
    int c = 1;
    int count = 0;
    bool operator==(const TypeProfile&) const = default;
};

enum class Pref : std::uint8_t { Reject = 0, Accept = 1 };
using PreferenceVector = std::vector<Pref>;

// Validating constructors. Areas may arrive in any order; they are stored
// sorted by id and ids must be exactly 0..n-1.
Society make_society(std::vector<Area> areas);
Society make_society(std::vector<Area> areas, std::vector<std::pair<int, int>> edges);

void validate_schedule(const Society& society, const Schedule& schedule);
void validate_profiles(const std::vector<TypeProfile>& profiles);

// JSON file formats:
//   society:  {"areas":[{"id":0,"p":0.2,"c":1},...],
//              "graph":{"edges":[[0,1],...]}}     "graph" omitted => complete
//   schedule: {"order":[2,0,1]}
//   types:    {"types":[{"p":0.49,"c":11,"count":7},...]}
Society parse_society(const std::string& text);
std::string serialize_society(const Society& society);
Schedule parse_schedule(const std::string& text);
std::string serialize_schedule(const Schedule& schedule);
std::vector<TypeProfile> parse_types(const std::string& text);

// Materializes a typed population: count_i areas per profile, ids assigned
// profile by profile in input order, complete topology.
Society expand_types(const std::vector<TypeProfile>& profiles);

Schedule identity_schedule(int n);

// All n(n-1)/2 undirected pairs; oracle helper for tests that compare the
// complete topology against its explicit edge list.
std::vector<std::pair<int, int>> complete_edge_list(int n);

}  // namespace casched
