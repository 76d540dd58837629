#pragma once

#include <string>
#include <utility>
#include <vector>

#include "casched/model.hpp"

namespace casched {

// s-t connectedness reliability instance: vertices of a DAG fail
// independently with probability 1-p, and we ask for the probability that a
// directed path of surviving vertices connects s to t.
struct ReliabilityInstance {
    int m = 0;  // vertex count, ids 0..m-1
    std::vector<std::pair<int, int>> edges;  // directed (u, v)
    int s = 0;
    int t = 0;
    double p = 0.0;
};

void validate_reliability(const ReliabilityInstance& inst);
ReliabilityInstance parse_dag(const std::string& text);

// Cascade instance that simulates the reliability problem. Every DAG vertex
// v != s becomes three areas: a blocking area b_v (p=1, c=indegree) that
// accepts iff some predecessor accepted, a forwarding area f_v (p=p, c=1)
// carrying the survival coin, and v' (p=0, c=2) that accepts iff both did.
struct GadgetVertexIds {
    int v_prime = -1;
    int blocker = -1;
    int forwarder = -1;
};

struct GadgetInstance {
    Society society;
    Schedule schedule;
    std::vector<GadgetVertexIds> vertex_map;  // by original DAG vertex id
    int source = 0;
    double p = 0.0;
};

GadgetInstance build_gadget(const ReliabilityInstance& inst);

// Exhaustive reliability over all survival patterns. When
// source_operates_randomly is false, s is forced operative (weight 1).
// target = -1 means inst.t.
double reliability_bruteforce(const ReliabilityInstance& inst, bool source_operates_randomly,
                              int target = -1, int max_vertices = 20);

// Lambda = expected adopters summed over all gadget areas; alpha = sum over
// original vertices v != s of Pr(X_{v'} = 1). Checks the decomposition
// Lambda = sum_v (Pr(X_{v'})*(1 + 1/p) + p) + Pr(X_{s'}).
struct LambdaReport {
    double lambda = 0.0;
    double alpha = 0.0;
};

LambdaReport lambda_decomposition(const GadgetInstance& gadget);

}  // namespace casched
