#include "casched/gadget.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "casched/exact.hpp"
#include "json.hpp"

namespace casched {

namespace {

std::vector<std::vector<int>> out_lists(const ReliabilityInstance& inst) {
    std::vector<std::vector<int>> out(inst.m);
    for (const auto& [u, v] : inst.edges) out[u].push_back(v);
    return out;
}

std::vector<int> indegrees(const ReliabilityInstance& inst) {
    std::vector<int> deg(inst.m, 0);
    for (const auto& [u, v] : inst.edges) deg[v] += 1;
    return deg;
}

// Topological order with the source first and the terminal last.
std::vector<int> topological_order(const ReliabilityInstance& inst) {
    std::vector<int> deg = indegrees(inst);
    const auto out = out_lists(inst);
    std::deque<int> ready;
    for (int v = 0; v < inst.m; ++v)
        if (deg[v] == 0) ready.push_back(v);
    std::vector<int> order;
    order.reserve(inst.m);
    while (!ready.empty()) {
        // Emit the terminal only when nothing else is available.
        int v = ready.front();
        if (v == inst.t && ready.size() > 1) {
            ready.pop_front();
            ready.push_back(v);
            v = ready.front();
        }
        ready.pop_front();
        order.push_back(v);
        for (int w : out[v])
            if (--deg[w] == 0) ready.push_back(w);
    }
    if (static_cast<int>(order.size()) != inst.m) throw ValidationError("input graph has a cycle");
    return order;
}

}  // namespace

void validate_reliability(const ReliabilityInstance& inst) {
    if (inst.m < 2) throw ValidationError("reliability instance needs at least two vertices");
    if (inst.s < 0 || inst.s >= inst.m) throw ValidationError("source id out of range");
    if (inst.t < 0 || inst.t >= inst.m) throw ValidationError("terminal id out of range");
    if (inst.s == inst.t) throw ValidationError("source and terminal must differ");
    if (!(inst.p >= 0.0 && inst.p <= 1.0)) throw ValidationError("p out of range");
    for (std::size_t j = 0; j < inst.edges.size(); ++j) {
        const auto& [u, v] = inst.edges[j];
        const std::string at = "edges[" + std::to_string(j) + "]";
        if (u < 0 || u >= inst.m || v < 0 || v >= inst.m)
            throw ValidationError("bad edge endpoint at " + at);
        if (u == v) throw ValidationError("self-loop at " + at);
        for (std::size_t i = 0; i < j; ++i)
            if (inst.edges[i] == inst.edges[j]) throw ValidationError("duplicate edge at " + at);
    }
    const std::vector<int> deg = indegrees(inst);
    if (deg[inst.s] != 0)
        throw ValidationError("source must have indegree 0 to be first in a topological order");
    for (int v = 0; v < inst.m; ++v)
        if (v != inst.s && deg[v] == 0)
            throw ValidationError("vertex " + std::to_string(v) +
                                  " has indegree 0; the blocking threshold would be invalid");
    for (const auto& [u, v] : inst.edges)
        if (u == inst.t) throw ValidationError("terminal must have no outgoing edges");
    topological_order(inst);  // throws on cycles
}

ReliabilityInstance parse_dag(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ValidationError("malformed document: not valid JSON");
    if (!doc.is_object()) throw ValidationError("malformed document: expected object");
    for (const char* key : {"m", "edges", "s", "t", "p"})
        if (!doc.contains(key)) throw ValidationError("missing " + std::string(key) + " at document root");
    ReliabilityInstance inst;
    if (!doc["m"].is_number_integer()) throw ValidationError("m must be an integer");
    if (!doc["s"].is_number_integer()) throw ValidationError("s must be an integer");
    if (!doc["t"].is_number_integer()) throw ValidationError("t must be an integer");
    if (!doc["p"].is_number()) throw ValidationError("p must be a number");
    inst.m = doc["m"].get<int>();
    inst.s = doc["s"].get<int>();
    inst.t = doc["t"].get<int>();
    inst.p = doc["p"].get<double>();
    if (!doc["edges"].is_array()) throw ValidationError("edges must be an array");
    for (std::size_t j = 0; j < doc["edges"].size(); ++j) {
        const auto& je = doc["edges"][j];
        if (!je.is_array() || je.size() != 2 || !je[0].is_number_integer() || !je[1].is_number_integer())
            throw ValidationError("malformed edge at edges[" + std::to_string(j) + "]");
        inst.edges.emplace_back(je[0].get<int>(), je[1].get<int>());
    }
    validate_reliability(inst);
    return inst;
}

GadgetInstance build_gadget(const ReliabilityInstance& inst) {
    validate_reliability(inst);
    const std::vector<int> order = topological_order(inst);
    const std::vector<int> deg = indegrees(inst);

    GadgetInstance g;
    g.source = inst.s;
    g.p = inst.p;
    g.vertex_map.assign(inst.m, {});

    // Area ids equal schedule positions: s' first, then for each vertex in
    // topological order the triple (b_v, f_v, v').
    std::vector<Area> areas;
    areas.push_back(Area{0, inst.p, 1});  // s'; threshold never consulted
    g.vertex_map[inst.s].v_prime = 0;
    int next_id = 1;
    for (int v : order) {
        if (v == inst.s) continue;
        g.vertex_map[v].blocker = next_id;
        areas.push_back(Area{next_id++, 1.0, deg[v]});
        g.vertex_map[v].forwarder = next_id;
        areas.push_back(Area{next_id++, inst.p, 1});  // threshold never consulted
        g.vertex_map[v].v_prime = next_id;
        areas.push_back(Area{next_id++, 0.0, 2});
    }

    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : inst.edges)
        edges.emplace_back(g.vertex_map[u].v_prime, g.vertex_map[v].blocker);
    for (int v = 0; v < inst.m; ++v) {
        if (v == inst.s) continue;
        edges.emplace_back(g.vertex_map[v].blocker, g.vertex_map[v].v_prime);
        edges.emplace_back(g.vertex_map[v].forwarder, g.vertex_map[v].v_prime);
    }

    g.society = make_society(std::move(areas), std::move(edges));
    g.schedule = identity_schedule(g.society.size());
    return g;
}

double reliability_bruteforce(const ReliabilityInstance& inst, bool source_operates_randomly,
                              int target, int max_vertices) {
    validate_reliability(inst);
    if (target < 0) target = inst.t;
    if (target >= inst.m) throw ValidationError("target id out of range");
    if (inst.m > max_vertices)
        throw CapError("reliability brute force cap exceeded: " + std::to_string(inst.m) +
                       " vertices, cap " + std::to_string(max_vertices));

    const auto out = out_lists(inst);
    std::vector<int> random_vertices;
    for (int v = 0; v < inst.m; ++v)
        if (source_operates_randomly || v != inst.s) random_vertices.push_back(v);
    const int f = static_cast<int>(random_vertices.size());

    std::vector<bool> alive(inst.m, true);
    std::vector<bool> reached(inst.m);
    std::vector<int> stack;
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f); ++mask) {
        double w = 1.0;
        for (int j = 0; j < f; ++j) {
            const bool up = (mask >> j) & 1;
            alive[random_vertices[j]] = up;
            w *= up ? inst.p : 1.0 - inst.p;
        }
        if (!alive[inst.s] || !alive[target]) continue;
        std::fill(reached.begin(), reached.end(), false);
        stack.assign(1, inst.s);
        reached[inst.s] = true;
        bool hit = target == inst.s;
        while (!stack.empty() && !hit) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : out[u]) {
                if (!alive[v] || reached[v]) continue;
                reached[v] = true;
                if (v == target) {
                    hit = true;
                    break;
                }
                stack.push_back(v);
            }
        }
        if (hit) total += w;
    }
    return total;
}

LambdaReport lambda_decomposition(const GadgetInstance& gadget) {
    if (gadget.p == 0.0) throw ValidationError("lambda decomposition is undefined for p = 0");

    const BruteForceReport scan = bruteforce_scan(gadget.society, gadget.schedule);
    LambdaReport report;
    for (double pr : scan.accept_prob) report.lambda += pr;

    double reconstructed = scan.accept_prob[gadget.vertex_map[gadget.source].v_prime];
    for (std::size_t v = 0; v < gadget.vertex_map.size(); ++v) {
        if (static_cast<int>(v) == gadget.source) continue;
        const double pv = scan.accept_prob[gadget.vertex_map[v].v_prime];
        report.alpha += pv;
        reconstructed += pv * (1.0 + 1.0 / gadget.p) + gadget.p;
    }
    if (std::abs(report.lambda - reconstructed) > 1e-9)
        throw std::logic_error("lambda decomposition identity violated");
    return report;
}

}  // namespace casched
