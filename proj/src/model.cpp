#include "casched/model.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace casched {

namespace {

using nlohmann::json;

void validate_areas(const std::vector<Area>& areas) {
    const int n = static_cast<int>(areas.size());
    if (n == 0) throw ValidationError("empty society");
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < areas.size(); ++i) {
        const Area& a = areas[i];
        const std::string at = "areas[" + std::to_string(i) + "]";
        if (a.id < 0 || a.id >= n) throw ValidationError("id out of range at " + at + ".id");
        if (seen[a.id]) throw ValidationError("duplicate id at " + at + ".id");
        seen[a.id] = true;
        if (!(a.p >= 0.0 && a.p <= 1.0)) throw ValidationError("p out of range at " + at + ".p");
        if (a.c < 1) throw ValidationError("c out of range at " + at + ".c");
    }
}

std::vector<std::pair<int, int>> normalize_edges(std::vector<std::pair<int, int>> edges, int n) {
    for (std::size_t j = 0; j < edges.size(); ++j) {
        auto& [u, v] = edges[j];
        const std::string at = "graph.edges[" + std::to_string(j) + "]";
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ValidationError("bad edge endpoint at " + at);
        if (u == v) throw ValidationError("self-loop at " + at);
        if (u > v) std::swap(u, v);
    }
    std::vector<std::pair<int, int>> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        // Report the position in the original document.
        std::set<std::pair<int, int>> seen;
        for (std::size_t j = 0; j < edges.size(); ++j)
            if (!seen.insert(edges[j]).second)
                throw ValidationError("duplicate edge at graph.edges[" + std::to_string(j) + "]");
    }
    return sorted;
}

const json& require(const json& obj, const char* key, const std::string& at) {
    if (!obj.contains(key)) throw ValidationError("missing " + std::string(key) + " at " + at);
    return obj.at(key);
}

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ValidationError("malformed document: not valid JSON");
    return doc;
}

}  // namespace

Society make_society(std::vector<Area> areas) {
    validate_areas(areas);
    std::sort(areas.begin(), areas.end(), [](const Area& a, const Area& b) { return a.id < b.id; });
    Society s;
    s.areas = std::move(areas);
    s.complete = true;
    return s;
}

Society make_society(std::vector<Area> areas, std::vector<std::pair<int, int>> edges) {
    validate_areas(areas);
    std::sort(areas.begin(), areas.end(), [](const Area& a, const Area& b) { return a.id < b.id; });
    Society s;
    s.areas = std::move(areas);
    s.complete = false;
    s.edges = normalize_edges(std::move(edges), s.size());
    s.adjacency.assign(s.size(), {});
    for (const auto& [u, v] : s.edges) {
        s.adjacency[u].push_back(v);
        s.adjacency[v].push_back(u);
    }
    return s;
}

void validate_schedule(const Society& society, const Schedule& schedule) {
    const int n = society.size();
    if (static_cast<int>(schedule.order.size()) != n)
        throw ValidationError("schedule length does not match society size");
    std::vector<bool> seen(n, false);
    for (int v : schedule.order) {
        if (v < 0 || v >= n) throw ValidationError("schedule entry out of range: " + std::to_string(v));
        if (seen[v]) throw ValidationError("duplicate schedule entry: " + std::to_string(v));
        seen[v] = true;
    }
}

void validate_profiles(const std::vector<TypeProfile>& profiles) {
    if (profiles.empty()) throw ValidationError("empty type list");
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const TypeProfile& t = profiles[i];
        const std::string at = "types[" + std::to_string(i) + "]";
        if (!(t.p >= 0.0 && t.p <= 1.0)) throw ValidationError("p out of range at " + at + ".p");
        if (t.c < 1) throw ValidationError("c out of range at " + at + ".c");
        if (t.count < 0) throw ValidationError("count out of range at " + at + ".count");
        for (std::size_t j = 0; j < i; ++j)
            if (profiles[j].p == t.p && profiles[j].c == t.c)
                throw ValidationError("duplicate type at " + at);
    }
}

Society parse_society(const std::string& text) {
    json doc = parse_document(text);
    if (!doc.is_object()) throw ValidationError("malformed document: expected object");
    const json& jareas = require(doc, "areas", "document root");
    if (!jareas.is_array()) throw ValidationError("malformed document: areas must be an array");

    std::vector<Area> areas;
    areas.reserve(jareas.size());
    for (std::size_t i = 0; i < jareas.size(); ++i) {
        const json& ja = jareas[i];
        const std::string at = "areas[" + std::to_string(i) + "]";
        if (!ja.is_object()) throw ValidationError("malformed area at " + at);
        Area a;
        const json& jid = require(ja, "id", at);
        const json& jp = require(ja, "p", at);
        const json& jc = require(ja, "c", at);
        if (!jid.is_number_integer()) throw ValidationError("id must be an integer at " + at + ".id");
        if (!jp.is_number()) throw ValidationError("p must be a number at " + at + ".p");
        if (!jc.is_number_integer()) throw ValidationError("c must be an integer at " + at + ".c");
        a.id = jid.get<int>();
        a.p = jp.get<double>();
        a.c = jc.get<int>();
        areas.push_back(a);
    }

    if (!doc.contains("graph")) return make_society(std::move(areas));

    const json& jgraph = doc.at("graph");
    const json& jedges = require(jgraph, "edges", "graph");
    if (!jedges.is_array()) throw ValidationError("malformed document: graph.edges must be an array");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(jedges.size());
    for (std::size_t j = 0; j < jedges.size(); ++j) {
        const json& je = jedges[j];
        const std::string at = "graph.edges[" + std::to_string(j) + "]";
        if (!je.is_array() || je.size() != 2 || !je[0].is_number_integer() || !je[1].is_number_integer())
            throw ValidationError("malformed edge at " + at);
        edges.emplace_back(je[0].get<int>(), je[1].get<int>());
    }
    return make_society(std::move(areas), std::move(edges));
}

std::string serialize_society(const Society& society) {
    json doc;
    doc["areas"] = json::array();
    for (const Area& a : society.areas)
        doc["areas"].push_back({{"id", a.id}, {"p", a.p}, {"c", a.c}});
    if (!society.complete) {
        json jedges = json::array();
        for (const auto& [u, v] : society.edges) jedges.push_back({u, v});
        doc["graph"] = {{"edges", std::move(jedges)}};
    }
    return doc.dump();
}

Schedule parse_schedule(const std::string& text) {
    json doc = parse_document(text);
    if (!doc.is_object()) throw ValidationError("malformed document: expected object");
    const json& jorder = require(doc, "order", "document root");
    if (!jorder.is_array()) throw ValidationError("malformed document: order must be an array");
    Schedule s;
    s.order.reserve(jorder.size());
    for (std::size_t i = 0; i < jorder.size(); ++i) {
        if (!jorder[i].is_number_integer())
            throw ValidationError("order entry must be an integer at order[" + std::to_string(i) + "]");
        s.order.push_back(jorder[i].get<int>());
    }
    const int n = static_cast<int>(s.order.size());
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < s.order.size(); ++i) {
        int v = s.order[i];
        const std::string at = "order[" + std::to_string(i) + "]";
        if (v < 0 || v >= n) throw ValidationError("order entry out of range at " + at);
        if (seen[v]) throw ValidationError("duplicate order entry at " + at);
        seen[v] = true;
    }
    return s;
}

std::string serialize_schedule(const Schedule& schedule) {
    json doc;
    doc["order"] = schedule.order;
    return doc.dump();
}

std::vector<TypeProfile> parse_types(const std::string& text) {
    json doc = parse_document(text);
    if (!doc.is_object()) throw ValidationError("malformed document: expected object");
    const json& jtypes = require(doc, "types", "document root");
    if (!jtypes.is_array()) throw ValidationError("malformed document: types must be an array");
    std::vector<TypeProfile> profiles;
    profiles.reserve(jtypes.size());
    for (std::size_t i = 0; i < jtypes.size(); ++i) {
        const json& jt = jtypes[i];
        const std::string at = "types[" + std::to_string(i) + "]";
        if (!jt.is_object()) throw ValidationError("malformed type at " + at);
        TypeProfile t;
        const json& jp = require(jt, "p", at);
        const json& jc = require(jt, "c", at);
        const json& jcount = require(jt, "count", at);
        if (!jp.is_number()) throw ValidationError("p must be a number at " + at + ".p");
        if (!jc.is_number_integer()) throw ValidationError("c must be an integer at " + at + ".c");
        if (!jcount.is_number_integer())
            throw ValidationError("count must be an integer at " + at + ".count");
        t.p = jp.get<double>();
        t.c = jc.get<int>();
        t.count = jcount.get<int>();
        profiles.push_back(t);
    }
    validate_profiles(profiles);
    return profiles;
}

Society expand_types(const std::vector<TypeProfile>& profiles) {
    validate_profiles(profiles);
    std::vector<Area> areas;
    int id = 0;
    for (const TypeProfile& t : profiles)
        for (int i = 0; i < t.count; ++i) areas.push_back(Area{id++, t.p, t.c});
    if (areas.empty()) throw ValidationError("empty population: total type count is zero");
    return make_society(std::move(areas));
}

Schedule identity_schedule(int n) {
    Schedule s;
    s.order.resize(n);
    for (int i = 0; i < n; ++i) s.order[i] = i;
    return s;
}

std::vector<std::pair<int, int>> complete_edge_list(int n) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return edges;
}

}  // namespace casched
