#include "wrp/instance.hpp"

#include "json.hpp"

#include <utility>

namespace wrp {

using json = nlohmann::ordered_json;

std::vector<Arc> directed_arcs(const AdjacencyGraph& g) {
    std::vector<Arc> arcs;
    arcs.reserve(2 * g.edges.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        arcs.push_back({g.edges[e].i, g.edges[e].j, e});
        arcs.push_back({g.edges[e].j, g.edges[e].i, e});
    }
    return arcs;
}

SppInstance make_spp_instance(Subdivision sub, const Vec& source, const Vec& target,
                              bool facet_only) {
    SppInstance inst;
    inst.sub = std::move(sub);
    inst.graph = adjacency_graph(inst.sub, facet_only);
    inst.source = source;
    inst.target = target;
    inst.s = locate_point(inst.sub, source);
    inst.t = locate_point(inst.sub, target);
    inst.arcs = directed_arcs(inst.graph);
    return inst;
}

WeberInstance make_weber_instance(Subdivision sub, std::vector<Demand> demands,
                                  bool facet_only) {
    if (demands.empty()) throw Error("NoDemands", "weber instance needs n >= 1");
    WeberInstance inst;
    inst.sub = std::move(sub);
    inst.graph = adjacency_graph(inst.sub, facet_only);
    inst.demands = std::move(demands);
    for (const auto& d : inst.demands) {
        if (d.weight <= 0.0) throw Error("NonpositiveWeight", "demand weight must be > 0");
        inst.demand_region.push_back(locate_point(inst.sub, d.point));
    }
    inst.arcs = directed_arcs(inst.graph);
    return inst;
}

namespace {

Vec parse_point(const json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw Error("BadInstanceFile", "point has wrong dimension");
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = j[k].get<double>();
    return v;
}

json point_to_json(const Vec& v) {
    json j = json::array();
    for (int k = 0; k < v.size(); ++k) j.push_back(v[k]);
    return j;
}

}  // namespace

namespace {

InstanceFile parse_instance_impl(const json& j) {
    InstanceFile f;
    const int dim = j.at("dim").get<int>();
    std::vector<Region> regions;
    for (const auto& jr : j.at("regions")) {
        Region r;
        std::vector<Vec> pts;
        for (const auto& jv : jr.at("vertices")) pts.push_back(parse_point(jv, dim));
        r.polytope = make_polytope(dim, std::move(pts));
        r.p = PNorm::parse(jr.at("p").get<std::string>());
        r.weight = jr.value("weight", 1.0);
        regions.push_back(std::move(r));
    }
    f.sub = make_subdivision(dim, std::move(regions));
    if (j.contains("source")) {
        f.has_terminals = true;
        f.source = parse_point(j.at("source"), dim);
        f.target = parse_point(j.at("target"), dim);
    } else if (j.contains("demands")) {
        for (const auto& jd : j.at("demands")) {
            Demand d;
            d.point = parse_point(jd.at("point"), dim);
            d.weight = jd.value("weight", 1.0);
            f.demands.push_back(std::move(d));
        }
    } else {
        throw Error("BadInstanceFile", "need source/target or demands");
    }
    return f;
}

}  // namespace

InstanceFile parse_instance_json(const std::string& text) {
    try {
        return parse_instance_impl(json::parse(text));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error("BadInstanceFile", e.what());
    }
}

std::string instance_to_json(const InstanceFile& f) {
    json j;
    j["dim"] = f.sub.dim;
    j["regions"] = json::array();
    for (const auto& r : f.sub.regions) {
        json jr;
        jr["vertices"] = json::array();
        for (const auto& v : r.polytope.vertices) jr["vertices"].push_back(point_to_json(v));
        jr["p"] = r.p.str();
        jr["weight"] = r.weight;
        j["regions"].push_back(std::move(jr));
    }
    if (f.has_terminals) {
        j["source"] = point_to_json(f.source);
        j["target"] = point_to_json(f.target);
    } else {
        j["demands"] = json::array();
        for (const auto& d : f.demands) {
            json jd;
            jd["point"] = point_to_json(d.point);
            jd["weight"] = d.weight;
            j["demands"].push_back(std::move(jd));
        }
    }
    return j.dump(2) + "\n";
}

SolutionFile parse_solution_json(const std::string& text) {
    json j;
    SolutionFile f;
    try {
        j = json::parse(text);
        f.value = j.at("value").get<double>();
        f.lb = j.value("lb", f.value);
        f.gap_pct = j.value("gap_pct", 0.0);
        if (j.contains("path"))
            for (const auto& jr : j.at("path")) f.path.push_back(jr.get<int>());
        if (j.contains("gates"))
            for (const auto& jg : j.at("gates")) {
                Vec g(jg.size());
                for (int k = 0; k < g.size(); ++k) g[k] = jg[k].get<double>();
                f.gates.push_back(std::move(g));
            }
        if (j.contains("facility")) {
            f.has_facility = true;
            const auto& jf = j.at("facility");
            f.facility.resize(jf.size());
            for (int k = 0; k < f.facility.size(); ++k) f.facility[k] = jf[k].get<double>();
        }
    } catch (const std::exception& e) {
        throw Error("BadSolutionFile", e.what());
    }
    return f;
}

std::string solution_to_json(const SolutionFile& f) {
    json j;
    j["value"] = f.value;
    j["lb"] = f.lb;
    j["gap_pct"] = f.gap_pct;
    j["path"] = f.path;
    j["gates"] = json::array();
    for (const auto& g : f.gates) j["gates"].push_back(point_to_json(g));
    if (f.has_facility) j["facility"] = point_to_json(f.facility);
    return j.dump(2) + "\n";
}

}  // namespace wrp
