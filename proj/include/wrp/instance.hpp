#pragma once

#include "wrp/geometry.hpp"

#include <string>
#include <vector>

namespace wrp {

// Directed arc of G^D; edge is the index of the undirected edge carrying F_ij.
struct Arc {
    int from, to, edge;
};

struct SppInstance {
    Subdivision sub;
    AdjacencyGraph graph;
    Vec source, target;
    int s = -1, t = -1;  // region indices via locate_point
    std::vector<Arc> arcs;
};

struct Demand {
    Vec point;
    double weight = 1.0;
};

struct WeberInstance {
    Subdivision sub;
    AdjacencyGraph graph;
    std::vector<Demand> demands;
    std::vector<int> demand_region;
    std::vector<Arc> arcs;
};

// Arcs are enumerated edge by edge, (i,j) then (j,i), matching edge order.
std::vector<Arc> directed_arcs(const AdjacencyGraph& g);

SppInstance make_spp_instance(Subdivision sub, const Vec& source, const Vec& target,
                              bool facet_only = false);
WeberInstance make_weber_instance(Subdivision sub, std::vector<Demand> demands,
                                  bool facet_only = false);

// Instance files hold either source/target (shortest path) or demands (Weber).
struct InstanceFile {
    Subdivision sub;
    bool has_terminals = false;
    Vec source, target;
    std::vector<Demand> demands;
};

InstanceFile parse_instance_json(const std::string& text);
std::string instance_to_json(const InstanceFile& f);

struct SolutionFile {
    double value = 0.0;
    double lb = 0.0;
    double gap_pct = 0.0;
    std::vector<int> path;  // 1-based region indices, matching the figures
    std::vector<Vec> gates;
    bool has_facility = false;
    Vec facility;
};

SolutionFile parse_solution_json(const std::string& text);
std::string solution_to_json(const SolutionFile& f);

}  // namespace wrp
