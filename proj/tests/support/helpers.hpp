#pragma once

// Shared test support: fixture loading, brute-force oracles kept independent
// of the library's own algorithms, and the zoo of expansive maps used by the
// randomized suites.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "trop/chipfire.hpp"
#include "trop/curve.hpp"
#include "trop/io.hpp"
#include "trop/morphism.hpp"
#include "trop/ratfun.hpp"

namespace troptest {

using namespace trop;

inline CurvePtr fx(const std::string& name) {
    return curve_from_json(load_json(std::string(TROP_FIXTURES_DIR) + "/" + name + ".json"));
}

inline Rat Q(const std::string& s) { return rat_from_string(s); }
inline PointRef P(const CurvePtr& c, const std::string& s) { return parse_point(*c, s); }

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"pt", "seg3", "ray", "line", "star3", "circ2", "theta"};
    return names;
}

// ---------------------------------------------------------------------------
// Brute-force distance: enumerate simple paths over the refined graph by
// depth-first search. Independent of the library's Dijkstra.

namespace oracle {

struct Node {
    std::vector<std::pair<int, Rat>> nbrs;
};

struct PathGraph {
    std::vector<Node> nodes;
    std::map<std::string, int> vertex_node;
    std::map<std::pair<std::string, Rat>, int> point_node;

    int node_for(const TropicalCurve& c, const PointRef& p) const {
        PointRef q = c.canonical_point(p);
        if (q.is_vertex()) return vertex_node.at(q.id);
        return point_node.at({q.id, q.offset});
    }
};

inline PathGraph build_path_graph(const TropicalCurve& c, const std::vector<PointRef>& extra) {
    PathGraph g;
    for (const auto& vid : c.model().vertices) {
        if (c.is_infinite_end(*c.find_vertex(vid))) continue;
        g.vertex_node[vid] = static_cast<int>(g.nodes.size());
        g.nodes.push_back({});
    }
    std::map<std::string, std::vector<Rat>> cuts;
    for (const auto& p : extra) {
        PointRef q = c.canonical_point(p);
        if (q.is_interior()) cuts[q.id].push_back(q.offset);
    }
    for (const auto& e : c.model().edges) {
        std::vector<Rat> offs = cuts.count(e.id) ? cuts[e.id] : std::vector<Rat>{};
        std::sort(offs.begin(), offs.end());
        offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
        int prev = g.vertex_node.at(e.u);
        Rat prev_off = 0;
        for (const Rat& o : offs) {
            int node = static_cast<int>(g.nodes.size());
            g.nodes.push_back({});
            g.point_node[{e.id, o}] = node;
            g.nodes[static_cast<std::size_t>(prev)].nbrs.push_back({node, o - prev_off});
            g.nodes[static_cast<std::size_t>(node)].nbrs.push_back({prev, o - prev_off});
            prev = node;
            prev_off = o;
        }
        if (!e.infinite()) {
            int last = g.vertex_node.at(e.v);
            Rat w = e.length.value() - prev_off;
            g.nodes[static_cast<std::size_t>(prev)].nbrs.push_back({last, w});
            g.nodes[static_cast<std::size_t>(last)].nbrs.push_back({prev, w});
        }
    }
    return g;
}

inline void dfs_paths(const PathGraph& g, int at, int goal, std::vector<char>& used, const Rat& sofar,
                      std::optional<Rat>& best) {
    if (at == goal) {
        if (!best || sofar < *best) best = sofar;
        return;
    }
    for (const auto& [next, w] : g.nodes[static_cast<std::size_t>(at)].nbrs) {
        if (used[static_cast<std::size_t>(next)]) continue;
        used[static_cast<std::size_t>(next)] = 1;
        dfs_paths(g, next, goal, used, sofar + w, best);
        used[static_cast<std::size_t>(next)] = 0;
    }
}

inline ExtRat brute_distance(const TropicalCurve& c, const PointRef& p, const PointRef& q) {
    PointRef a = c.canonical_point(p), b = c.canonical_point(q);
    if (a == b) return ExtRat(0);
    if (a.at_inf() || b.at_inf()) return ExtRat::pos_inf();
    PathGraph g = build_path_graph(c, {a, b});
    int s = g.node_for(c, a), t = g.node_for(c, b);
    std::vector<char> used(g.nodes.size(), 0);
    used[static_cast<std::size_t>(s)] = 1;
    std::optional<Rat> best;
    dfs_paths(g, s, t, used, Rat(0), best);
    return best ? ExtRat(*best) : ExtRat::pos_inf();
}

// Sum of outgoing slopes at a point, measured by finite differences along
// every half-edge; independent of the divisor bookkeeping.
inline long long outgoing_slope_sum(const RatFun& f, const PointRef& p) {
    const TropicalCurve& c = *f.curve();
    PointRef q = c.canonical_point(p);
    if (q.at_inf()) {
        int eidx = *c.find_edge(q.id);
        const EdgeFun& ef = f.segments()[static_cast<std::size_t>(eidx)];
        Rat far = ef.breaks.back().at + 1;
        Rat slope_toward_inf = f.value_on_edge(eidx, far + 1) - f.value_on_edge(eidx, far);
        return -static_cast<long long>(numerator(slope_toward_inf));
    }
    long long sum = 0;
    for (const auto& d : c.directions_at(q)) {
        int eidx = *c.find_edge(d.edge);
        const Edge& e = c.edge(eidx);
        Rat base = q.is_vertex() ? (d.orient > 0 ? Rat(0) : e.length.value()) : q.offset;
        // step inside the first affine segment along this direction
        Rat step = e.infinite() ? Rat(1) : e.length.value();
        for (const auto& brk : f.segments()[static_cast<std::size_t>(eidx)].breaks) {
            Rat gap = d.orient > 0 ? brk.at - base : base - brk.at;
            if (gap > 0 && gap < step) step = gap;
        }
        step /= 2;
        Rat there = f.value_on_edge(eidx, base + (d.orient > 0 ? step : -step));
        Rat here = f.value_on_edge(eidx, base);
        Rat slope = (there - here) / step;
        sum += static_cast<long long>(numerator(slope));
    }
    return sum;
}

}  // namespace oracle

// ---------------------------------------------------------------------------
// Map zoo.

inline ExpansiveMap circ2_rotation(const CurvePtr& circ2, const Rat& q) {
    if (q == 0) return ExpansiveMap::identity(circ2);
    std::vector<MapPiece> pieces = {{"e0", Rat(0), ExtRat(Rat(2) - q), "e0", q, false},
                                    {"e0", Rat(2) - q, ExtRat(Rat(2)), "e0", Rat(0), false}};
    return make_expansive(circ2, circ2, Rat(1), std::move(pieces));
}

inline ExpansiveMap circ2_reflection(const CurvePtr& circ2, const Rat& c) {
    // the reflection at c equals the reflection at c+1; normalize to [0, 1)
    Rat cc = c;
    while (cc >= 1) cc -= 1;
    while (cc < 0) cc += 1;
    std::vector<MapPiece> pieces;
    if (cc == 0) {
        pieces = {{"e0", Rat(0), ExtRat(Rat(2)), "e0", Rat(2), true}};
    } else {
        pieces = {{"e0", Rat(0), ExtRat(2 * cc), "e0", 2 * cc, true},
                  {"e0", 2 * cc, ExtRat(Rat(2)), "e0", Rat(2), true}};
    }
    return make_expansive(circ2, circ2, Rat(1), std::move(pieces));
}

inline ExpansiveMap theta_flip(const CurvePtr& theta) {
    std::vector<MapPiece> pieces = {{"e0", Rat(0), ExtRat(Rat(1)), "e0", Rat(1), true},
                                    {"e1", Rat(0), ExtRat(Rat(2)), "e1", Rat(2), true},
                                    {"e2", Rat(0), ExtRat(Rat(3)), "e2", Rat(3), true}};
    return make_expansive(theta, theta, Rat(1), std::move(pieces));
}

// The fixed map set behind the randomized-map criteria: automorphisms of
// CIRC2/THETA/LINE/STAR3 and dilations of RAY/LINE/STAR3 with r in
// {1/2, 2, 3}.
inline std::vector<ExpansiveMap> criterion_map_zoo() {
    CurvePtr circ2 = fx("circ2"), theta = fx("theta"), line = fx("line"), star3 = fx("star3"), ray = fx("ray");
    std::vector<ExpansiveMap> maps;
    maps.push_back(circ2_rotation(circ2, Q("1/2")));
    maps.push_back(circ2_rotation(circ2, Q("2/3")));
    maps.push_back(circ2_reflection(circ2, Rat(0)));
    maps.push_back(circ2_reflection(circ2, Q("3/4")));
    maps.push_back(theta_flip(theta));
    maps.push_back(ExpansiveMap::identity(theta));
    maps.push_back(line_affine_map(line, Rat(1), Rat(1)));
    maps.push_back(line_affine_map(line, Rat(1), Q("-7/3")));
    maps.push_back(line_affine_map(line, Rat(-1), Rat(0)));
    maps.push_back(line_affine_map(line, Rat(-1), Rat(5)));
    maps.push_back(star_map(star3, Rat(1), {1, 0, 2}));
    maps.push_back(star_map(star3, Rat(1), {0, 2, 1}));
    maps.push_back(star_map(star3, Rat(1), {1, 2, 0}));
    maps.push_back(ExpansiveMap::identity(star3));
    maps.push_back(star_map(ray, Q("1/2"), {0}));
    maps.push_back(star_map(ray, Rat(2), {0}));
    maps.push_back(star_map(ray, Rat(3), {0}));
    maps.push_back(line_affine_map(line, Rat(2), Rat(0)));
    maps.push_back(line_affine_map(line, Q("-1/2"), Rat(1)));
    maps.push_back(star_map(star3, Rat(3), {1, 0, 2}));
    return maps;
}

}  // namespace troptest
