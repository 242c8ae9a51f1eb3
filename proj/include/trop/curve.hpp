#pragma once

// Metric-graph models of tropical curves: validation, points, distances,
// valence, genus, canonical model, and the star-shaped classification.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trop/error.hpp"
#include "trop/rational.hpp"

namespace trop {

struct Edge {
    std::string id;
    std::string u, v;  // endpoint vertex ids; for infinite edges, v is the infinite end
    ExtRat length;
    std::optional<std::string> inf_end;  // set iff length is infinite

    bool infinite() const { return length.is_pos_inf(); }
};

struct Model {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
};

// A location on a curve: a vertex, a point strictly inside an edge (offset
// measured from the edge's first endpoint), or the point at infinity of an
// infinite edge. Canonical form: endpoint offsets become vertex refs, and
// vertex refs of infinite ends become Infinity refs.
struct PointRef {
    enum class Kind : int { Vertex = 0, Interior = 1, Infinity = 2 };

    Kind kind = Kind::Vertex;
    std::string id;  // vertex id (Vertex) or edge id (Interior / Infinity)
    Rat offset = 0;  // Interior only

    static PointRef vertex(std::string v) { return {Kind::Vertex, std::move(v), 0}; }
    static PointRef interior(std::string e, Rat off) { return {Kind::Interior, std::move(e), std::move(off)}; }
    static PointRef at_infinity(std::string e) { return {Kind::Infinity, std::move(e), 0}; }

    bool is_vertex() const { return kind == Kind::Vertex; }
    bool is_interior() const { return kind == Kind::Interior; }
    bool at_inf() const { return kind == Kind::Infinity; }

    friend bool operator==(const PointRef& a, const PointRef& b) {
        return a.kind == b.kind && a.id == b.id && a.offset == b.offset;
    }
    friend bool operator<(const PointRef& a, const PointRef& b) {
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        if (a.id != b.id) return a.id < b.id;
        return a.offset < b.offset;
    }

    std::string str() const {
        switch (kind) {
            case Kind::Vertex: return id;
            case Kind::Interior: return id + "@" + rat_to_string(offset);
            case Kind::Infinity: return id + "@inf";
        }
        return {};
    }
};

// A half-edge at a finite point: the edge it runs along and whether it goes
// toward increasing (+1) or decreasing (-1) offset.
struct Direction {
    PointRef base;
    std::string edge;
    int orient = +1;
};

// One leg of a canonical edge inside the original model: walk `edge` from
// offset `from` to offset `to` (to may be inf on the last leg of an infinite
// chain; from > to means the edge is traversed backwards).
struct ChainPiece {
    std::string edge;
    Rat from;
    ExtRat to;
};

struct CanonicalChart {
    Model model;                                              // vertices/edges sorted by id
    std::map<std::string, PointRef> vertex_points;            // canonical vertex id -> point of the curve
    std::map<std::string, std::vector<ChainPiece>> edge_paths;  // canonical edge id -> walk ends[0] -> ends[1]
};

class TropicalCurve;
using CurvePtr = std::shared_ptr<const TropicalCurve>;

class TropicalCurve {
public:
    static CurvePtr build(Model model);

    const Model& model() const { return model_; }
    const CanonicalChart& chart() const { return chart_; }

    std::size_t vertex_count() const { return model_.vertices.size(); }
    std::size_t edge_count() const { return model_.edges.size(); }
    bool singleton() const { return model_.edges.empty(); }

    std::optional<int> find_vertex(std::string_view id) const {
        auto it = vidx_.find(std::string(id));
        return it == vidx_.end() ? std::nullopt : std::optional<int>(it->second);
    }
    std::optional<int> find_edge(std::string_view id) const {
        auto it = eidx_.find(std::string(id));
        return it == eidx_.end() ? std::nullopt : std::optional<int>(it->second);
    }
    const Edge& edge(int i) const { return model_.edges[static_cast<std::size_t>(i)]; }
    const std::string& vertex_id(int i) const { return model_.vertices[static_cast<std::size_t>(i)]; }

    int graph_valence(int vidx) const { return valence_[static_cast<std::size_t>(vidx)]; }
    bool is_infinite_end(int vidx) const { return inf_edge_of_vertex_[static_cast<std::size_t>(vidx)] >= 0; }
    int infinite_edge_of(int vidx) const { return inf_edge_of_vertex_[static_cast<std::size_t>(vidx)]; }

    // Incident edge ends at a vertex: (edge index, end 0/1); loops appear twice.
    const std::vector<std::pair<int, int>>& incident(int vidx) const {
        return adjacency_[static_cast<std::size_t>(vidx)];
    }

    int genus() const { return genus_; }
    bool is_circle() const { return is_circle_; }
    Rat circumference() const { return circumference_; }  // circle only

    PointRef canonical_point(const PointRef& p) const;
    bool has_point(const PointRef& p) const {
        try {
            canonical_point(p);
            return true;
        } catch (const Error&) {
            return false;
        }
    }

    int valence(const PointRef& p) const;
    std::vector<Direction> directions_at(const PointRef& p) const;
    ExtRat distance(const PointRef& p, const PointRef& q) const;
    ExtRat injectivity_radius(const PointRef& p) const;
    bool star_infinite() const;

    // Points of the curve carrying the canonical-model vertices, infinite ends last.
    std::vector<PointRef> canonical_points() const {
        std::vector<PointRef> finite, infinite;
        for (const auto& [id, p] : chart_.vertex_points)
            (p.at_inf() ? infinite : finite).push_back(p);
        finite.insert(finite.end(), infinite.begin(), infinite.end());
        return finite;
    }

private:
    TropicalCurve() = default;

    void validate_and_index();
    void build_chart();

    Model model_;
    std::map<std::string, int> vidx_;
    std::map<std::string, int> eidx_;
    std::vector<int> valence_;
    std::vector<int> inf_edge_of_vertex_;  // -1 unless the vertex is an infinite end
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
    int genus_ = 0;
    bool is_circle_ = false;
    bool is_line_ = false;  // the doubly-infinite path
    Rat circumference_ = 0;
    CanonicalChart chart_;

    friend class RefinedGraph;
};

inline bool same_curve(const TropicalCurve& a, const TropicalCurve& b) {
    if (&a == &b) return true;
    if (a.model().vertices != b.model().vertices) return false;
    const auto& ea = a.model().edges;
    const auto& eb = b.model().edges;
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (ea[i].id != eb[i].id || ea[i].u != eb[i].u || ea[i].v != eb[i].v ||
            !(ea[i].length == eb[i].length) || ea[i].inf_end != eb[i].inf_end)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Exact shortest paths over a refinement of the model.
//
// Nodes are the finite model vertices plus caller-chosen interior points;
// consecutive points along an edge become weighted segments. Points at
// infinity are not nodes: no finite path passes through them.
class RefinedGraph {
public:
    struct Entry {
        Rat off;
        int node;
    };

    RefinedGraph(const TropicalCurve& c, const std::map<int, std::vector<Rat>>& extra_points) : curve_(c) {
        int n = 0;
        vertex_node_.assign(c.vertex_count(), -1);
        for (std::size_t i = 0; i < c.vertex_count(); ++i)
            if (!c.is_infinite_end(static_cast<int>(i))) vertex_node_[i] = n++;
        chains_.resize(c.edge_count());
        for (std::size_t ei = 0; ei < c.edge_count(); ++ei) {
            const Edge& e = c.edge(static_cast<int>(ei));
            std::vector<Rat> offs;
            if (auto it = extra_points.find(static_cast<int>(ei)); it != extra_points.end()) offs = it->second;
            std::sort(offs.begin(), offs.end());
            offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
            auto& chain = chains_[ei];
            chain.push_back({Rat(0), vertex_node_[static_cast<std::size_t>(*c.find_vertex(e.u))]});
            for (const Rat& o : offs) {
                if (o == 0 || (e.length.is_finite() && o == e.length.value())) continue;
                chain.push_back({o, n++});
            }
            if (e.length.is_finite())
                chain.push_back({e.length.value(), vertex_node_[static_cast<std::size_t>(*c.find_vertex(e.v))]});
        }
        adj_.resize(static_cast<std::size_t>(n));
        for (const auto& chain : chains_) {
            for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
                Rat w = chain[k + 1].off - chain[k].off;
                adj_[static_cast<std::size_t>(chain[k].node)].push_back({chain[k + 1].node, w});
                adj_[static_cast<std::size_t>(chain[k + 1].node)].push_back({chain[k].node, w});
            }
        }
    }

    int node_count() const { return static_cast<int>(adj_.size()); }
    const std::vector<std::vector<Entry>>& chains() const { return chains_; }

    int vertex_node(int vidx) const { return vertex_node_[static_cast<std::size_t>(vidx)]; }

    // Node holding an exact refinement offset on an edge (must exist).
    int node_at(int eidx, const Rat& off) const {
        for (const auto& entry : chains_[static_cast<std::size_t>(eidx)])
            if (entry.off == off) return entry.node;
        throw Error(Err::PointNotOnCurve, "offset is not a refinement node");
    }

    std::vector<std::optional<Rat>> distances(const std::vector<std::pair<int, Rat>>& sources) const {
        std::vector<std::optional<Rat>> dist(adj_.size());
        using Item = std::pair<Rat, int>;
        auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
        std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
        for (const auto& [node, d] : sources) {
            if (!dist[static_cast<std::size_t>(node)] || *dist[static_cast<std::size_t>(node)] > d) {
                dist[static_cast<std::size_t>(node)] = d;
                pq.push({d, node});
            }
        }
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (*dist[static_cast<std::size_t>(u)] < d) continue;
            for (const auto& [w, len] : adj_[static_cast<std::size_t>(u)]) {
                Rat nd = d + len;
                auto& slot = dist[static_cast<std::size_t>(w)];
                if (!slot || *slot > nd) {
                    slot = nd;
                    pq.push({nd, w});
                }
            }
        }
        return dist;
    }

private:
    const TropicalCurve& curve_;
    std::vector<int> vertex_node_;
    std::vector<std::vector<Entry>> chains_;
    std::vector<std::vector<std::pair<int, Rat>>> adj_;
};

// ---------------------------------------------------------------------------

inline CurvePtr TropicalCurve::build(Model model) {
    auto curve = std::shared_ptr<TropicalCurve>(new TropicalCurve());
    curve->model_ = std::move(model);
    curve->validate_and_index();
    curve->build_chart();
    return curve;
}

inline CurvePtr build_curve(Model model) { return TropicalCurve::build(std::move(model)); }

inline void TropicalCurve::validate_and_index() {
    if (model_.vertices.empty()) throw Error(Err::EmptyGraph, "a curve needs at least one vertex");
    for (const auto& vid : model_.vertices) {
        if (vid.empty() || vid.find('@') != std::string::npos)
            throw Error(Err::InvalidModel, "bad vertex id '" + vid + "'");
        if (!vidx_.emplace(vid, static_cast<int>(vidx_.size())).second)
            throw Error(Err::InvalidModel, "duplicate vertex id '" + vid + "'");
    }
    valence_.assign(model_.vertices.size(), 0);
    inf_edge_of_vertex_.assign(model_.vertices.size(), -1);
    adjacency_.assign(model_.vertices.size(), {});

    for (auto& e : model_.edges) {
        if (e.id.empty() || e.id.find('@') != std::string::npos)
            throw Error(Err::InvalidModel, "bad edge id '" + e.id + "'");
        if (!eidx_.emplace(e.id, static_cast<int>(eidx_.size())).second)
            throw Error(Err::InvalidModel, "duplicate edge id '" + e.id + "'");
        if (!vidx_.count(e.u) || !vidx_.count(e.v))
            throw Error(Err::InvalidModel, "edge '" + e.id + "' references a missing vertex");
        if (e.length.is_neg_inf() || (e.length.is_finite() && e.length.value() <= 0))
            throw Error(Err::InvalidModel, "edge '" + e.id + "' needs a positive length");
        if (e.infinite()) {
            if (!e.inf_end) throw Error(Err::MissingInfiniteEnd, "infinite edge '" + e.id + "' has no designated end");
            if (*e.inf_end != e.u && *e.inf_end != e.v)
                throw Error(Err::InvalidModel, "inf_end of edge '" + e.id + "' is not one of its endpoints");
            if (e.u == e.v) throw Error(Err::InfiniteNonLeafEdge, "infinite edge '" + e.id + "' is a loop");
            if (*e.inf_end == e.u) std::swap(e.u, e.v);  // orient so offset 0 sits at the finite end
        } else if (e.inf_end) {
            throw Error(Err::InvalidModel, "finite edge '" + e.id + "' carries an inf_end");
        }
    }

    for (std::size_t i = 0; i < model_.edges.size(); ++i) {
        const Edge& e = model_.edges[i];
        int iu = vidx_.at(e.u), iv = vidx_.at(e.v);
        valence_[static_cast<std::size_t>(iu)] += 1;
        valence_[static_cast<std::size_t>(iv)] += 1;
        adjacency_[static_cast<std::size_t>(iu)].push_back({static_cast<int>(i), 0});
        adjacency_[static_cast<std::size_t>(iv)].push_back({static_cast<int>(i), 1});
    }
    for (std::size_t i = 0; i < model_.edges.size(); ++i) {
        const Edge& e = model_.edges[i];
        if (!e.infinite()) continue;
        int iv = vidx_.at(e.v);
        if (valence_[static_cast<std::size_t>(iv)] != 1)
            throw Error(Err::InfiniteNonLeafEdge,
                        "infinite end '" + e.v + "' of edge '" + e.id + "' is not a leaf");
        inf_edge_of_vertex_[static_cast<std::size_t>(iv)] = static_cast<int>(i);
    }

    // connectivity
    std::vector<char> seen(model_.vertices.size(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto& [e, end] : adjacency_[static_cast<std::size_t>(u)]) {
            const Edge& ed = model_.edges[static_cast<std::size_t>(e)];
            int other = vidx_.at(end == 0 ? ed.v : ed.u);
            if (!seen[static_cast<std::size_t>(other)]) {
                seen[static_cast<std::size_t>(other)] = 1;
                stack.push_back(other);
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw Error(Err::DisconnectedGraph, "the model is not connected");

    genus_ = static_cast<int>(model_.edges.size()) - static_cast<int>(model_.vertices.size()) + 1;

    bool any_branch = false, any_inf = false;
    for (std::size_t i = 0; i < model_.vertices.size(); ++i) {
        if (inf_edge_of_vertex_[i] >= 0)
            any_inf = true;
        else if (valence_[i] != 2)
            any_branch = true;
    }
    is_circle_ = !any_branch && !any_inf && !model_.edges.empty();
    is_line_ = !any_branch && any_inf &&
               std::count_if(inf_edge_of_vertex_.begin(), inf_edge_of_vertex_.end(),
                             [](int x) { return x >= 0; }) == 2;
    if (is_circle_)
        for (const auto& e : model_.edges) circumference_ += e.length.value();
}

inline PointRef TropicalCurve::canonical_point(const PointRef& p) const {
    switch (p.kind) {
        case PointRef::Kind::Vertex: {
            auto vi = find_vertex(p.id);
            if (!vi) throw Error(Err::PointNotOnCurve, "no vertex '" + p.id + "'");
            if (is_infinite_end(*vi)) return PointRef::at_infinity(edge(infinite_edge_of(*vi)).id);
            return PointRef::vertex(p.id);
        }
        case PointRef::Kind::Interior: {
            auto ei = find_edge(p.id);
            if (!ei) throw Error(Err::PointNotOnCurve, "no edge '" + p.id + "'");
            const Edge& e = edge(*ei);
            if (p.offset < 0 || (e.length.is_finite() && p.offset > e.length.value()))
                throw Error(Err::PointNotOnCurve, "offset " + rat_to_string(p.offset) +
                                                      " outside edge '" + p.id + "'");
            if (p.offset == 0) return PointRef::vertex(e.u);
            if (e.length.is_finite() && p.offset == e.length.value()) return PointRef::vertex(e.v);
            return p;
        }
        case PointRef::Kind::Infinity: {
            auto ei = find_edge(p.id);
            if (!ei) throw Error(Err::PointNotOnCurve, "no edge '" + p.id + "'");
            if (!edge(*ei).infinite())
                throw Error(Err::PointNotOnCurve, "edge '" + p.id + "' has no point at infinity");
            return p;
        }
    }
    throw Error(Err::PointNotOnCurve, "malformed point");
}

inline int TropicalCurve::valence(const PointRef& p) const {
    PointRef c = canonical_point(p);
    switch (c.kind) {
        case PointRef::Kind::Vertex: return graph_valence(*find_vertex(c.id));
        case PointRef::Kind::Interior: return 2;
        case PointRef::Kind::Infinity: return 1;
    }
    return 0;
}

inline std::vector<Direction> TropicalCurve::directions_at(const PointRef& p) const {
    PointRef c = canonical_point(p);
    if (c.at_inf()) throw Error(Err::PointAtInfinity, "no half-edges at a point at infinity");
    std::vector<Direction> dirs;
    if (c.is_vertex()) {
        for (const auto& [e, end] : incident(*find_vertex(c.id)))
            dirs.push_back({c, edge(e).id, end == 0 ? +1 : -1});
    } else {
        dirs.push_back({c, c.id, +1});
        dirs.push_back({c, c.id, -1});
    }
    return dirs;
}

inline ExtRat TropicalCurve::distance(const PointRef& p, const PointRef& q) const {
    PointRef a = canonical_point(p), b = canonical_point(q);
    if (a == b) return ExtRat(0);
    if (a.at_inf() || b.at_inf()) return ExtRat::pos_inf();
    std::map<int, std::vector<Rat>> extra;
    if (a.is_interior()) extra[*find_edge(a.id)].push_back(a.offset);
    if (b.is_interior()) extra[*find_edge(b.id)].push_back(b.offset);
    RefinedGraph rg(*this, extra);
    auto node = [&](const PointRef& x) {
        return x.is_vertex() ? rg.vertex_node(*find_vertex(x.id)) : rg.node_at(*find_edge(x.id), x.offset);
    };
    auto dist = rg.distances({{node(a), Rat(0)}});
    auto d = dist[static_cast<std::size_t>(node(b))];
    if (!d) throw Error(Err::PointNotOnCurve, "unreachable point");  // cannot happen on a connected curve
    return ExtRat(*d);
}

// ---------------------------------------------------------------------------
// Canonical model.

inline void TropicalCurve::build_chart() {
    chart_ = CanonicalChart{};
    Model& cm = chart_.model;

    auto walk_from = [&](int edge_idx, int entry_end, ChainPiece& piece_out) -> int {
        // traverse one edge, filling the chain piece; returns arrival vertex idx (-1 if arrival is at infinity)
        const Edge& e = model_.edges[static_cast<std::size_t>(edge_idx)];
        if (entry_end == 0) {
            piece_out = {e.id, Rat(0), e.length};
            return e.infinite() ? -2 - vidx_.at(e.v) : vidx_.at(e.v);
        }
        piece_out = {e.id, e.length.value(), ExtRat(0)};
        return vidx_.at(e.u);
    };

    // Walks a maximal chain starting at `start_v` through `(edge_idx, end)`,
    // stopping at the next stop vertex (canonical vertex or, for the circle,
    // the anchor). Returns (pieces, total length, arrival vertex idx).
    auto walk_chain = [&](int start_v, int e0, int end0, const std::vector<char>& is_stop,
                          std::vector<char>& edge_used) {
        std::vector<ChainPiece> pieces;
        ExtRat total(0);
        (void)start_v;
        int cur_edge = e0, cur_end = end0;
        while (true) {
            edge_used[static_cast<std::size_t>(cur_edge)] = 1;
            ChainPiece piece;
            int arrival = walk_from(cur_edge, cur_end, piece);
            const Edge& e = model_.edges[static_cast<std::size_t>(cur_edge)];
            total = total + e.length;
            pieces.push_back(piece);
            if (arrival <= -2) return std::tuple{pieces, total, -2 - arrival};  // infinite end vertex
            if (is_stop[static_cast<std::size_t>(arrival)]) return std::tuple{pieces, total, arrival};
            // valence-2 vertex: continue through its other edge end
            const auto& inc = adjacency_[static_cast<std::size_t>(arrival)];
            std::pair<int, int> came = {cur_edge, 1 - cur_end};
            std::pair<int, int> next = inc[0] == came ? inc[1] : inc[0];
            cur_edge = next.first;
            cur_end = next.second;
        }
    };

    std::vector<char> is_canon(model_.vertices.size(), 0);
    for (std::size_t i = 0; i < model_.vertices.size(); ++i)
        is_canon[i] = (inf_edge_of_vertex_[i] >= 0) || (valence_[i] != 2);

    auto lex_min_edge_of = [&](const std::vector<ChainPiece>& pieces) {
        std::string best = pieces[0].edge;
        for (const auto& piece : pieces) best = std::min(best, piece.edge);
        return best;
    };

    std::vector<char> edge_used(model_.edges.size(), 0);

    if (is_circle_) {
        // one arbitrary point; deterministically: offset 0 of the lexicographically smallest edge id
        int e_star = 0;
        for (std::size_t i = 1; i < model_.edges.size(); ++i)
            if (model_.edges[i].id < model_.edges[static_cast<std::size_t>(e_star)].id)
                e_star = static_cast<int>(i);
        int anchor = vidx_.at(model_.edges[static_cast<std::size_t>(e_star)].u);
        std::vector<char> stop(model_.vertices.size(), 0);
        stop[static_cast<std::size_t>(anchor)] = 1;
        auto [pieces, total, arrival] = walk_chain(anchor, e_star, 0, stop, edge_used);
        (void)arrival;
        const std::string& aid = model_.vertices[static_cast<std::size_t>(anchor)];
        cm.vertices = {aid};
        cm.edges = {Edge{model_.edges[static_cast<std::size_t>(e_star)].id, aid, aid, total, std::nullopt}};
        chart_.vertex_points[aid] = PointRef::vertex(aid);
        chart_.edge_paths[cm.edges[0].id] = pieces;
        return;
    }

    if (is_line_) {
        // two points at infinity plus one finite point: the smallest finite vertex id
        int anchor = -1;
        for (std::size_t i = 0; i < model_.vertices.size(); ++i) {
            if (inf_edge_of_vertex_[i] >= 0) continue;
            if (anchor < 0 || model_.vertices[i] < model_.vertices[static_cast<std::size_t>(anchor)])
                anchor = static_cast<int>(i);
        }
        const std::string& aid = model_.vertices[static_cast<std::size_t>(anchor)];
        chart_.vertex_points[aid] = PointRef::vertex(aid);
        cm.vertices = {aid};
        std::vector<char> stop(model_.vertices.size(), 0);  // only infinite ends stop the walk
        for (const auto& [e, end] : adjacency_[static_cast<std::size_t>(anchor)]) {
            if (edge_used[static_cast<std::size_t>(e)]) continue;
            auto [pieces, total, arrival] = walk_chain(anchor, e, end, stop, edge_used);
            (void)total;
            const std::string& far_id = model_.vertices[static_cast<std::size_t>(arrival)];
            cm.vertices.push_back(far_id);
            cm.edges.push_back(Edge{lex_min_edge_of(pieces), aid, far_id, ExtRat::pos_inf(), far_id});
            chart_.vertex_points[far_id] = PointRef::at_infinity(pieces.back().edge);
            chart_.edge_paths[cm.edges.back().id] = pieces;
        }
    } else {
        // general case: vertices are exactly the points of valence != 2
        std::vector<int> canon_order;
        for (std::size_t i = 0; i < model_.vertices.size(); ++i)
            if (is_canon[i]) canon_order.push_back(static_cast<int>(i));
        std::sort(canon_order.begin(), canon_order.end(),
                  [&](int a, int b) { return model_.vertices[static_cast<std::size_t>(a)] < model_.vertices[static_cast<std::size_t>(b)]; });
        for (int v : canon_order) {
            const std::string& vid = model_.vertices[static_cast<std::size_t>(v)];
            cm.vertices.push_back(vid);
            chart_.vertex_points[vid] = inf_edge_of_vertex_[static_cast<std::size_t>(v)] >= 0
                                            ? PointRef::at_infinity(edge(inf_edge_of_vertex_[static_cast<std::size_t>(v)]).id)
                                            : PointRef::vertex(vid);
        }
        for (int v : canon_order) {
            if (inf_edge_of_vertex_[static_cast<std::size_t>(v)] >= 0) continue;  // chains are found from their finite side
            for (const auto& [e, end] : adjacency_[static_cast<std::size_t>(v)]) {
                if (edge_used[static_cast<std::size_t>(e)]) continue;
                auto [pieces, total, arrival] = walk_chain(v, e, end, is_canon, edge_used);
                const std::string& vid = model_.vertices[static_cast<std::size_t>(v)];
                const std::string& wid = model_.vertices[static_cast<std::size_t>(arrival)];
                Edge ce{lex_min_edge_of(pieces), vid, wid, total, std::nullopt};
                if (total.is_pos_inf()) ce.inf_end = wid;
                cm.edges.push_back(std::move(ce));
                chart_.edge_paths[cm.edges.back().id] = pieces;
            }
        }
    }

    std::sort(cm.vertices.begin(), cm.vertices.end());
    std::sort(cm.edges.begin(), cm.edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
}

inline Model canonical_model(const TropicalCurve& c) { return c.chart().model; }

inline bool TropicalCurve::star_infinite() const {
    for (const auto& e : chart_.model.edges)
        if (!e.infinite()) return false;
    return true;  // vacuously true for the singleton
}

inline ExtRat TropicalCurve::injectivity_radius(const PointRef& p) const {
    PointRef c = canonical_point(p);
    if (c.at_inf()) throw Error(Err::PointAtInfinity, "injectivity radius is for finite points");
    ExtRat rho = ExtRat::pos_inf();
    if (is_circle_) {
        rho = ext_min(rho, ExtRat(circumference_ / 2));
    } else {
        // nearest point of valence != 2 other than p
        for (std::size_t i = 0; i < model_.vertices.size(); ++i) {
            if (inf_edge_of_vertex_[i] >= 0 || valence_[i] == 2) continue;
            PointRef z = PointRef::vertex(model_.vertices[i]);
            if (z == c) continue;
            rho = ext_min(rho, distance(c, z));
        }
        // loops of the canonical model based at p fold back at half their length
        if (c.is_vertex()) {
            for (const auto& e : chart_.model.edges)
                if (e.u == e.v && e.u == c.id && e.length.is_finite())
                    rho = ext_min(rho, ExtRat(e.length.value() / 2));
        }
    }
    return rho;
}

// Free-function forms mirroring the library surface.
inline int valence(const TropicalCurve& c, const PointRef& p) { return c.valence(p); }
inline int genus(const TropicalCurve& c) { return c.genus(); }
inline ExtRat distance(const TropicalCurve& c, const PointRef& p, const PointRef& q) { return c.distance(p, q); }
inline std::vector<Direction> directions_at(const TropicalCurve& c, const PointRef& p) { return c.directions_at(p); }
inline ExtRat injectivity_radius(const TropicalCurve& c, const PointRef& p) { return c.injectivity_radius(p); }
inline bool is_star_infinite(const TropicalCurve& c) { return c.star_infinite(); }

// Point syntax used across the CLI: "v3" | "e0@5/2" | "e0@inf".
inline PointRef parse_point(const TropicalCurve& c, std::string_view s) {
    auto at = s.find('@');
    PointRef p;
    if (at == std::string_view::npos) {
        p = PointRef::vertex(std::string(s));
    } else {
        std::string_view off = s.substr(at + 1);
        if (off == "inf")
            p = PointRef::at_infinity(std::string(s.substr(0, at)));
        else
            p = PointRef::interior(std::string(s.substr(0, at)), rat_from_string(off));
    }
    return c.canonical_point(p);
}

}  // namespace trop
