#pragma once

// Finite unions of closed intervals and isolated points on a curve: the
// compact "subgraphs" fired by chip-firing moves, and the attainment sets
// returned by argmax/argmin.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trop/curve.hpp"

namespace trop {

struct Interval {
    ExtRat lo, hi;  // closed; lo <= hi; lo is finite unless lo == hi == inf (the bare point at infinity)

    friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

class IntervalSet {
public:
    explicit IntervalSet(CurvePtr curve) : curve_(std::move(curve)) {
        per_edge_.resize(curve_->edge_count());
    }

    static IntervalSet single_point(CurvePtr curve, const PointRef& p) {
        IntervalSet s(std::move(curve));
        s.add_point(p);
        return s;
    }

    static IntervalSet whole(CurvePtr curve) {
        IntervalSet s(curve);
        for (std::size_t i = 0; i < curve->edge_count(); ++i)
            s.add_interval(curve->edge(static_cast<int>(i)).id, ExtRat(0), curve->edge(static_cast<int>(i)).length);
        for (const auto& vid : curve->model().vertices)
            if (!curve->is_infinite_end(*curve->find_vertex(vid))) s.add_point(PointRef::vertex(vid));
        return s;
    }

    const CurvePtr& curve() const { return curve_; }

    void add_point(const PointRef& p) {
        PointRef c = curve_->canonical_point(p);
        switch (c.kind) {
            case PointRef::Kind::Vertex:
                vertices_.insert(*curve_->find_vertex(c.id));
                break;
            case PointRef::Kind::Interior:
                per_edge_[static_cast<std::size_t>(*curve_->find_edge(c.id))].push_back({ExtRat(c.offset), ExtRat(c.offset)});
                break;
            case PointRef::Kind::Infinity:
                per_edge_[static_cast<std::size_t>(*curve_->find_edge(c.id))].push_back({ExtRat::pos_inf(), ExtRat::pos_inf()});
                break;
        }
        normalize();
    }

    void add_interval(const std::string& edge_id, const ExtRat& lo, const ExtRat& hi) {
        auto ei = curve_->find_edge(edge_id);
        if (!ei) throw Error(Err::InvalidSubgraph, "no edge '" + edge_id + "'");
        const Edge& e = curve_->edge(*ei);
        if (hi < lo) throw Error(Err::InvalidSubgraph, "empty interval on '" + edge_id + "'");
        if (lo.is_neg_inf() || (lo.is_pos_inf() && !(hi == lo)))
            throw Error(Err::InvalidSubgraph, "bad interval endpoints on '" + edge_id + "'");
        if (lo.is_finite() && lo.value() < 0)
            throw Error(Err::InvalidSubgraph, "negative offset on '" + edge_id + "'");
        if (ExtRat cap = e.length; hi > cap || (lo.is_pos_inf() && !e.infinite()))
            throw Error(Err::InvalidSubgraph, "interval exceeds edge '" + edge_id + "'");
        per_edge_[static_cast<std::size_t>(*ei)].push_back({lo, hi});
        normalize();
    }

    bool empty() const {
        if (!vertices_.empty()) return false;
        for (const auto& list : per_edge_)
            if (!list.empty()) return false;
        return true;
    }

    bool contains(const PointRef& p) const {
        PointRef c = curve_->canonical_point(p);
        switch (c.kind) {
            case PointRef::Kind::Vertex: {
                int v = *curve_->find_vertex(c.id);
                if (vertices_.count(v)) return true;
                return vertex_covered(v);
            }
            case PointRef::Kind::Interior: {
                ExtRat off{c.offset};
                for (const auto& iv : per_edge_[static_cast<std::size_t>(*curve_->find_edge(c.id))])
                    if (iv.lo <= off && off <= iv.hi) return true;
                return false;
            }
            case PointRef::Kind::Infinity: {
                for (const auto& iv : per_edge_[static_cast<std::size_t>(*curve_->find_edge(c.id))])
                    if (iv.hi.is_pos_inf()) return true;
                return false;
            }
        }
        return false;
    }

    // Non-null iff the set is exactly one point.
    std::optional<PointRef> as_single_point() const {
        std::optional<PointRef> found;
        if (vertices_.size() > 1) return std::nullopt;
        if (vertices_.size() == 1)
            found = PointRef::vertex(curve_->vertex_id(*vertices_.begin()));
        for (std::size_t ei = 0; ei < per_edge_.size(); ++ei) {
            for (const auto& iv : per_edge_[ei]) {
                if (found || !(iv.lo == iv.hi)) return std::nullopt;
                if (iv.lo.is_pos_inf())
                    found = PointRef::at_infinity(curve_->edge(static_cast<int>(ei)).id);
                else
                    found = PointRef::interior(curve_->edge(static_cast<int>(ei)).id, iv.lo.value());
            }
        }
        return found;
    }

    // A component made of a single point at infinity can never be merged with
    // anything else, so it is exactly a degenerate [inf, inf] entry.
    bool has_isolated_infinity_component() const {
        for (const auto& list : per_edge_)
            for (const auto& iv : list)
                if (iv.lo.is_pos_inf()) return true;
        return false;
    }

    int component_count() const {
        // union-find over interval instances and touched vertices
        std::vector<int> parent;
        auto make = [&] {
            parent.push_back(static_cast<int>(parent.size()));
            return static_cast<int>(parent.size()) - 1;
        };
        std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                x = parent[static_cast<std::size_t>(x)];
            }
            return x;
        };
        auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };

        std::map<int, int> vnode;
        auto vertex_node = [&](int v) {
            auto it = vnode.find(v);
            if (it != vnode.end()) return it->second;
            int n = make();
            vnode.emplace(v, n);
            return n;
        };
        for (int v : vertices_) vertex_node(v);
        for (std::size_t ei = 0; ei < per_edge_.size(); ++ei) {
            const Edge& e = curve_->edge(static_cast<int>(ei));
            for (const auto& iv : per_edge_[ei]) {
                int n = make();
                if (iv.lo == ExtRat(0)) unite(n, vertex_node(*curve_->find_vertex(e.u)));
                if (e.length.is_finite() && iv.hi == e.length) unite(n, vertex_node(*curve_->find_vertex(e.v)));
            }
        }
        std::set<int> roots;
        for (int i = 0; i < static_cast<int>(parent.size()); ++i) roots.insert(find(i));
        return static_cast<int>(roots.size());
    }

    const std::vector<std::vector<Interval>>& intervals_by_edge() const { return per_edge_; }

    std::vector<PointRef> isolated_vertices() const {
        std::vector<PointRef> out;
        for (int v : vertices_) out.push_back(PointRef::vertex(curve_->vertex_id(v)));
        return out;
    }

    // Finite interval endpoints per edge index; the refinement markers for
    // distance computations.
    std::map<int, std::vector<Rat>> finite_markers() const {
        std::map<int, std::vector<Rat>> out;
        for (std::size_t ei = 0; ei < per_edge_.size(); ++ei)
            for (const auto& iv : per_edge_[ei]) {
                if (iv.lo.is_finite()) out[static_cast<int>(ei)].push_back(iv.lo.value());
                if (iv.hi.is_finite()) out[static_cast<int>(ei)].push_back(iv.hi.value());
            }
        return out;
    }

    friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
        return same_curve(*a.curve_, *b.curve_) && a.vertices_ == b.vertices_ && a.per_edge_ == b.per_edge_;
    }

private:
    bool vertex_covered(int v) const {
        for (const auto& [e, end] : curve_->incident(v)) {
            const Edge& ed = curve_->edge(e);
            ExtRat at = end == 0 ? ExtRat(0) : ed.length;
            if (at.is_pos_inf()) continue;
            for (const auto& iv : per_edge_[static_cast<std::size_t>(e)])
                if (iv.lo <= at && at <= iv.hi) return true;
        }
        return false;
    }

    void normalize() {
        for (std::size_t ei = 0; ei < per_edge_.size(); ++ei) {
            auto& list = per_edge_[ei];
            if (list.empty()) continue;
            std::sort(list.begin(), list.end(), [](const Interval& a, const Interval& b) {
                return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
            std::vector<Interval> merged;
            for (const auto& iv : list) {
                if (!merged.empty() && iv.lo <= merged.back().hi)
                    merged.back().hi = ext_max(merged.back().hi, iv.hi);
                else
                    merged.push_back(iv);
            }
            const Edge& e = curve_->edge(static_cast<int>(ei));
            std::vector<Interval> kept;
            for (const auto& iv : merged) {
                if (iv.lo == iv.hi && iv.lo == ExtRat(0)) {
                    vertices_.insert(*curve_->find_vertex(e.u));
                } else if (iv.lo == iv.hi && e.length.is_finite() && iv.lo == e.length) {
                    vertices_.insert(*curve_->find_vertex(e.v));
                } else {
                    kept.push_back(iv);
                }
            }
            list = std::move(kept);
        }
        for (auto it = vertices_.begin(); it != vertices_.end();) {
            if (vertex_covered(*it))
                it = vertices_.erase(it);
            else
                ++it;
        }
    }

    CurvePtr curve_;
    std::set<int> vertices_;
    std::vector<std::vector<Interval>> per_edge_;
};

using Subgraph = IntervalSet;

}  // namespace trop
