#pragma once

// Chip-firing moves CF(Γ₁; l) = x ↦ −min(l, dist(x, Γ₁)) and the two probe
// forms used to recover points from a semiring isomorphism.

#include <map>
#include <vector>

#include "trop/curve.hpp"
#include "trop/ratfun.hpp"
#include "trop/subgraph.hpp"

namespace trop {

namespace detail {

// dist(·, sub) as a rational function: slopes ±1, zero on sub, tail slope +1
// toward uncovered points at infinity.
inline RatFun distance_function(const CurvePtr& curve, const Subgraph& sub) {
    if (curve->singleton()) return RatFun::from_point_value(curve, 0);
    RefinedGraph rg(*curve, sub.finite_markers());
    std::vector<std::pair<int, Rat>> sources;
    for (std::size_t vi = 0; vi < curve->vertex_count(); ++vi) {
        if (curve->is_infinite_end(static_cast<int>(vi))) continue;
        if (sub.contains(PointRef::vertex(curve->vertex_id(static_cast<int>(vi)))))
            sources.push_back({rg.vertex_node(static_cast<int>(vi)), Rat(0)});
    }
    for (std::size_t ei = 0; ei < curve->edge_count(); ++ei) {
        const auto& chain = rg.chains()[ei];
        // interior marker nodes; edge endpoints are vertex nodes handled above
        std::size_t kmax = curve->edge(static_cast<int>(ei)).infinite() ? chain.size() : chain.size() - 1;
        for (std::size_t k = 1; k < kmax; ++k) {
            if (sub.contains(PointRef::interior(curve->edge(static_cast<int>(ei)).id, chain[k].off)))
                sources.push_back({chain[k].node, Rat(0)});
        }
    }
    auto dist = rg.distances(sources);
    auto d_at = [&](int node) {
        if (!dist[static_cast<std::size_t>(node)])
            throw Error(Err::InvalidSubgraph, "internal: unreachable refinement node");
        return *dist[static_cast<std::size_t>(node)];
    };
    std::vector<EdgeFun> segs(curve->edge_count());
    for (std::size_t ei = 0; ei < curve->edge_count(); ++ei) {
        const Edge& e = curve->edge(static_cast<int>(ei));
        const auto& chain = rg.chains()[ei];
        EdgeFun ef;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            if (k > 0) {
                const Rat& t1 = chain[k - 1].off;
                const Rat& t2 = chain[k].off;
                Rat mid = (t1 + t2) / 2;
                bool covered = sub.contains(PointRef::interior(e.id, mid));
                if (!covered) {
                    // inside an uncovered piece the distance is the lesser of
                    // the two escapes; insert the valley breakpoint if interior
                    Rat d1 = d_at(chain[k - 1].node), d2 = d_at(chain[k].node);
                    Rat valley = (t1 + t2 + d2 - d1) / 2;
                    if (t1 < valley && valley < t2)
                        ef.breaks.push_back({valley, d1 + (valley - t1)});
                }
            }
            ef.breaks.push_back({chain[k].off, d_at(chain[k].node)});
        }
        if (e.infinite()) {
            Rat last = chain.back().off;
            ef.tail_slope = sub.contains(PointRef::interior(e.id, last + 1)) ? 0 : 1;
        }
        segs[ei] = std::move(ef);
    }
    return RatFun::from_segments(curve, std::move(segs));
}

}  // namespace detail

inline RatFun cf(const CurvePtr& curve, const Subgraph& sub, const ExtRat& l) {
    if (!same_curve(*curve, *sub.curve())) throw Error(Err::CurveMismatch, "subgraph lives on a different curve");
    if (sub.empty()) throw Error(Err::EmptySubgraph, "chip-firing needs a nonempty subgraph");
    if (sub.has_isolated_infinity_component())
        throw Error(Err::IsolatedInfinityComponent, "a component is a bare point at infinity");
    if (l.is_neg_inf() || (l.is_finite() && l.value() <= 0))
        throw Error(Err::BadRational, "l must be positive or +inf");
    RatFun d = detail::distance_function(curve, sub);
    return oinv(l.is_finite() ? min_with(d, l.value()) : d);
}

inline RatFun cf_point(const CurvePtr& curve, const PointRef& x, const Rat& eps) {
    PointRef c = curve->canonical_point(x);
    if (c.at_inf()) throw Error(Err::PointAtInfinity, "CF({x}; eps) needs a finite x");
    return cf(curve, Subgraph::single_point(curve, c), ExtRat(eps));
}

// CF(Γ ∖ (y, x]; ∞): zero away from the tail, slope −1 from y toward the
// point at infinity x, −∞ at x.
inline RatFun cf_tail(const CurvePtr& curve, const PointRef& y, const PointRef& x) {
    auto path = tail_path(*curve, y, x);  // throws NotAPointAtInfinity / PointNotOnTailEdge
    Subgraph sub(curve);
    std::set<std::string> on_path;
    for (const auto& piece : path) on_path.insert(piece.edge);
    for (std::size_t ei = 0; ei < curve->edge_count(); ++ei) {
        const Edge& e = curve->edge(static_cast<int>(ei));
        if (!on_path.count(e.id)) sub.add_interval(e.id, ExtRat(0), e.length);
    }
    // the piece carrying y keeps its portion behind y; later pieces vanish
    const ChainPiece& first = path.front();
    bool asc = ExtRat(first.from) < first.to;
    if (asc)
        sub.add_interval(first.edge, ExtRat(0), ExtRat(first.from));
    else
        sub.add_interval(first.edge, ExtRat(first.from), curve->edge(*curve->find_edge(first.edge)).length);
    return cf(curve, sub, ExtRat::pos_inf());
}

}  // namespace trop
