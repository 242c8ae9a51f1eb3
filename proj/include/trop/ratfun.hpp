#pragma once

// The rational function semifield Rat(Γ): piecewise affine functions with
// integer slopes, tropical ⊕/⊙, extrema, divisors, and the irredundant
// representation checks behind the probe algorithm.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "trop/curve.hpp"
#include "trop/subgraph.hpp"

namespace trop {

struct Break {
    Rat at;
    Rat value;

    friend bool operator==(const Break& a, const Break& b) { return a.at == b.at && a.value == b.value; }
};

// Function data along one edge: breakpoints covering [0, length]; on an
// infinite edge the last breakpoint is finite and tail_slope continues toward
// the point at infinity.
struct EdgeFun {
    std::vector<Break> breaks;
    int tail_slope = 0;

    friend bool operator==(const EdgeFun& a, const EdgeFun& b) {
        return a.breaks == b.breaks && a.tail_slope == b.tail_slope;
    }
};

class Divisor {
public:
    Divisor() = default;

    void add(const PointRef& p, long long order) {
        if (order == 0) return;
        auto [it, inserted] = orders_.emplace(p, order);
        if (!inserted) {
            it->second += order;
            if (it->second == 0) orders_.erase(it);
        }
    }

    long long order_at(const PointRef& p) const {
        auto it = orders_.find(p);
        return it == orders_.end() ? 0 : it->second;
    }

    const std::map<PointRef, long long>& entries() const { return orders_; }
    bool empty() const { return orders_.empty(); }

    long long degree() const {
        long long d = 0;
        for (const auto& [p, o] : orders_) d += o;
        return d;
    }

    friend Divisor operator+(const Divisor& a, const Divisor& b) {
        Divisor out = a;
        for (const auto& [p, o] : b.orders_) out.add(p, o);
        return out;
    }

    friend Divisor operator-(const Divisor& a) {
        Divisor out;
        for (const auto& [p, o] : a.orders_) out.add(p, -o);
        return out;
    }

    friend bool operator==(const Divisor& a, const Divisor& b) { return a.orders_ == b.orders_; }

private:
    std::map<PointRef, long long> orders_;
};

class RatFun {
public:
    static RatFun bottom(CurvePtr curve) {
        RatFun f(std::move(curve));
        f.bottom_ = true;
        return f;
    }

    static RatFun constant(CurvePtr curve, const ExtRat& c) {
        if (c.is_pos_inf()) throw Error(Err::PlusInfinityConstant, "+inf is not a rational function");
        if (c.is_neg_inf()) return bottom(std::move(curve));
        if (curve->singleton()) return from_point_value(std::move(curve), c.value());
        std::vector<EdgeFun> segs(curve->edge_count());
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const Edge& e = curve->edge(static_cast<int>(i));
            segs[i].breaks.push_back({Rat(0), c.value()});
            if (!e.infinite()) segs[i].breaks.push_back({e.length.value(), c.value()});
        }
        return from_segments(std::move(curve), std::move(segs));
    }

    static RatFun from_point_value(CurvePtr curve, Rat v) {
        if (!curve->singleton()) throw Error(Err::InvalidFunction, "point value needs a singleton curve");
        RatFun f(std::move(curve));
        f.point_value_ = std::move(v);
        return f;
    }

    static RatFun from_segments(CurvePtr curve, std::vector<EdgeFun> segs) {
        RatFun f(std::move(curve));
        f.per_edge_ = std::move(segs);
        f.validate_and_canonicalize();
        return f;
    }

    const CurvePtr& curve() const { return curve_; }
    bool is_bottom() const { return bottom_; }
    const std::vector<EdgeFun>& segments() const { return per_edge_; }
    const Rat& point_value() const { return point_value_; }

    // Finite value along an edge at a finite offset (not for Bottom).
    Rat value_on_edge(int eidx, const Rat& off) const {
        const EdgeFun& ef = per_edge_[static_cast<std::size_t>(eidx)];
        const auto& bs = ef.breaks;
        if (off <= bs.front().at) return bs.front().value;
        for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
            if (off <= bs[k + 1].at) {
                Rat slope = (bs[k + 1].value - bs[k].value) / (bs[k + 1].at - bs[k].at);
                return bs[k].value + slope * (off - bs[k].at);
            }
        }
        return bs.back().value + Rat(ef.tail_slope) * (off - bs.back().at);
    }

    ExtRat eval(const PointRef& p) const {
        PointRef c = curve_->canonical_point(p);
        if (bottom_) return ExtRat::neg_inf();
        if (curve_->singleton()) return ExtRat(point_value_);
        switch (c.kind) {
            case PointRef::Kind::Vertex: {
                const auto& [e, end] = curve_->incident(*curve_->find_vertex(c.id)).front();
                const EdgeFun& ef = per_edge_[static_cast<std::size_t>(e)];
                return ExtRat(end == 0 ? ef.breaks.front().value
                                       : value_on_edge(e, curve_->edge(e).length.value()));
            }
            case PointRef::Kind::Interior:
                return ExtRat(value_on_edge(*curve_->find_edge(c.id), c.offset));
            case PointRef::Kind::Infinity: {
                const EdgeFun& ef = per_edge_[static_cast<std::size_t>(*curve_->find_edge(c.id))];
                if (ef.tail_slope > 0) return ExtRat::pos_inf();
                if (ef.tail_slope < 0) return ExtRat::neg_inf();
                return ExtRat(ef.breaks.back().value);
            }
        }
        throw Error(Err::PointNotOnCurve, "malformed point");
    }

    std::optional<ExtRat> as_constant() const {
        if (bottom_) return ExtRat::neg_inf();
        if (curve_->singleton()) return ExtRat(point_value_);
        const Rat& v = per_edge_.front().breaks.front().value;
        for (const auto& ef : per_edge_) {
            if (ef.tail_slope != 0 || ef.breaks.size() > 2) return std::nullopt;
            for (const auto& b : ef.breaks)
                if (b.value != v) return std::nullopt;
        }
        return ExtRat(v);
    }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        if (!same_curve(*a.curve_, *b.curve_)) throw Error(Err::CurveMismatch, "functions on different curves");
        if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
        if (a.curve_->singleton()) return a.point_value_ == b.point_value_;
        return a.per_edge_ == b.per_edge_;
    }

private:
    explicit RatFun(CurvePtr curve) : curve_(std::move(curve)) {}

    void validate_and_canonicalize() {
        if (curve_->singleton()) {
            if (!per_edge_.empty()) throw Error(Err::InvalidFunction, "segments given for a singleton curve");
            throw Error(Err::InvalidFunction, "singleton curve needs a point value");
        }
        if (per_edge_.size() != curve_->edge_count())
            throw Error(Err::InvalidFunction, "one segment list per edge required");
        for (std::size_t ei = 0; ei < per_edge_.size(); ++ei) {
            const Edge& e = curve_->edge(static_cast<int>(ei));
            auto& ef = per_edge_[ei];
            auto& bs = ef.breaks;
            if (bs.empty()) throw Error(Err::InvalidFunction, "no breakpoints on edge '" + e.id + "'");
            if (bs.front().at != 0)
                throw Error(Err::InvalidFunction, "first breakpoint must sit at offset 0 on '" + e.id + "'");
            for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
                if (!(bs[k].at < bs[k + 1].at))
                    throw Error(Err::InvalidFunction, "breakpoints out of order on '" + e.id + "'");
                if (!is_integer((bs[k + 1].value - bs[k].value) / (bs[k + 1].at - bs[k].at)))
                    throw Error(Err::InvalidFunction, "non-integer slope on '" + e.id + "'");
            }
            if (e.infinite()) {
                // drop trailing breakpoints collinear with the tail
                while (bs.size() >= 2) {
                    Rat slope = (bs.back().value - bs[bs.size() - 2].value) /
                                (bs.back().at - bs[bs.size() - 2].at);
                    if (slope != ef.tail_slope) break;
                    bs.pop_back();
                }
            } else {
                if (bs.back().at != e.length.value())
                    throw Error(Err::InvalidFunction, "breakpoints must cover edge '" + e.id + "'");
                ef.tail_slope = 0;
            }
            // merge collinear interior breakpoints
            std::vector<Break> merged;
            for (std::size_t k = 0; k < bs.size(); ++k) {
                while (merged.size() >= 2) {
                    const Break& a = merged[merged.size() - 2];
                    const Break& b = merged.back();
                    Rat s1 = (b.value - a.value) / (b.at - a.at);
                    Rat s2 = (bs[k].value - b.value) / (bs[k].at - b.at);
                    if (s1 != s2) break;
                    merged.pop_back();
                }
                merged.push_back(bs[k]);
            }
            bs = std::move(merged);
        }
        // one value per vertex across incident edge ends
        for (std::size_t vi = 0; vi < curve_->vertex_count(); ++vi) {
            if (curve_->is_infinite_end(static_cast<int>(vi))) continue;
            std::optional<Rat> seen;
            for (const auto& [e, end] : curve_->incident(static_cast<int>(vi))) {
                const EdgeFun& ef = per_edge_[static_cast<std::size_t>(e)];
                Rat v = end == 0 ? ef.breaks.front().value : ef.breaks.back().value;
                if (!seen)
                    seen = v;
                else if (*seen != v)
                    throw Error(Err::InvalidFunction,
                                "inconsistent values at vertex '" + curve_->vertex_id(static_cast<int>(vi)) + "'");
            }
        }
    }

    CurvePtr curve_;
    bool bottom_ = false;
    Rat point_value_ = 0;            // singleton curves only
    std::vector<EdgeFun> per_edge_;  // by edge index

    friend RatFun oplus(const RatFun&, const RatFun&);
    friend RatFun odot(const RatFun&, const RatFun&);
    friend RatFun oinv(const RatFun&);
};

inline RatFun constant(CurvePtr curve, const ExtRat& c) { return RatFun::constant(std::move(curve), c); }
inline ExtRat eval(const RatFun& f, const PointRef& p) { return f.eval(p); }
inline bool equals(const RatFun& f, const RatFun& g) { return f == g; }

namespace detail {

// Pointwise combination of two edge functions. Candidate offsets are the two
// break sets plus, for max, the crossing points; between candidates both
// functions are affine, so evaluating at the candidates is exact.
template <typename Combine>
EdgeFun combine_edge(const RatFun& f, const RatFun& g, int eidx, bool insert_crossings, Combine comb) {
    const Edge& e = f.curve()->edge(eidx);
    const EdgeFun& fe = f.segments()[static_cast<std::size_t>(eidx)];
    const EdgeFun& ge = g.segments()[static_cast<std::size_t>(eidx)];
    std::vector<Rat> cand;
    for (const auto& b : fe.breaks) cand.push_back(b.at);
    for (const auto& b : ge.breaks) cand.push_back(b.at);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    if (insert_crossings) {
        std::vector<Rat> more;
        for (std::size_t k = 0; k + 1 < cand.size(); ++k) {
            Rat f1 = f.value_on_edge(eidx, cand[k]), f2 = f.value_on_edge(eidx, cand[k + 1]);
            Rat g1 = g.value_on_edge(eidx, cand[k]), g2 = g.value_on_edge(eidx, cand[k + 1]);
            Rat d1 = f1 - g1, d2 = f2 - g2;
            if ((d1 < 0 && d2 > 0) || (d1 > 0 && d2 < 0)) {
                Rat sf = (f2 - f1) / (cand[k + 1] - cand[k]);
                Rat sg = (g2 - g1) / (cand[k + 1] - cand[k]);
                more.push_back(cand[k] + (g1 - f1) / (sf - sg));
            }
        }
        // tail crossing on an infinite edge
        if (e.infinite() && fe.tail_slope != ge.tail_slope) {
            Rat t = cand.back();
            Rat ft = f.value_on_edge(eidx, t), gt = g.value_on_edge(eidx, t);
            Rat cross = t + (gt - ft) / Rat(fe.tail_slope - ge.tail_slope);
            if (cross > t) more.push_back(cross);
        }
        cand.insert(cand.end(), more.begin(), more.end());
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    }
    EdgeFun out;
    for (const Rat& t : cand) out.breaks.push_back({t, comb(f.value_on_edge(eidx, t), g.value_on_edge(eidx, t))});
    if (e.infinite()) {
        // past the last candidate the combination is affine, so one unit step
        // past it determines the tail slope
        Rat t = cand.back() + 1;
        Rat slope = comb(f.value_on_edge(eidx, t), g.value_on_edge(eidx, t)) - out.breaks.back().value;
        if (!is_integer(slope)) throw Error(Err::InvalidFunction, "internal: non-integer tail");
        out.tail_slope = static_cast<int>(static_cast<long long>(numerator(slope)));
    }
    return out;
}

}  // namespace detail

inline RatFun oplus(const RatFun& f, const RatFun& g) {
    if (!same_curve(*f.curve(), *g.curve())) throw Error(Err::CurveMismatch, "oplus needs one curve");
    if (f.is_bottom()) return g;
    if (g.is_bottom()) return f;
    if (f.curve()->singleton())
        return RatFun::from_point_value(f.curve(), std::max(f.point_value(), g.point_value()));
    std::vector<EdgeFun> segs;
    for (std::size_t ei = 0; ei < f.curve()->edge_count(); ++ei)
        segs.push_back(detail::combine_edge(f, g, static_cast<int>(ei), true,
                                            [](const Rat& a, const Rat& b) { return std::max(a, b); }));
    return RatFun::from_segments(f.curve(), std::move(segs));
}

inline RatFun odot(const RatFun& f, const RatFun& g) {
    if (!same_curve(*f.curve(), *g.curve())) throw Error(Err::CurveMismatch, "odot needs one curve");
    if (f.is_bottom() || g.is_bottom()) return RatFun::bottom(f.curve());
    if (f.curve()->singleton()) return RatFun::from_point_value(f.curve(), f.point_value() + g.point_value());
    std::vector<EdgeFun> segs;
    for (std::size_t ei = 0; ei < f.curve()->edge_count(); ++ei)
        segs.push_back(detail::combine_edge(f, g, static_cast<int>(ei), false,
                                            [](const Rat& a, const Rat& b) { return a + b; }));
    return RatFun::from_segments(f.curve(), std::move(segs));
}

inline RatFun oinv(const RatFun& f) {
    if (f.is_bottom()) throw Error(Err::InvertBottom, "-inf has no tropical inverse");
    if (f.curve()->singleton()) return RatFun::from_point_value(f.curve(), -f.point_value());
    std::vector<EdgeFun> segs = f.segments();
    for (auto& ef : segs) {
        for (auto& b : ef.breaks) b.value = -b.value;
        ef.tail_slope = -ef.tail_slope;
    }
    return RatFun::from_segments(f.curve(), std::move(segs));
}

// min{f, c} computed as (f^{⊙(-1)} ⊕ (-c))^{⊙(-1)}.
inline RatFun min_with(const RatFun& f, const Rat& c) {
    return oinv(oplus(oinv(f), RatFun::constant(f.curve(), ExtRat(-c))));
}

inline ExtRat max_value(const RatFun& f) {
    if (f.is_bottom()) return ExtRat::neg_inf();
    if (f.curve()->singleton()) return ExtRat(f.point_value());
    std::optional<Rat> best;
    for (std::size_t ei = 0; ei < f.segments().size(); ++ei) {
        const EdgeFun& ef = f.segments()[ei];
        if (ef.tail_slope > 0) return ExtRat::pos_inf();
        for (const auto& b : ef.breaks)
            if (!best || b.value > *best) best = b.value;
    }
    return ExtRat(*best);
}

inline ExtRat min_value(const RatFun& f) {
    if (f.is_bottom()) return ExtRat::neg_inf();
    if (f.curve()->singleton()) return ExtRat(f.point_value());
    std::optional<Rat> best;
    bool neg_inf = false;
    for (const auto& ef : f.segments()) {
        if (ef.tail_slope < 0) neg_inf = true;
        for (const auto& b : ef.breaks)
            if (!best || b.value < *best) best = b.value;
    }
    return neg_inf ? ExtRat::neg_inf() : ExtRat(*best);
}

namespace detail {

inline IntervalSet attainment_set(const RatFun& f, bool maximum) {
    if (f.is_bottom()) throw Error(Err::BottomFunction, "no attainment set for -inf");
    IntervalSet out(f.curve());
    if (f.curve()->singleton()) {
        out.add_point(PointRef::vertex(f.curve()->model().vertices.front()));
        return out;
    }
    ExtRat target = maximum ? max_value(f) : min_value(f);
    for (std::size_t ei = 0; ei < f.segments().size(); ++ei) {
        const Edge& e = f.curve()->edge(static_cast<int>(ei));
        const EdgeFun& ef = f.segments()[ei];
        if (!target.is_finite()) {
            // ±inf is attained exactly at points at infinity with the matching tail sign
            if ((maximum && ef.tail_slope > 0) || (!maximum && ef.tail_slope < 0))
                out.add_interval(e.id, ExtRat::pos_inf(), ExtRat::pos_inf());
            continue;
        }
        const Rat& tv = target.value();
        for (std::size_t k = 0; k < ef.breaks.size(); ++k) {
            bool here = ef.breaks[k].value == tv;
            if (here && k + 1 < ef.breaks.size() && ef.breaks[k + 1].value == tv)
                out.add_interval(e.id, ExtRat(ef.breaks[k].at), ExtRat(ef.breaks[k + 1].at));
            else if (here)
                out.add_interval(e.id, ExtRat(ef.breaks[k].at), ExtRat(ef.breaks[k].at));
        }
        if (e.infinite() && ef.tail_slope == 0 && ef.breaks.back().value == tv)
            out.add_interval(e.id, ExtRat(ef.breaks.back().at), ExtRat::pos_inf());
    }
    return out;
}

}  // namespace detail

inline IntervalSet argmax_set(const RatFun& f) { return detail::attainment_set(f, true); }
inline IntervalSet argmin_set(const RatFun& f) { return detail::attainment_set(f, false); }

inline Divisor divisor(const RatFun& f) {
    if (f.is_bottom()) throw Error(Err::BottomFunction, "-inf has no divisor");
    Divisor div;
    if (f.curve()->singleton()) return div;
    const TropicalCurve& c = *f.curve();
    std::map<int, long long> vertex_orders;
    for (std::size_t ei = 0; ei < f.segments().size(); ++ei) {
        const Edge& e = c.edge(static_cast<int>(ei));
        const EdgeFun& ef = f.segments()[ei];
        const auto& bs = ef.breaks;
        auto slope = [&](std::size_t k) {  // slope of the segment after break k
            if (k + 1 < bs.size()) return (bs[k + 1].value - bs[k].value) / (bs[k + 1].at - bs[k].at);
            return Rat(ef.tail_slope);
        };
        // outgoing slope from the u-end
        vertex_orders[*c.find_vertex(e.u)] += static_cast<long long>(numerator(slope(0)));
        // interior breakpoints (everything except the edge endpoints)
        std::size_t last = bs.size() - 1;
        for (std::size_t k = 1; k <= last; ++k) {
            if (!e.infinite() && k == last) break;  // the far endpoint belongs to vertex v
            Rat left = (bs[k].value - bs[k - 1].value) / (bs[k].at - bs[k - 1].at);
            Rat right = slope(k);
            long long order = static_cast<long long>(numerator(right - left));
            if (order != 0) div.add(PointRef::interior(e.id, bs[k].at), order);
        }
        if (e.infinite()) {
            if (ef.tail_slope != 0) div.add(PointRef::at_infinity(e.id), -ef.tail_slope);
        } else {
            Rat left = bs.size() >= 2 ? (bs[last].value - bs[last - 1].value) / (bs[last].at - bs[last - 1].at)
                                      : Rat(0);
            vertex_orders[*c.find_vertex(e.v)] += static_cast<long long>(numerator(-left));
        }
    }
    for (const auto& [v, order] : vertex_orders)
        if (order != 0 && !c.is_infinite_end(v)) div.add(PointRef::vertex(c.vertex_id(v)), order);
    return div;
}

inline bool is_irredundant(const RatFun& f, const std::vector<RatFun>& parts) {
    for (const auto& g : parts)
        if (!same_curve(*f.curve(), *g.curve())) throw Error(Err::CurveMismatch, "parts on a different curve");
    auto join = [&](std::size_t skip) {
        RatFun acc = RatFun::bottom(f.curve());
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (i != skip) acc = oplus(acc, parts[i]);
        return acc;
    };
    if (!(join(parts.size()) == f)) return false;
    for (std::size_t j = 0; j < parts.size(); ++j)
        if (join(j) == f) return false;
    return true;
}

namespace detail {

// Corridor of points within distance eps of x along one half-edge. Requires
// eps ≤ injectivity radius so the walk crosses only valence-2 vertices.
struct BranchWalk {
    std::vector<std::tuple<int, Rat, Rat>> segments;  // (edge, from, to) in walk order; from may exceed to
    std::vector<PointRef> junctions;                  // valence-2 vertices crossed, plus the far endpoint if a vertex
};

inline BranchWalk walk_branch(const TropicalCurve& c, const Direction& d, const Rat& eps) {
    BranchWalk walk;
    Rat remaining = eps;
    int eidx = *c.find_edge(d.edge);
    Rat pos = d.base.is_vertex() ? (d.orient > 0 ? Rat(0) : c.edge(eidx).length.value()) : d.base.offset;
    int orient = d.orient;
    while (true) {
        const Edge& e = c.edge(eidx);
        ExtRat room = orient > 0 ? (e.length - ExtRat(pos)) : ExtRat(pos);
        if (ExtRat(remaining) <= room) {
            Rat to = orient > 0 ? pos + remaining : pos - remaining;
            walk.segments.push_back({eidx, pos, to});
            PointRef endp = c.canonical_point(PointRef::interior(e.id, to));
            if (endp.is_vertex()) walk.junctions.push_back(endp);
            return walk;
        }
        Rat stop = orient > 0 ? e.length.value() : Rat(0);
        walk.segments.push_back({eidx, pos, stop});
        remaining -= orient > 0 ? stop - pos : pos - stop;
        PointRef v = c.canonical_point(PointRef::interior(e.id, stop));
        walk.junctions.push_back(v);
        int vidx = *c.find_vertex(v.id);
        if (c.graph_valence(vidx) != 2)
            throw Error(Err::BadProbeGeometry, "ball of this radius is not a star around the base point");
        auto inc = c.incident(vidx);
        std::pair<int, int> came = {eidx, orient > 0 ? 1 : 0};
        std::pair<int, int> next = inc[0] == came ? inc[1] : inc[0];
        eidx = next.first;
        orient = next.second == 0 ? +1 : -1;
        pos = next.second == 0 ? Rat(0) : c.edge(eidx).length.value();
    }
}

inline bool branch_contains(const TropicalCurve& c, const BranchWalk& walk, const PointRef& base,
                            const PointRef& p) {
    PointRef q = c.canonical_point(p);
    if (q == base) return false;  // the base point itself is excluded
    if (q.is_vertex()) {
        for (const auto& j : walk.junctions)
            if (j == q) return true;
        return false;
    }
    if (q.at_inf()) return false;  // branches of finite radius never reach infinity
    for (const auto& [e, a, b] : walk.segments) {
        if (c.edge(e).id != q.id) continue;
        const Rat& lo = a < b ? a : b;
        const Rat& hi = a < b ? b : a;
        if (lo <= q.offset && q.offset <= hi) return true;
    }
    return false;
}

}  // namespace detail

// Condition (⋆): every part has maximum 0, minimum -eps, and a unique zero on
// each half-edge of x within the closed eps-ball.
inline bool check_star(const std::vector<RatFun>& parts, const PointRef& x, const Rat& eps) {
    if (parts.empty()) return false;
    const CurvePtr& curve = parts.front().curve();
    for (const auto& g : parts)
        if (!same_curve(*curve, *g.curve())) throw Error(Err::CurveMismatch, "parts on a different curve");
    PointRef base = curve->canonical_point(x);
    if (base.at_inf()) throw Error(Err::BadProbeGeometry, "(*) needs a finite base point");
    if (eps <= 0 || ExtRat(eps) > curve->injectivity_radius(base))
        throw Error(Err::BadProbeGeometry, "eps must lie within the injectivity radius");
    std::vector<detail::BranchWalk> branches;
    for (const auto& d : curve->directions_at(base)) branches.push_back(detail::walk_branch(*curve, d, eps));
    for (const auto& g : parts) {
        if (g.is_bottom()) return false;
        if (!(max_value(g) == ExtRat(0))) return false;
        if (!(min_value(g) == ExtRat(-eps))) return false;
        Divisor div = divisor(g);
        for (const auto& walk : branches) {
            int zeros = 0;
            for (const auto& [p, order] : div.entries())
                if (order > 0 && detail::branch_contains(*curve, walk, base, p)) ++zeros;
            if (zeros != 1) return false;
        }
    }
    return true;
}

// Pieces of the valence-2 corridor from y toward the point at infinity x, in
// walk order (offsets may run backwards on a piece).
inline std::vector<ChainPiece> tail_path(const TropicalCurve& c, const PointRef& y_in, const PointRef& x_in) {
    PointRef x = c.canonical_point(x_in);
    if (!x.at_inf()) throw Error(Err::NotAPointAtInfinity, "tail must end at a point at infinity");
    PointRef y = c.canonical_point(y_in);
    if (y.at_inf()) throw Error(Err::PointNotOnTailEdge, "y must be finite");
    const CanonicalChart& chart = c.chart();
    const std::vector<ChainPiece>* path = nullptr;
    for (const auto& [eid, pieces] : chart.edge_paths) {
        if (pieces.back().to.is_pos_inf() && pieces.back().edge == x.id) {
            path = &pieces;
            break;
        }
    }
    if (!path) throw Error(Err::PointNotOnTailEdge, "no edge carries that point at infinity");
    // find y along the walk and trim
    for (std::size_t k = 0; k < path->size(); ++k) {
        const ChainPiece& piece = (*path)[k];
        int eidx = *c.find_edge(piece.edge);
        const Edge& e = c.edge(eidx);
        bool asc = ExtRat(piece.from) < piece.to;
        std::optional<Rat> at;
        if (y.is_interior() && y.id == piece.edge) {
            ExtRat off{y.offset};
            if (asc ? (ExtRat(piece.from) <= off && off <= piece.to)
                    : (piece.to <= off && off <= ExtRat(piece.from)))
                at = y.offset;
        } else if (y.is_vertex()) {
            if (piece.from == 0 && e.u == y.id) at = Rat(0);
            else if (e.length.is_finite() && piece.from == e.length.value() && e.v == y.id)
                at = e.length.value();
        }
        if (at) {
            std::vector<ChainPiece> out;
            out.push_back({piece.edge, *at, piece.to});
            for (std::size_t j = k + 1; j < path->size(); ++j) out.push_back((*path)[j]);
            return out;
        }
    }
    throw Error(Err::PointNotOnTailEdge, "y does not lie on the edge toward x");
}

// Condition (⋆⋆): every part has maximum +inf, minimum 0, and a unique zero
// on the half-open segment [y, x).
inline bool check_star_star(const std::vector<RatFun>& parts, const PointRef& y, const PointRef& x) {
    if (parts.empty()) return false;
    const CurvePtr& curve = parts.front().curve();
    for (const auto& g : parts)
        if (!same_curve(*curve, *g.curve())) throw Error(Err::CurveMismatch, "parts on a different curve");
    auto path = tail_path(*curve, y, x);  // validates the geometry
    PointRef xc = curve->canonical_point(x);
    auto on_tail = [&](const PointRef& p) {
        if (p == xc) return false;  // x itself is excluded
        if (p.is_vertex()) {
            for (const auto& piece : path) {
                int eidx = *curve->find_edge(piece.edge);
                const Edge& e = curve->edge(eidx);
                if (e.u == p.id && (piece.from == 0 || piece.to == ExtRat(0))) return true;
                if (e.length.is_finite() && e.v == p.id &&
                    (ExtRat(piece.from) == e.length || piece.to == e.length))
                    return true;
            }
            return false;
        }
        if (p.at_inf()) return false;
        for (const auto& piece : path) {
            if (piece.edge != p.id) continue;
            ExtRat off{p.offset};
            ExtRat lo = ExtRat(piece.from) < piece.to ? ExtRat(piece.from) : piece.to;
            ExtRat hi = ExtRat(piece.from) < piece.to ? piece.to : ExtRat(piece.from);
            if (lo <= off && off <= hi) return true;
        }
        return false;
    };
    for (const auto& g : parts) {
        if (g.is_bottom()) return false;
        if (!max_value(g).is_pos_inf()) return false;
        if (!(min_value(g) == ExtRat(0))) return false;
        Divisor div = divisor(g);
        int zeros = 0;
        for (const auto& [p, order] : div.entries())
            if (order > 0 && on_tail(p)) ++zeros;
        if (zeros != 1) return false;
    }
    return true;
}

}  // namespace trop
