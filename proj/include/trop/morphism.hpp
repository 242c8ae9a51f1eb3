#pragma once

// r-expansive maps between tropical curves, finite harmonic morphisms, and
// the automorphism machinery for star-shaped curves.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "trop/curve.hpp"

namespace trop {

// One affine leg of an expansive map: source offsets t in [a, b] go to
// dst offset c + r(t-a), or c - r(t-a) when reversed. b may be inf on an
// infinite source edge, in which case the piece carries the point at
// infinity to the target edge's point at infinity.
struct MapPiece {
    std::string src_edge;
    Rat a;
    ExtRat b;
    std::string dst_edge;
    Rat c;
    bool reversed = false;

    friend bool operator==(const MapPiece& x, const MapPiece& y) {
        return x.src_edge == y.src_edge && x.a == y.a && x.b == y.b && x.dst_edge == y.dst_edge &&
               x.c == y.c && x.reversed == y.reversed;
    }
};

class ExpansiveMap {
public:
    static ExpansiveMap make(CurvePtr source, CurvePtr target, Rat r, std::vector<MapPiece> pieces);

    static ExpansiveMap identity(const CurvePtr& curve) {
        std::vector<MapPiece> pieces;
        for (std::size_t ei = 0; ei < curve->edge_count(); ++ei) {
            const Edge& e = curve->edge(static_cast<int>(ei));
            pieces.push_back({e.id, Rat(0), e.length, e.id, Rat(0), false});
        }
        return make(curve, curve, Rat(1), std::move(pieces));
    }

    const CurvePtr& source() const { return source_; }
    const CurvePtr& target() const { return target_; }
    const Rat& factor() const { return r_; }
    const std::vector<MapPiece>& pieces() const { return pieces_; }

    PointRef apply(const PointRef& p) const {
        PointRef q = source_->canonical_point(p);
        if (source_->singleton()) return target_->canonical_point(PointRef::vertex(target_->model().vertices.front()));
        if (q.at_inf()) {
            for (const auto& piece : pieces_)
                if (piece.src_edge == q.id && piece.b.is_pos_inf())
                    return PointRef::at_infinity(piece.dst_edge);
            throw Error(Err::InvalidMap, "no piece reaches that point at infinity");
        }
        auto mapped = [&](const MapPiece& piece, const Rat& t) {
            Rat off = piece.reversed ? piece.c - r_ * (t - piece.a) : piece.c + r_ * (t - piece.a);
            return target_->canonical_point(PointRef::interior(piece.dst_edge, off));
        };
        if (q.is_vertex()) {
            const auto& [e, end] = source_->incident(*source_->find_vertex(q.id)).front();
            Rat off = end == 0 ? Rat(0) : source_->edge(e).length.value();
            const std::string& eid = source_->edge(e).id;
            for (const auto& piece : pieces_)
                if (piece.src_edge == eid && piece.a <= off && ExtRat(off) <= piece.b)
                    return mapped(piece, off);
        } else {
            for (const auto& piece : pieces_)
                if (piece.src_edge == q.id && piece.a <= q.offset && ExtRat(q.offset) <= piece.b)
                    return mapped(piece, q.offset);
        }
        throw Error(Err::InvalidMap, "point escapes the piece decomposition");
    }

    ExpansiveMap inverse() const {
        Rat rinv = Rat(1) / r_;
        std::vector<MapPiece> inv;
        for (const auto& piece : pieces_) {
            if (piece.b.is_pos_inf()) {
                inv.push_back({piece.dst_edge, piece.c, ExtRat::pos_inf(), piece.src_edge, piece.a, false});
            } else {
                Rat span = r_ * (piece.b.value() - piece.a);
                if (!piece.reversed)
                    inv.push_back({piece.dst_edge, piece.c, ExtRat(piece.c + span), piece.src_edge, piece.a, false});
                else
                    inv.push_back({piece.dst_edge, piece.c - span, ExtRat(piece.c), piece.src_edge,
                                   piece.b.value(), true});
            }
        }
        return make(target_, source_, rinv, std::move(inv));
    }

    PointRef apply_inverse(const PointRef& q) const { return inverse().apply(q); }

private:
    ExpansiveMap() = default;

    void validate();
    void canonicalize();

    CurvePtr source_, target_;
    Rat r_ = 1;
    std::vector<MapPiece> pieces_;
};

inline ExpansiveMap make_expansive(CurvePtr source, CurvePtr target, Rat r, std::vector<MapPiece> pieces) {
    return ExpansiveMap::make(std::move(source), std::move(target), std::move(r), std::move(pieces));
}

inline ExpansiveMap ExpansiveMap::make(CurvePtr source, CurvePtr target, Rat r, std::vector<MapPiece> pieces) {
    ExpansiveMap m;
    m.source_ = std::move(source);
    m.target_ = std::move(target);
    m.r_ = std::move(r);
    m.pieces_ = std::move(pieces);
    m.validate();
    m.canonicalize();
    return m;
}

inline void ExpansiveMap::validate() {
    if (r_ <= 0) throw Error(Err::InvalidMap, "expansion factor must be positive");
    if (source_->singleton() || target_->singleton()) {
        if (!(source_->singleton() && target_->singleton()))
            throw Error(Err::NotBijective, "a singleton maps bijectively only to a singleton");
        if (!pieces_.empty()) throw Error(Err::InvalidMap, "singleton maps carry no pieces");
        return;
    }

    // piece sanity and infinity preservation
    std::size_t src_inf = 0, dst_inf = 0;
    for (std::size_t i = 0; i < source_->edge_count(); ++i)
        if (source_->edge(static_cast<int>(i)).infinite()) ++src_inf;
    for (std::size_t i = 0; i < target_->edge_count(); ++i)
        if (target_->edge(static_cast<int>(i)).infinite()) ++dst_inf;
    if (src_inf != dst_inf)
        throw Error(Err::InfinityNotPreserved, "the curves have different numbers of points at infinity");

    for (const auto& piece : pieces_) {
        auto se = source_->find_edge(piece.src_edge);
        auto de = target_->find_edge(piece.dst_edge);
        if (!se || !de) throw Error(Err::InvalidMap, "piece references a missing edge");
        const Edge& es = source_->edge(*se);
        const Edge& ed = target_->edge(*de);
        if (piece.a < 0 || !(ExtRat(piece.a) < piece.b) || piece.b > es.length)
            throw Error(Err::InvalidMap, "bad source range on '" + piece.src_edge + "'");
        if (piece.b.is_pos_inf()) {
            if (piece.reversed) throw Error(Err::InvalidMap, "an infinite piece cannot be reversed");
            if (!ed.infinite())
                throw Error(Err::InfinityNotPreserved,
                            "infinite piece on '" + piece.src_edge + "' targets a finite edge");
            if (piece.c < 0) throw Error(Err::InvalidMap, "image leaves '" + piece.dst_edge + "'");
        } else {
            Rat span = r_ * (piece.b.value() - piece.a);
            Rat lo = piece.reversed ? piece.c - span : piece.c;
            Rat hi = piece.reversed ? piece.c : piece.c + span;
            if (lo < 0 || ExtRat(hi) > ed.length)
                throw Error(Err::InvalidMap, "image leaves '" + piece.dst_edge + "'");
        }
    }

    // with no points at infinity the total length must scale by r for any
    // bijection (finite edges may stretch onto infinite ones otherwise)
    if (src_inf == 0) {
        Rat src_len = 0, dst_len = 0;
        for (std::size_t i = 0; i < source_->edge_count(); ++i)
            src_len += source_->edge(static_cast<int>(i)).length.value();
        for (std::size_t i = 0; i < target_->edge_count(); ++i)
            dst_len += target_->edge(static_cast<int>(i)).length.value();
        if (r_ * src_len != dst_len)
            throw Error(Err::FactorViolated, "total length does not scale by the factor");
    }

    // pieces partition every source edge
    std::map<std::string, std::vector<const MapPiece*>> by_edge;
    for (const auto& piece : pieces_) by_edge[piece.src_edge].push_back(&piece);
    for (std::size_t ei = 0; ei < source_->edge_count(); ++ei) {
        const Edge& e = source_->edge(static_cast<int>(ei));
        auto it = by_edge.find(e.id);
        if (it == by_edge.end()) throw Error(Err::InvalidMap, "edge '" + e.id + "' is not covered");
        auto& list = it->second;
        std::sort(list.begin(), list.end(), [](const MapPiece* x, const MapPiece* y) { return x->a < y->a; });
        if (list.front()->a != 0) throw Error(Err::InvalidMap, "edge '" + e.id + "' is not covered from 0");
        for (std::size_t k = 0; k + 1 < list.size(); ++k)
            if (!(list[k]->b == ExtRat(list[k + 1]->a)))
                throw Error(Err::InvalidMap, "pieces overlap or leave a gap on '" + e.id + "'");
        if (!(list.back()->b == e.length))
            throw Error(Err::InvalidMap, "edge '" + e.id + "' is not covered up to its end");
    }

    // the images tile every target edge exactly
    std::map<std::string, std::vector<std::pair<ExtRat, ExtRat>>> images;
    for (const auto& piece : pieces_) {
        ExtRat lo, hi;
        if (piece.b.is_pos_inf()) {
            lo = ExtRat(piece.c);
            hi = ExtRat::pos_inf();
        } else {
            Rat span = r_ * (piece.b.value() - piece.a);
            lo = ExtRat(piece.reversed ? piece.c - span : piece.c);
            hi = ExtRat(piece.reversed ? piece.c : piece.c + span);
        }
        images[piece.dst_edge].push_back({lo, hi});
    }
    for (std::size_t ei = 0; ei < target_->edge_count(); ++ei) {
        const Edge& e = target_->edge(static_cast<int>(ei));
        auto it = images.find(e.id);
        if (it == images.end()) throw Error(Err::NotBijective, "target edge '" + e.id + "' is not reached");
        auto& list = it->second;
        std::sort(list.begin(), list.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first || (x.first == y.first && x.second < y.second); });
        if (!(list.front().first == ExtRat(0)))
            throw Error(Err::NotBijective, "target edge '" + e.id + "' is not reached from 0");
        for (std::size_t k = 0; k + 1 < list.size(); ++k)
            if (!(list[k].second == list[k + 1].first))
                throw Error(Err::NotBijective, "images overlap or miss part of '" + e.id + "'");
        if (!(list.back().second == e.length))
            throw Error(Err::NotBijective, "images do not cover '" + e.id + "' up to its end");
    }

    // continuity: shared source points must agree through every covering piece
    auto image_of = [&](const MapPiece& piece, const Rat& t) {
        Rat off = piece.reversed ? piece.c - r_ * (t - piece.a) : piece.c + r_ * (t - piece.a);
        return target_->canonical_point(PointRef::interior(piece.dst_edge, off));
    };
    for (const auto& [eid, list] : by_edge) {
        for (std::size_t k = 0; k + 1 < list.size(); ++k) {
            Rat t = list[k]->b.value();
            if (!(image_of(*list[k], t) == image_of(*list[k + 1], t)))
                throw Error(Err::InvalidMap, "pieces disagree at offset " + rat_to_string(t) + " on '" + eid + "'");
        }
    }
    for (std::size_t vi = 0; vi < source_->vertex_count(); ++vi) {
        if (source_->is_infinite_end(static_cast<int>(vi))) continue;
        std::optional<PointRef> img;
        for (const auto& [e, end] : source_->incident(static_cast<int>(vi))) {
            const Edge& ed = source_->edge(e);
            Rat off = end == 0 ? Rat(0) : ed.length.value();
            for (const MapPiece* piece : by_edge[ed.id]) {
                if (!(piece->a <= off && ExtRat(off) <= piece->b)) continue;
                PointRef q = image_of(*piece, off);
                if (!img)
                    img = q;
                else if (!(*img == q))
                    throw Error(Err::InvalidMap,
                                "vertex '" + source_->vertex_id(static_cast<int>(vi)) + "' has inconsistent images");
            }
        }
    }

    // global metric check on subdivision endpoints, midpoints, and infinities
    std::vector<PointRef> samples;
    for (const auto& piece : pieces_) {
        samples.push_back(source_->canonical_point(PointRef::interior(piece.src_edge, piece.a)));
        if (piece.b.is_pos_inf()) {
            samples.push_back(source_->canonical_point(PointRef::interior(piece.src_edge, piece.a + 1)));
            samples.push_back(PointRef::at_infinity(piece.src_edge));
        } else {
            samples.push_back(source_->canonical_point(PointRef::interior(piece.src_edge, piece.b.value())));
            samples.push_back(
                source_->canonical_point(PointRef::interior(piece.src_edge, (piece.a + piece.b.value()) / 2)));
        }
    }
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    std::vector<PointRef> imgs;
    for (const auto& s : samples) imgs.push_back(apply(s));
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            ExtRat d = source_->distance(samples[i], samples[j]);
            ExtRat d2 = target_->distance(imgs[i], imgs[j]);
            if (!(d2 == d.scaled(r_)))
                throw Error(Err::FactorViolated, "distance between " + samples[i].str() + " and " +
                                                     samples[j].str() + " does not scale by the factor");
        }
}

inline void ExpansiveMap::canonicalize() {
    std::sort(pieces_.begin(), pieces_.end(), [&](const MapPiece& x, const MapPiece& y) {
        if (x.src_edge != y.src_edge)
            return *source_->find_edge(x.src_edge) < *source_->find_edge(y.src_edge);
        return x.a < y.a;
    });
    std::vector<MapPiece> merged;
    for (const auto& piece : pieces_) {
        if (!merged.empty()) {
            MapPiece& prev = merged.back();
            if (prev.src_edge == piece.src_edge && prev.dst_edge == piece.dst_edge &&
                prev.reversed == piece.reversed && prev.b == ExtRat(piece.a)) {
                Rat span = r_ * (piece.a - prev.a);
                Rat expect = prev.reversed ? prev.c - span : prev.c + span;
                if (expect == piece.c) {
                    prev.b = piece.b;
                    continue;
                }
            }
        }
        merged.push_back(piece);
    }
    pieces_ = std::move(merged);
}

inline ExpansiveMap compose(const ExpansiveMap& m2, const ExpansiveMap& m1) {
    if (!same_curve(*m1.target(), *m2.source()))
        throw Error(Err::CurveMismatch, "composition needs matching middle curves");
    if (m1.source()->singleton())
        return ExpansiveMap::make(m1.source(), m2.target(), m2.factor() * m1.factor(), {});
    const Rat& r1 = m1.factor();
    const Rat& r2 = m2.factor();
    std::vector<MapPiece> pieces;
    for (const auto& p : m1.pieces()) {
        ExtRat ilo, ihi;  // image of p on its target edge
        if (p.b.is_pos_inf()) {
            ilo = ExtRat(p.c);
            ihi = ExtRat::pos_inf();
        } else {
            Rat span = r1 * (p.b.value() - p.a);
            ilo = ExtRat(p.reversed ? p.c - span : p.c);
            ihi = ExtRat(p.reversed ? p.c : p.c + span);
        }
        for (const auto& q : m2.pieces()) {
            if (q.src_edge != p.dst_edge) continue;
            ExtRat lo = ext_max(ilo, ExtRat(q.a));
            ExtRat hi = ext_min(ihi, q.b);
            if (!(lo < hi)) continue;
            // pull [lo, hi] back through p to source offsets
            auto pull = [&](const ExtRat& w) -> ExtRat {
                if (w.is_pos_inf()) return ExtRat::pos_inf();
                return ExtRat(p.reversed ? p.a + (p.c - w.value()) / r1 : p.a + (w.value() - p.c) / r1);
            };
            ExtRat t1 = pull(lo), t2 = pull(hi);
            Rat a = (t1 < t2 ? t1 : t2).value();
            ExtRat b = t1 < t2 ? t2 : t1;
            // image of the source offset `a` through q ∘ p
            Rat w_at_a = p.reversed ? p.c - r1 * (a - p.a) : p.c + r1 * (a - p.a);
            Rat c = q.reversed ? q.c - r2 * (w_at_a - q.a) : q.c + r2 * (w_at_a - q.a);
            pieces.push_back({p.src_edge, a, b, q.dst_edge, c, p.reversed != q.reversed});
        }
    }
    return ExpansiveMap::make(m1.source(), m2.target(), r2 * r1, std::move(pieces));
}

inline ExpansiveMap inverse(const ExpansiveMap& m) { return m.inverse(); }
inline PointRef apply(const ExpansiveMap& m, const PointRef& p) { return m.apply(p); }
inline PointRef apply_inverse(const ExpansiveMap& m, const PointRef& q) { return m.apply_inverse(q); }

inline bool same_map(const ExpansiveMap& x, const ExpansiveMap& y) {
    return same_curve(*x.source(), *y.source()) && same_curve(*x.target(), *y.target()) &&
           x.factor() == y.factor() && x.pieces() == y.pieces();
}

inline bool is_automorphism(const ExpansiveMap& m) {
    if (!same_curve(*m.source(), *m.target()))
        throw Error(Err::CurveMismatch, "automorphisms need source = target");
    return m.factor() == 1;
}

// ---------------------------------------------------------------------------
// Finite harmonic morphisms on explicit loopless models.

struct HarmonicMorphismData {
    Model source, target;
    std::map<std::string, std::string> vertex_map;
    std::map<std::string, std::string> edge_map;
    std::map<std::string, long long> edge_degree;
    long long declared_degree = 1;  // singleton-to-singleton only
};

inline Model subdivide_edge(Model m, const std::string& edge_id, const Rat& offset,
                            const std::string& new_vertex) {
    for (auto& e : m.edges) {
        if (e.id != edge_id) continue;
        if (offset <= 0 || ExtRat(offset) >= e.length)
            throw Error(Err::InvalidModel, "subdivision offset outside edge '" + edge_id + "'");
        Edge tail{e.id + ":1", new_vertex, e.v, e.length - ExtRat(offset), e.inf_end};
        m.vertices.push_back(new_vertex);
        e.id += ":0";
        e.v = new_vertex;
        e.length = ExtRat(offset);
        e.inf_end.reset();
        m.edges.push_back(std::move(tail));
        return m;
    }
    throw Error(Err::InvalidModel, "no edge '" + edge_id + "'");
}

// Splits every loop at its midpoint; the result is a loopless model of the
// same curve.
inline Model loopless_model(Model m) {
    std::vector<std::string> loops;
    for (const auto& e : m.edges)
        if (e.u == e.v) loops.push_back(e.id);
    for (const auto& id : loops) {
        const Edge* e = nullptr;
        for (const auto& cand : m.edges)
            if (cand.id == id) e = &cand;
        m = subdivide_edge(std::move(m), id, e->length.value() / 2, id + ":m");
    }
    return m;
}

inline long long verify_harmonic(const HarmonicMorphismData& data) {
    CurvePtr src = build_curve(data.source);
    CurvePtr dst = build_curve(data.target);
    for (const auto& e : data.source.edges)
        if (e.u == e.v) throw Error(Err::LoopyModel, "source model has loop '" + e.id + "'");
    for (const auto& e : data.target.edges)
        if (e.u == e.v) throw Error(Err::LoopyModel, "target model has loop '" + e.id + "'");

    if (src->singleton() && dst->singleton()) {
        if (data.declared_degree < 1) throw NotHarmonicError(4, "degree must be a positive integer");
        return data.declared_degree;
    }

    auto vimage = [&](const std::string& v) -> const std::string& {
        auto it = data.vertex_map.find(v);
        if (it == data.vertex_map.end() || !dst->find_vertex(it->second))
            throw NotHarmonicError(1, "vertex '" + v + "' has no image vertex");
        return it->second;
    };
    auto eimage = [&](const std::string& e) -> const std::string& {
        auto it = data.edge_map.find(e);
        if (it == data.edge_map.end() || !dst->find_edge(it->second))
            throw NotHarmonicError(2, "edge '" + e + "' has no image edge");
        return it->second;
    };

    for (const auto& v : data.source.vertices) vimage(v);

    for (const auto& e : src->model().edges) {
        const Edge& ed = dst->edge(*dst->find_edge(eimage(e.id)));
        const std::string& iu = vimage(e.u);
        const std::string& iv = vimage(e.v);
        bool straight = iu == ed.u && iv == ed.v;
        bool flipped = iu == ed.v && iv == ed.u;
        if (!straight && !flipped)
            throw NotHarmonicError(2, "edge '" + e.id + "' does not map onto its image's endpoints");
        if (e.infinite() != ed.infinite())
            throw NotHarmonicError(3, "edge '" + e.id + "' mixes finite and infinite lengths");
        if (e.infinite() && vimage(*e.inf_end) != *ed.inf_end)
            throw NotHarmonicError(2, "edge '" + e.id + "' does not respect the infinite ends");
        auto it = data.edge_degree.find(e.id);
        if (it == data.edge_degree.end() || it->second < 1)
            throw NotHarmonicError(3, "edge '" + e.id + "' needs a positive integer stretch");
        if (!e.infinite() && ed.length.value() != Rat(it->second) * e.length.value())
            throw NotHarmonicError(3, "edge '" + e.id + "' does not stretch by its degree");
    }

    // local degree deg_v: the same over every target edge incident to the image
    std::map<std::string, long long> deg_v;
    for (const auto& v : data.source.vertices) {
        const std::string& w = vimage(v);
        int widx = *dst->find_vertex(w);
        std::optional<long long> common;
        for (const auto& [de, dend] : dst->incident(widx)) {
            const std::string& did = dst->edge(de).id;
            long long sum = 0;
            for (const auto& [se, send] : src->incident(*src->find_vertex(v)))
                if (eimage(src->edge(se).id) == did) sum += data.edge_degree.at(src->edge(se).id);
            if (!common)
                common = sum;
            else if (*common != sum)
                throw NotHarmonicError(4, "vertex '" + v + "' has direction-dependent local degree");
        }
        deg_v[v] = common.value_or(0);
    }

    // the global degree: the same over every fiber
    std::optional<long long> degree;
    for (const auto& w : data.target.vertices) {
        long long sum = 0;
        for (const auto& [v, dv] : deg_v)
            if (vimage(v) == w) sum += dv;
        if (!degree)
            degree = sum;
        else if (*degree != sum)
            throw NotHarmonicError(4, "fibers have different total degrees");
    }
    if (!degree || *degree < 1) throw NotHarmonicError(4, "degree must be a positive integer");
    return *degree;
}

// Loopless model pair induced by an expansive map with a positive integer
// factor: the source is refined at piece boundaries, preimages of target
// vertices, and loop midpoints; the target at the images of all source
// vertices. Every refined source edge then stretches onto exactly one
// refined target edge by the factor.
inline HarmonicMorphismData induced_harmonic_data(const ExpansiveMap& m) {
    const Rat& r = m.factor();
    if (!is_integer(r) || r < 1) throw Error(Err::InvalidMap, "needs a positive integer factor");
    HarmonicMorphismData data;
    if (m.source()->singleton()) {
        data.source = m.source()->model();
        data.target = m.target()->model();
        data.declared_degree = static_cast<long long>(numerator(r));
        return data;
    }
    const TropicalCurve& src = *m.source();
    const TropicalCurve& dst = *m.target();
    ExpansiveMap inv = m.inverse();

    auto collect_cuts = [](const TropicalCurve& c, const std::vector<MapPiece>& pieces,
                           const std::vector<PointRef>& interior_points) {
        std::map<int, std::set<Rat>> cuts;
        for (const auto& p : pieces) {
            int e = *c.find_edge(p.src_edge);
            if (p.a != 0) cuts[e].insert(p.a);
            if (p.b.is_finite() && p.b != c.edge(e).length) cuts[e].insert(p.b.value());
        }
        for (const auto& q : interior_points)
            if (q.is_interior()) cuts[*c.find_edge(q.id)].insert(q.offset);
        return cuts;
    };

    std::vector<PointRef> preimages;
    for (const auto& vid : dst.model().vertices) preimages.push_back(inv.apply(PointRef::vertex(vid)));
    auto cuts1 = collect_cuts(src, m.pieces(), preimages);
    for (std::size_t ei = 0; ei < src.edge_count(); ++ei) {
        const Edge& e = src.edge(static_cast<int>(ei));
        if (e.u == e.v && cuts1[static_cast<int>(ei)].empty())
            cuts1[static_cast<int>(ei)].insert(e.length.value() / 2);
    }

    struct Refined {
        Model model;
        std::map<PointRef, std::string> vertex_of_point;           // canonical point -> vertex id
        std::map<std::pair<int, Rat>, std::string> edge_by_start;  // (old edge idx, start offset) -> id
    };
    auto refine = [](const TropicalCurve& c, std::map<int, std::set<Rat>>& cuts) {
        Refined out;
        out.model.vertices = c.model().vertices;
        std::set<std::string> taken(out.model.vertices.begin(), out.model.vertices.end());
        for (const auto& vid : c.model().vertices)
            out.vertex_of_point[c.canonical_point(PointRef::vertex(vid))] = vid;
        for (std::size_t ei = 0; ei < c.edge_count(); ++ei) {
            const Edge& e = c.edge(static_cast<int>(ei));
            std::vector<Rat> offs(cuts[static_cast<int>(ei)].begin(), cuts[static_cast<int>(ei)].end());
            std::vector<std::string> names = {e.u};
            for (const Rat& off : offs) {
                std::string name = e.id + ":" + rat_to_string(off);
                while (taken.count(name)) name += "'";
                taken.insert(name);
                out.model.vertices.push_back(name);
                out.vertex_of_point[PointRef::interior(e.id, off)] = name;
                names.push_back(name);
            }
            std::vector<Rat> bounds = offs;
            bounds.insert(bounds.begin(), Rat(0));
            for (std::size_t k = 0; k < names.size(); ++k) {
                bool last = k + 1 == names.size();
                Edge sub;
                sub.id = e.id + "#" + std::to_string(k);
                sub.u = names[k];
                sub.v = last ? e.v : names[k + 1];
                sub.length = last ? (e.infinite() ? ExtRat::pos_inf() : ExtRat(e.length.value() - bounds[k]))
                                  : ExtRat(bounds[k + 1] - bounds[k]);
                if (last && e.infinite()) sub.inf_end = e.inf_end;
                out.edge_by_start[{static_cast<int>(ei), bounds[k]}] = sub.id;
                out.model.edges.push_back(std::move(sub));
            }
            if (e.infinite()) out.vertex_of_point[PointRef::at_infinity(e.id)] = e.v;
        }
        return out;
    };

    Refined m1 = refine(src, cuts1);

    std::vector<PointRef> images;
    for (const auto& [p, vid] : m1.vertex_of_point) images.push_back(m.apply(p));
    std::map<int, std::set<Rat>> cuts2;
    for (const auto& q : images)
        if (q.is_interior()) cuts2[*dst.find_edge(q.id)].insert(q.offset);
    Refined m2 = refine(dst, cuts2);

    data.source = m1.model;
    data.target = m2.model;
    for (const auto& [p, vid] : m1.vertex_of_point) data.vertex_map[vid] = m2.vertex_of_point.at(m.apply(p));

    long long deg = static_cast<long long>(numerator(r));
    for (const auto& [key, sub_id] : m1.edge_by_start) {
        const auto& [ei, start] = key;
        const Edge& e = src.edge(ei);
        // the piece carrying this sub-edge
        const MapPiece* piece = nullptr;
        for (const auto& p : m.pieces())
            if (p.src_edge == e.id && p.a <= start && ExtRat(start) < p.b) piece = &p;
        Rat w = piece->reversed ? piece->c - r * (start - piece->a) : piece->c + r * (start - piece->a);
        // for reversed pieces the image sub-edge starts at the image of the far end
        Rat w_start = w;
        if (piece->reversed) {
            // far end offset of this sub-edge on the source side
            auto it = cuts1[ei].upper_bound(start);
            Rat end = it != cuts1[ei].end() ? *it : e.length.value();
            w_start = piece->c - r * (end - piece->a);
        }
        data.edge_map[sub_id] = m2.edge_by_start.at({*dst.find_edge(piece->dst_edge), w_start});
        data.edge_degree[sub_id] = deg;
    }
    return data;
}

// ---------------------------------------------------------------------------
// Star-shaped curves: coordinates, permutation/dilation maps, generators.

struct StarRay {
    std::string canon_edge;
    std::vector<ChainPiece> pieces;  // center -> infinity
    std::vector<Rat> cum;            // start distance of each piece from the center
};

struct StarChart {
    PointRef center;
    std::vector<StarRay> rays;  // ordered by canonical edge id
};

inline StarChart star_chart(const TropicalCurve& c) {
    if (!c.star_infinite()) throw Error(Err::NotStarInfinite, "the curve is not a star of [0, inf] rays");
    StarChart chart;
    std::optional<PointRef> center;
    for (const auto& [id, p] : c.chart().vertex_points)
        if (!p.at_inf()) {
            center = p;
            break;
        }
    chart.center = *center;  // every star has exactly one finite canonical vertex
    for (const auto& [eid, pieces] : c.chart().edge_paths) {
        StarRay ray{eid, pieces, {}};
        Rat acc = 0;
        for (const auto& piece : pieces) {
            ray.cum.push_back(acc);
            if (piece.to.is_finite()) {
                Rat len = piece.to.value() > piece.from ? piece.to.value() - piece.from : piece.from - piece.to.value();
                acc += len;
            }
        }
        chart.rays.push_back(std::move(ray));
    }
    return chart;
}

namespace detail {

// Piece index and walking direction for a ray distance d (d inside piece i).
inline std::size_t ray_piece_at(const StarRay& ray, const Rat& d) {
    for (std::size_t i = ray.cum.size(); i-- > 0;)
        if (d >= ray.cum[i]) return i;
    return 0;
}

inline int piece_dir(const ChainPiece& piece) { return ExtRat(piece.from) < piece.to ? +1 : -1; }

inline Rat ray_offset_at(const StarRay& ray, std::size_t i, const Rat& d) {
    const ChainPiece& piece = ray.pieces[i];
    return piece_dir(piece) > 0 ? piece.from + (d - ray.cum[i]) : piece.from - (d - ray.cum[i]);
}

// Emits map pieces sending distances [d1, d2] (d2 may be inf) on src_ray to
// distances scale * [d1, d2] + shift on dst_ray; cut lists must already make
// each span fit inside one source and one destination piece.
inline void emit_ray_span(std::vector<MapPiece>& out, const StarRay& src_ray, const StarRay& dst_ray,
                          const Rat& scale, const Rat& d1, const ExtRat& d2) {
    std::size_t si = ray_piece_at(src_ray, d1);
    std::size_t di = ray_piece_at(dst_ray, scale * d1);
    const ChainPiece& sp = src_ray.pieces[si];
    const ChainPiece& dp = dst_ray.pieces[di];
    int sd = piece_dir(sp), dd = piece_dir(dp);
    Rat o1 = ray_offset_at(src_ray, si, d1);
    Rat u1 = ray_offset_at(dst_ray, di, scale * d1);
    if (d2.is_pos_inf()) {
        out.push_back({sp.edge, o1, ExtRat::pos_inf(), dp.edge, u1, false});
        return;
    }
    Rat o2 = ray_offset_at(src_ray, si, d2.value());
    bool rev = sd * dd < 0;
    if (sd > 0)
        out.push_back({sp.edge, o1, ExtRat(o2), dp.edge, u1, rev});
    else {
        Rat u2 = ray_offset_at(dst_ray, di, scale * d2.value());
        out.push_back({sp.edge, o2, ExtRat(o1), dp.edge, u2, rev});
    }
}

}  // namespace detail

// The map fixing the center, sending ray i to ray perm[i] with expansion r.
inline ExpansiveMap star_map(const CurvePtr& curve, const Rat& r, const std::vector<std::size_t>& perm) {
    StarChart chart = star_chart(*curve);
    std::size_t n = chart.rays.size();
    if (perm.size() != n) throw Error(Err::InvalidMap, "permutation size must match the ray count");
    std::vector<MapPiece> pieces;
    for (std::size_t i = 0; i < n; ++i) {
        const StarRay& src = chart.rays[i];
        const StarRay& dst = chart.rays.at(perm[i]);
        std::vector<Rat> cuts;
        for (const Rat& d : src.cum) cuts.push_back(d);
        for (const Rat& d : dst.cum) cuts.push_back(d / r);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            detail::emit_ray_span(pieces, src, dst, r, cuts[k], ExtRat(cuts[k + 1]));
        detail::emit_ray_span(pieces, src, dst, r, cuts.back(), ExtRat::pos_inf());
    }
    return ExpansiveMap::make(curve, curve, r, std::move(pieces));
}

// x ↦ a·x + b on a two-ray star identified with [-inf, inf]; rays are ordered
// by canonical edge id, the first carrying the negative axis. |a| is the
// expansion factor.
inline ExpansiveMap line_affine_map(const CurvePtr& curve, const Rat& a, const Rat& b) {
    if (a == 0) throw Error(Err::InvalidMap, "the coefficient must be nonzero");
    StarChart chart = star_chart(*curve);
    if (chart.rays.size() != 2) throw Error(Err::InvalidMap, "affine line maps need exactly two rays");
    auto ray_of = [&](int sign) -> const StarRay& { return chart.rays[sign > 0 ? 1 : 0]; };

    // cut coordinates: the origin, the preimage of the origin, both rays'
    // piece boundaries, and the preimages of both rays' piece boundaries
    std::vector<Rat> cuts = {Rat(0), -b / a};
    for (int sign : {+1, -1})
        for (const Rat& d : ray_of(sign).cum) {
            Rat x = sign > 0 ? d : -d;
            cuts.push_back(x);
            cuts.push_back((x - b) / a);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<MapPiece> pieces;
    // span between coordinates x1 < x2; either end may be missing (an
    // infinite tail); cuts guarantee it sits inside single pieces both ways
    auto emit = [&](std::optional<Rat> x1, std::optional<Rat> x2) {
        Rat probe = x1 && x2 ? (*x1 + *x2) / 2 : (x1 ? *x1 + 1 : *x2 - 1);
        int s = probe > 0 ? +1 : -1;
        Rat y_probe = a * probe + b;
        int sprime = y_probe > 0 ? +1 : -1;
        auto y = [&](const Rat& x) { return a * x + b; };
        const StarRay& sray = ray_of(s);
        const StarRay& dray = ray_of(sprime);
        std::size_t si = detail::ray_piece_at(sray, s > 0 ? probe : -probe);
        std::size_t di = detail::ray_piece_at(dray, sprime > 0 ? y_probe : -y_probe);
        auto t_at = [&](const Rat& x) { return detail::ray_offset_at(sray, si, s > 0 ? x : -x); };
        auto u_at = [&](const Rat& x) {
            Rat yx = y(x);
            return detail::ray_offset_at(dray, di, sprime > 0 ? yx : -yx);
        };
        if (!x1 || !x2) {
            // infinite tails map to infinite tails; never reversed
            Rat xf = x1 ? *x1 : *x2;
            pieces.push_back({sray.pieces[si].edge, t_at(xf), ExtRat::pos_inf(), dray.pieces[di].edge,
                              u_at(xf), false});
            return;
        }
        Rat t1 = t_at(*x1), t2 = t_at(*x2);
        Rat u1 = u_at(*x1), u2 = u_at(*x2);
        if (t1 < t2)
            pieces.push_back({sray.pieces[si].edge, t1, ExtRat(t2), dray.pieces[di].edge, u1, u2 < u1});
        else
            pieces.push_back({sray.pieces[si].edge, t2, ExtRat(t1), dray.pieces[di].edge, u2, u1 < u2});
    };

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) emit(cuts[k], cuts[k + 1]);
    emit(cuts.back(), std::nullopt);
    emit(std::nullopt, cuts.front());

    return ExpansiveMap::make(curve, curve, a > 0 ? a : -a, std::move(pieces));
}

// Generators of Aut(Γ) for star-shaped curves: adjacent ray transpositions
// (n ≠ 2), or the unit translation and the inversion at the center (n = 2).
// n ≤ 1 leaves only the identity, so the list is empty.
inline std::vector<ExpansiveMap> star_aut_generators(const CurvePtr& curve) {
    StarChart chart = star_chart(*curve);
    std::size_t n = chart.rays.size();
    std::vector<ExpansiveMap> gens;
    if (n == 2) {
        gens.push_back(line_affine_map(curve, Rat(1), Rat(1)));
        gens.push_back(line_affine_map(curve, Rat(-1), Rat(0)));
    } else if (n >= 3) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::vector<std::size_t> perm(n);
            for (std::size_t k = 0; k < n; ++k) perm[k] = k;
            std::swap(perm[i], perm[i + 1]);
            gens.push_back(star_map(curve, Rat(1), perm));
        }
    }
    return gens;
}

// Closure of a generator set under composition, starting from the identity.
inline std::vector<ExpansiveMap> aut_closure(const CurvePtr& curve, const std::vector<ExpansiveMap>& gens,
                                             std::size_t limit = 1024) {
    std::vector<ExpansiveMap> elems = {ExpansiveMap::identity(curve)};
    std::vector<std::size_t> frontier = {0};
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t idx : frontier) {
            ExpansiveMap base = elems[idx];
            for (const auto& g : gens) {
                ExpansiveMap h = compose(g, base);
                bool known = false;
                for (const auto& e : elems)
                    if (same_map(e, h)) {
                        known = true;
                        break;
                    }
                if (known) continue;
                if (elems.size() >= limit)
                    throw Error(Err::InvalidMap, "closure exceeds the enumeration limit");
                elems.push_back(std::move(h));
                next.push_back(elems.size() - 1);
            }
        }
        frontier = std::move(next);
    }
    return elems;
}

// A curve admits an r-expansive self-map with r ≠ 1 exactly when it is a
// star of [0, inf] rays (the singleton included).
inline bool has_nonunit_dilation(const TropicalCurve& c) { return c.star_infinite(); }

inline ExpansiveMap dilation_witness(const CurvePtr& curve, const Rat& r) {
    StarChart chart = star_chart(*curve);
    if (chart.rays.size() == 2) return line_affine_map(curve, r, Rat(0));
    std::vector<std::size_t> perm(chart.rays.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    return star_map(curve, r, perm);
}

}  // namespace trop
