#pragma once

// Semiring isomorphisms between rational function semifields: the pullback
// f ↦ (r·f) ∘ φ⁻¹ of an expansive map, and the chip-firing probe algorithm
// that recovers the map back from a black-box isomorphism.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trop/chipfire.hpp"
#include "trop/curve.hpp"
#include "trop/morphism.hpp"
#include "trop/ratfun.hpp"

namespace trop {

class SemifieldMapOracle {
public:
    virtual ~SemifieldMapOracle() = default;
    virtual CurvePtr source() const = 0;
    virtual CurvePtr target() const = 0;
    virtual RatFun apply(const RatFun& f) const = 0;
};

class PullbackMap final : public SemifieldMapOracle {
public:
    explicit PullbackMap(ExpansiveMap phi) : phi_(std::move(phi)), inv_(phi_.inverse()) {}

    CurvePtr source() const override { return phi_.source(); }
    CurvePtr target() const override { return phi_.target(); }
    const ExpansiveMap& map() const { return phi_; }
    const Rat& factor() const { return phi_.factor(); }

    RatFun apply(const RatFun& f) const override {
        if (!same_curve(*f.curve(), *phi_.source()))
            throw Error(Err::CurveMismatch, "function lives on a different curve");
        const CurvePtr& dst = phi_.target();
        if (f.is_bottom()) return RatFun::bottom(dst);
        const Rat& r = phi_.factor();
        if (dst->singleton()) return RatFun::from_point_value(dst, r * f.point_value());
        // assemble (r·f) ∘ φ⁻¹ edge by edge from the inverse pieces
        std::vector<std::vector<const MapPiece*>> by_edge(dst->edge_count());
        for (const auto& piece : inv_.pieces())
            by_edge[static_cast<std::size_t>(*dst->find_edge(piece.src_edge))].push_back(&piece);
        std::vector<EdgeFun> segs(dst->edge_count());
        for (std::size_t ei = 0; ei < dst->edge_count(); ++ei) {
            EdgeFun out;
            for (const MapPiece* piece : by_edge[ei]) {  // already sorted by start offset
                int src_e = *f.curve()->find_edge(piece->dst_edge);
                const EdgeFun& ef = f.segments()[static_cast<std::size_t>(src_e)];
                // source offset of target offset t: piece->c ± (t - piece->a)/r  with factor 1/r
                auto src_off = [&](const Rat& t) {
                    return piece->reversed ? piece->c - (t - piece->a) * (Rat(1) / r)
                                           : piece->c + (t - piece->a) * (Rat(1) / r);
                };
                auto dst_off = [&](const Rat& o) {
                    return piece->reversed ? piece->a + (piece->c - o) * r : piece->a + (o - piece->c) * r;
                };
                std::vector<Rat> cand = {piece->a};
                if (piece->b.is_finite()) cand.push_back(piece->b.value());
                Rat lo = src_off(piece->a);
                std::optional<Rat> hi;
                if (piece->b.is_finite()) hi = src_off(piece->b.value());
                Rat s_lo = hi && *hi < lo ? *hi : lo;
                std::optional<Rat> s_hi = hi ? std::optional<Rat>(*hi < lo ? lo : *hi) : std::nullopt;
                for (const auto& brk : ef.breaks) {
                    if (brk.at <= s_lo) continue;
                    if (s_hi && brk.at >= *s_hi) continue;
                    cand.push_back(dst_off(brk.at));
                }
                std::sort(cand.begin(), cand.end());
                cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
                for (const Rat& t : cand) {
                    Rat v = r * f.value_on_edge(src_e, src_off(t));
                    if (!out.breaks.empty() && out.breaks.back().at == t) continue;  // junction shared
                    out.breaks.push_back({t, v});
                }
                if (piece->b.is_pos_inf()) out.tail_slope = ef.tail_slope;
            }
            segs[ei] = std::move(out);
        }
        return RatFun::from_segments(dst, std::move(segs));
    }

private:
    ExpansiveMap phi_;
    ExpansiveMap inv_;
};

inline PullbackMap pullback(const ExpansiveMap& phi) { return PullbackMap(phi); }

// ---------------------------------------------------------------------------
// Recovery: factor, points, points at infinity, whole map.

struct ProbePair {
    PointRef from, to;
    Rat eps;     // accepted probe radius (finite points)
    int retries = 0;
    std::vector<std::string> argmax_log;  // stringified attainment sets of rejected probes
};

struct InfinitePair {
    PointRef from, to;
    PointRef anchor_from, anchor_to;
    int retries = 0;
};

struct RecoveryReport {
    Rat r = 1;
    std::vector<ProbePair> pairs;
    std::vector<InfinitePair> infinite_pairs;
    bool success = false;
    std::vector<std::string> diagnostics;
};

inline Rat recover_factor(const SemifieldMapOracle& psi) {
    auto image_of_const = [&](const ExtRat& t) {
        RatFun img = psi.apply(RatFun::constant(psi.source(), t));
        auto c = img.as_constant();
        if (!c || !c->is_finite())
            throw Error(Err::NonConstantImageOfConstant,
                        "constant " + t.str() + " does not map to a finite constant");
        return c->value();
    };
    Rat r = image_of_const(ExtRat(1));
    if (r <= 0) throw Error(Err::NonPositiveFactor, "psi(1) = " + rat_to_string(r) + " is not positive");
    for (const Rat& t : {Rat(-1), Rat(2), Rat(1, 3)})
        if (image_of_const(ExtRat(t)) != r * t)
            throw Error(Err::NonConstantImageOfConstant,
                        "psi(" + rat_to_string(t) + ") is not " + rat_to_string(r * t));
    return r;
}

inline std::pair<PointRef, ProbePair> recover_point(const SemifieldMapOracle& psi, const PointRef& x_in,
                                                    const Rat& r) {
    const CurvePtr& src = psi.source();
    const CurvePtr& dst = psi.target();
    PointRef x = src->canonical_point(x_in);
    if (x.at_inf()) throw Error(Err::PointAtInfinity, "recover_point needs a finite point");
    ExtRat inj = src->injectivity_radius(x);
    Rat eps = (inj.is_finite() && inj < ExtRat(1)) ? inj.value() / 2 : Rat(1, 2);
    ProbePair transcript;
    transcript.from = x;
    for (int attempt = 0; attempt < 64; ++attempt, eps /= 2, ++transcript.retries) {
        RatFun image = psi.apply(cf_point(src, x, eps));
        if (image.is_bottom()) {
            transcript.argmax_log.push_back("bottom image");
            continue;
        }
        IntervalSet arg = argmax_set(image);
        auto single = arg.as_single_point();
        if (!single) {
            std::string log = "argmax not a single point:";
            for (const auto& p : arg.isolated_vertices()) log += " " + p.str();
            transcript.argmax_log.push_back(log);
            continue;
        }
        if (single->at_inf())
            throw Error(Err::ArgmaxAtInfinity, "probe image peaks at " + single->str());
        if (!(image == cf_point(dst, *single, r * eps))) {
            transcript.argmax_log.push_back("image is not CF({" + single->str() + "}; r*eps)");
            continue;
        }
        if (src->valence(x) != dst->valence(*single))
            throw Error(Err::ValenceMismatch, x.str() + " and " + single->str() + " differ in valence");
        transcript.to = *single;
        transcript.eps = eps;
        return {*single, transcript};
    }
    throw Error(Err::ProbeDivergence, "probe for " + x.str() + " exhausted its retry budget");
}

namespace detail {

inline PointRef point_at_chain_distance(const TropicalCurve& c, const std::vector<ChainPiece>& pieces,
                                        const Rat& d) {
    Rat acc = 0;
    for (const auto& piece : pieces) {
        ExtRat len = piece.to.is_finite()
                         ? ExtRat(piece.to.value() > piece.from ? piece.to.value() - piece.from
                                                                : piece.from - piece.to.value())
                         : ExtRat::pos_inf();
        if (ExtRat(d - acc) <= len) {
            int dir = ExtRat(piece.from) < piece.to ? +1 : -1;
            Rat off = dir > 0 ? piece.from + (d - acc) : piece.from - (d - acc);
            return c.canonical_point(PointRef::interior(piece.edge, off));
        }
        acc += len.value();
    }
    throw Error(Err::PointNotOnTailEdge, "distance exceeds the chain");
}

}  // namespace detail

inline std::pair<PointRef, InfinitePair> recover_point_at_infinity(const SemifieldMapOracle& psi,
                                                                   const PointRef& x_in, const Rat& r) {
    const CurvePtr& src = psi.source();
    const CurvePtr& dst = psi.target();
    PointRef x = src->canonical_point(x_in);
    if (!x.at_inf()) throw Error(Err::NotAPointAtInfinity, "expected a point at infinity");
    // the corridor from the last finite canonical vertex toward x
    std::vector<ChainPiece> corridor;
    for (const auto& [eid, pieces] : src->chart().edge_paths)
        if (pieces.back().to.is_pos_inf() && pieces.back().edge == x.id) corridor = pieces;
    InfinitePair transcript;
    transcript.from = x;
    bool saw_multiple_poles = false;
    Rat t = 1;
    for (int attempt = 0; attempt < 32; ++attempt, t *= 2, ++transcript.retries) {
        PointRef y = detail::point_at_chain_distance(*src, corridor, t);
        RatFun image = psi.apply(cf_tail(src, y, x));
        if (image.is_bottom() || !min_value(image).is_neg_inf()) continue;
        IntervalSet arg = argmin_set(image);
        auto single = arg.as_single_point();
        if (!single || !single->at_inf()) {
            saw_multiple_poles = true;
            continue;
        }
        Divisor div = divisor(image);
        std::optional<PointRef> pole;
        bool clean = true;
        for (const auto& [p, order] : div.entries()) {
            if (p == *single && order == 1) continue;
            if (order == -1 && !p.at_inf() && !pole)
                pole = p;
            else
                clean = false;
        }
        if (!clean || !pole) {
            saw_multiple_poles = saw_multiple_poles || !clean;
            continue;
        }
        try {
            if (!(image == cf_tail(dst, *pole, *single))) continue;
        } catch (const Error& e) {
            // the pole sits beyond the tail edge of x'; move y toward x and retry
            if (e.code() == Err::PointNotOnTailEdge) continue;
            throw;
        }
        // the pole must be the image of y itself
        auto [y_img, ptrans] = recover_point(psi, y, r);
        (void)ptrans;
        if (!(y_img == *pole)) continue;
        transcript.to = *single;
        transcript.anchor_from = y;
        transcript.anchor_to = *pole;
        return {*single, transcript};
    }
    if (saw_multiple_poles)
        throw Error(Err::MultipleInfinitePoles, "probe for " + x.str() + " kept seeing several poles");
    throw Error(Err::ProbeDivergence, "probe for " + x.str() + " exhausted its retry budget");
}

inline RecoveryReport recover_map(const SemifieldMapOracle& psi, std::vector<PointRef> samples) {
    const CurvePtr& src = psi.source();
    const CurvePtr& dst = psi.target();
    for (auto& s : samples) s = src->canonical_point(s);
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    for (const auto& must : src->canonical_points()) {
        if (std::find(samples.begin(), samples.end(), must) == samples.end())
            throw Error(Err::Usage, "samples must include the canonical vertex " + must.str());
    }
    RecoveryReport report;
    report.r = recover_factor(psi);
    bool all_ok = true;
    std::vector<std::pair<PointRef, PointRef>> recovered;
    for (const auto& s : samples) {
        try {
            if (s.at_inf()) {
                auto [to, transcript] = recover_point_at_infinity(psi, s, report.r);
                report.infinite_pairs.push_back(transcript);
                recovered.push_back({s, to});
            } else {
                auto [to, transcript] = recover_point(psi, s, report.r);
                report.pairs.push_back(transcript);
                recovered.push_back({s, to});
            }
        } catch (const Error& e) {
            all_ok = false;
            report.diagnostics.push_back(s.str() + ": " + e.what());
        }
    }
    // the recovered pairs must scale all pairwise distances by r
    for (std::size_t i = 0; i < recovered.size(); ++i)
        for (std::size_t j = i + 1; j < recovered.size(); ++j) {
            ExtRat d = src->distance(recovered[i].first, recovered[j].first);
            ExtRat d2 = dst->distance(recovered[i].second, recovered[j].second);
            if (!(d2 == d.scaled(report.r))) {
                all_ok = false;
                report.diagnostics.push_back("distance between " + recovered[i].first.str() + " and " +
                                             recovered[j].first.str() + " does not scale by r");
            }
        }
    report.success = all_ok;
    return report;
}

// ---------------------------------------------------------------------------
// Verification suites.

inline bool check_hom_laws(const SemifieldMapOracle& psi, const RatFun& f, const RatFun& g,
                           std::string* witness = nullptr) {
    auto fail = [&](const std::string& w) {
        if (witness) *witness = w;
        return false;
    };
    if (!(psi.apply(oplus(f, g)) == oplus(psi.apply(f), psi.apply(g))))
        return fail("psi(f ⊕ g) != psi(f) ⊕ psi(g)");
    if (!(psi.apply(odot(f, g)) == odot(psi.apply(f), psi.apply(g))))
        return fail("psi(f ⊙ g) != psi(f) ⊙ psi(g)");
    if (!psi.apply(RatFun::bottom(psi.source())).is_bottom()) return fail("psi does not preserve -inf");
    if (!(psi.apply(RatFun::constant(psi.source(), ExtRat(0))) == RatFun::constant(psi.target(), ExtRat(0))))
        return fail("psi does not preserve the multiplicative identity");
    return true;
}

inline bool check_lemma4(const SemifieldMapOracle& psi, const RatFun& f, const Rat& r) {
    RatFun img = psi.apply(f);
    if (f.is_bottom()) return img.is_bottom();
    return max_value(img) == max_value(f).scaled(r) && min_value(img) == min_value(f).scaled(r);
}

inline Divisor pushforward(const Divisor& div, const ExpansiveMap& phi) {
    Divisor out;
    for (const auto& [p, order] : div.entries()) out.add(phi.apply(p), order);
    return out;
}

inline bool check_divisor_correspondence(const SemifieldMapOracle& psi, const ExpansiveMap& phi,
                                         const RatFun& f) {
    RatFun img = psi.apply(f);
    if (f.is_bottom() || img.is_bottom()) return f.is_bottom() && img.is_bottom();
    return divisor(img) == pushforward(divisor(f), phi);
}

}  // namespace trop
