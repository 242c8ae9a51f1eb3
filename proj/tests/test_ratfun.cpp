#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"
#include "trop/random.hpp"

using namespace trop;
using troptest::fx;
using troptest::P;
using troptest::Q;

namespace {

RatFun seg3_line() {  // 0 at v0 rising with slope 1 to 3 at v1
    EdgeFun ef;
    ef.breaks = {{Rat(0), Rat(0)}, {Rat(3), Rat(3)}};
    return RatFun::from_segments(fx("seg3"), {ef});
}

}  // namespace

TEST_CASE("constants embed the tropical semifield") {
    auto seg3 = fx("seg3");
    RatFun one = RatFun::constant(seg3, ExtRat(0));
    RatFun f = seg3_line();
    REQUIRE(odot(f, one) == f);
    REQUIRE(RatFun::constant(seg3, ExtRat::neg_inf()).is_bottom());
    RatFun c = RatFun::constant(fx("circ2"), ExtRat(Q("5/2")));
    REQUIRE(divisor(c).empty());
    REQUIRE_THROWS_AS(RatFun::constant(seg3, ExtRat::pos_inf()), Error);
}

TEST_CASE("evaluation") {
    auto seg3 = fx("seg3");
    RatFun f = cf_point(seg3, P(seg3, "v0"), Rat(1));
    REQUIRE(f.eval(P(seg3, "e0@2")) == ExtRat(-1));
    REQUIRE(f.eval(P(seg3, "e0@1/2")) == ExtRat(Q("-1/2")));
    REQUIRE(RatFun::bottom(seg3).eval(P(seg3, "v1")) == ExtRat::neg_inf());
    REQUIRE(RatFun::constant(seg3, ExtRat(3)).eval(P(seg3, "v0")) == ExtRat(3));
    auto ray = fx("ray");
    RatFun t = cf_tail(ray, P(ray, "e0@1"), P(ray, "e0@inf"));
    REQUIRE(t.eval(P(ray, "e0@inf")) == ExtRat::neg_inf());
    REQUIRE(t.eval(P(ray, "e0@5")) == ExtRat(-4));
}

TEST_CASE("oplus inserts crossings exactly") {
    auto seg3 = fx("seg3");
    RatFun f = oplus(seg3_line(), RatFun::constant(seg3, ExtRat(Q("3/2"))));
    const auto& bs = f.segments()[0].breaks;
    REQUIRE(bs.size() == 3);
    REQUIRE(bs[1].at == Q("3/2"));
    REQUIRE(bs[1].value == Q("3/2"));
}

TEST_CASE("semifield laws hold exactly on random functions") {
    std::mt19937_64 seeds(20240812);
    for (const auto& name : troptest::fixture_names()) {
        auto c = fx(name);
        RandomGen gen(seeds());
        RatFun zero = RatFun::bottom(c);
        RatFun one = RatFun::constant(c, ExtRat(0));
        for (int trial = 0; trial < 30; ++trial) {
            RatFun f = gen.ratfun(c), g = gen.ratfun(c), h = gen.ratfun(c);
            REQUIRE(oplus(f, g) == oplus(g, f));
            REQUIRE(oplus(oplus(f, g), h) == oplus(f, oplus(g, h)));
            REQUIRE(oplus(f, f) == f);
            REQUIRE(odot(f, g) == odot(g, f));
            REQUIRE(odot(odot(f, g), h) == odot(f, odot(g, h)));
            REQUIRE(odot(f, one) == f);
            REQUIRE(odot(f, oplus(g, h)) == oplus(odot(f, g), odot(f, h)));
            REQUIRE(oplus(f, zero) == f);
            REQUIRE(odot(f, zero).is_bottom());
            if (!f.is_bottom()) REQUIRE(odot(f, oinv(f)) == one);
        }
    }
}

TEST_CASE("pointwise semantics of the operations, including at infinity") {
    std::mt19937_64 seeds(5150);
    for (const auto& name : troptest::fixture_names()) {
        auto c = fx(name);
        RandomGen gen(seeds());
        for (int trial = 0; trial < 8; ++trial) {
            RatFun f = gen.ratfun(c), g = gen.ratfun(c);
            RatFun sum = oplus(f, g);
            RatFun prod = odot(f, g);
            std::vector<PointRef> samples = c->canonical_points();
            for (int k = 0; k < 6; ++k) samples.push_back(gen.finite_point(c));
            for (const auto& p : samples) {
                REQUIRE(sum.eval(p) == ext_max(f.eval(p), g.eval(p)));
                if (!p.at_inf()) REQUIRE(prod.eval(p) == f.eval(p) + g.eval(p));
            }
        }
    }
}

TEST_CASE("min_with clamps through the double-inverse formula") {
    auto seg3 = fx("seg3");
    REQUIRE(min_with(RatFun::constant(seg3, ExtRat(5)), Rat(2)) == RatFun::constant(seg3, ExtRat(2)));
    RatFun f = cf_point(seg3, P(seg3, "v0"), Rat(2));
    REQUIRE(min_with(f, Rat(7)) == f);  // max_value(f) = 0 <= 7

    RatFun deep = cf(seg3, Subgraph::single_point(seg3, P(seg3, "v0")), ExtRat::pos_inf());
    RatFun clamped = min_with(deep, Rat(-1));
    for (const auto& off : {Q("0"), Q("1/2"), Q("1"), Q("2"), Q("3")}) {
        PointRef p = seg3->canonical_point(PointRef::interior("e0", off));
        ExtRat expect = ext_min(deep.eval(p), ExtRat(-1));
        REQUIRE(clamped.eval(p) == expect);
    }
    REQUIRE_THROWS_AS(min_with(RatFun::bottom(seg3), Rat(0)), Error);
}

TEST_CASE("construction rejects non-integer slopes and gaps") {
    auto seg3 = fx("seg3");
    EdgeFun halfslope;
    halfslope.breaks = {{Rat(0), Rat(0)}, {Rat(3), Q("3/2")}};
    REQUIRE_THROWS_AS(RatFun::from_segments(seg3, {halfslope}), Error);
    EdgeFun short_cover;
    short_cover.breaks = {{Rat(0), Rat(0)}, {Rat(2), Rat(2)}};
    REQUIRE_THROWS_AS(RatFun::from_segments(seg3, {short_cover}), Error);
    // inconsistent vertex values across incident edges
    auto theta = fx("theta");
    EdgeFun a, b, c;
    a.breaks = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}};
    b.breaks = {{Rat(0), Rat(0)}, {Rat(2), Rat(2)}};
    c.breaks = {{Rat(0), Rat(0)}, {Rat(3), Rat(0)}};  // disagrees with a and b at v1
    REQUIRE_THROWS_AS(RatFun::from_segments(theta, {a, b, c}), Error);
}

TEST_CASE("operations reject curve mismatches and bottom inversion") {
    auto seg3 = fx("seg3");
    try {
        oinv(RatFun::bottom(seg3));
        FAIL("expected InvertBottom");
    } catch (const Error& e) {
        REQUIRE(e.code() == Err::InvertBottom);
    }
    try {
        oplus(RatFun::constant(seg3, ExtRat(0)), RatFun::constant(fx("theta"), ExtRat(0)));
        FAIL("expected CurveMismatch");
    } catch (const Error& e) {
        REQUIRE(e.code() == Err::CurveMismatch);
    }
}

TEST_CASE("structural equality after canonicalization") {
    auto seg3 = fx("seg3");
    RatFun f = seg3_line();
    EdgeFun with_redundant;
    with_redundant.breaks = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(3), Rat(3)}};  // collinear middle
    RatFun g = RatFun::from_segments(seg3, {with_redundant});
    REQUIRE(f == g);
    REQUIRE(f.segments()[0].breaks.size() == 2);
    REQUIRE_FALSE(RatFun::constant(seg3, ExtRat(0)) ==
                  RatFun::constant(seg3, ExtRat(Rat(1, 1000000000))));
    REQUIRE_THROWS_AS(f == RatFun::constant(fx("circ2"), ExtRat(0)), Error);
}

TEST_CASE("order compatibility with the pointwise order") {
    std::mt19937_64 seeds(31337);
    for (const auto& name : troptest::fixture_names()) {
        auto c = fx(name);
        RandomGen gen(seeds());
        for (int trial = 0; trial < 10; ++trial) {
            RatFun f = gen.ratfun(c), g = gen.ratfun(c);
            bool ge = oplus(f, g) == f;
            bool pointwise = true;
            std::vector<PointRef> samples = c->canonical_points();
            for (int k = 0; k < 8; ++k) samples.push_back(gen.finite_point(c));
            if (!c->singleton())
                for (std::size_t ei = 0; ei < c->edge_count(); ++ei) {
                    auto probe = [&](const RatFun& fn) {
                        if (fn.is_bottom()) return;
                        for (const auto& b : fn.segments()[ei].breaks)
                            samples.push_back(c->canonical_point(
                                PointRef::interior(c->edge(static_cast<int>(ei)).id, b.at)));
                    };
                    probe(f);
                    probe(g);
                }
            for (const auto& p : samples)
                if (!(f.eval(p) >= g.eval(p))) pointwise = false;
            REQUIRE(ge == pointwise);
        }
    }
}

TEST_CASE("extrema and attainment sets") {
    auto seg3 = fx("seg3");
    RatFun f = cf_point(seg3, P(seg3, "v0"), Rat(1));
    REQUIRE(max_value(f) == ExtRat(0));
    REQUIRE(min_value(f) == ExtRat(-1));
    auto amax = argmax_set(f).as_single_point();
    REQUIRE(amax);
    REQUIRE(*amax == P(seg3, "v0"));
    IntervalSet amin = argmin_set(f);
    REQUIRE(amin.contains(P(seg3, "e0@1")));
    REQUIRE(amin.contains(P(seg3, "v1")));
    REQUIRE(amin.contains(P(seg3, "e0@2")));
    REQUIRE_FALSE(amin.contains(P(seg3, "e0@1/2")));

    RatFun c5 = RatFun::constant(seg3, ExtRat(5));
    REQUIRE(max_value(c5) == ExtRat(5));
    REQUIRE(min_value(c5) == ExtRat(5));
    REQUIRE(argmax_set(c5).contains(P(seg3, "e0@3/2")));

    auto ray = fx("ray");
    RatFun t = cf_tail(ray, P(ray, "e0@1"), P(ray, "e0@inf"));
    REQUIRE(min_value(t).is_neg_inf());
    auto single = argmin_set(t).as_single_point();
    REQUIRE(single);
    REQUIRE(single->at_inf());
    REQUIRE_THROWS_AS(argmax_set(RatFun::bottom(ray)), Error);
}

TEST_CASE("divisors of the worked examples") {
    auto seg3 = fx("seg3");
    RatFun f = cf_point(seg3, P(seg3, "v0"), Rat(1));
    Divisor d = divisor(f);
    REQUIRE(d.order_at(P(seg3, "v0")) == -1);
    REQUIRE(d.order_at(P(seg3, "e0@1")) == 1);
    REQUIRE(d.entries().size() == 2);

    // interior pole of degree two with symmetric zeros
    RatFun g = cf_point(seg3, P(seg3, "e0@1"), Q("1/2"));
    Divisor dg = divisor(g);
    REQUIRE(dg.order_at(P(seg3, "e0@1")) == -2);
    REQUIRE(dg.order_at(P(seg3, "e0@1/2")) == 1);
    REQUIRE(dg.order_at(P(seg3, "e0@3/2")) == 1);

    REQUIRE(divisor(RatFun::constant(seg3, ExtRat(4))).empty());
    REQUIRE_THROWS_AS(divisor(RatFun::bottom(seg3)), Error);
}

TEST_CASE("divisor properties over random functions") {
    std::mt19937_64 seeds(777);
    for (const auto& name : troptest::fixture_names()) {
        auto c = fx(name);
        RandomGen gen(seeds());
        for (int trial = 0; trial < 10; ++trial) {
            RatFun f = gen.ratfun(c), g = gen.ratfun(c);
            if (f.is_bottom() || g.is_bottom()) continue;
            Divisor df = divisor(f), dg = divisor(g);
            REQUIRE(df.degree() == 0);
            REQUIRE(divisor(odot(f, g)) == df + dg);
            REQUIRE(divisor(oinv(f)) == -df);
            // finite-difference oracle at every support point
            for (const auto& [p, order] : df.entries())
                REQUIRE(troptest::oracle::outgoing_slope_sum(f, p) == order);
        }
    }
}

TEST_CASE("irredundant representations") {
    auto seg3 = fx("seg3");
    RatFun g = seg3_line();  // 0 at v0 rising to 3
    EdgeFun falling;
    falling.breaks = {{Rat(0), Rat(3)}, {Rat(3), Rat(0)}};
    RatFun h = RatFun::from_segments(seg3, {falling});  // 3 at v0 falling to 0
    RatFun f = oplus(g, h);
    REQUIRE(is_irredundant(f, {g, h}));  // each part is strictly largest on one side
    REQUIRE_FALSE(is_irredundant(f, {g, h, h}));  // duplicate part is droppable
    REQUIRE_FALSE(is_irredundant(f, {g}));        // does not even sum to f
    REQUIRE(is_irredundant(g, {g}));
    REQUIRE_FALSE(is_irredundant(oplus(g, RatFun::constant(seg3, ExtRat(-10))),
                                 {g, RatFun::constant(seg3, ExtRat(-10))}));  // dominated constant
}

namespace {

// The canonical decomposition of CF({x}; eps) along the half-edges of an
// interior point of SEG3: each part follows CF on its own branch and drops
// with slope -2 on the other.
std::vector<RatFun> seg3_probe_parts(const CurvePtr& seg3) {
    EdgeFun left;
    left.breaks = {{Rat(0), Q("-1/2")}, {Q("1/2"), Q("-1/2")}, {Rat(1), Rat(0)},
                   {Q("5/4"), Q("-1/2")}, {Rat(3), Q("-1/2")}};
    EdgeFun right;
    right.breaks = {{Rat(0), Q("-1/2")}, {Q("3/4"), Q("-1/2")}, {Rat(1), Rat(0)},
                    {Q("3/2"), Q("-1/2")}, {Rat(3), Q("-1/2")}};
    return {RatFun::from_segments(seg3, {left}), RatFun::from_segments(seg3, {right})};
}

}  // namespace

TEST_CASE("condition (*) on the canonical probe decomposition") {
    auto seg3 = fx("seg3");
    PointRef x = P(seg3, "e0@1");
    RatFun f = cf_point(seg3, x, Q("1/2"));
    auto parts = seg3_probe_parts(seg3);
    REQUIRE(oplus(parts[0], parts[1]) == f);
    REQUIRE(is_irredundant(f, parts));
    REQUIRE(check_star(parts, x, Q("1/2")));

    // clause (1) fails when a part's maximum is below zero
    auto shifted = parts;
    shifted[0] = odot(shifted[0], RatFun::constant(seg3, ExtRat(-1)));
    REQUIRE_FALSE(check_star(shifted, x, Q("1/2")));

    // eps beyond the injectivity radius is rejected outright
    REQUIRE_THROWS_AS(check_star(parts, x, Rat(2)), Error);
}

TEST_CASE("condition (**) on tail probes") {
    auto ray = fx("ray");
    PointRef y = P(ray, "e0@1");
    PointRef x = P(ray, "e0@inf");
    RatFun tail = cf_tail(ray, y, x);
    std::vector<RatFun> parts = {oinv(tail)};
    REQUIRE(check_star_star(parts, y, x));

    // a part with two zeros on [y, x) violates clause (3)
    RatFun two_zeros = odot(oinv(tail), oinv(cf_tail(ray, P(ray, "e0@2"), x)));
    REQUIRE_FALSE(check_star_star({two_zeros}, y, x));

    // clause (2) fails when the minimum is not zero
    REQUIRE_FALSE(check_star_star({odot(oinv(tail), RatFun::constant(ray, ExtRat(1)))}, y, x));
}

TEST_CASE("singleton curve carries exactly the constants") {
    auto pt = fx("pt");
    RatFun a = RatFun::constant(pt, ExtRat(Q("7/3")));
    RatFun b = RatFun::constant(pt, ExtRat(Q("-1/3")));
    REQUIRE(odot(a, b) == RatFun::constant(pt, ExtRat(2)));
    REQUIRE(oplus(a, b) == a);
    REQUIRE(a.eval(P(pt, "v0")) == ExtRat(Q("7/3")));
    REQUIRE(divisor(a).empty());
    REQUIRE(max_value(a) == ExtRat(Q("7/3")));
}
