// Scenario tests on curves beyond the fixture zoo: mixed finite/infinite
// parts, loops, and multi-leg canonical edges.

#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"
#include "trop/random.hpp"

using namespace trop;
using troptest::fx;
using troptest::P;
using troptest::Q;

namespace {

CurvePtr theta_with_ray() {
    Model m = fx("theta")->model();
    m.vertices.push_back("w");
    m.edges.push_back(Edge{"ray", "v0", "w", ExtRat::pos_inf(), std::string("w")});
    return build_curve(m);
}

CurvePtr dumbbell() {  // two loops of length 2 joined by a bridge of length 1
    Model m;
    m.vertices = {"a", "b"};
    m.edges = {Edge{"la", "a", "a", ExtRat(2), std::nullopt}, Edge{"lb", "b", "b", ExtRat(2), std::nullopt},
               Edge{"bridge", "a", "b", ExtRat(1), std::nullopt}};
    return build_curve(m);
}

}  // namespace

TEST_CASE("theta with a ray: geometry and probes") {
    auto c = theta_with_ray();
    REQUIRE(c->genus() == 2);
    REQUIRE(c->valence(P(c, "v0")) == 4);
    REQUIRE_FALSE(is_star_infinite(*c));
    REQUIRE_FALSE(has_nonunit_dilation(*c));
    REQUIRE(c->injectivity_radius(P(c, "v0")) == ExtRat(1));
    REQUIRE(c->distance(P(c, "ray@4"), P(c, "e2@1")) == ExtRat(5));

    RatFun probe = cf_point(c, P(c, "v0"), Q("1/2"));
    Divisor d = divisor(probe);
    REQUIRE(d.order_at(P(c, "v0")) == -4);
    REQUIRE(d.degree() == 0);

    PullbackMap psi = pullback(ExpansiveMap::identity(c));
    RecoveryReport report = recover_map(psi, c->canonical_points());
    REQUIRE(report.success);
    REQUIRE(report.r == Rat(1));
    for (const auto& pair : report.pairs) REQUIRE(pair.from == pair.to);
    for (const auto& pair : report.infinite_pairs) REQUIRE(pair.from == pair.to);
}

TEST_CASE("dumbbell: canonical loops and the loop-swap automorphism") {
    auto c = dumbbell();
    REQUIRE(c->genus() == 2);
    Model cm = canonical_model(*c);
    REQUIRE(cm.edges.size() == 3);
    REQUIRE(c->injectivity_radius(P(c, "a")) == ExtRat(1));       // half the loop
    REQUIRE(c->injectivity_radius(P(c, "bridge@1/2")) == ExtRat(Q("1/2")));

    // swap the two loops through the reversed bridge
    std::vector<MapPiece> pieces = {{"la", Rat(0), ExtRat(Rat(2)), "lb", Rat(0), false},
                                    {"lb", Rat(0), ExtRat(Rat(2)), "la", Rat(0), false},
                                    {"bridge", Rat(0), ExtRat(Rat(1)), "bridge", Rat(1), true}};
    ExpansiveMap swap = make_expansive(c, c, Rat(1), pieces);
    REQUIRE(is_automorphism(swap));
    REQUIRE(swap.apply(P(c, "a")) == P(c, "b"));
    REQUIRE(same_map(compose(swap, swap), ExpansiveMap::identity(c)));

    PullbackMap psi = pullback(swap);
    std::mt19937_64 seed(12);
    RandomGen gen(seed());
    std::vector<PointRef> samples = c->canonical_points();
    for (int k = 0; k < 6; ++k) samples.push_back(gen.finite_point(c));
    RecoveryReport report = recover_map(psi, samples);
    REQUIRE(report.success);
    for (const auto& pair : report.pairs) REQUIRE(pair.to == swap.apply(pair.from));

    // chip-firing from the bridge sees both loops fold back
    RatFun f = cf_point(c, P(c, "bridge@1/2"), Q("3/2"));
    REQUIRE(f.eval(P(c, "la@1")) == ExtRat(Q("-3/2")));
    REQUIRE(divisor(f).degree() == 0);
    REQUIRE(check_lemma4(psi, f, Rat(1)));
    REQUIRE(check_divisor_correspondence(psi, swap, f));
}

TEST_CASE("folding the line onto the ray is harmonic of degree two") {
    HarmonicMorphismData data;
    data.source = fx("line")->model();
    data.target = fx("ray")->model();
    data.vertex_map = {{"v0", "v0"}, {"vl", "v1"}, {"vr", "v1"}};
    data.edge_map = {{"el", "e0"}, {"er", "e0"}};
    data.edge_degree = {{"el", 1}, {"er", 1}};
    REQUIRE(verify_harmonic(data) == 2);

    // stretching one ray by two is still harmonic (infinite lengths absorb it)
    auto stretched = data;
    stretched.edge_degree["er"] = 2;
    REQUIRE(verify_harmonic(stretched) == 3);

    // sending both ends of a ray to the finite vertex breaks clause (2)
    auto broken = data;
    broken.vertex_map["vr"] = "v0";
    try {
        verify_harmonic(broken);
        FAIL("expected NotHarmonic(2)");
    } catch (const NotHarmonicError& e) {
        REQUIRE(e.clause() == 2);
    }
}

TEST_CASE("affine line maps: pointwise action, composition, inverse") {
    auto line = fx("line");
    auto coord_pt = [&](const Rat& x) -> PointRef {
        if (x == 0) return PointRef::vertex("v0");
        return line->canonical_point(PointRef::interior(x > 0 ? "er" : "el", x > 0 ? x : -x));
    };
    RandomGen gen(7);
    for (int trial = 0; trial < 40; ++trial) {
        Rat a = gen.rational(-4, 4);
        if (a == 0) a = Q("1/3");
        Rat b = gen.rational(-5, 5);
        ExpansiveMap m = line_affine_map(line, a, b);
        for (int k = 0; k < 5; ++k) {
            Rat x = gen.rational(-9, 9);
            REQUIRE(m.apply(coord_pt(x)) == coord_pt(a * x + b));
        }
        REQUIRE(m.apply(PointRef::at_infinity("er")) == PointRef::at_infinity(a > 0 ? "er" : "el"));
        Rat a2 = gen.rational(-3, 3);
        if (a2 == 0) a2 = Rat(2);
        Rat b2 = gen.rational(-3, 3);
        REQUIRE(same_map(compose(m, line_affine_map(line, a2, b2)),
                         line_affine_map(line, a * a2, a * b2 + b)));
        REQUIRE(same_map(m.inverse(), line_affine_map(line, Rat(1) / a, -b / a)));
    }
}

TEST_CASE("a three-edge circle: rotation built by hand recovers exactly") {
    Model cm;
    cm.vertices = {"a", "b", "c"};
    cm.edges = {Edge{"x", "a", "b", ExtRat(Rat(1)), std::nullopt},
                Edge{"y", "b", "c", ExtRat(Q("1/2")), std::nullopt},
                Edge{"z", "c", "a", ExtRat(Q("3/2")), std::nullopt}};
    auto circ = build_curve(cm);
    REQUIRE(circ->is_circle());
    REQUIRE(circ->circumference() == 3);

    std::vector<MapPiece> rot = {{"x", Rat(0), ExtRat(Q("1/2")), "y", Rat(0), false},
                                 {"x", Q("1/2"), ExtRat(Rat(1)), "z", Rat(0), false},
                                 {"y", Rat(0), ExtRat(Q("1/2")), "z", Q("1/2"), false},
                                 {"z", Rat(0), ExtRat(Q("1/2")), "z", Rat(1), false},
                                 {"z", Q("1/2"), ExtRat(Q("3/2")), "x", Rat(0), false}};
    ExpansiveMap rot1 = make_expansive(circ, circ, Rat(1), rot);
    REQUIRE(rot1.apply(PointRef::vertex("a")) == PointRef::vertex("b"));

    RecoveryReport report = recover_map(pullback(rot1), circ->canonical_points());
    REQUIRE(report.success);
    for (const auto& pair : report.pairs) REQUIRE(pair.to == rot1.apply(pair.from));
}

TEST_CASE("induced harmonic data of integer dilations has the factor as degree") {
    auto star3 = fx("star3");
    REQUIRE(verify_harmonic(induced_harmonic_data(star_map(star3, Rat(2), {1, 0, 2}))) == 2);
    REQUIRE(verify_harmonic(induced_harmonic_data(star_map(fx("ray"), Rat(4), {0}))) == 4);
}

TEST_CASE("condition (*) at a valence-three center") {
    auto star3 = fx("star3");
    PointRef x = P(star3, "v0");
    RatFun f = cf_point(star3, x, Rat(1));
    // one part per half-edge: the chip-firing profile on its own ray, slope -2
    // on the others
    auto part = [&](int own) {
        std::vector<EdgeFun> segs(3);
        for (int e = 0; e < 3; ++e) {
            EdgeFun ef;
            if (e == own)
                ef.breaks = {{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}};
            else
                ef.breaks = {{Rat(0), Rat(0)}, {Q("1/2"), Rat(-1)}};
            segs[static_cast<std::size_t>(e)] = std::move(ef);
        }
        return RatFun::from_segments(star3, std::move(segs));
    };
    std::vector<RatFun> parts = {part(0), part(1), part(2)};
    RatFun joined = oplus(oplus(parts[0], parts[1]), parts[2]);
    REQUIRE(joined == f);
    REQUIRE(is_irredundant(f, parts));
    REQUIRE(check_star(parts, x, Rat(1)));
    REQUIRE_FALSE(check_star({odot(f, f)}, x, Rat(1)));        // minimum -2 breaks clause (2)
    REQUIRE_FALSE(is_irredundant(f, {parts[0], parts[1], parts[2], parts[2]}));
}
