#pragma once

// Seeded random generators for property runs: rational functions built as
// tropical combinations of chip-firing moves (always valid, slopes within
// ±3), subgraphs, and sample points. All draws go through rng() % n so runs
// are reproducible from the seed alone.

#include <random>
#include <vector>

#include "trop/chipfire.hpp"
#include "trop/curve.hpp"
#include "trop/ratfun.hpp"
#include "trop/subgraph.hpp"

namespace trop {

class RandomGen {
public:
    explicit RandomGen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

    Rat rational(long lo, long hi, long max_den = 6) {
        long den = 1 + static_cast<long>(below(static_cast<std::uint64_t>(max_den)));
        long span = (hi - lo) * den + 1;
        long num = lo * den + static_cast<long>(below(static_cast<std::uint64_t>(span)));
        return Rat(num, den);
    }

    Rat positive_rational(long hi, long max_den = 6) {
        Rat q = rational(0, hi, max_den);
        return q == 0 ? Rat(1, max_den) : q;
    }

    PointRef finite_point(const CurvePtr& c) {
        if (c->singleton() || below(3) == 0) {
            std::vector<std::string> finite;
            for (const auto& v : c->model().vertices)
                if (!c->is_infinite_end(*c->find_vertex(v))) finite.push_back(v);
            return PointRef::vertex(finite[below(finite.size())]);
        }
        const Edge& e = c->edge(static_cast<int>(below(c->edge_count())));
        Rat off = e.infinite() ? positive_rational(8) : positive_rational(1) * e.length.value();
        if (ExtRat(off) >= e.length) off = e.length.value() / 2;
        if (off == 0) off = e.infinite() ? Rat(1) : e.length.value() / 2;
        return c->canonical_point(PointRef::interior(e.id, off));
    }

    Subgraph subgraph(const CurvePtr& c) {
        Subgraph s(c);
        std::size_t parts = 1 + below(2);
        for (std::size_t i = 0; i < parts; ++i) {
            if (c->singleton() || below(2) == 0) {
                s.add_point(finite_point(c));
            } else {
                const Edge& e = c->edge(static_cast<int>(below(c->edge_count())));
                Rat lo = e.infinite() ? rational(0, 4) : rational(0, 1) * e.length.value();
                if (lo < 0) lo = 0;
                if (e.infinite() && below(4) == 0) {
                    s.add_interval(e.id, ExtRat(lo), ExtRat::pos_inf());
                } else {
                    ExtRat hi = ExtRat(lo + positive_rational(3));
                    if (hi > e.length) hi = e.length;
                    if (ExtRat(lo) == hi && lo == 0)
                        s.add_point(PointRef::vertex(e.u));
                    else
                        s.add_interval(e.id, ExtRat(lo), hi);
                }
            }
        }
        return s;
    }

    // ⊕ of up to three terms, each an ⊙-product of chip-firing moves and a
    // constant; occasionally Bottom or a bare constant.
    RatFun ratfun(const CurvePtr& c) {
        if (below(20) == 0) return RatFun::bottom(c);
        RatFun acc = RatFun::bottom(c);
        std::size_t terms = 1 + below(3);
        for (std::size_t i = 0; i < terms; ++i) {
            RatFun term = RatFun::constant(c, ExtRat(rational(-5, 5)));
            std::size_t factors = below(4);  // keeps slopes within ±3
            for (std::size_t k = 0; k < factors; ++k) {
                ExtRat l = below(4) == 0 ? ExtRat::pos_inf() : ExtRat(positive_rational(4));
                RatFun move = cf(c, subgraph(c), l);
                if (below(3) == 0) move = oinv(move);
                term = odot(term, move);
            }
            acc = oplus(acc, term);
        }
        return acc;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace trop
