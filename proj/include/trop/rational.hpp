#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "trop/error.hpp"

namespace trop {

// Exact rational scalar. All lengths, offsets and function values in this
// library are Rat or ExtRat; no floating point anywhere. Expression
// templates are off so that arithmetic yields plain values.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline std::string rat_to_string(const Rat& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rat rat_from_string(std::string_view s) {
    auto bad = [&] { throw Error(Err::BadRational, "cannot parse rational '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    auto parse_int = [&](std::string_view t) -> Int {
        if (t.empty()) bad();
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) bad();
        for (std::size_t j = i; j < t.size(); ++j)
            if (t[j] < '0' || t[j] > '9') bad();
        return Int(std::string(t));
    };
    if (slash == std::string_view::npos) return Rat(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) bad();
    return Rat(num, den);
}

// Element of R ∪ {−∞, +∞}. −∞ alone is the tropical zero; +∞ shows up as a
// value of rational functions at points at infinity and as an edge length.
class ExtRat {
public:
    enum class Kind : std::int8_t { NegInf = -1, Finite = 0, PosInf = 1 };

    ExtRat() : kind_(Kind::Finite), value_(0) {}
    ExtRat(Rat v) : kind_(Kind::Finite), value_(std::move(v)) {}
    ExtRat(int v) : kind_(Kind::Finite), value_(v) {}

    static ExtRat pos_inf() { return ExtRat(Kind::PosInf); }
    static ExtRat neg_inf() { return ExtRat(Kind::NegInf); }

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    // Finite value; only valid when is_finite().
    const Rat& value() const {
        if (!is_finite()) throw Error(Err::BadRational, "value() on infinite ExtRat");
        return value_;
    }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != Kind::Finite || a.value_ == b.value_;
    }

    friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
        if (a.kind_ != b.kind_)
            return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
        if (a.kind_ != Kind::Finite) return std::strong_ordering::equal;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // +∞ + −∞ is rejected, never given a convention.
    friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
        if (a.is_finite() && b.is_finite()) return ExtRat(a.value_ + b.value_);
        if (a.is_finite()) return b;
        if (b.is_finite()) return a;
        if (a.kind_ != b.kind_)
            throw Error(Err::UndefinedInfinitySum, "(+inf) + (-inf) is undefined");
        return a;
    }

    friend ExtRat operator-(const ExtRat& a) {
        switch (a.kind_) {
            case Kind::PosInf: return neg_inf();
            case Kind::NegInf: return pos_inf();
            default: return ExtRat(-a.value_);
        }
    }

    friend ExtRat operator-(const ExtRat& a, const ExtRat& b) { return a + (-b); }

    // Scale by a positive rational; r·(±∞) = ±∞.
    ExtRat scaled(const Rat& r) const {
        if (r <= 0) throw Error(Err::BadRational, "scaled() needs a positive factor");
        if (!is_finite()) return *this;
        return ExtRat(value_ * r);
    }

    std::string str() const {
        switch (kind_) {
            case Kind::PosInf: return "inf";
            case Kind::NegInf: return "-inf";
            default: return rat_to_string(value_);
        }
    }

private:
    explicit ExtRat(Kind k) : kind_(k), value_(0) {}

    Kind kind_;
    Rat value_;
};

inline ExtRat ext_from_string(std::string_view s) {
    if (s == "inf" || s == "+inf") return ExtRat::pos_inf();
    if (s == "-inf") return ExtRat::neg_inf();
    return ExtRat(rat_from_string(s));
}

inline ExtRat ext_min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }
inline ExtRat ext_max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

// Integer slope test for breakpoint data: (dv / dt) ∈ Z.
inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

}  // namespace trop
