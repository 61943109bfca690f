#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "pir/combinatorics.hpp"
#include "pir/errors.hpp"

namespace pir {

/// Exact rational number.  Always kept in canonical form: gcd(num, den) = 1
/// and den > 0.  Backed by arbitrary-precision integers, so rate and bound
/// arithmetic never overflows or rounds.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {} // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : v_(n) {} // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw Error("rational with zero denominator");
        // cpp_rational insists on a positive denominator, so fold the sign in
        if (den < 0) v_ = boost::multiprecision::cpp_rational(-num, -den);
        else v_ = boost::multiprecision::cpp_rational(num, den);
    }
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    /// Parses "a/b" or "a" with an optional leading sign.
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
            return s;
        };
        std::string_view s = trim(text);
        if (s.empty()) throw ParseError("empty rational literal");
        auto parse_int = [&](std::string_view part) -> BigInt {
            part = trim(part);
            bool negative = false;
            if (!part.empty() && (part.front() == '+' || part.front() == '-')) {
                negative = part.front() == '-';
                part.remove_prefix(1);
            }
            if (part.empty()) throw ParseError("bad rational literal: '" + std::string(text) + "'");
            for (char c : part)
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw ParseError("bad rational literal: '" + std::string(text) + "'");
            BigInt value{std::string(part)};
            return negative ? BigInt(-value) : value;
        };
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return Rational(parse_int(s), 1);
        BigInt num = parse_int(s.substr(0, slash));
        BigInt den = parse_int(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_integer() const { return denominator() == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.v_ == 0) throw Error("rational division by zero");
        return Rational(a.v_ / b.v_);
    }
    Rational operator-() const { return Rational(-v_); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    /// Canonical text form: "num/den", or just "num" for integers.
    std::string str() const {
        if (is_integer()) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

    /// Decimal rendering with `digits` places after the point, round half to
    /// even, computed exactly.  Display only; all comparisons stay exact.
    std::string decimal_str(int digits = 6) const {
        if (digits < 0) throw Error("decimal_str with negative digit count");
        BigInt n = numerator(), d = denominator();
        std::string sign;
        if (n < 0) { sign = "-"; n = -n; }
        BigInt scaled = n * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
        BigInt q = scaled / d, r = scaled % d;
        if (2 * r > d || (2 * r == d && q % 2 == 1)) ++q;
        std::string ds = q.str();
        if (static_cast<int>(ds.size()) <= digits)
            ds.insert(0, static_cast<std::size_t>(digits) + 1 - ds.size(), '0');
        std::string out = ds.substr(0, ds.size() - static_cast<std::size_t>(digits));
        if (digits > 0) out += "." + ds.substr(ds.size() - static_cast<std::size_t>(digits));
        return sign + out;
    }

    double to_double() const { return static_cast<double>(v_); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    explicit Rational(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}
    boost::multiprecision::cpp_rational v_;
};

} // namespace pir
