#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pir/combinatorics.hpp"
#include "pir/errors.hpp"
#include "pir/rational.hpp"

namespace pir {

/// Asymptotic upper bound g(s) <= (s+1)/(2s) for rational s > 1.  No finite
/// t attains it, so every finite-t rate must fall strictly below.
inline Rational upper_g_s(const Rational& s) {
    if (s <= 1) throw UnsupportedParameters("upper bound needs s > 1, got " + s.str());
    return (s + 1) / (2 * s);
}

/// Upper bound on g(1 + d/t, t) for integer t >= 2 and any positive integer
/// d: ((2d+1)t + d^2) / ((t+d)(2d+1)).
inline Rational upper_g_st(int t, int d) {
    if (t < 2) throw UnsupportedParameters("upper bound on g(s,t) needs t >= 2");
    if (d < 1) throw UnsupportedParameters("upper bound on g(s,t) needs d >= 1");
    long long tt = t, dd = d;
    return Rational((2 * dd + 1) * tt + dd * dd, (tt + dd) * (2 * dd + 1));
}

struct LabeledBound {
    std::string label;
    Rational value;
};

/// beta / gamma server counts of the integer-s general construction, in
/// closed form.  The construction rate is (beta + gamma) / (beta + 2 gamma),
/// approaching (s+1)/(2s) from below as t grows.
struct BetaGamma {
    BigInt beta;
    BigInt gamma;
    Rational rate() const { return Rational(beta + gamma, beta + 2 * gamma); }
};

inline BetaGamma beta_gamma(int s, int t) {
    if (s < 2 || t < 1) throw UnsupportedParameters("beta/gamma needs s >= 2 and t >= 1");
    auto tail_product = [&](int from) { // prod_{l=from}^{s-1} (l*t + 1)
        BigInt prod = 1;
        for (int l = from; l <= s - 1; ++l) prod *= BigInt(l) * t + 1;
        return prod;
    };
    BigInt beta = tail_product(1);
    BigInt correction = 0;
    for (int r = 2; r <= s; ++r)
        correction += falling_factorial(s - 1, r - 1) *
                      boost::multiprecision::pow(BigInt(t), static_cast<unsigned>(r - 2)) *
                      tail_product(r);
    beta += BigInt(t - 1) * correction;
    BigInt gamma = 0;
    for (int r = 1; r <= s - 1; ++r)
        gamma += falling_factorial(s - 1, r) *
                 boost::multiprecision::pow(BigInt(t), static_cast<unsigned>(r - 1)) *
                 tail_product(r);
    return {beta, gamma};
}

/// Closed-form lower bounds on g(s, t) applicable at the given parameters.
/// Labels carry the parameter instantiation so gap reports read on their own.
inline std::vector<LabeledBound> lower_formulas(const Rational& s, int t) {
    if (t < 1) throw UnsupportedParameters("t must be positive");
    if (s <= 1) throw UnsupportedParameters("lower bounds need s > 1, got " + s.str());
    std::vector<LabeledBound> out;

    // Theorem 1: exact value of g(s, 1) for integer s.
    if (t == 1 && s.is_integer()) {
        unsigned si = static_cast<unsigned>(s.numerator());
        BigInt two_pow = boost::multiprecision::pow(BigInt(2), si);
        out.push_back({"Theorem 1", Rational(two_pow / 2, two_pow - 1)});
    }

    // Theorem 2: g(s, s-1) >= s/(2s-1) for integer s >= 3.
    if (s.is_integer() && s >= 3 && Rational(t) == s - 1) {
        BigInt si = s.numerator();
        out.push_back({"Theorem 2", Rational(si, 2 * si - 1)});
    }

    // Theorem 6: the rate of the two-type construction for 1 < s <= 2,
    // matching the Theorem 4 upper bound ((2d+1)t + d^2)/((t+d)(2d+1)).
    if (t >= 2) {
        Rational d = (s - 1) * t;
        if (d.is_integer() && d >= 1 && d <= t) {
            int di = static_cast<int>(d.numerator());
            out.push_back({"Theorem 6 (d=" + std::to_string(di) + ")", upper_g_st(t, di)});
        }
    }

    // Theorem 8: one bound per decomposition s = r + d/t with integer
    // 1 < r <= t and 1 <= d <= t-1.
    for (int r = 2; r <= t; ++r) {
        Rational d = (s - r) * t;
        if (!d.is_integer() || d < 1 || d > t - 1) continue;
        BigInt dd = d.numerator();
        BigInt rt_d = BigInt(r) * t + dd;
        BigInt num = rt_d * rt_d - BigInt(t) * (t - r);
        BigInt den = rt_d * (2 * BigInt(r) * t + 2 * dd - 2 * t + r);
        out.push_back({"Theorem 8 (r=" + std::to_string(r) + ", d=" + dd.str() + ")",
                       Rational(num, den)});
    }

    // Theorem 9: integer s >= 2 with t >= s.
    if (s.is_integer() && s >= 2 && Rational(t) >= s) {
        BigInt si = s.numerator();
        out.push_back({"Theorem 9",
                       Rational(si * t + t + 1, si * (2 * BigInt(t) + 1))});
    }

    // Theorem 10: integer s in the window for some c in [1, t-1]; covers
    // t < s - 1 where nothing above applies.
    if (s.is_integer()) {
        BigInt si = s.numerator();
        for (int c = 1; c <= t - 1; ++c) {
            BigInt pow_c = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(c));
            BigInt lo = pow_c / 2 * t - pow_c / 2 * (c - 2) + 1;
            BigInt hi = pow_c * t - pow_c * (c - 1);
            if (si < lo || si > hi) continue;
            BigInt num = BigInt(t) - c + BigInt(t - 1) * si + 1;
            out.push_back({"Theorem 10 (c=" + std::to_string(c) + ")",
                           Rational(num, num + BigInt(t - 1) * si + 1)});
        }
    }

    // General construction (servers with at least t-1 singletons), integer s.
    if (s.is_integer() && s >= 2 && t >= 2) {
        int si = static_cast<int>(s.numerator());
        out.push_back({"beta/gamma construction", beta_gamma(si, t).rate()});
        // Theorem 12 is its s = 3 closed form.
        if (si == 3) {
            long long tt = t;
            out.push_back({"Theorem 12",
                           Rational(16 * tt * tt + 7 * tt + 1, 24 * tt * tt + 15 * tt + 3)});
        }
    }

    // Theorem 13: s = 7/3 closed form at t = 3f.
    if (s == Rational(7, 3) && t % 3 == 0 && t >= 3) {
        long long f = t / 3;
        out.push_back({"Theorem 13 (f=" + std::to_string(f) + ")",
                       Rational(160 * f * f + 45 * f + 3, 224 * f * f + 81 * f + 7)});
    }

    return out;
}

/// Upper bounds on g(s, t) applicable at the given parameters.
inline std::vector<LabeledBound> upper_formulas(const Rational& s, int t) {
    if (t < 1) throw UnsupportedParameters("t must be positive");
    if (s <= 1) throw UnsupportedParameters("upper bounds need s > 1, got " + s.str());
    std::vector<LabeledBound> out;
    if (t == 1 && s.is_integer()) {
        unsigned si = static_cast<unsigned>(s.numerator());
        BigInt two_pow = boost::multiprecision::pow(BigInt(2), si);
        out.push_back({"Theorem 1", Rational(two_pow / 2, two_pow - 1)});
    }
    out.push_back({"Theorem 3 (asymptotic, strict for finite t)", upper_g_s(s)});
    if (t >= 2) {
        Rational d = (s - 1) * t;
        if (d.is_integer() && d >= 1) {
            int di = checked_int(d.numerator(), "d");
            out.push_back({"Theorem 4 (d=" + std::to_string(di) + ")", upper_g_st(t, di)});
        }
    }
    return out;
}

struct BoundReport {
    Rational s;
    int t = 0;
    std::vector<LabeledBound> lower;
    std::vector<LabeledBound> upper;
    std::optional<Rational> best_lower; // absent when no formula applies
    Rational best_upper;
    bool tight = false;

    std::vector<std::string> lower_sources() const { return sources(lower, best_lower); }
    std::vector<std::string> upper_sources() const {
        return sources(upper, best_upper);
    }

private:
    static std::vector<std::string> sources(const std::vector<LabeledBound>& bounds,
                                            const std::optional<Rational>& best) {
        std::vector<std::string> out;
        if (!best) return out;
        for (const auto& b : bounds)
            if (b.value == *best) out.push_back(b.label);
        return out;
    }
};

/// Collects all applicable bounds at (s, t).  `extra_lower` lets callers add
/// constructive rates (e.g. from an enumerated construction) into the
/// comparison.  Any lower bound exceeding an upper bound is a bug in the
/// formulas and raises InternalCheckError.
inline BoundReport bound_report(const Rational& s, int t,
                                const std::vector<LabeledBound>& extra_lower = {}) {
    BoundReport rep;
    rep.s = s;
    rep.t = t;
    rep.lower = lower_formulas(s, t);
    rep.lower.insert(rep.lower.end(), extra_lower.begin(), extra_lower.end());
    rep.upper = upper_formulas(s, t);
    for (const auto& lb : rep.lower)
        if (!rep.best_lower || lb.value > *rep.best_lower) rep.best_lower = lb.value;
    rep.best_upper = rep.upper.front().value;
    for (const auto& ub : rep.upper) rep.best_upper = std::min(rep.best_upper, ub.value);
    for (const auto& lb : rep.lower)
        for (const auto& ub : rep.upper)
            if (lb.value > ub.value)
                throw InternalCheckError("lower bound " + lb.label + " = " + lb.value.str() +
                                         " exceeds upper bound " + ub.label + " = " +
                                         ub.value.str() + " at s=" + s.str() +
                                         ", t=" + std::to_string(t));
    rep.tight = rep.best_lower && *rep.best_lower == rep.best_upper;
    return rep;
}

inline std::vector<BoundReport> bound_table(const std::vector<Rational>& s_values, int t_min,
                                            int t_max) {
    if (t_min < 1 || t_max < t_min) throw UnsupportedParameters("bad t range");
    std::vector<BoundReport> rows;
    for (const Rational& s : s_values)
        for (int t = t_min; t <= t_max; ++t) rows.push_back(bound_report(s, t));
    return rows;
}

namespace detail {
inline std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}
inline std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}
} // namespace detail

/// CSV layout: s,t,best_lower,best_upper,tight,lower_sources,upper_sources.
/// Rationals are rendered as num/den; sources are semicolon-joined labels.
inline void write_bound_csv(std::ostream& os, const std::vector<BoundReport>& rows) {
    os << "s,t,best_lower,best_upper,tight,lower_sources,upper_sources\n";
    for (const auto& row : rows) {
        os << detail::csv_field(row.s.str()) << ',' << row.t << ','
           << (row.best_lower ? detail::csv_field(row.best_lower->str()) : std::string()) << ','
           << detail::csv_field(row.best_upper.str()) << ','
           << (row.tight ? "true" : "false") << ','
           << detail::csv_field(detail::join(row.lower_sources(), ";")) << ','
           << detail::csv_field(detail::join(row.upper_sources(), ";")) << '\n';
    }
}

} // namespace pir
