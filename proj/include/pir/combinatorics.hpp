#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <numeric>
#include <vector>

#include "pir/errors.hpp"

namespace pir {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k).  Returns 0 for k < 0 or k > n.
inline BigInt binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i; // always exact: r is C(n-k+i, i) at this point
    }
    return r;
}

/// Exact factorial n!.
inline BigInt factorial(long long n) {
    BigInt r = 1;
    for (long long i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Falling factorial n * (n-1) * ... * (n-k+1).
inline BigInt falling_factorial(long long n, long long k) {
    BigInt r = 1;
    for (long long i = 0; i < k; ++i) r *= n - i;
    return r;
}

/// Calls fn(subset) for every k-subset of {0, ..., n-1} in lexicographic
/// order.  The vector passed to fn is strictly increasing and must not be
/// retained past the call.
inline void for_each_subset(int n, int k,
                            const std::function<void(const std::vector<int>&)>& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        // advance to the next combination in lex order
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// Narrows a BigInt to int, throwing if it does not fit.
inline int checked_int(const BigInt& v, const char* what = "value") {
    if (v < 0 || v > std::numeric_limits<int>::max())
        throw UnsupportedParameters(std::string(what) + " does not fit in int: " + v.str());
    return static_cast<int>(v);
}

} // namespace pir
