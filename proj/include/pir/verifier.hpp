#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "pir/array_code.hpp"
#include "pir/errors.hpp"
#include "pir/gf2.hpp"
#include "pir/rational.hpp"

namespace pir {

/// Set of column indices (0-based, strictly increasing) whose joint span
/// contains the unit vector of some part.
struct RecoverySet {
    std::vector<int> cols;

    bool operator==(const RecoverySet& other) const { return cols == other.cols; }
    bool operator<(const RecoverySet& other) const {
        if (cols.size() != other.cols.size()) return cols.size() < other.cols.size();
        return cols < other.cols;
    }
};

/// Claim that a code protects every part with at least `claimed_k` pairwise
/// disjoint recovery sets; parts[i] lists the witnesses for part i.
struct RecoveryCertificate {
    int claimed_k = 0;
    std::vector<std::vector<RecoverySet>> parts;
};

struct CertificateViolation {
    enum Kind { WrongShape, NonDisjoint, NonSpanning, TooFewSets };
    Kind kind;
    int part = -1;      // 0-based part, -1 when not applicable
    int set_index = -1; // 0-based index into that part's list
    std::string message;
};

struct CertificateCheck {
    bool ok = false;
    std::optional<CertificateViolation> violation;
};

/// Verifies a certificate against a code: every listed set must consist of
/// valid, per-part pairwise disjoint columns and must span the part's unit
/// vector, and every part must list at least claimed_k sets.  Stops at the
/// first violation.
inline CertificateCheck check_certificate(const PirArrayCode& code,
                                          const RecoveryCertificate& cert) {
    auto fail = [](CertificateViolation v) {
        return CertificateCheck{false, std::move(v)};
    };
    if (static_cast<int>(cert.parts.size()) != code.p())
        return fail({CertificateViolation::WrongShape, -1, -1,
                     "certificate lists " + std::to_string(cert.parts.size()) +
                         " parts, code has " + std::to_string(code.p())});
    for (int i = 0; i < code.p(); ++i) {
        const auto& sets = cert.parts[i];
        BitVec used(code.m());
        for (int si = 0; si < static_cast<int>(sets.size()); ++si) {
            const auto& set = sets[si];
            if (set.cols.empty())
                return fail({CertificateViolation::WrongShape, i, si, "empty recovery set"});
            Gf2Basis span(code.p());
            for (int c : set.cols) {
                if (c < 0 || c >= code.m())
                    return fail({CertificateViolation::WrongShape, i, si,
                                 "column " + std::to_string(c + 1) + " out of range"});
                if (used.test(c))
                    return fail({CertificateViolation::NonDisjoint, i, si,
                                 "column " + std::to_string(c + 1) + " reused for part x_" +
                                     std::to_string(i + 1)});
                used.set(c);
                for (const BitVec& cell : code.column(c)) span.insert(cell);
            }
            if (!span.spans_unit(i))
                return fail({CertificateViolation::NonSpanning, i, si,
                             "set does not span x_" + std::to_string(i + 1)});
        }
        if (static_cast<int>(sets.size()) < cert.claimed_k)
            return fail({CertificateViolation::TooFewSets, i, -1,
                         "part x_" + std::to_string(i + 1) + " has " +
                             std::to_string(sets.size()) + " sets, claimed " +
                             std::to_string(cert.claimed_k)});
    }
    return {true, std::nullopt};
}

/// All inclusion-minimal recovery sets for one part with at most `max_size`
/// columns, in (size, lexicographic) order.  Enumerates subsets by
/// increasing size, skipping supersets of sets already found, so the result
/// is an antichain.
inline std::vector<RecoverySet> minimal_recovery_sets(const PirArrayCode& code, int part,
                                                      int max_size = -1) {
    if (part < 0 || part >= code.p())
        throw IndexError("part " + std::to_string(part) + " out of range");
    const int m = code.m();
    if (m > 63) throw UnsupportedParameters("minimal set enumeration needs m <= 63");
    if (max_size < 0 || max_size > m) max_size = m;

    std::vector<RecoverySet> found;
    std::vector<std::uint64_t> found_masks;
    std::vector<int> subset;
    BitVec target = BitVec::unit(code.p(), part);

    auto covers_found = [&](std::uint64_t mask) {
        for (std::uint64_t f : found_masks)
            if ((f & mask) == f) return true;
        return false;
    };
    std::function<void(int, int, std::uint64_t)> walk = [&](int next, int remaining,
                                                            std::uint64_t mask) {
        if (remaining == 0) {
            // every minimal set smaller than |subset| is already in `found`
            // and none is contained here, so spanning implies minimality
            Gf2Basis span(code.p());
            for (int c : subset)
                for (const BitVec& cell : code.column(c)) span.insert(cell);
            if (span.contains(target)) {
                found.push_back({subset});
                found_masks.push_back(mask);
            }
            return;
        }
        for (int c = next; c <= m - remaining; ++c) {
            std::uint64_t grown = mask | (std::uint64_t{1} << c);
            if (covers_found(grown)) continue; // supersets of found sets are never minimal
            subset.push_back(c);
            walk(c + 1, remaining - 1, grown);
            subset.pop_back();
        }
    };
    for (int size = 1; size <= max_size; ++size) walk(0, size, 0);
    return found;
}

struct PackingOptions {
    long long node_budget = 10'000'000; // branch-and-bound nodes before giving up on exactness
};

struct PackingResult {
    int count = 0;
    std::vector<RecoverySet> sets; // a witness collection, pairwise disjoint
    bool exact = true;             // false when the node budget ran out
};

/// Maximum number of pairwise disjoint sets from `sets`, by branch and bound
/// over the sets in (size, lex) order.  The optimistic bound divides the
/// free columns by the smallest remaining set size; states are memoized on
/// (next set, used-column mask) for m <= 24.  If the node budget runs out
/// the best packing found so far is returned with exact = false.
inline PackingResult max_disjoint_packing(std::vector<RecoverySet> sets, int m,
                                          const PackingOptions& opts = {}) {
    if (m > 63) throw UnsupportedParameters("packing needs m <= 63");
    std::sort(sets.begin(), sets.end());
    const int n = static_cast<int>(sets.size());
    std::vector<std::uint64_t> masks(n);
    for (int i = 0; i < n; ++i) {
        std::uint64_t mask = 0;
        for (int c : sets[i].cols) {
            if (c < 0 || c >= m) throw IndexError("column index out of range in packing");
            mask |= std::uint64_t{1} << c;
        }
        masks[i] = mask;
    }

    int best = 0;
    std::vector<int> best_pick, pick;
    long long nodes = 0;
    bool exact = true;
    const bool memoize = m <= 24;
    // (used-mask << 24 | next-set) -> upper bound on additional sets from state
    std::unordered_map<std::uint64_t, int> memo;

    std::function<void(int, std::uint64_t)> dfs = [&](int i, std::uint64_t used) {
        if (static_cast<int>(pick.size()) > best) {
            best = static_cast<int>(pick.size());
            best_pick = pick;
        }
        if (++nodes > opts.node_budget) {
            exact = false;
            return;
        }
        std::uint64_t key = 0;
        if (memoize) {
            key = (used << 24) | static_cast<std::uint64_t>(i);
            auto it = memo.find(key);
            if (it != memo.end() && static_cast<int>(pick.size()) + it->second <= best) return;
        }
        int free_cols = m - std::popcount(used);
        for (int j = i; j < n; ++j) {
            if (masks[j] & used) continue;
            int sz = static_cast<int>(sets[j].cols.size());
            int optimistic = static_cast<int>(pick.size()) + std::min(n - j, free_cols / sz);
            if (optimistic <= best) break; // size-sorted, so later sets bound no better
            pick.push_back(j);
            dfs(j + 1, used | masks[j]);
            pick.pop_back();
            if (!exact) return;
        }
        if (memoize) {
            // The subtree was explored fully, so no completion of this state
            // beats the current best: best - |pick| bounds the additional
            // sets achievable from (i, used).  Keep the tightest bound seen.
            int bound = best - static_cast<int>(pick.size());
            auto it = memo.find(key);
            if (it == memo.end() || bound < it->second) memo[key] = bound;
        }
    };
    dfs(0, 0);

    PackingResult result;
    result.count = best;
    result.exact = exact;
    for (int j : best_pick) result.sets.push_back(sets[j]);
    return result;
}

struct PartReport {
    int part = 0;        // 0-based
    int max_disjoint = 0;
    bool exact = true;
    std::vector<RecoverySet> witness;
};

struct VerifierReport {
    int k = 0;
    bool exact = true;
    Rational rate;
    std::vector<PartReport> parts;
};

struct ExactOptions {
    int exact_limit = 20;               // max m for full enumeration + exact packing
    long long node_budget = 10'000'000;
    int heuristic_max_size = 3;         // set-size cap in lower-bound mode
};

/// Computes k(code): the largest k such that every part has k pairwise
/// disjoint recovery sets.  Exact (via full minimal-set enumeration and
/// branch-and-bound packing) when m <= exact_limit and the node budget
/// holds; otherwise a greedy lower bound over small recovery sets is
/// reported with exact = false.
inline VerifierReport exact_k(const PirArrayCode& code, const ExactOptions& opts = {}) {
    VerifierReport report;
    report.exact = true;
    const bool full = code.m() <= opts.exact_limit;
    for (int i = 0; i < code.p(); ++i) {
        PartReport pr;
        pr.part = i;
        if (full) {
            auto sets = minimal_recovery_sets(code, i);
            auto packed = max_disjoint_packing(std::move(sets), code.m(),
                                               PackingOptions{opts.node_budget});
            pr.max_disjoint = packed.count;
            pr.exact = packed.exact;
            pr.witness = std::move(packed.sets);
        } else {
            // lower-bound mode: greedy packing of small recovery sets
            auto sets = minimal_recovery_sets(code, i, opts.heuristic_max_size);
            BitVec used(code.m());
            for (const auto& set : sets) {
                bool clash = false;
                for (int c : set.cols)
                    if (used.test(c)) { clash = true; break; }
                if (clash) continue;
                for (int c : set.cols) used.set(c);
                pr.witness.push_back(set);
            }
            pr.max_disjoint = static_cast<int>(pr.witness.size());
            pr.exact = false;
        }
        report.exact = report.exact && pr.exact;
        report.parts.push_back(std::move(pr));
    }
    report.k = code.p() == 0 ? 0 : report.parts.front().max_disjoint;
    for (const auto& pr : report.parts) report.k = std::min(report.k, pr.max_disjoint);
    report.rate = code.m() > 0 ? Rational(report.k, code.m()) : Rational(0);
    return report;
}

/// Certificate built from a verifier run (witness sets per part, k = min).
inline RecoveryCertificate certificate_from_report(const VerifierReport& report) {
    RecoveryCertificate cert;
    cert.claimed_k = report.k;
    for (const auto& pr : report.parts) cert.parts.push_back(pr.witness);
    return cert;
}

// --- serialization ---------------------------------------------------------
//
// Document shape:
//   {"claimed_k": 3, "parts": [[[1], [2], [3,4]], ...]}
// parts[i] lists the recovery sets for part x_{i+1}; columns are 1-based.

inline RecoveryCertificate certificate_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("certificate must be a JSON object");
    for (const char* key : {"claimed_k", "parts"})
        if (!doc.contains(key)) throw ParseError(std::string("certificate missing \"") + key + "\"");
    if (!doc["claimed_k"].is_number_integer()) throw ParseError("claimed_k must be an integer");
    RecoveryCertificate cert;
    cert.claimed_k = doc["claimed_k"].get<int>();
    if (cert.claimed_k < 0) throw ParseError("claimed_k must be non-negative");
    if (!doc["parts"].is_array()) throw ParseError("\"parts\" must be an array");
    for (const auto& jpart : doc["parts"]) {
        if (!jpart.is_array()) throw ParseError("each part entry must be an array of sets");
        std::vector<RecoverySet> sets;
        for (const auto& jset : jpart) {
            if (!jset.is_array()) throw ParseError("each recovery set must be an array of columns");
            RecoverySet set;
            for (const auto& jcol : jset) {
                if (!jcol.is_number_integer()) throw ParseError("columns must be integers");
                long long c = jcol.get<long long>();
                if (c < 1) throw IndexError("column index " + std::to_string(c) + " out of range");
                set.cols.push_back(static_cast<int>(c - 1));
            }
            std::sort(set.cols.begin(), set.cols.end());
            sets.push_back(std::move(set));
        }
        cert.parts.push_back(std::move(sets));
    }
    return cert;
}

inline nlohmann::ordered_json certificate_to_json(const RecoveryCertificate& cert) {
    nlohmann::ordered_json doc;
    doc["claimed_k"] = cert.claimed_k;
    auto& jparts = doc["parts"] = nlohmann::ordered_json::array();
    for (const auto& sets : cert.parts) {
        nlohmann::ordered_json jsets = nlohmann::ordered_json::array();
        for (const auto& set : sets) {
            nlohmann::ordered_json jset = nlohmann::ordered_json::array();
            for (int c : set.cols) jset.push_back(c + 1);
            jsets.push_back(std::move(jset));
        }
        jparts.push_back(std::move(jsets));
    }
    return doc;
}

inline RecoveryCertificate parse_certificate(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return certificate_from_json(doc);
}

inline RecoveryCertificate load_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open certificate file: " + path);
    return parse_certificate(std::string(std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()));
}

inline std::string save_certificate(const RecoveryCertificate& cert) {
    return certificate_to_json(cert).dump(1) + "\n";
}

inline void save_certificate_file(const RecoveryCertificate& cert, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write certificate file: " + path);
    out << save_certificate(cert);
}

} // namespace pir
