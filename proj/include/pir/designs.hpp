#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pir/combinatorics.hpp"
#include "pir/errors.hpp"

namespace pir {

/// Steiner system S(d, d+1, p): blocks of size d+1 over points {0, ..., p-1}
/// such that every d-subset of points lies in exactly one block.
/// Blocks are stored sorted internally and ordered lexicographically.
struct SteinerSystem {
    int p = 0;
    int d = 0;
    std::vector<std::vector<int>> blocks;

    /// Expected number of blocks, C(p, d) / (d+1).
    BigInt block_count_formula() const { return binomial(p, d) / (d + 1); }

    /// Blocks through each point, C(p-1, d-1) / d.
    BigInt replication_formula() const { return binomial(p - 1, d - 1) / d; }
};

struct DesignViolation {
    enum Kind { BadBlockSize, BadPoint, DuplicatePointInBlock, Uncovered, MultiplyCovered };
    Kind kind;
    std::string message;
    std::vector<int> subset; // offending d-subset for coverage violations (0-based)
};

namespace detail {
inline std::string subset_str(const std::vector<int>& subset) {
    std::string s = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(subset[i] + 1);
    }
    return s + "}";
}
} // namespace detail

/// Exhaustively checks the exactly-one-block property over all C(p, d)
/// subsets.  Returns the first violation found (block scan order, then
/// lexicographic subset order), or nullopt for a valid system.
inline std::optional<DesignViolation> validate_steiner(const SteinerSystem& sys) {
    if (sys.p < 1 || sys.d < 1)
        return DesignViolation{DesignViolation::BadBlockSize, "p and d must be positive", {}};
    for (const auto& block : sys.blocks) {
        if (static_cast<int>(block.size()) != sys.d + 1)
            return DesignViolation{DesignViolation::BadBlockSize,
                                   "block of size " + std::to_string(block.size()) +
                                       ", expected " + std::to_string(sys.d + 1),
                                   {}};
        for (int pt : block)
            if (pt < 0 || pt >= sys.p)
                return DesignViolation{DesignViolation::BadPoint,
                                       "point " + std::to_string(pt + 1) + " out of range", {}};
        for (std::size_t i = 1; i < block.size(); ++i)
            if (block[i] == block[i - 1])
                return DesignViolation{DesignViolation::DuplicatePointInBlock,
                                       "repeated point " + std::to_string(block[i] + 1), {}};
    }
    // count how many blocks cover each d-subset
    std::map<std::vector<int>, int> cover;
    for (const auto& block : sys.blocks) {
        std::vector<int> subset;
        for_each_subset(sys.d + 1, sys.d, [&](const std::vector<int>& pick) {
            subset.clear();
            for (int i : pick) subset.push_back(block[i]);
            ++cover[subset];
        });
    }
    std::optional<DesignViolation> violation;
    for_each_subset(sys.p, sys.d, [&](const std::vector<int>& subset) {
        if (violation) return;
        auto it = cover.find(subset);
        int n = it == cover.end() ? 0 : it->second;
        if (n == 0)
            violation = DesignViolation{DesignViolation::Uncovered,
                                        "subset " + detail::subset_str(subset) +
                                            " lies in no block",
                                        subset};
        else if (n > 1)
            violation = DesignViolation{DesignViolation::MultiplyCovered,
                                        "subset " + detail::subset_str(subset) + " lies in " +
                                            std::to_string(n) + " blocks",
                                        subset};
    });
    return violation;
}

namespace detail {

inline SteinerSystem finish_system(int p, int d, std::vector<std::vector<int>> blocks) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    SteinerSystem sys{p, d, std::move(blocks)};
    if (auto bad = validate_steiner(sys))
        throw InternalCheckError("generated design is invalid: " + bad->message);
    return sys;
}

/// S(2, 3, 6n+3): points are Z_{2n+1} x {0,1,2} with the idempotent
/// commutative quasigroup x*y = (x+y)(n+1) mod 2n+1.
inline SteinerSystem bose_triple_system(int p) {
    int q = p / 3;           // 2n+1
    int half = (q + 1) / 2;  // inverse of 2 mod q
    auto pt = [&](int x, int c) { return c * q + x; };
    std::vector<std::vector<int>> blocks;
    for (int x = 0; x < q; ++x) blocks.push_back({pt(x, 0), pt(x, 1), pt(x, 2)});
    for (int x = 0; x < q; ++x)
        for (int y = x + 1; y < q; ++y) {
            int z = static_cast<int>((static_cast<long long>(x + y) * half) % q);
            for (int c = 0; c < 3; ++c)
                blocks.push_back({pt(x, c), pt(y, c), pt(z, (c + 1) % 3)});
        }
    return finish_system(p, 2, std::move(blocks));
}

/// S(2, 3, 6n+1): points are (Z_{2n} x {0,1,2}) plus an extra point, with a
/// half-idempotent commutative quasigroup on Z_{2n}.
inline SteinerSystem skolem_triple_system(int p) {
    int q = (p - 1) / 3; // 2n
    int n = q / 2;
    int extra = p - 1;
    auto pt = [&](int x, int c) { return c * q + x; };
    // x*y = sigma(x+y) where sigma maps even residue 2a -> a, odd 2a+1 -> n+a
    auto mul = [&](int x, int y) {
        int sum = (x + y) % q;
        return sum % 2 == 0 ? sum / 2 : n + sum / 2;
    };
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) {
        blocks.push_back({pt(i, 0), pt(i, 1), pt(i, 2)});
        blocks.push_back({extra, pt(n + i, 0), pt(i, 1)});
        blocks.push_back({extra, pt(n + i, 1), pt(i, 2)});
        blocks.push_back({extra, pt(n + i, 2), pt(i, 0)});
    }
    for (int x = 0; x < q; ++x)
        for (int y = x + 1; y < q; ++y) {
            int z = mul(x, y);
            for (int c = 0; c < 3; ++c)
                blocks.push_back({pt(x, c), pt(y, c), pt(z, (c + 1) % 3)});
        }
    return finish_system(p, 2, std::move(blocks));
}

} // namespace detail

/// Builds a Steiner system S(d, d+1, p) for the supported families:
///   d = 1: perfect pairing, available for every even p;
///   d = 2: Steiner triple system, available for p = 1 or 3 (mod 6), p >= 7.
/// Other parameters raise UnsupportedParameters.
inline SteinerSystem make_steiner(int d, int p) {
    if (d == 1) {
        if (p < 2 || p % 2 != 0)
            throw UnsupportedParameters("S(1,2," + std::to_string(p) +
                                        ") requires an even number of points");
        std::vector<std::vector<int>> blocks;
        for (int i = 0; i < p; i += 2) blocks.push_back({i, i + 1});
        return detail::finish_system(p, 1, std::move(blocks));
    }
    if (d == 2) {
        if (p >= 9 && p % 6 == 3) return detail::bose_triple_system(p);
        if (p >= 7 && p % 6 == 1) return detail::skolem_triple_system(p);
        throw UnsupportedParameters("no triple system on " + std::to_string(p) +
                                    " points (need p = 1 or 3 mod 6, p >= 7)");
    }
    throw UnsupportedParameters("no S(" + std::to_string(d) + "," + std::to_string(d + 1) +
                                ",p) generator implemented");
}

// --- serialization ---------------------------------------------------------
//
// Document shape: {"p": 7, "d": 2, "blocks": [[1,2,4], [2,3,5], ...]} with
// 1-based point indices.

inline SteinerSystem steiner_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("design document must be a JSON object");
    for (const char* key : {"p", "d", "blocks"})
        if (!doc.contains(key)) throw ParseError(std::string("design document missing \"") + key + "\"");
    if (!doc["p"].is_number_integer() || !doc["d"].is_number_integer())
        throw ParseError("p and d must be integers");
    SteinerSystem sys;
    sys.p = doc["p"].get<int>();
    sys.d = doc["d"].get<int>();
    if (!doc["blocks"].is_array()) throw ParseError("\"blocks\" must be an array");
    for (const auto& jblock : doc["blocks"]) {
        if (!jblock.is_array()) throw ParseError("each block must be an array of points");
        std::vector<int> block;
        for (const auto& jpt : jblock) {
            if (!jpt.is_number_integer()) throw ParseError("points must be integers");
            long long v = jpt.get<long long>();
            if (v < 1 || v > sys.p)
                throw IndexError("point " + std::to_string(v) + " out of range [1, " +
                                 std::to_string(sys.p) + "]");
            block.push_back(static_cast<int>(v - 1));
        }
        std::sort(block.begin(), block.end());
        sys.blocks.push_back(std::move(block));
    }
    std::sort(sys.blocks.begin(), sys.blocks.end());
    for (std::size_t i = 1; i < sys.blocks.size(); ++i)
        if (sys.blocks[i] == sys.blocks[i - 1]) throw ParseError("duplicate block in design");
    if (auto bad = validate_steiner(sys)) throw ParseError("not a Steiner system: " + bad->message);
    return sys;
}

inline SteinerSystem parse_steiner(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return steiner_from_json(doc);
}

inline SteinerSystem load_steiner(std::istream& in) {
    return parse_steiner(std::string(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>()));
}

inline SteinerSystem load_steiner_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open design file: " + path);
    return load_steiner(in);
}

inline std::string save_steiner(const SteinerSystem& sys) {
    nlohmann::ordered_json doc;
    doc["p"] = sys.p;
    doc["d"] = sys.d;
    auto& jblocks = doc["blocks"] = nlohmann::ordered_json::array();
    for (const auto& block : sys.blocks) {
        nlohmann::ordered_json jb = nlohmann::ordered_json::array();
        for (int pt : block) jb.push_back(pt + 1);
        jblocks.push_back(std::move(jb));
    }
    return doc.dump(1) + "\n";
}

} // namespace pir
