#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "pir/array_code.hpp"
#include "pir/combinatorics.hpp"
#include "pir/designs.hpp"
#include "pir/errors.hpp"
#include "pir/matching.hpp"
#include "pir/rational.hpp"
#include "pir/verifier.hpp"

namespace pir {

/// One distinct server layout, emitted `multiplicity` times as consecutive
/// columns.  Cells are the singleton parts in ascending order followed by
/// one sum cell when `sum_parts` is non-empty.  In the last type of the
/// non-integer-s family, singletons may also appear inside the sum.
struct ServerGroup {
    int type = 0; // 1-based type index; 1 = all-singleton servers
    std::vector<int> singletons;
    std::vector<int> sum_parts;
    int multiplicity = 0;
    int first_column = 0;

    /// All parts this layout touches (union of singletons and sum), sorted.
    std::vector<int> parts() const {
        std::vector<int> u = singletons;
        u.insert(u.end(), sum_parts.begin(), sum_parts.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return u;
    }
    bool has_singleton(int part) const {
        return std::binary_search(singletons.begin(), singletons.end(), part);
    }
    bool sum_contains(int part) const {
        return std::binary_search(sum_parts.begin(), sum_parts.end(), part);
    }
};

enum class FamilyKind { Construction1, Construction2, General };

struct FamilyInfo {
    FamilyKind kind = FamilyKind::Construction1;
    std::string label;
    Rational s;
    int t = 0;
    std::vector<BigInt> eta; // per-type multiplicities
};

/// A constructed code together with its recovery certificate and the
/// predicted server/recovery counts the family formulas give.  The
/// certificate always claims exactly predicted_k sets per part.
struct ConstructionOutput {
    PirArrayCode code;
    RecoveryCertificate certificate;
    int predicted_m = 0;
    int predicted_k = 0;
    FamilyInfo family;
    std::vector<ServerGroup> groups;

    Rational rate() const { return Rational(predicted_k, predicted_m); }
};

struct ConstructOptions {
    int max_servers = 1'000'000;
};

namespace detail {

inline void check_server_cap(const BigInt& m, const ConstructOptions& opts) {
    if (m > opts.max_servers)
        throw UnsupportedParameters("construction would emit " + m.str() +
                                    " servers, over the cap of " +
                                    std::to_string(opts.max_servers));
}

inline PirArrayCode code_from_groups(int p, int t, std::vector<ServerGroup>& groups) {
    std::vector<std::vector<BitVec>> columns;
    int col = 0;
    for (auto& g : groups) {
        g.first_column = col;
        std::vector<BitVec> cells;
        for (int part : g.singletons) cells.push_back(BitVec::unit(p, part));
        if (!g.sum_parts.empty()) {
            BitVec sum(p);
            for (int part : g.sum_parts) sum.set(part);
            cells.push_back(std::move(sum));
        }
        if (static_cast<int>(cells.size()) != t)
            throw InternalCheckError("server layout with " + std::to_string(cells.size()) +
                                     " cells in a t=" + std::to_string(t) + " construction");
        for (int copy = 0; copy < g.multiplicity; ++copy) columns.push_back(cells);
        col += g.multiplicity;
    }
    return PirArrayCode(p, t, std::move(columns));
}

inline std::vector<int> complement(int p, const std::vector<int>& subset) {
    std::vector<int> out;
    auto it = subset.begin();
    for (int i = 0; i < p; ++i) {
        if (it != subset.end() && *it == i) ++it;
        else out.push_back(i);
    }
    return out;
}

} // namespace detail

/// Per-part recovery graph(s) of a constructed code, rebuilt from the group
/// metadata.  Graph r pairs servers of type r that miss the part entirely
/// (left side) against servers of type r+1 holding the part inside their
/// sum cell (right side).  left_columns / right_columns map graph vertices
/// back to code columns.
struct PartGraph {
    int graph_index = 1; // r, pairing type r against type r+1
    Bipartite graph{0, 0};
    std::vector<int> left_columns;
    std::vector<int> right_columns;
};

inline std::vector<PartGraph> recovery_graphs(const ConstructionOutput& out, int part) {
    if (part < 0 || part >= out.code.p()) throw IndexError("part out of range");
    int max_type = 0;
    for (const auto& g : out.groups) max_type = std::max(max_type, g.type);

    std::vector<PartGraph> graphs;
    for (int r = 1; r < max_type; ++r) {
        // collect member columns and the layouts behind them
        std::vector<const ServerGroup*> left_groups, right_groups;
        std::vector<int> left_cols, right_cols;
        for (const auto& g : out.groups) {
            if (g.type == r) {
                auto parts = g.parts();
                if (!std::binary_search(parts.begin(), parts.end(), part))
                    for (int c = 0; c < g.multiplicity; ++c) {
                        left_groups.push_back(&g);
                        left_cols.push_back(g.first_column + c);
                    }
            } else if (g.type == r + 1) {
                if (g.sum_contains(part) && !g.has_singleton(part))
                    for (int c = 0; c < g.multiplicity; ++c) {
                        right_groups.push_back(&g);
                        right_cols.push_back(g.first_column + c);
                    }
            }
        }
        PartGraph pg;
        pg.graph_index = r;
        pg.graph = Bipartite(static_cast<int>(left_cols.size()),
                             static_cast<int>(right_cols.size()));
        pg.left_columns = std::move(left_cols);
        pg.right_columns = std::move(right_cols);
        for (std::size_t l = 0; l < left_groups.size(); ++l) {
            auto lparts = left_groups[l]->parts();
            for (std::size_t rv = 0; rv < right_groups.size(); ++rv) {
                const auto& sum = right_groups[rv]->sum_parts;
                bool edge;
                if (out.family.kind == FamilyKind::General) {
                    // pairable iff the left server's parts are exactly the
                    // right server's sum minus the target part
                    edge = static_cast<int>(sum.size()) ==
                           static_cast<int>(lparts.size()) + 1;
                    if (edge)
                        for (int x : sum)
                            if (x != part &&
                                !std::binary_search(lparts.begin(), lparts.end(), x)) {
                                edge = false;
                                break;
                            }
                } else {
                    // pairable iff the left server holds every other summand
                    // as a singleton
                    edge = true;
                    for (int x : sum)
                        if (x != part &&
                            !std::binary_search(lparts.begin(), lparts.end(), x)) {
                            edge = false;
                            break;
                        }
                }
                if (edge) pg.graph.add_edge(static_cast<int>(l), static_cast<int>(rv));
            }
        }
        graphs.push_back(std::move(pg));
    }
    return graphs;
}

namespace detail {

inline std::vector<RecoverySet> singleton_sets(const std::vector<ServerGroup>& groups,
                                               int part) {
    std::vector<RecoverySet> sets;
    for (const auto& g : groups)
        if (g.has_singleton(part))
            for (int c = 0; c < g.multiplicity; ++c)
                sets.push_back({{g.first_column + c}});
    return sets;
}

/// Certificate for families whose per-part graphs need a genuine matching
/// (the block structure is not a disjoint union of complete bipartite
/// pieces): runs Hopcroft-Karp on each graph and turns matched vertex pairs
/// into two-column recovery sets.  The graphs are regular by construction,
/// so a non-perfect matching is an internal failure.
inline RecoveryCertificate matched_certificate(const ConstructionOutput& out,
                                               int predicted_k) {
    RecoveryCertificate cert;
    cert.claimed_k = predicted_k;
    for (int i = 0; i < out.code.p(); ++i) {
        auto sets = singleton_sets(out.groups, i);
        for (const auto& pg : recovery_graphs(out, i)) {
            auto reg = is_regular(pg.graph);
            if (pg.graph.left_count() != pg.graph.right_count())
                throw InternalCheckError("recovery graph sides differ for part x_" +
                                         std::to_string(i + 1));
            if (pg.graph.left_count() > 0 && !reg.regular)
                throw InternalCheckError("recovery graph not regular for part x_" +
                                         std::to_string(i + 1));
            Matching match = max_matching(pg.graph);
            if (!match.is_perfect_for(pg.graph))
                throw InternalCheckError("recovery graph has no perfect matching for part x_" +
                                         std::to_string(i + 1));
            for (auto [l, r] : match.pairs) {
                int a = pg.left_columns[l], b = pg.right_columns[r];
                RecoverySet set{{std::min(a, b), std::max(a, b)}};
                sets.push_back(std::move(set));
            }
        }
        std::sort(sets.begin(), sets.end());
        if (static_cast<int>(sets.size()) != predicted_k)
            throw InternalCheckError("part x_" + std::to_string(i + 1) + " yielded " +
                                     std::to_string(sets.size()) + " recovery sets, expected " +
                                     std::to_string(predicted_k));
        cert.parts.push_back(std::move(sets));
    }
    return cert;
}

} // namespace detail

/// Two-type family for 1 < s <= 2 (s = 1 + d/t, 1 <= d <= t).  Type A
/// servers hold every t-subset of parts as singletons; type B servers hold
/// a (t-1)-subset as singletons plus the sum of the remaining d+1 parts.
/// Multiplicities lcm(d,t)/d and lcm(d,t)/t balance the per-part pairing
/// graph.  The rate attains the matching upper bound on g(1 + d/t, t).
inline ConstructionOutput construction1(int t, int d, const ConstructOptions& opts = {}) {
    if (t < 2) throw UnsupportedParameters("construction needs t >= 2");
    if (d < 1 || d > t) throw UnsupportedParameters("construction needs 1 <= d <= t");
    const int p = t + d;
    const int theta = std::lcm(t, d);
    const int mult_a = theta / d, mult_b = theta / t;

    BigInt m_big = binomial(p, t) * mult_a + binomial(p, t - 1) * mult_b;
    detail::check_server_cap(m_big, opts);

    std::vector<ServerGroup> groups;
    for_each_subset(p, t, [&](const std::vector<int>& y) {
        groups.push_back({1, y, {}, mult_a, 0});
    });
    for_each_subset(p, t - 1, [&](const std::vector<int>& x) {
        groups.push_back({2, x, detail::complement(p, x), mult_b, 0});
    });

    ConstructionOutput out{detail::code_from_groups(p, t, groups), {}, 0, 0, {}, {}};
    out.groups = std::move(groups);
    out.predicted_m = checked_int(m_big, "m");
    BigInt k_big = binomial(p - 1, t - 1) * mult_a   // type A singletons
                   + binomial(p - 1, t - 2) * mult_b // type B singletons
                   + binomial(p - 1, t) * mult_a;    // matched pairs
    out.predicted_k = checked_int(k_big, "k");
    if (out.code.m() != out.predicted_m)
        throw InternalCheckError("emitted server count disagrees with prediction");
    out.family = {FamilyKind::Construction1,
                  "construction1(t=" + std::to_string(t) + ", d=" + std::to_string(d) + ")",
                  Rational(p, t),
                  t,
                  {mult_a, mult_b}};
    out.certificate = detail::matched_certificate(out, out.predicted_k);
    return out;
}

/// Steiner-system variant of the two-type family: type B servers are built
/// from the blocks of an S(d, d+1, t+d) instead of all (t-1)-subsets, which
/// shrinks the server count at the same rate.  The system's parameters must
/// satisfy sys.p = t + d and sys.d = d.
inline ConstructionOutput construction2(int t, int d, const SteinerSystem& sys,
                                        const ConstructOptions& opts = {}) {
    if (t < 2) throw UnsupportedParameters("construction needs t >= 2");
    if (d < 1 || d > t) throw UnsupportedParameters("construction needs 1 <= d <= t");
    const int p = t + d;
    if (sys.p != p || sys.d != d)
        throw UnsupportedParameters("need an S(" + std::to_string(d) + "," +
                                    std::to_string(d + 1) + "," + std::to_string(p) +
                                    "); got S(" + std::to_string(sys.d) + "," +
                                    std::to_string(sys.d + 1) + "," + std::to_string(sys.p) +
                                    ")");
    if (auto bad = validate_steiner(sys))
        throw UnsupportedParameters("invalid Steiner system: " + bad->message);

    const auto blocks = static_cast<long long>(sys.blocks.size());
    BigInt m_big = binomial(p, t) + BigInt(d) * blocks;
    detail::check_server_cap(m_big, opts);

    std::vector<ServerGroup> groups;
    for_each_subset(p, t, [&](const std::vector<int>& y) {
        groups.push_back({1, y, {}, 1, 0});
    });
    for (const auto& block : sys.blocks)
        groups.push_back({2, detail::complement(p, block), block, d, 0});

    ConstructionOutput out{detail::code_from_groups(p, t, groups), {}, 0, 0, {}, {}};
    out.groups = std::move(groups);
    out.predicted_m = checked_int(m_big, "m");
    BigInt repl = sys.replication_formula();
    BigInt k_big = binomial(p - 1, t - 1)              // type A singletons
                   + BigInt(d) * (blocks - repl)       // type B singletons
                   + binomial(p - 1, d - 1);           // matched pairs (= d * repl)
    out.predicted_k = checked_int(k_big, "k");
    if (out.code.m() != out.predicted_m)
        throw InternalCheckError("emitted server count disagrees with prediction");
    out.family = {FamilyKind::Construction2,
                  "construction2(t=" + std::to_string(t) + ", d=" + std::to_string(d) + ")",
                  Rational(p, t),
                  t,
                  {1, d}};
    out.certificate = detail::matched_certificate(out, out.predicted_k);
    return out;
}

/// Multiplicities and predicted counts of the at-least-(t-1)-singletons
/// family at s = num/den (lowest terms), computed without materializing any
/// servers.  Valid for s > 2 and den | t.
struct GeneralCounts {
    int p = 0;
    int types = 0;                // number of server types, ceil(s)
    int overlap = 0;              // singletons inside the last type's sum
    std::vector<BigInt> eta;      // minimal balancing multiplicities
    BigInt m;
    BigInt k;
    Rational rate() const { return Rational(k, m); }
};

inline GeneralCounts general_counts(const Rational& s, int t) {
    if (s <= 2) throw UnsupportedParameters("general family needs s > 2 (use the two-type family below)");
    BigInt den_b = s.denominator();
    if (den_b > t || t % static_cast<int>(den_b) != 0)
        throw UnsupportedParameters("s = " + s.str() + " needs t divisible by " + den_b.str());
    const int den = static_cast<int>(den_b);
    const int f = t / den;
    const int p = checked_int(s.numerator() * f, "p");
    if (t < 2) throw UnsupportedParameters("general family needs t >= 2");

    GeneralCounts gc;
    gc.p = p;
    const int R = static_cast<int>((s.numerator() + den - 1) / den); // ceil(s)
    gc.types = R;
    gc.overlap = R * t - p; // 0 exactly when s is an integer
    const int b = gc.overlap;

    // Balance each pairing graph G_r: eta_{r+1} * deg-left = eta_r * deg-right.
    std::vector<Rational> q(R + 1);
    q[2] = 1;
    q[1] = Rational(binomial(p - t - 1, t - 1));
    for (int r = 2; r <= R - 2; ++r)
        q[r + 1] = q[r] * Rational(binomial(static_cast<long long>(r) * t, t - 1),
                                   binomial(p - static_cast<long long>(r) * t - 1, t - 1));
    q[R] = q[R - 1] * Rational(binomial(static_cast<long long>(R - 1) * t, t - 1),
                               binomial(static_cast<long long>(R - 1) * t, b));

    // scale to the smallest positive integer vector
    BigInt lcm_den = 1;
    for (int r = 1; r <= R; ++r)
        lcm_den = boost::multiprecision::lcm(lcm_den, q[r].denominator());
    std::vector<BigInt> eta(R + 1);
    BigInt g = 0;
    for (int r = 1; r <= R; ++r) {
        eta[r] = q[r].numerator() * (lcm_den / q[r].denominator());
        g = boost::multiprecision::gcd(g, eta[r]);
    }
    for (int r = 1; r <= R; ++r) eta[r] /= g;
    gc.eta.assign(eta.begin() + 1, eta.end());

    auto sum_size = [&](int r) { return static_cast<long long>(r - 1) * t + 1; };
    BigInt singles = eta[1] * binomial(p - 1, t - 1);
    BigInt pairs = eta[1] * binomial(p - 1, t);
    for (int r = 2; r <= R - 1; ++r) {
        singles += eta[r] * binomial(p - 1, t - 2) * binomial(p - t + 1, sum_size(r));
        pairs += eta[r] * binomial(p - 1, t - 1) * binomial(p - t, sum_size(r));
    }
    singles += eta[R] * binomial(p - 1, t - 2) * binomial(t - 1, b);
    gc.k = singles + pairs;
    gc.m = singles + 2 * pairs;
    return gc;
}

/// The family of servers with at least t-1 singletons, for any rational
/// s > 2 with den(s) | t.  Type T_1 holds t singletons; type T_r holds t-1
/// singletons plus a sum of (r-1)t+1 parts disjoint from them.  When s is
/// not an integer the last type instead overlaps ceil(s)*t - p of its
/// singletons into the sum so the cell budget still works out.  Every part
/// is recovered from its singletons plus one matched pair per graph; the
/// graphs decompose into complete bipartite blocks, so the pairing is done
/// blockwise without a matching search.
inline ConstructionOutput general_construction_rational(const Rational& s, int t,
                                                        const ConstructOptions& opts = {}) {
    GeneralCounts gc = general_counts(s, t);
    detail::check_server_cap(gc.m, opts);
    const int p = gc.p, R = gc.types, b = gc.overlap;
    auto eta_int = [&](int r) { return checked_int(gc.eta[r - 1], "eta"); };

    std::vector<ServerGroup> groups;
    for_each_subset(p, t, [&](const std::vector<int>& y) {
        groups.push_back({1, y, {}, eta_int(1), 0});
    });
    for (int r = 2; r <= R - 1; ++r) {
        int sum_size = (r - 1) * t + 1;
        for_each_subset(p, t - 1, [&](const std::vector<int>& a) {
            auto rest = detail::complement(p, a);
            for_each_subset(static_cast<int>(rest.size()), sum_size,
                            [&](const std::vector<int>& pick) {
                                std::vector<int> sum;
                                for (int i : pick) sum.push_back(rest[i]);
                                groups.push_back({r, a, sum, eta_int(r), 0});
                            });
        });
    }
    for_each_subset(p, t - 1, [&](const std::vector<int>& a) {
        auto rest = detail::complement(p, a);
        for_each_subset(t - 1, b, [&](const std::vector<int>& pick) {
            std::vector<int> sum = rest;
            for (int i : pick) sum.push_back(a[i]);
            std::sort(sum.begin(), sum.end());
            if (static_cast<int>(sum.size()) != (R - 1) * t + 1)
                throw InternalCheckError("last-type sum has the wrong size");
            groups.push_back({R, a, sum, eta_int(R), 0});
        });
    });

    ConstructionOutput out{detail::code_from_groups(p, t, groups), {}, 0, 0, {}, {}};
    out.groups = std::move(groups);
    out.predicted_m = checked_int(gc.m, "m");
    out.predicted_k = checked_int(gc.k, "k");
    if (out.code.m() != out.predicted_m)
        throw InternalCheckError("emitted server count disagrees with prediction");
    out.family = {FamilyKind::General,
                  "general(s=" + s.str() + ", t=" + std::to_string(t) + ")",
                  s,
                  t,
                  gc.eta};

    // Certificate: singletons plus blockwise pairing.  For each graph G_r the
    // left servers with part-set Z pair exactly with the right servers whose
    // sum is Z + {i}; balance makes every block square.
    RecoveryCertificate cert;
    cert.claimed_k = out.predicted_k;
    for (int i = 0; i < p; ++i) {
        auto sets = detail::singleton_sets(out.groups, i);
        for (int r = 1; r <= R - 1; ++r) {
            std::map<std::vector<int>, std::pair<std::vector<int>, std::vector<int>>> blocks;
            for (const auto& g : out.groups) {
                if (g.type == r) {
                    auto parts = g.parts();
                    if (std::binary_search(parts.begin(), parts.end(), i)) continue;
                    auto& bucket = blocks[parts].first;
                    for (int c = 0; c < g.multiplicity; ++c)
                        bucket.push_back(g.first_column + c);
                } else if (g.type == r + 1) {
                    if (!g.sum_contains(i) || g.has_singleton(i)) continue;
                    std::vector<int> key;
                    for (int x : g.sum_parts)
                        if (x != i) key.push_back(x);
                    auto& bucket = blocks[key].second;
                    for (int c = 0; c < g.multiplicity; ++c)
                        bucket.push_back(g.first_column + c);
                }
            }
            for (auto& [key, sides] : blocks) {
                if (sides.first.size() != sides.second.size())
                    throw InternalCheckError("unbalanced pairing block for part x_" +
                                             std::to_string(i + 1));
                for (std::size_t j = 0; j < sides.first.size(); ++j) {
                    int a = sides.first[j], c = sides.second[j];
                    sets.push_back({{std::min(a, c), std::max(a, c)}});
                }
            }
        }
        std::sort(sets.begin(), sets.end());
        if (static_cast<int>(sets.size()) != out.predicted_k)
            throw InternalCheckError("part x_" + std::to_string(i + 1) + " yielded " +
                                     std::to_string(sets.size()) + " recovery sets, expected " +
                                     std::to_string(out.predicted_k));
        cert.parts.push_back(std::move(sets));
    }
    out.certificate = std::move(cert);
    return out;
}

/// Integer-s entry point for the same family.
inline ConstructionOutput general_construction(int s, int t, const ConstructOptions& opts = {}) {
    return general_construction_rational(Rational(s), t, opts);
}

} // namespace pir
