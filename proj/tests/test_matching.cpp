#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "pir/matching.hpp"

using pir::Bipartite;

namespace {

// brute-force maximum matching by trying every subset of edges (small graphs)
int brute_max_matching(const Bipartite& g) {
    std::vector<std::pair<int, int>> edges;
    for (int l = 0; l < g.left_count(); ++l)
        for (int r : g.neighbors(l)) edges.emplace_back(l, r);
    int best = 0;
    int e = static_cast<int>(edges.size());
    for (int mask = 0; mask < (1 << e); ++mask) {
        std::set<int> ls, rs;
        bool ok = true;
        int size = 0;
        for (int i = 0; i < e && ok; ++i)
            if (mask & (1 << i)) {
                auto [l, r] = edges[i];
                ok = ls.insert(l).second && rs.insert(r).second;
                ++size;
            }
        if (ok) best = std::max(best, size);
    }
    return best;
}

// union of `degree` random permutations: a `degree`-regular bipartite
// multigraph collapsed to a simple graph, then fixed up by rejection
Bipartite random_regular(std::mt19937_64& rng, int n, int degree) {
    while (true) {
        Bipartite g(n, n);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int d = 0; d < degree; ++d) {
            std::shuffle(perm.begin(), perm.end(), rng);
            for (int l = 0; l < n; ++l) g.add_edge(l, perm[l]);
        }
        // colliding shuffles merge edges and lower the degree; retry until
        // the union really is `degree`-regular
        if (auto reg = pir::is_regular(g); reg.regular && reg.degree == degree) return g;
    }
}

Bipartite random_graph(std::mt19937_64& rng, int ln, int rn, double density) {
    Bipartite g(ln, rn);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int l = 0; l < ln; ++l)
        for (int r = 0; r < rn; ++r)
            if (coin(rng) < density) g.add_edge(l, r);
    return g;
}

} // namespace

TEST_CASE("Bipartite stores sorted unique adjacency") {
    Bipartite g(2, 3);
    g.add_edge(0, 2);
    g.add_edge(0, 0);
    g.add_edge(0, 2);
    REQUIRE(g.neighbors(0) == std::vector<int>{0, 2});
    REQUIRE(g.edge_count() == 2);
    REQUIRE_THROWS_AS(g.add_edge(2, 0), pir::IndexError);
    REQUIRE_THROWS_AS(g.add_edge(0, 3), pir::IndexError);
    REQUIRE_THROWS_AS(Bipartite(-1, 2), pir::DimensionError);
}

TEST_CASE("max_matching on hand-built graphs") {
    // six-vertex path l1 - r0 - l0 - r1 - l2 - r2: a greedy pass that pairs
    // l0 with r0 strands l1, so size 3 needs an augmenting path
    Bipartite path(3, 3);
    path.add_edge(0, 0);
    path.add_edge(0, 1);
    path.add_edge(1, 0);
    path.add_edge(2, 1);
    path.add_edge(2, 2);
    auto m = pir::max_matching(path);
    REQUIRE(m.size() == 3);
    REQUIRE(m.is_perfect_for(path));

    Bipartite star(3, 1);
    for (int l = 0; l < 3; ++l) star.add_edge(l, 0);
    REQUIRE(pir::max_matching(star).size() == 1);

    Bipartite empty(4, 4);
    REQUIRE(pir::max_matching(empty).size() == 0);
}

TEST_CASE("max_matching agrees with brute force on random small graphs") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        int ln = 1 + static_cast<int>(rng() % 5);
        int rn = 1 + static_cast<int>(rng() % 5);
        auto g = random_graph(rng, ln, rn, 0.4);
        if (g.edge_count() > 16) continue;
        auto m = pir::max_matching(g);
        REQUIRE(m.size() == brute_max_matching(g));
        // the reported matching is itself consistent
        std::set<int> ls, rs;
        for (auto [l, r] : m.pairs) {
            REQUIRE(ls.insert(l).second);
            REQUIRE(rs.insert(r).second);
            auto nbrs = g.neighbors(l);
            REQUIRE(std::find(nbrs.begin(), nbrs.end(), r) != nbrs.end());
            REQUIRE(m.left_match[l] == r);
            REQUIRE(m.right_match[r] == l);
        }
    }
}

TEST_CASE("regular graphs always have perfect matchings") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 49);
        int degree = 1 + static_cast<int>(rng() % 5);
        if (degree > n) degree = n;
        auto g = random_regular(rng, n, degree);
        auto reg = pir::is_regular(g);
        REQUIRE(reg.regular);
        REQUIRE(reg.degree == degree);
        REQUIRE(pir::max_matching(g).is_perfect_for(g));
        REQUIRE_FALSE(pir::hall_violator(g).has_value());
    }
}

TEST_CASE("is_regular rejects non-regular shapes") {
    Bipartite unequal(2, 3);
    REQUIRE_FALSE(pir::is_regular(unequal).regular);

    Bipartite isolated(2, 2);
    isolated.add_edge(0, 0);
    REQUIRE_FALSE(pir::is_regular(isolated).regular);  // vertex 1 has degree 0

    Bipartite skew(2, 2);
    skew.add_edge(0, 0);
    skew.add_edge(0, 1);
    skew.add_edge(1, 0);
    REQUIRE_FALSE(pir::is_regular(skew).regular);  // left degrees 2,1

    // left-regular but right degrees differ
    Bipartite lop(2, 2);
    lop.add_edge(0, 0);
    lop.add_edge(1, 0);
    REQUIRE_FALSE(pir::is_regular(lop).regular);

    Bipartite cycle(3, 3);
    for (int i = 0; i < 3; ++i) {
        cycle.add_edge(i, i);
        cycle.add_edge(i, (i + 1) % 3);
    }
    auto reg = pir::is_regular(cycle);
    REQUIRE(reg.regular);
    REQUIRE(reg.degree == 2);

    REQUIRE_FALSE(pir::is_regular(Bipartite(0, 0)).regular);
}

TEST_CASE("hall_violator returns a certified deficient set") {
    // two left vertices share one right neighbor
    Bipartite g(3, 3);
    g.add_edge(0, 0);
    g.add_edge(1, 0);
    g.add_edge(2, 1);
    auto viol = pir::hall_violator(g);
    REQUIRE(viol.has_value());
    REQUIRE(*viol == std::vector<int>{0, 1});
}

TEST_CASE("hall_violator is nullopt exactly when the left side saturates") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        int ln = 1 + static_cast<int>(rng() % 8);
        int rn = 1 + static_cast<int>(rng() % 8);
        auto g = random_graph(rng, ln, rn, 0.3);
        auto m = pir::max_matching(g);
        auto viol = pir::hall_violator(g);
        if (m.size() == ln) {
            REQUIRE_FALSE(viol.has_value());
        } else {
            REQUIRE(viol.has_value());
            // the violator genuinely violates Hall's condition
            std::set<int> nbhd;
            for (int l : *viol)
                for (int r : g.neighbors(l)) nbhd.insert(r);
            REQUIRE(nbhd.size() < viol->size());
        }
    }
}
