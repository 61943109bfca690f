#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "pir/errors.hpp"

namespace pir {

/// Bipartite graph with `left_count` + `right_count` vertices.  Adjacency is
/// stored per left vertex, kept sorted and duplicate-free, so algorithms on
/// it are deterministic.
class Bipartite {
public:
    Bipartite(int left_count, int right_count)
        : left_(check_count(left_count)), right_(check_count(right_count)), adj_(left_count) {}

    int left_count() const { return left_; }
    int right_count() const { return right_; }
    const std::vector<int>& neighbors(int l) const {
        check_left(l);
        return adj_[l];
    }

    void add_edge(int l, int r) {
        check_left(l);
        if (r < 0 || r >= right_)
            throw IndexError("right vertex " + std::to_string(r) + " out of range");
        auto& nbrs = adj_[l];
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), r);
        if (it != nbrs.end() && *it == r) return;
        nbrs.insert(it, r);
    }

    long long edge_count() const {
        long long e = 0;
        for (const auto& nbrs : adj_) e += static_cast<long long>(nbrs.size());
        return e;
    }

private:
    static int check_count(int n) {
        if (n < 0) throw DimensionError("negative vertex count");
        return n;
    }
    void check_left(int l) const {
        if (l < 0 || l >= left_)
            throw IndexError("left vertex " + std::to_string(l) + " out of range");
    }

    int left_;
    int right_;
    std::vector<std::vector<int>> adj_;
};

/// Result of max_matching.  pairs lists matched (left, right) edges sorted by
/// left vertex; left_match / right_match give -1 for unmatched vertices.
struct Matching {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> left_match;
    std::vector<int> right_match;

    int size() const { return static_cast<int>(pairs.size()); }
    bool is_perfect_for(const Bipartite& g) const {
        return size() == g.left_count() && size() == g.right_count();
    }
};

/// Maximum-cardinality matching via Hopcroft-Karp.  Deterministic: phases
/// scan vertices and adjacency lists in index order.
inline Matching max_matching(const Bipartite& g) {
    const int n = g.left_count();
    const int inf = std::numeric_limits<int>::max();
    std::vector<int> lmatch(n, -1), rmatch(g.right_count(), -1), dist(n);

    auto bfs = [&]() {
        std::queue<int> q;
        for (int l = 0; l < n; ++l) {
            if (lmatch[l] < 0) {
                dist[l] = 0;
                q.push(l);
            } else {
                dist[l] = inf;
            }
        }
        bool found_augmenting = false;
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (int r : g.neighbors(l)) {
                int l2 = rmatch[r];
                if (l2 < 0) {
                    found_augmenting = true;
                } else if (dist[l2] == inf) {
                    dist[l2] = dist[l] + 1;
                    q.push(l2);
                }
            }
        }
        return found_augmenting;
    };

    std::function<bool(int)> dfs = [&](int l) {
        for (int r : g.neighbors(l)) {
            int l2 = rmatch[r];
            if (l2 < 0 || (dist[l2] == dist[l] + 1 && dfs(l2))) {
                lmatch[l] = r;
                rmatch[r] = l;
                return true;
            }
        }
        dist[l] = inf;
        return false;
    };

    while (bfs())
        for (int l = 0; l < n; ++l)
            if (lmatch[l] < 0) dfs(l);

    Matching result;
    result.left_match = lmatch;
    result.right_match = rmatch;
    for (int l = 0; l < n; ++l)
        if (lmatch[l] >= 0) result.pairs.emplace_back(l, lmatch[l]);
    return result;
}

struct Regularity {
    bool regular = false;
    int degree = 0; // common degree when regular
};

/// A bipartite graph is regular here when both sides have the same number of
/// vertices and every vertex (on either side) has the same degree d >= 1.
/// Such graphs always admit a perfect matching.
inline Regularity is_regular(const Bipartite& g) {
    if (g.left_count() != g.right_count() || g.left_count() == 0) return {false, 0};
    std::vector<int> rdeg(g.right_count(), 0);
    int d = static_cast<int>(g.neighbors(0).size());
    for (int l = 0; l < g.left_count(); ++l) {
        if (static_cast<int>(g.neighbors(l).size()) != d) return {false, 0};
        for (int r : g.neighbors(l)) ++rdeg[r];
    }
    for (int deg : rdeg)
        if (deg != d) return {false, 0};
    if (d == 0) return {false, 0};
    return {true, d};
}

/// A set X of left vertices with |N(X)| < |X|, or nullopt when the graph has
/// a matching saturating the left side.  Derived from the maximum matching:
/// the left vertices reachable from some unmatched left vertex by an
/// alternating path form a violating set whenever the matching is deficient.
inline std::optional<std::vector<int>> hall_violator(const Bipartite& g) {
    Matching match = max_matching(g);
    if (match.size() == g.left_count()) return std::nullopt;

    std::vector<char> left_seen(g.left_count(), 0), right_seen(g.right_count(), 0);
    std::queue<int> q;
    for (int l = 0; l < g.left_count(); ++l)
        if (match.left_match[l] < 0) {
            left_seen[l] = 1;
            q.push(l);
        }
    while (!q.empty()) {
        int l = q.front();
        q.pop();
        for (int r : g.neighbors(l)) {
            if (right_seen[r]) continue;
            right_seen[r] = 1;
            int l2 = match.right_match[r]; // must exist, else the matching was not maximum
            if (l2 >= 0 && !left_seen[l2]) {
                left_seen[l2] = 1;
                q.push(l2);
            }
        }
    }
    std::vector<int> violator;
    for (int l = 0; l < g.left_count(); ++l)
        if (left_seen[l]) violator.push_back(l);
    return violator;
}

} // namespace pir
