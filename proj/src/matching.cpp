#include "geneo/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace geneo {

double point_cost(const PersistencePair& a, const PersistencePair& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diagonal_cost(const PersistencePair& a) { return (a.death - a.birth) / 2.0; }

namespace {

constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

// Hopcroft-Karp on a bipartite graph with equally sized sides.
class BipartiteMatcher {
public:
    explicit BipartiteMatcher(std::vector<std::vector<std::size_t>> adj)
        : adj_(std::move(adj)), n_(adj_.size()), match_l_(n_, kFree), match_r_(n_, kFree), dist_(n_) {}

    bool perfect() {
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t u = 0; u < n_; ++u) {
                if (match_l_[u] == kFree && dfs(u)) ++matched;
            }
        }
        return matched == n_;
    }

    const std::vector<std::size_t>& left_matches() const { return match_l_; }

private:
    bool bfs() {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < n_; ++u) {
            if (match_l_[u] == kFree) {
                dist_[u] = 0;
                q.push(u);
            } else {
                dist_[u] = kFree;
            }
        }
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v : adj_[u]) {
                const std::size_t w = match_r_[v];
                if (w == kFree) {
                    found = true;
                } else if (dist_[w] == kFree) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (std::size_t v : adj_[u]) {
            const std::size_t w = match_r_[v];
            if (w == kFree || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_l_[u] = v;
                match_r_[v] = u;
                return true;
            }
        }
        dist_[u] = kFree;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::size_t n_;
    std::vector<std::size_t> match_l_;
    std::vector<std::size_t> match_r_;
    std::vector<std::size_t> dist_;
};

// Left side: points of A (0..m-1), then diagonal copies of B's points.
// Right side: points of B (0..k-1), then diagonal copies of A's points.
std::vector<std::vector<std::size_t>> threshold_graph(const std::vector<PersistencePair>& a,
                                                      const std::vector<PersistencePair>& b,
                                                      double t) {
    const std::size_t m = a.size();
    const std::size_t k = b.size();
    std::vector<std::vector<std::size_t>> adj(m + k);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (point_cost(a[i], b[j]) <= t) adj[i].push_back(j);
        }
        if (diagonal_cost(a[i]) <= t) adj[i].push_back(k + i);
    }
    for (std::size_t j = 0; j < k; ++j) {
        auto& row = adj[m + j];
        if (diagonal_cost(b[j]) <= t) row.push_back(j);
        for (std::size_t i = 0; i < m; ++i) row.push_back(k + i);
    }
    return adj;
}

Matching finite_matching(const std::vector<PersistencePair>& a, const std::vector<PersistencePair>& b) {
    Matching result;
    if (a.empty() && b.empty()) return result;

    std::vector<double> candidates{0.0};
    for (const auto& p : a) {
        candidates.push_back(diagonal_cost(p));
        for (const auto& q : b) candidates.push_back(point_cost(p, q));
    }
    for (const auto& q : b) candidates.push_back(diagonal_cost(q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Sending everything to the diagonal is feasible at the largest diagonal
    // cost, so the last candidate always admits a perfect matching.
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        BipartiteMatcher bm(threshold_graph(a, b, candidates[mid]));
        if (bm.perfect()) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }

    BipartiteMatcher bm(threshold_graph(a, b, candidates[lo]));
    bm.perfect();
    const std::size_t m = a.size();
    const std::size_t k = b.size();
    const auto& ml = bm.left_matches();
    for (std::size_t i = 0; i < m; ++i) {
        if (ml[i] < k) {
            result.pairs.push_back({i, ml[i], false, point_cost(a[i], b[ml[i]])});
        } else {
            result.pairs.push_back({i, std::nullopt, false, diagonal_cost(a[i])});
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (ml[m + j] == j) result.pairs.push_back({std::nullopt, j, false, diagonal_cost(b[j])});
    }
    for (const auto& p : result.pairs) result.cost = std::max(result.cost, p.cost);
    return result;
}

}  // namespace

BottleneckResult bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    BottleneckResult out;
    out.matching = finite_matching(a.finite, b.finite);
    out.distance = out.matching.cost;

    if (a.essential.size() != b.essential.size()) {
        out.distance = std::numeric_limits<double>::infinity();
        out.matching.cost = out.distance;
        return out;
    }
    std::vector<std::size_t> ia(a.essential.size());
    std::vector<std::size_t> ib(b.essential.size());
    for (std::size_t i = 0; i < ia.size(); ++i) ia[i] = ib[i] = i;
    std::sort(ia.begin(), ia.end(), [&](auto x, auto y) { return a.essential[x] < a.essential[y]; });
    std::sort(ib.begin(), ib.end(), [&](auto x, auto y) { return b.essential[x] < b.essential[y]; });
    for (std::size_t i = 0; i < ia.size(); ++i) {
        const double c = std::abs(a.essential[ia[i]] - b.essential[ib[i]]);
        out.matching.pairs.push_back({ia[i], ib[i], true, c});
        out.distance = std::max(out.distance, c);
    }
    out.matching.cost = out.distance;
    return out;
}

}  // namespace geneo
