#include "geneo/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geneo/matching.hpp"

namespace geneo {

PersistenceDiagram PersistenceDiagram::normalized(std::vector<PersistencePair> finite,
                                                  std::vector<double> essential) {
    PersistenceDiagram d;
    d.finite.reserve(finite.size());
    for (const auto& p : finite) {
        if (!std::isfinite(p.birth) || !std::isfinite(p.death)) {
            throw Error("finite diagram points need finite coordinates");
        }
        if (p.birth > p.death) throw Error("diagram point with birth > death");
        if (p.birth < p.death) d.finite.push_back(p);
    }
    for (double b : essential) {
        if (!std::isfinite(b)) throw Error("essential birth must be finite");
    }
    d.essential = std::move(essential);
    std::sort(d.finite.begin(), d.finite.end());
    std::sort(d.essential.begin(), d.essential.end());
    return d;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void attach(std::size_t child_root, std::size_t parent_root) { parent_[child_root] = parent_root; }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

PersistenceDiagram sublevel_diagram(const SampledFunction& phi) {
    const std::size_t n = phi.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return phi[a] < phi[b] || (phi[a] == phi[b] && a < b);
    });

    // Roots are founding vertices, so a root's birth is phi[root].
    UnionFind uf(n);
    std::vector<bool> entered(n, false);
    std::vector<PersistencePair> pairs;

    auto elder_first = [&](std::size_t a, std::size_t b) {
        return phi[a] < phi[b] || (phi[a] == phi[b] && a < b);
    };

    for (std::size_t v : order) {
        entered[v] = true;
        const std::size_t nbrs[2] = {(v + n - 1) % n, (v + 1) % n};
        for (std::size_t u : nbrs) {
            if (!entered[u] || u == v) continue;
            std::size_t ru = uf.find(u);
            std::size_t rv = uf.find(v);
            if (ru == rv) continue;
            if (!elder_first(ru, rv)) std::swap(ru, rv);
            // ru is the elder; rv's component dies at phi[v]. A lone vertex
            // joining an existing component dies instantly (zero persistence).
            if (phi[rv] < phi[v]) pairs.push_back({phi[rv], phi[v]});
            uf.attach(rv, ru);
        }
    }
    return PersistenceDiagram::normalized(std::move(pairs), {phi[order.front()]});
}

bool diagram_equal(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol) {
    if (tol < 0.0) throw Error("tolerance must be nonnegative");
    return bottleneck(a, b).distance <= tol;
}

}  // namespace geneo
