#include "rrhom/minimal_factor.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace rrhom {

MinimalFactor minimal_factor(const GraphPtr& g) {
    if (!g->sink_states().empty())
        throw ValidationError("minimal factor requires a sink-free graph");
    const int n = g->num_states();

    std::vector<int> block(n, 0);
    int nblocks = 1;
    // Signature of a state: sorted (block of target, multiplicity) pairs.
    using Sig = std::vector<std::pair<int, int>>;
    std::vector<Sig> sigs(n);
    while (true) {
        for (int s = 0; s < n; ++s) {
            Sig sig;
            for (int e : g->out_edges(s)) sig.push_back({block[g->edge(e).dst], 1});
            std::sort(sig.begin(), sig.end());
            Sig merged;
            for (auto& [b, c] : sig) {
                if (!merged.empty() && merged.back().first == b)
                    merged.back().second += c;
                else
                    merged.push_back({b, c});
            }
            sigs[s] = std::move(merged);
        }
        // Group by (old block, signature); new block order is lexicographic in
        // that key, which is isomorphism-invariant by induction.
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (block[a] != block[b]) return block[a] < block[b];
            return sigs[a] < sigs[b];
        });
        std::vector<int> next(n);
        int nb = 0;
        for (int i = 0; i < n; ++i) {
            if (i > 0 && (block[order[i]] != block[order[i - 1]] ||
                          sigs[order[i]] != sigs[order[i - 1]]))
                ++nb;
            next[order[i]] = nb;
        }
        ++nb;
        if (nb == nblocks) break;
        block = std::move(next);
        nblocks = nb;
    }

    // Build M: one state per block, |E_{[I][J]}| taken from the (now uniform)
    // member signatures.
    std::vector<int> rep(nblocks, -1);
    for (int s = 0; s < n; ++s)
        if (rep[block[s]] == -1 || s < rep[block[s]]) rep[block[s]] = s;
    std::vector<std::string> ids(nblocks);
    for (int b = 0; b < nblocks; ++b) ids[b] = "m" + std::to_string(b);
    std::vector<Edge> edges;
    for (int b = 0; b < nblocks; ++b) {
        for (auto& [tb, count] : sigs[rep[b]])
            for (int t = 0; t < count; ++t)
                edges.push_back(Edge{"m" + std::to_string(b) + "." + std::to_string(tb) + "." +
                                         std::to_string(t),
                                     b, tb});
    }
    MinimalFactor mf;
    mf.source = g;
    mf.graph = MultiGraph::make_indexed(std::move(ids), std::move(edges));
    mf.sigma = std::move(block);
    mf.canonical_order.resize(nblocks);
    std::iota(mf.canonical_order.begin(), mf.canonical_order.end(), 0);
    return mf;
}

namespace {

std::vector<int> edges_into_fiber(const MultiGraph& g, const std::vector<int>& sigma, int state,
                                  int m_target) {
    std::vector<int> r;
    for (int e : g.out_edges(state))
        if (sigma[g.edge(e).dst] == m_target) r.push_back(e);
    return r;
}

std::vector<int> apply_order(std::vector<int> base,
                             const std::map<std::pair<int, int>, std::vector<int>>& orders,
                             std::pair<int, int> key) {
    auto it = orders.find(key);
    if (it == orders.end()) return base;
    const auto& perm = it->second;
    auto sorted_base = base;
    std::sort(sorted_base.begin(), sorted_base.end());
    auto sorted_perm = perm;
    std::sort(sorted_perm.begin(), sorted_perm.end());
    if (sorted_base != sorted_perm)
        throw ValidationError("edge order list does not match the edge set it orders");
    return perm;
}

}  // namespace

GraphHom construct_right_resolver(const MinimalFactor& mf, const EdgeOrders& orders) {
    const MultiGraph& g = *mf.source;
    const MultiGraph& m = *mf.graph;
    std::vector<int> edge_map(g.num_edges(), -1);
    for (int mi = 0; mi < m.num_states(); ++mi) {
        for (int mj : m.followers(mi)) {
            auto m_edges = apply_order(m.edges_between(mi, mj), orders.codomain_order, {mi, mj});
            for (int s = 0; s < g.num_states(); ++s) {
                if (mf.sigma[s] != mi) continue;
                auto g_edges =
                    apply_order(edges_into_fiber(g, mf.sigma, s, mj), orders.domain_order, {s, mj});
                if (g_edges.size() != m_edges.size())
                    throw InternalCheckError("fiber edge count differs from minimal factor");
                for (size_t t = 0; t < g_edges.size(); ++t) edge_map[g_edges[t]] = m_edges[t];
            }
        }
    }
    GraphHom phi = GraphHom::make(mf.source, mf.graph, std::move(edge_map), mf.sigma);
    auto check = check_right_resolver(phi);
    if (!check.ok)
        throw InternalCheckError("constructed resolver fails verification: " + check.diagnostic);
    return phi;
}

EdgeOrders shuffled_edge_orders(const MinimalFactor& mf, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    EdgeOrders orders;
    const MultiGraph& m = *mf.graph;
    const MultiGraph& g = *mf.source;
    for (int mi = 0; mi < m.num_states(); ++mi)
        for (int mj : m.followers(mi)) {
            auto v = m.edges_between(mi, mj);
            std::shuffle(v.begin(), v.end(), rng);
            orders.codomain_order[{mi, mj}] = v;
            for (int s = 0; s < g.num_states(); ++s) {
                if (mf.sigma[s] != mi) continue;
                auto w = edges_into_fiber(g, mf.sigma, s, mj);
                std::shuffle(w.begin(), w.end(), rng);
                orders.domain_order[{s, mj}] = w;
            }
        }
    return orders;
}

}  // namespace rrhom
