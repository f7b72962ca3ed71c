#include "rrhom/bunchy.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace rrhom {

BunchClassification classify(const GraphPtr& g) {
    BunchClassification c;
    c.mf = minimal_factor(g);
    const MultiGraph& m = *c.mf.graph;
    const int n = g->num_states();
    c.is_bunch.resize(n);
    c.is_bunchy_state.resize(n);
    c.bunchy = true;
    for (int s = 0; s < n; ++s) {
        auto f = g->followers(s);
        c.is_bunch[s] = f.size() == 1;
        // Sigma restricted to F(s) is onto F(Sigma(s)); bijectivity is
        // equivalent to equal sizes.
        c.is_bunchy_state[s] =
            static_cast<int>(f.size()) == static_cast<int>(m.followers(c.mf.sigma[s]).size());
        if (!c.is_bunchy_state[s]) c.bunchy = false;
    }
    c.almost_bunchy = true;
    for (int mi = 0; mi < m.num_states() && c.almost_bunchy; ++mi) {
        for (int mj : m.followers(mi)) {
            int offender = -1;
            for (int s = 0; s < n; ++s) {
                if (c.mf.sigma[s] != mi) continue;
                int targets = 0;
                for (int t : g->followers(s))
                    if (c.mf.sigma[t] == mj) ++targets;
                if (targets >= 2) {
                    if (offender >= 0) {
                        c.almost_bunchy = false;
                        c.non_almost_bunchy_witness =
                            BunchClassification::Witness{mi, mj, offender, s};
                        break;
                    }
                    offender = s;
                }
            }
            if (!c.almost_bunchy) break;
        }
    }
    c.cycle_of_bunches = is_strongly_connected(*g) &&
                         std::all_of(c.is_bunch.begin(), c.is_bunch.end(), [](bool b) { return b; });
    return c;
}

std::optional<CycleOfBunches> as_cycle_of_bunches(const GraphPtr& g) {
    if (!is_strongly_connected(*g)) return std::nullopt;
    const int n = g->num_states();
    std::vector<int> next(n);
    for (int s = 0; s < n; ++s) {
        auto f = g->followers(s);
        if (f.size() != 1) return std::nullopt;
        next[s] = f[0];
    }
    CycleOfBunches c;
    c.graph = g;
    int cur = 0;
    do {
        c.cycle_order.push_back(cur);
        c.degree_sequence.push_back(g->out_degree(cur));
        cur = next[cur];
    } while (cur != 0 && static_cast<int>(c.cycle_order.size()) <= n);
    if (static_cast<int>(c.cycle_order.size()) != n || cur != 0)
        throw InternalCheckError("strongly connected one-follower graph is not a single cycle");
    // Minimal iff the degree sequence is primitive: no proper divisor d of the
    // period makes the sequence d-periodic.
    c.is_minimal = true;
    const int p = n;
    for (int d = 1; d < p && c.is_minimal; ++d) {
        if (p % d != 0) continue;
        bool periodic = true;
        for (int i = 0; i < p && periodic; ++i)
            if (c.degree_sequence[i] != c.degree_sequence[(i + d) % p]) periodic = false;
        if (periodic) c.is_minimal = false;
    }
    return c;
}

GraphPtr build_o(const CycleOfBunches& m, int q) {
    if (q < 1) throw PreconditionError("build_o requires q >= 1");
    if (!m.is_minimal)
        throw PreconditionError("build_o requires a minimal cycle of bunches");
    const int p = static_cast<int>(m.degree_sequence.size());
    const int np = p * q;
    std::vector<std::string> ids(np);
    for (int i = 0; i < np; ++i) ids[i] = "c" + std::to_string(i);
    std::vector<Edge> edges;
    for (int i = 0; i < np; ++i) {
        int deg = m.degree_sequence[i % p];
        for (int t = 0; t < deg; ++t)
            edges.push_back(Edge{"c" + std::to_string(i) + "." + std::to_string(t), i,
                                 (i + 1) % np});
    }
    return MultiGraph::make_indexed(std::move(ids), std::move(edges));
}

MaxBunchyFactor max_bunchy_factor(const GraphPtr& g) {
    MinimalFactor mf = minimal_factor(g);
    const int n = g->num_states();

    // Pair graph: (I1,I2) -> (J1,J2) when the fibers match at both ends and
    // J_i is a follower of I_i. BFS from the diagonal.
    auto pack = [n](int a, int b) { return a * n + b; };
    std::vector<bool> reached(static_cast<size_t>(n) * n, false);
    std::queue<std::pair<int, int>> q;
    for (int i = 0; i < n; ++i) {
        reached[pack(i, i)] = true;
        q.push({i, i});
    }
    while (!q.empty()) {
        auto [a, b] = q.front();
        q.pop();
        for (int ja : g->followers(a))
            for (int jb : g->followers(b)) {
                if (mf.sigma[ja] != mf.sigma[jb]) continue;
                if (!reached[pack(ja, jb)]) {
                    reached[pack(ja, jb)] = true;
                    q.push({ja, jb});
                }
            }
    }
    // Transitive closure via union-find over the reached pairs.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (reached[pack(a, b)]) parent[find(a)] = find(b);
    std::vector<int> assign(n);
    for (int s = 0; s < n; ++s) assign[s] = find(s);
    Partition approx = Partition::from_block_assignment(g, assign);

    GraphHom phi = construct_right_resolver(mf);
    QuotientResult qr = quotient_by_congruence(phi, approx);
    if (!classify(qr.graph).bunchy)
        throw InternalCheckError("max_bunchy_factor: quotient fails the bunchiness check");
    return {qr.graph, qr.quotient_map};
}

StabilityRelation almost_bunchy_stability(const GraphPtr& g) {
    BunchClassification c = classify(g);
    if (!c.almost_bunchy)
        throw PreconditionError("almost_bunchy_stability: graph is not almost bunchy");
    return stability_relation(construct_right_resolver(c.mf));
}

MinimalSyncFactor og_almost_bunchy(const GraphPtr& g) {
    BunchClassification c = classify(g);
    if (!c.almost_bunchy)
        throw PreconditionError("og_almost_bunchy: graph is not almost bunchy");
    GraphHom phi = construct_right_resolver(c.mf);
    StabilityRelation rel = stability_relation(phi);
    QuotientResult qr = quotient_by_congruence(phi, rel.partition);
    if (!is_synchronizing(qr.quotient_map))
        throw InternalCheckError("og_almost_bunchy: quotient map fails the synchronization check");
    MinimalSyncFactor out{qr.graph, qr.quotient_map, std::nullopt};
    if (is_strongly_connected(*g)) {
        bool ok = classify(qr.graph).bunchy;
        if (!ok)
            throw InternalCheckError("og_almost_bunchy: O(G) of a strongly connected graph "
                                     "fails the bunchiness check");
        out.bunchy_verified = ok;
    }
    return out;
}

UniversalPropertyWitness verify_universal_property(const GraphHom& phi1, const GraphHom& phi2,
                                                   const GraphHom& psi1, const GraphHom& psi2) {
    if (phi1.domain.get() != phi2.domain.get() && !phi1.domain->same_structure(*phi2.domain))
        throw PreconditionError("universal property: phi1, phi2 must share a domain");
    if (psi1.codomain.get() != psi2.codomain.get() &&
        !psi1.codomain->same_structure(*psi2.codomain))
        throw PreconditionError("universal property: psi1, psi2 must share a codomain");
    for (const GraphHom* h : {&phi1, &phi2, &psi1, &psi2})
        require_right_resolver(*h, "universal property");
    if (phi1.codomain.get() != psi1.domain.get() && !phi1.codomain->same_structure(*psi1.domain))
        throw PreconditionError("universal property: psi1 must start at phi1's codomain");
    if (phi2.codomain.get() != psi2.domain.get() && !phi2.codomain->same_structure(*psi2.domain))
        throw PreconditionError("universal property: psi2 must start at phi2's codomain");
    BunchClassification h1c = classify(psi1.domain), h2c = classify(psi2.domain);
    if (!h1c.bunchy || !h2c.bunchy)
        throw PreconditionError("universal property: both intermediate graphs must be bunchy");
    // The shared codomain must be the common minimal factor.
    if (minimal_factor(psi1.codomain).graph->num_states() != psi1.codomain->num_states())
        throw PreconditionError("universal property: the shared codomain is not minimal");

    const GraphPtr& g = phi1.domain;
    FiberProduct fp = fiber_product(psi1, psi2);

    // T(I') = (state images under the two compositions); C = induced subgraph
    // on T(V(G)). T lands in the product because both composites agree on the
    // base.
    GraphHom comp1 = compose(psi1, phi1), comp2 = compose(psi2, phi2);
    const int n = g->num_states();
    std::vector<int> t_state(n);
    std::set<int> c_state_set;
    for (int s = 0; s < n; ++s) {
        if (comp1.state_map[s] != comp2.state_map[s])
            throw PreconditionError("universal property: the compositions do not agree on states");
        int pv = fp.pair_index(phi1.state_map[s], phi2.state_map[s]);
        if (pv < 0) throw InternalCheckError("universal property: paired image missing");
        t_state[s] = pv;
        c_state_set.insert(pv);
    }
    // Verify T(V(G)) is follower-closed in P, i.e. C is a principal subgraph.
    // The hypotheses guarantee this, so a failure is an internal error.
    std::vector<int> c_states(c_state_set.begin(), c_state_set.end());
    GraphPtr c;
    try {
        c = induced_principal_subgraph(fp.product, c_states);
    } catch (const PreconditionError& e) {
        throw InternalCheckError(std::string("universal property: C is not principal: ") +
                                 e.what());
    }

    std::vector<int> c_index(fp.product->num_states(), -1);
    for (int i = 0; i < c->num_states(); ++i)
        c_index[*fp.product->find_state(c->state_id(i))] = i;
    std::vector<int> c_edge_of_product(fp.product->num_edges(), -1);
    for (int e = 0; e < c->num_edges(); ++e)
        c_edge_of_product[*fp.product->find_edge(c->edge(e).id)] = e;

    // Restricted projections C -> H_i.
    auto restrict_proj = [&](const GraphHom& proj, const GraphPtr& target) {
        std::vector<int> sm(c->num_states()), em(c->num_edges());
        for (int i = 0; i < c->num_states(); ++i)
            sm[i] = proj.state_map[*fp.product->find_state(c->state_id(i))];
        for (int e = 0; e < c->num_edges(); ++e)
            em[e] = proj.edge_map[*fp.product->find_edge(c->edge(e).id)];
        return GraphHom::make(c, target, std::move(em), std::move(sm));
    };
    GraphHom proj1 = restrict_proj(fp.proj1, psi1.domain);
    GraphHom proj2 = restrict_proj(fp.proj2, psi2.domain);

    // Lift Delta_i: an edge e of G from I' into the fiber of J maps to the
    // unique C-edge over T(s(e)) -> T(t(e)) whose i-th projection is phi_i(e).
    auto build_delta = [&](const GraphHom& phi, const GraphHom& proj_c) {
        std::vector<int> em(g->num_edges(), -1);
        for (int e = 0; e < g->num_edges(); ++e) {
            int src_c = c_index[t_state[g->edge(e).src]];
            int image = phi.edge_map[e];
            int found = -1;
            for (int ce : c->out_edges(src_c)) {
                if (proj_c.edge_map[ce] == image) {
                    if (found >= 0)
                        throw InternalCheckError("universal property: projection not injective "
                                                 "over a parallel class");
                    found = ce;
                }
            }
            if (found < 0)
                throw InternalCheckError("universal property: lift of an edge is missing");
            em[e] = found;
        }
        std::vector<int> sm(n);
        for (int s = 0; s < n; ++s) sm[s] = c_index[t_state[s]];
        return GraphHom::make(g, c, std::move(em), std::move(sm));
    };
    GraphHom delta1 = build_delta(phi1, proj1);
    GraphHom delta2 = build_delta(phi2, proj2);

    // Conclusions of the universal property, verified rather than trusted.
    if (delta1.state_map != delta2.state_map)
        throw InternalCheckError("universal property: lifted state maps differ");
    for (const GraphHom* d : {&delta1, &delta2}) {
        auto chk = check_right_resolver(*d);
        if (!chk.ok)
            throw InternalCheckError("universal property: lift is not right-resolving: " +
                                     chk.diagnostic);
    }
    GraphHom back1 = compose(proj1, delta1), back2 = compose(proj2, delta2);
    if (back1.edge_map != phi1.edge_map || back2.edge_map != phi2.edge_map)
        throw InternalCheckError("universal property: factorization fails edge-for-edge");
    if (!classify(c).bunchy)
        throw InternalCheckError("universal property: C fails the bunchiness check");

    return {c, std::move(delta1), std::move(delta2), std::move(proj1), std::move(proj2)};
}

}  // namespace rrhom
