#include "rrhom/hom.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace rrhom {

GraphHom GraphHom::make(GraphPtr domain, GraphPtr codomain, std::vector<int> edge_map,
                        std::vector<int> state_map) {
    if (static_cast<int>(edge_map.size()) != domain->num_edges() ||
        static_cast<int>(state_map.size()) != domain->num_states())
        throw ValidationError("homomorphism map sizes do not match the domain");
    for (int s : state_map)
        if (s < 0 || s >= codomain->num_states())
            throw ValidationError("state map image out of range");
    for (int e = 0; e < domain->num_edges(); ++e) {
        int fe = edge_map[e];
        if (fe < 0 || fe >= codomain->num_edges())
            throw ValidationError("edge map image out of range");
        const Edge& de = domain->edge(e);
        const Edge& ce = codomain->edge(fe);
        if (ce.src != state_map[de.src] || ce.dst != state_map[de.dst])
            throw ValidationError("maps do not commute with source/target at edge '" + de.id +
                                  "'");
    }
    return GraphHom{std::move(domain), std::move(codomain), std::move(edge_map),
                    std::move(state_map)};
}

GraphHom identity_hom(const GraphPtr& g) {
    std::vector<int> em(g->num_edges()), sm(g->num_states());
    std::iota(em.begin(), em.end(), 0);
    std::iota(sm.begin(), sm.end(), 0);
    return GraphHom{g, g, std::move(em), std::move(sm)};
}

ResolverCheck check_right_resolver(const GraphHom& h) {
    const MultiGraph& g = *h.domain;
    const MultiGraph& k = *h.codomain;
    std::vector<bool> state_hit(k.num_states(), false), edge_hit(k.num_edges(), false);
    for (int s : h.state_map) state_hit[s] = true;
    for (int e : h.edge_map) edge_hit[e] = true;
    for (int s = 0; s < k.num_states(); ++s)
        if (!state_hit[s]) return {false, "not surjective: codomain state '" + k.state_id(s) +
                                              "' has no preimage"};
    for (int e = 0; e < k.num_edges(); ++e)
        if (!edge_hit[e])
            return {false, "not surjective: codomain edge '" + k.edge(e).id + "' has no preimage"};
    for (int s = 0; s < g.num_states(); ++s) {
        int hs = h.state_map[s];
        if (g.out_degree(s) != k.out_degree(hs))
            return {false, "out-degree mismatch at state '" + g.state_id(s) + "'"};
        std::vector<bool> seen(k.num_edges(), false);
        for (int e : g.out_edges(s)) {
            int fe = h.edge_map[e];
            if (seen[fe])
                return {false, "not injective on outgoing edges of state '" + g.state_id(s) +
                                   "': edge '" + k.edge(fe).id + "' hit twice"};
            seen[fe] = true;
        }
    }
    return {true, ""};
}

void require_right_resolver(const GraphHom& h, const std::string& context) {
    auto c = check_right_resolver(h);
    if (!c.ok) throw PreconditionError(context + ": map is not right-resolving (" + c.diagnostic + ")");
}

GraphHom compose(const GraphHom& outer, const GraphHom& inner) {
    if (inner.codomain.get() != outer.domain.get() &&
        !inner.codomain->same_structure(*outer.domain))
        throw PreconditionError("compose: inner codomain does not match outer domain");
    std::vector<int> em(inner.edge_map.size()), sm(inner.state_map.size());
    for (size_t e = 0; e < em.size(); ++e) em[e] = outer.edge_map[inner.edge_map[e]];
    for (size_t s = 0; s < sm.size(); ++s) sm[s] = outer.state_map[inner.state_map[s]];
    return GraphHom{inner.domain, outer.codomain, std::move(em), std::move(sm)};
}

ResolverTable::ResolverTable(GraphHom hom) : hom_(std::move(hom)) {
    require_right_resolver(hom_, "ResolverTable");
    const MultiGraph& g = *hom_.domain;
    lifts_.resize(g.num_states());
    for (int s = 0; s < g.num_states(); ++s) {
        for (int e : g.out_edges(s)) lifts_[s].push_back({hom_.edge_map[e], e});
        std::sort(lifts_[s].begin(), lifts_[s].end());
    }
    fibers_.resize(hom_.codomain->num_states());
    for (int s = 0; s < g.num_states(); ++s) fibers_[hom_.state_map[s]].push_back(s);
}

int ResolverTable::lift(int state, int h_edge) const {
    const auto& v = lifts_[state];
    auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(h_edge, -1));
    if (it == v.end() || it->first != h_edge) return -1;
    return it->second;
}

int ResolverTable::step(int state, int h_edge) const {
    int e = lift(state, h_edge);
    return e < 0 ? -1 : hom_.domain->edge(e).dst;
}

Partition Partition::from_block_assignment(GraphPtr g, const std::vector<int>& raw) {
    if (static_cast<int>(raw.size()) != g->num_states())
        throw ValidationError("partition assignment size mismatch");
    const int n = g->num_states();
    // Renumber blocks by smallest member.
    std::map<int, int> renum;
    for (int i = 0; i < n; ++i)
        if (!renum.count(raw[i])) renum[raw[i]] = static_cast<int>(renum.size());
    Partition p;
    p.graph = std::move(g);
    p.block_of.resize(n);
    p.blocks.resize(renum.size());
    for (int i = 0; i < n; ++i) {
        p.block_of[i] = renum[raw[i]];
        p.blocks[p.block_of[i]].push_back(i);
    }
    return p;
}

Partition Partition::from_blocks(GraphPtr g, std::vector<std::vector<int>> blocks) {
    std::vector<int> assign(g->num_states(), -1);
    for (size_t b = 0; b < blocks.size(); ++b)
        for (int s : blocks[b]) {
            if (s < 0 || s >= g->num_states() || assign[s] != -1)
                throw ValidationError("blocks do not form a partition of the states");
            assign[s] = static_cast<int>(b);
        }
    for (int s = 0; s < g->num_states(); ++s)
        if (assign[s] == -1) throw ValidationError("blocks do not cover all states");
    return from_block_assignment(std::move(g), assign);
}

Partition Partition::discrete(const GraphPtr& g) {
    std::vector<int> a(g->num_states());
    std::iota(a.begin(), a.end(), 0);
    return from_block_assignment(g, a);
}

Partition Partition::single_block(const GraphPtr& g) {
    std::vector<int> a(g->num_states(), 0);
    return from_block_assignment(g, a);
}

Partition Partition::fibers_of(const GraphHom& h) {
    return from_block_assignment(h.domain, h.state_map);
}

bool Partition::refines(const Partition& coarser) const {
    for (const auto& b : blocks) {
        int target = coarser.block_of[b[0]];
        for (int s : b)
            if (coarser.block_of[s] != target) return false;
    }
    return true;
}

bool is_congruence(const Partition& p, const GraphHom& phi) {
    if (p.graph.get() != phi.domain.get() && !p.graph->same_structure(*phi.domain))
        throw PreconditionError("is_congruence: partition is not over phi's domain");
    ResolverTable table(phi);
    const MultiGraph& h = *phi.codomain;
    for (const auto& block : p.blocks) {
        int fiber = phi.state_map[block[0]];
        for (int s : block)
            if (phi.state_map[s] != fiber) return false;  // block crosses fibers
        if (block.size() == 1) continue;
        for (int a : h.out_edges(fiber)) {
            int target_block = p.block_of[table.step(block[0], a)];
            for (size_t i = 1; i < block.size(); ++i)
                if (p.block_of[table.step(block[i], a)] != target_block) return false;
        }
    }
    return true;
}

QuotientResult quotient_by_congruence(const GraphHom& phi, const Partition& p) {
    if (!is_congruence(p, phi))
        throw PreconditionError("quotient_by_congruence: partition is not a congruence for phi");
    const MultiGraph& g = *phi.domain;
    const MultiGraph& h = *phi.codomain;

    auto block_id = [&](const std::vector<int>& block) {
        std::string id = g.state_id(block[0]);
        for (size_t i = 1; i < block.size(); ++i) id += "|" + g.state_id(block[i]);
        return id;
    };
    std::vector<std::string> state_ids;
    for (const auto& b : p.blocks) state_ids.push_back(block_id(b));

    // One quotient edge per (source block, codomain edge). The class
    // representative is the lift at the block's smallest state.
    const int nb = p.num_blocks();
    std::vector<Edge> edges;
    std::vector<std::vector<int>> class_index(nb, std::vector<int>(h.num_edges(), -1));
    std::vector<int> induced_edge;  // quotient edge -> codomain edge
    for (int b = 0; b < nb; ++b) {
        int rep = p.blocks[b][0];
        for (int e : g.out_edges(rep)) {
            int a = phi.edge_map[e];
            class_index[b][a] = static_cast<int>(edges.size());
            edges.push_back(Edge{g.edge(e).id, b, p.block_of[g.edge(e).dst]});
            induced_edge.push_back(a);
        }
    }
    // Multiplicity validation across representatives: every member of a block
    // must realize the same (codomain edge -> target block) profile.
    ResolverTable table(phi);
    for (int b = 0; b < nb; ++b)
        for (int s : p.blocks[b])
            for (int a_local : h.out_edges(phi.state_map[s])) {
                int ce = class_index[b][a_local];
                if (ce < 0 || edges[ce].dst != p.block_of[table.step(s, a_local)])
                    throw InternalCheckError(
                        "quotient edge multiplicities differ across block representatives");
            }

    GraphPtr q = MultiGraph::make_indexed(std::move(state_ids), std::move(edges));

    std::vector<int> qmap_edges(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
        qmap_edges[e] = class_index[p.block_of[g.edge(e).src]][phi.edge_map[e]];
    GraphHom quotient_map = GraphHom::make(phi.domain, q, std::move(qmap_edges), p.block_of);

    std::vector<int> ind_states(nb);
    for (int b = 0; b < nb; ++b) ind_states[b] = phi.state_map[p.blocks[b][0]];
    GraphHom induced = GraphHom::make(q, phi.codomain, std::move(induced_edge), std::move(ind_states));

    auto c1 = check_right_resolver(quotient_map);
    auto c2 = check_right_resolver(induced);
    if (!c1.ok || !c2.ok)
        throw InternalCheckError("quotient factorization is not right-resolving: " +
                                 (c1.ok ? c2.diagnostic : c1.diagnostic));
    return {std::move(q), std::move(quotient_map), std::move(induced)};
}

bool parallel_equivalent(const GraphHom& phi1, const GraphHom& phi2) {
    if (phi1.domain.get() != phi2.domain.get() && !phi1.domain->same_structure(*phi2.domain))
        throw PreconditionError("parallel_equivalent: domains differ");
    if (phi1.codomain.get() != phi2.codomain.get() &&
        !phi1.codomain->same_structure(*phi2.codomain))
        throw PreconditionError("parallel_equivalent: codomains differ");
    require_right_resolver(phi1, "parallel_equivalent");
    require_right_resolver(phi2, "parallel_equivalent");
    if (phi1.state_map != phi2.state_map) return false;

    const MultiGraph& g = *phi1.domain;
    const MultiGraph& h = *phi1.codomain;

    // Group domain states by codomain state (fiber) once.
    std::vector<std::vector<int>> fibers(h.num_states());
    for (int s = 0; s < g.num_states(); ++s) fibers[phi1.state_map[s]].push_back(s);

    // For each codomain parallel class E_IJ(H), a post-permutation tau of the
    // class aligning the two maps exists iff the per-edge membership
    // signatures (which domain parallel classes map onto this edge) agree as
    // multisets.
    for (int i = 0; i < h.num_states(); ++i) {
        for (int j : h.followers(i)) {
            auto class_edges = h.edges_between(i, j);
            std::map<int, int> pos;  // codomain edge -> position in class
            for (size_t t = 0; t < class_edges.size(); ++t) pos[class_edges[t]] = static_cast<int>(t);
            std::vector<std::vector<int>> sig1(class_edges.size()), sig2(class_edges.size());
            int family = 0;
            for (int s : fibers[i]) {
                std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_target;
                for (int e : g.out_edges(s)) {
                    if (phi1.state_map[g.edge(e).dst] == j)
                        by_target[g.edge(e).dst].first.push_back(phi1.edge_map[e]);
                    if (phi2.state_map[g.edge(e).dst] == j)
                        by_target[g.edge(e).dst].second.push_back(phi2.edge_map[e]);
                }
                for (auto& [target, sets] : by_target) {
                    for (int a : sets.first) sig1[pos.at(a)].push_back(family);
                    for (int a : sets.second) sig2[pos.at(a)].push_back(family);
                    ++family;
                }
            }
            for (auto& v : sig1) std::sort(v.begin(), v.end());
            for (auto& v : sig2) std::sort(v.begin(), v.end());
            std::sort(sig1.begin(), sig1.end());
            std::sort(sig2.begin(), sig2.end());
            if (sig1 != sig2) return false;
        }
    }
    return true;
}

}  // namespace rrhom
