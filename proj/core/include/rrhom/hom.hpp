#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rrhom/graph.hpp"

namespace rrhom {

/// A graph homomorphism: an edge map and a state map commuting with source
/// and target. May or may not be right-resolving. Construction through make()
/// validates the commutation equations.
struct GraphHom {
    GraphPtr domain;
    GraphPtr codomain;
    std::vector<int> edge_map;   // E(domain) -> E(codomain)
    std::vector<int> state_map;  // V(domain) -> V(codomain)

    static GraphHom make(GraphPtr domain, GraphPtr codomain, std::vector<int> edge_map,
                         std::vector<int> state_map);

    int map_state(int s) const { return state_map[s]; }
    int map_edge(int e) const { return edge_map[e]; }
};

GraphHom identity_hom(const GraphPtr& g);

struct ResolverCheck {
    bool ok = false;
    std::string diagnostic;  // names the first violation when !ok
    explicit operator bool() const { return ok; }
};

/// True iff the homomorphism is surjective on states and edges and restricts
/// to a bijection E_I -> E_{state_map(I)} at every state I.
ResolverCheck check_right_resolver(const GraphHom& h);

/// Throwing variant of check_right_resolver for preconditions.
void require_right_resolver(const GraphHom& h, const std::string& context);

/// Composition outer . inner. Requires inner.codomain and outer.domain to be
/// the same graph (same structure). Right-resolving whenever both inputs are.
GraphHom compose(const GraphHom& outer, const GraphHom& inner);

/// Per-state lift tables of a verified right-resolver: the inverse of the
/// per-state out-edge bijections, used for transitions and fiber products.
class ResolverTable {
public:
    explicit ResolverTable(GraphHom hom);

    const GraphHom& hom() const { return hom_; }
    /// The unique domain edge at `state` mapping to codomain edge `h_edge`,
    /// or -1 when `h_edge` does not start at the image of `state`.
    int lift(int state, int h_edge) const;
    /// Target of the lifted edge, or -1.
    int step(int state, int h_edge) const;
    /// Fiber of a codomain state, ascending.
    const std::vector<int>& fiber(int h_state) const { return fibers_[h_state]; }

private:
    GraphHom hom_;
    std::vector<std::vector<std::pair<int, int>>> lifts_;  // per state, (h_edge, g_edge) sorted
    std::vector<std::vector<int>> fibers_;
};

/// An equivalence relation on the states of one graph, as disjoint blocks
/// covering V(graph). Blocks are normalized: ordered by smallest member,
/// members ascending.
struct Partition {
    GraphPtr graph;
    std::vector<int> block_of;            // state -> block
    std::vector<std::vector<int>> blocks;

    static Partition from_block_assignment(GraphPtr g, const std::vector<int>& block_of);
    static Partition from_blocks(GraphPtr g, std::vector<std::vector<int>> blocks);
    static Partition discrete(const GraphPtr& g);
    static Partition single_block(const GraphPtr& g);
    /// The fiber partition of a right-resolver's state map.
    static Partition fibers_of(const GraphHom& h);

    int num_blocks() const { return static_cast<int>(blocks.size()); }
    bool is_discrete() const { return num_blocks() == graph->num_states(); }
    bool same_blocks(const Partition& other) const { return block_of == other.block_of; }
    /// True iff every block of *this is contained in a block of coarser.
    bool refines(const Partition& coarser) const;
};

/// True iff p refines the fiber partition of phi and is closed under every
/// single-edge transition (closure under words follows by induction).
/// phi must be right-resolving.
bool is_congruence(const Partition& p, const GraphHom& phi);

struct QuotientResult {
    GraphPtr graph;        // domain / p
    GraphHom quotient_map; // domain -> quotient, right-resolving
    GraphHom induced;      // quotient -> phi.codomain, right-resolving; induced . quotient_map = phi
};

/// Quotient of phi.domain by a congruence p. Quotient states are blocks
/// (singleton blocks keep the state's id); quotient edges are the classes of
/// the edge relation e1 ~ e2 iff phi(e1) = phi(e2) and s(e1) ~ s(e2), named
/// after their smallest representative.
QuotientResult quotient_by_congruence(const GraphHom& phi, const Partition& p);

/// True iff phi1 = tau . phi2 . sigma for permutations sigma of parallel edges
/// of the domain and tau of parallel edges of the codomain. Decided by
/// collapse-and-compare on per-parallel-class membership signatures rather
/// than by searching for sigma, tau. Both maps must be right-resolving with
/// equal domains and codomains.
bool parallel_equivalent(const GraphHom& phi1, const GraphHom& phi2);

}  // namespace rrhom
