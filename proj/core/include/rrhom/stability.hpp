#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rrhom/hom.hpp"

namespace rrhom {

/// Transition I' . u: the terminal state of the unique phi-lift at state I' of
/// the codomain word u (a sequence of codomain edge indices forming a path
/// from the image of I'). The empty word returns I'. Throws PreconditionError
/// when u is not such a path.
int transition(const ResolverTable& table, int state, std::span<const int> word);
int transition(const GraphHom& phi, int state, std::span<const int> word);

/// Fiber product of two right-resolvers with a common codomain: states are
/// pairs sharing a codomain image, edges are pairs with equal images.
struct FiberProduct {
    GraphPtr product;
    GraphHom proj1, proj2;  // coordinate projections, right-resolving
    GraphHom to_base;       // psi_i . proj_i (equal for i = 1, 2)
    std::vector<std::pair<int, int>> state_pairs;  // product state -> component states

    /// Product state index of (i1, i2), or -1 when the pair shares no image.
    int pair_index(int i1, int i2) const;

private:
    friend FiberProduct fiber_product(const GraphHom&, const GraphHom&);
    std::vector<std::vector<int>> index_;
};

FiberProduct fiber_product(const GraphHom& psi1, const GraphHom& psi2);

/// The stability relation of a right-resolver, as a partition of the domain
/// states refining the fiber partition. Always a congruence.
struct StabilityRelation {
    Partition partition;
    bool nontrivial() const {
        return partition.num_blocks() < partition.graph->num_states();
    }
};

/// Algorithm: in P = G x_{phi,phi} G, U is the set of product states with no
/// path to the diagonal; the stable pairs are the product states with no path
/// to U. Transitivity of the result is asserted, not assumed.
StabilityRelation stability_relation(const GraphHom& phi);

/// True iff the stability classes of phi are exactly its fibers.
bool is_synchronizing(const GraphHom& phi);

/// A codomain word u from codomain_state with |fiber . u| = 1, built greedily
/// from shortest pair-merging words; length at most |fiber| * |V(P)|. Throws
/// PreconditionError when phi is not synchronizing.
std::vector<int> synchronizing_word(const GraphHom& phi, int codomain_state);

/// A fiber image together with the word that produced it.
struct ImageSet {
    int base_state;          // codomain state the word ends at
    std::vector<int> word;   // codomain edge indices from the starting fiber
    std::vector<int> image;  // domain states, ascending
};

/// Subset-construction BFS from the full fiber of codomain_state; returns the
/// images lying in terminal strong components of the subset graph (the images
/// whose size can never drop again), each with a witness word. Desk scale:
/// throws BudgetError when the fiber exceeds fiber_guard or the subset graph
/// exceeds 2^fiber_guard nodes.
std::vector<ImageSet> minimal_images_bruteforce(const GraphHom& phi, int codomain_state,
                                                int fiber_guard = 12);

struct CommonSyncExtension {
    GraphPtr graph;      // a principal component of the fiber product
    GraphHom to_g1, to_g2;  // restricted projections, verified synchronizing
};

/// Common synchronizing extension of two synchronizers with the same codomain
/// and strongly connected domains, via a principal component of their fiber
/// product with state-surjective projections.
CommonSyncExtension common_sync_extension(const GraphHom& psi1, const GraphHom& psi2);

}  // namespace rrhom
