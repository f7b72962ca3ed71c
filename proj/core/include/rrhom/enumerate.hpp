#pragma once

#include <optional>
#include <vector>

#include "rrhom/hom.hpp"

namespace rrhom {

/// Enumerates right-resolvers G -> H with a fixed state map, one
/// representative per class under pre-composition with parallel-edge
/// permutations of the domain. Within a class, only the induced transition
/// targets differ by nothing: a class is the data of, for each domain state
/// and each codomain edge at its image, the target state the edge pulls back
/// to. Enumeration walks all arrangements of each state's target multiset
/// over the corresponding codomain parallel class.
///
/// If the state map admits no right-resolver at all, the enumeration is
/// empty.
class ResolverClassEnumerator {
public:
    ResolverClassEnumerator(GraphPtr g, GraphPtr h, std::vector<int> state_map);

    /// Total number of classes; nullopt on overflow.
    std::optional<unsigned long long> count() const;

    /// Next representative, or nullopt when exhausted.
    std::optional<GraphHom> next();

private:
    struct Unit {
        int state;                 // domain state I'
        std::vector<int> slots;    // E_{sigma(I') J}(H) in declaration order
        std::vector<int> targets;  // current arrangement of followers of I' in the fiber of J
    };
    GraphPtr g_, h_;
    std::vector<int> state_map_;
    std::vector<Unit> units_;
    bool valid_ = true;
    bool exhausted_ = false;

    GraphHom materialize() const;
};

}  // namespace rrhom
