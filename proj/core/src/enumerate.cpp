#include "rrhom/enumerate.hpp"

#include <algorithm>
#include <map>

namespace rrhom {

ResolverClassEnumerator::ResolverClassEnumerator(GraphPtr g, GraphPtr h,
                                                 std::vector<int> state_map)
    : g_(std::move(g)), h_(std::move(h)), state_map_(std::move(state_map)) {
    if (static_cast<int>(state_map_.size()) != g_->num_states())
        throw ValidationError("state map size mismatch");
    for (int s = 0; s < g_->num_states(); ++s) {
        int hs = state_map_[s];
        if (hs < 0 || hs >= h_->num_states()) throw ValidationError("state map out of range");
        for (int hj = 0; hj < h_->num_states(); ++hj) {
            int need = h_->count_edges(hs, hj);
            int have = 0;
            for (int e : g_->out_edges(s))
                if (state_map_[g_->edge(e).dst] == hj) ++have;
            if (need != have) {
                valid_ = false;  // no right-resolver has this state map
                return;
            }
            if (need == 0) continue;
            Unit u;
            u.state = s;
            u.slots = h_->edges_between(hs, hj);
            for (int t : g_->followers(s))
                if (state_map_[t] == hj)
                    u.targets.insert(u.targets.end(), g_->count_edges(s, t), t);
            std::sort(u.targets.begin(), u.targets.end());
            units_.push_back(std::move(u));
        }
    }
    // Surjectivity on states (edges follow from the count bookkeeping).
    std::vector<bool> hit(h_->num_states(), false);
    for (int s : state_map_) hit[s] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) valid_ = false;
}

std::optional<unsigned long long> ResolverClassEnumerator::count() const {
    if (!valid_) return 0ull;
    unsigned long long total = 1;
    for (const auto& u : units_) {
        // Multinomial: arrangements of the target multiset over the slots.
        unsigned long long arrangements = 1, denom = 1;
        std::map<int, int> mult;
        for (int t : u.targets) mult[t]++;
        int k = 0;
        for (int t : u.targets) {
            (void)t;
            ++k;
            if (arrangements > ~0ull / k) return std::nullopt;
            arrangements *= k;
        }
        for (auto& [_, c] : mult)
            for (int i = 2; i <= c; ++i) denom *= i;
        arrangements /= denom;
        if (total > 0 && arrangements > 0 && total > ~0ull / arrangements) return std::nullopt;
        total *= arrangements;
    }
    return total;
}

GraphHom ResolverClassEnumerator::materialize() const {
    std::vector<int> edge_map(g_->num_edges(), -1);
    // Per (state, target) cursor into the parallel class, consumed in slot
    // order so that each class gets exactly one representative.
    std::map<std::pair<int, int>, int> cursor;
    for (const auto& u : units_) {
        for (size_t t = 0; t < u.slots.size(); ++t) {
            int target = u.targets[t];
            int& cur = cursor[{u.state, target}];
            auto parallel = g_->edges_between(u.state, target);
            edge_map[parallel[cur++]] = u.slots[t];
        }
    }
    GraphHom out = GraphHom::make(g_, h_, std::move(edge_map), state_map_);
    auto chk = check_right_resolver(out);
    if (!chk.ok)
        throw InternalCheckError("enumerated representative is not right-resolving: " +
                                 chk.diagnostic);
    return out;
}

std::optional<GraphHom> ResolverClassEnumerator::next() {
    if (!valid_ || exhausted_) return std::nullopt;
    GraphHom out = materialize();
    // Advance the odometer of multiset permutations.
    size_t u = 0;
    for (; u < units_.size(); ++u) {
        if (std::next_permutation(units_[u].targets.begin(), units_[u].targets.end())) break;
        // wrapped to the sorted arrangement; carry on
    }
    if (u == units_.size()) exhausted_ = true;
    return out;
}

}  // namespace rrhom
