#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace ordermech {

using ItemId = int;

// Dominance DAG over interests. An edge (worse, better) means `better` is
// immediately preferred over `worse`; the stored edge list is the minimal
// (transitively reduced) relation.
class ItemPoset {
public:
    ItemPoset() = default;
    ItemPoset(std::vector<std::string> labels, std::vector<std::pair<ItemId, ItemId>> edges);

    size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(ItemId g) const { return labels_.at(g); }
    ItemId id_of(const std::string& label) const;
    const std::vector<std::pair<ItemId, ItemId>>& edges() const { return edges_; }

    // Structural audit: returns human-readable defects (cycles, transitive
    // edges, duplicate labels). Empty result means the poset is valid.
    std::vector<std::string> validate() const;

    // Drops transitive edges from an acyclic edge list. Returns the number
    // of edges removed.
    int reduce_to_minimal();

    // N+(g): items immediately better than g.
    std::set<ItemId> successors(ItemId g) const;
    // N-(g): items for which g is immediately better.
    std::set<ItemId> predecessors(ItemId g) const;

    bool dominates(ItemId better, ItemId worse) const;  // strict, transitive
    int max_out_degree() const;
    std::vector<ItemId> topo_order() const;  // worse items before better ones
    // Reverse depth: number of edges on the longest path to a sink.
    std::vector<int> reverse_depth() const;
    std::vector<ItemId> sinks() const;
    std::vector<ItemId> sources() const;

private:
    std::vector<std::string> labels_;
    std::vector<std::pair<ItemId, ItemId>> edges_;
    mutable std::vector<std::vector<char>> reach_;  // memoized transitive closure

    void ensure_closure() const;
    bool has_cycle() const;
};

// App-F translation: each interest becomes a bundle of synthetic ground
// items so that set inclusion reproduces the dominance order exactly.
struct BundleMap {
    std::vector<std::set<int>> assignment;  // indexed by ItemId
};

BundleMap to_single_minded(const ItemPoset& poset);

}  // namespace ordermech
