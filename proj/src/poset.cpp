#include "ordermech/poset.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace ordermech {

ItemPoset::ItemPoset(std::vector<std::string> labels,
                     std::vector<std::pair<ItemId, ItemId>> edges)
    : labels_(std::move(labels)), edges_(std::move(edges)) {
    for (auto& [w, b] : edges_)
        if (w < 0 || b < 0 || w >= static_cast<ItemId>(labels_.size()) ||
            b >= static_cast<ItemId>(labels_.size()))
            throw std::invalid_argument("poset: edge references unknown item");
}

ItemId ItemPoset::id_of(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<ItemId>(i);
    throw std::invalid_argument("poset: unknown item label '" + label + "'");
}

bool ItemPoset::has_cycle() const {
    std::vector<int> state(size(), 0);
    std::vector<std::vector<ItemId>> adj(size());
    for (auto& [w, b] : edges_) adj[w].push_back(b);
    std::function<bool(ItemId)> dfs = [&](ItemId u) {
        state[u] = 1;
        for (ItemId v : adj[u]) {
            if (state[v] == 1) return true;
            if (state[v] == 0 && dfs(v)) return true;
        }
        state[u] = 2;
        return false;
    };
    for (size_t u = 0; u < size(); ++u)
        if (state[u] == 0 && dfs(static_cast<ItemId>(u))) return true;
    return false;
}

void ItemPoset::ensure_closure() const {
    if (!reach_.empty()) return;
    size_t n = size();
    reach_.assign(n, std::vector<char>(n, 0));
    std::vector<std::vector<ItemId>> adj(n);
    for (auto& [w, b] : edges_) adj[w].push_back(b);
    std::function<void(ItemId, ItemId)> mark = [&](ItemId root, ItemId u) {
        for (ItemId v : adj[u]) {
            if (!reach_[root][v]) {
                reach_[root][v] = 1;
                mark(root, v);
            }
        }
    };
    for (size_t u = 0; u < n; ++u) mark(static_cast<ItemId>(u), static_cast<ItemId>(u));
}

std::vector<std::string> ItemPoset::validate() const {
    std::vector<std::string> defects;
    std::map<std::string, int> seen;
    for (auto& l : labels_)
        if (++seen[l] == 2) defects.push_back("duplicate label '" + l + "'");
    std::set<std::pair<ItemId, ItemId>> eset;
    for (auto& e : edges_) {
        if (e.first == e.second)
            defects.push_back("self-loop at '" + label(e.first) + "'");
        if (!eset.insert(e).second)
            defects.push_back("duplicate edge (" + label(e.first) + "," + label(e.second) + ")");
    }
    if (has_cycle()) {
        defects.push_back("cycle in dominance relation");
        return defects;  // closure-based checks would not terminate sensibly
    }
    // Minimality: an edge (w,b) is transitive if some other path w -> b exists.
    for (auto& [w, b] : edges_) {
        std::vector<std::vector<ItemId>> adj(size());
        for (auto& e : edges_)
            if (!(e.first == w && e.second == b)) adj[e.first].push_back(e.second);
        std::vector<char> vis(size(), 0);
        std::function<bool(ItemId)> dfs = [&](ItemId u) {
            if (u == b) return true;
            vis[u] = 1;
            for (ItemId v : adj[u])
                if (!vis[v] && dfs(v)) return true;
            return false;
        };
        if (dfs(w))
            defects.push_back("transitive edge (" + label(w) + "," + label(b) + ")");
    }
    return defects;
}

int ItemPoset::reduce_to_minimal() {
    if (has_cycle()) throw std::invalid_argument("poset: cannot reduce a cyclic relation");
    int removed = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < edges_.size(); ++i) {
            auto [w, b] = edges_[i];
            std::vector<std::vector<ItemId>> adj(size());
            for (size_t j = 0; j < edges_.size(); ++j)
                if (j != i) adj[edges_[j].first].push_back(edges_[j].second);
            std::vector<char> vis(size(), 0);
            std::function<bool(ItemId)> dfs = [&](ItemId u) {
                if (u == b) return true;
                vis[u] = 1;
                for (ItemId v : adj[u])
                    if (!vis[v] && dfs(v)) return true;
                return false;
            };
            if (dfs(w)) {
                edges_.erase(edges_.begin() + i);
                ++removed;
                changed = true;
                break;
            }
        }
    }
    reach_.clear();
    return removed;
}

std::set<ItemId> ItemPoset::successors(ItemId g) const {
    if (g < 0 || g >= static_cast<ItemId>(size()))
        throw std::invalid_argument("poset: unknown item id");
    std::set<ItemId> out;
    for (auto& [w, b] : edges_)
        if (w == g) out.insert(b);
    return out;
}

std::set<ItemId> ItemPoset::predecessors(ItemId g) const {
    if (g < 0 || g >= static_cast<ItemId>(size()))
        throw std::invalid_argument("poset: unknown item id");
    std::set<ItemId> out;
    for (auto& [w, b] : edges_)
        if (b == g) out.insert(w);
    return out;
}

bool ItemPoset::dominates(ItemId better, ItemId worse) const {
    ensure_closure();
    return reach_[worse][better] != 0;
}

int ItemPoset::max_out_degree() const {
    std::vector<int> deg(size(), 0);
    for (auto& [w, b] : edges_) ++deg[w];
    int m = 0;
    for (int d : deg) m = std::max(m, d);
    return m;
}

std::vector<ItemId> ItemPoset::topo_order() const {
    std::vector<int> indeg(size(), 0);
    std::vector<std::vector<ItemId>> adj(size());
    for (auto& [w, b] : edges_) {
        adj[w].push_back(b);
        ++indeg[b];
    }
    std::vector<ItemId> order, queue;
    for (size_t u = 0; u < size(); ++u)
        if (indeg[u] == 0) queue.push_back(static_cast<ItemId>(u));
    std::sort(queue.begin(), queue.end());
    while (!queue.empty()) {
        ItemId u = queue.front();
        queue.erase(queue.begin());
        order.push_back(u);
        for (ItemId v : adj[u])
            if (--indeg[v] == 0) {
                queue.push_back(v);
                std::sort(queue.begin(), queue.end());
            }
    }
    if (order.size() != size()) throw std::logic_error("poset: topo_order on cyclic input");
    return order;
}

std::vector<int> ItemPoset::reverse_depth() const {
    std::vector<int> depth(size(), 0);
    auto order = topo_order();
    // walk better-to-worse: depth of g = 1 + max depth of successors
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int d = 0;
        for (ItemId s : successors(*it)) d = std::max(d, depth[s] + 1);
        depth[*it] = d;
    }
    return depth;
}

std::vector<ItemId> ItemPoset::sinks() const {
    std::vector<ItemId> out;
    for (size_t u = 0; u < size(); ++u)
        if (successors(static_cast<ItemId>(u)).empty()) out.push_back(static_cast<ItemId>(u));
    return out;
}

std::vector<ItemId> ItemPoset::sources() const {
    std::vector<ItemId> out;
    for (size_t u = 0; u < size(); ++u)
        if (predecessors(static_cast<ItemId>(u)).empty()) out.push_back(static_cast<ItemId>(u));
    return out;
}

BundleMap to_single_minded(const ItemPoset& poset) {
    BundleMap bm;
    bm.assignment.assign(poset.size(), {});
    int next_ground = 0;
    // Worse items first: each interest gets a fresh ground item plus the
    // union of the bundles of everything it dominates.
    for (ItemId g : poset.topo_order()) {
        std::set<int> bundle{next_ground++};
        for (ItemId p : poset.predecessors(g))
            bundle.insert(bm.assignment[p].begin(), bm.assignment[p].end());
        bm.assignment[g] = std::move(bundle);
    }
    return bm;
}

}  // namespace ordermech
