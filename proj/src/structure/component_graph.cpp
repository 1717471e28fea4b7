#include "tmt/component_graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tmt {

namespace {

// Iterative Tarjan; SCCs come out sinks first.
std::vector<std::vector<StateId>> tarjan(const RegionAutomaton& ra) {
    const std::size_t n = ra.size();
    const std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<StateId> stack;
    std::vector<std::vector<StateId>> sccs;
    std::size_t counter = 0;

    struct Frame {
        StateId v;
        std::size_t next_edge;
    };
    for (StateId root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            auto out = ra.outgoing(f.v);
            if (f.next_edge < out.size()) {
                StateId w = ra.transitions()[out[f.next_edge++]].target;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            StateId v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<StateId> scc;
                StateId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc.push_back(w);
                } while (w != v);
                std::sort(scc.begin(), scc.end());
                sccs.push_back(std::move(scc));
            }
        }
    }
    return sccs;
}

}  // namespace

ComponentGraph ComponentGraph::condense(const RegionAutomaton& ra) {
    ComponentGraph g;
    auto sccs = tarjan(ra);
    std::reverse(sccs.begin(), sccs.end());  // topological order: edges go to larger ids
    g.node_of_.assign(ra.size(), 0);
    for (NodeId id = 0; id < sccs.size(); ++id) {
        GraphNode node;
        node.states = std::move(sccs[id]);
        for (StateId s : node.states) {
            g.node_of_[s] = id;
            node.has_final = node.has_final || ra.is_final(s);
            node.has_initial = node.has_initial || ra.is_initial(s);
        }
        if (node.states.size() == 1) {
            StateId s = node.states.front();
            bool self_loop = false;
            for (auto i : ra.outgoing(s)) self_loop = self_loop || ra.transitions()[i].target == s;
            node.transient = !self_loop;
        }
        if (node.has_initial) g.initial_.push_back(id);
        g.nodes_.push_back(std::move(node));
    }
    std::vector<std::set<NodeId>> succ(g.nodes_.size());
    for (const auto& t : ra.transitions()) {
        NodeId a = g.node_of_[t.source], b = g.node_of_[t.target];
        if (a != b) succ[a].insert(b);
    }
    for (auto& s : succ) g.succ_.emplace_back(s.begin(), s.end());

    // best[n]: extended components on the longest path starting at n.
    std::vector<std::size_t> best(g.nodes_.size(), 0);
    for (NodeId n = g.nodes_.size(); n-- > 0;) {
        std::size_t tail = 0;
        for (NodeId m : g.succ_[n]) tail = std::max(tail, best[m]);
        best[n] = g.nodes_[n].transient ? std::max<std::size_t>(1, tail) : 1 + tail;
    }
    for (NodeId n : g.initial_) g.diameter_ = std::max(g.diameter_, best[n]);
    return g;
}

std::vector<NodeId> ComponentGraph::components() const {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < nodes_.size(); ++n)
        if (!nodes_[n].transient) out.push_back(n);
    return out;
}

std::vector<StateId> ComponentGraph::transient_states() const {
    std::vector<StateId> out;
    for (const auto& n : nodes_)
        if (n.transient) out.push_back(n.states.front());
    return out;
}

std::size_t ComponentGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& s : succ_) total += s.size();
    return total;
}

std::vector<ExtendedComponent> PathPi::bar_form(const ComponentGraph& g) const {
    std::vector<ExtendedComponent> out;
    ExtendedComponent cur;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const GraphNode& node = g.node(nodes[i]);
        if (node.transient) {
            cur.prefix.push_back(node.states.front());
            continue;
        }
        cur.component = nodes[i];
        cur.exit_state = exits[i];
        out.push_back(std::move(cur));
        cur = ExtendedComponent{};
    }
    if (!cur.prefix.empty()) out.push_back(std::move(cur));
    return out;
}

PathEnumeration enumerate_paths(const ComponentGraph& g, const RegionAutomaton& ra, std::size_t cap) {
    PathEnumeration result;
    std::vector<NodeId> path;

    auto exit_candidates = [&](NodeId from, NodeId to) {
        std::vector<StateId> out;
        for (StateId s : g.node(from).states)
            for (auto i : ra.outgoing(s))
                if (g.node_of(ra.transitions()[i].target) == to) {
                    out.push_back(s);
                    break;
                }
        return out;
    };

    auto emit = [&]() {
        std::vector<std::vector<std::optional<StateId>>> choices(path.size());
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (g.node(path[i]).transient || i + 1 == path.size()) {
                choices[i].push_back(std::nullopt);
            } else {
                for (StateId s : exit_candidates(path[i], path[i + 1])) choices[i].push_back(s);
            }
        }
        std::vector<std::size_t> pick(path.size(), 0);
        while (true) {
            if (result.paths.size() >= cap) {
                result.truncated = true;
                return;
            }
            PathPi p;
            p.nodes = path;
            for (std::size_t i = 0; i < path.size(); ++i) p.exits.push_back(choices[i][pick[i]]);
            result.paths.push_back(std::move(p));
            std::size_t i = 0;
            while (i < path.size() && pick[i] + 1 == choices[i].size()) pick[i++] = 0;
            if (i == path.size()) return;
            ++pick[i];
        }
    };

    std::function<void(NodeId)> dfs = [&](NodeId n) {
        if (result.truncated) return;
        path.push_back(n);
        if (g.node(n).has_final) emit();
        for (NodeId m : g.successors(n)) dfs(m);
        path.pop_back();
    };
    for (NodeId n : g.initial_nodes()) dfs(n);
    return result;
}

}  // namespace tmt
