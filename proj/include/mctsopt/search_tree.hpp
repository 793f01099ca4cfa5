#ifndef MCTSOPT_SEARCH_TREE_HPP
#define MCTSOPT_SEARCH_TREE_HPP

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mctsopt/sense.hpp"

namespace mctsopt {

/// Lifecycle of a child link. Deleted subtrees were proven unable to improve
/// the incumbent, beam-dropped ones lost their stage's beam selection. Both
/// are permanently untraversable; the distinction only matters for reporting.
enum class LinkState : std::uint8_t { Active, Deleted, BeamDropped };

/// Partial search-space tree grown one node per completed iteration.
///
/// Nodes live in a pool and are never physically freed; deletion and beam
/// narrowing only flip the state of the incoming edge (lazy deletion). An
/// edge exists for every value of the reduced domain of its parent, whether
/// or not the child node has been materialized yet.
template <typename Bound>
class SearchTree {
public:
    using NodeId = std::uint32_t;
    static constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

    struct Edge {
        int value = 0;                 // decision value this edge assigns
        NodeId child = kNoNode;        // materialized child, if any
        std::uint64_t visits = 0;
        double averageObjective = 0.0; // running mean over completed iterations
        LinkState state = LinkState::Active;
    };

    struct Node {
        NodeId parent = kNoNode;
        std::uint32_t parentEdge = 0;
        std::uint32_t depth = 0;
        std::uint64_t visits = 0;
        std::optional<Bound> bound; // set once at expansion, never recomputed
        std::vector<Edge> edges;    // in reduced-domain order
    };

    explicit SearchTree(std::size_t maxDepth)
        : byDepth_(maxDepth + 1)
    {
        nodes_.push_back(Node{});
        byDepth_[0].push_back(0);
    }

    NodeId root() const { return 0; }
    bool rootDeleted() const { return rootDeleted_; }

    Node& node(NodeId id) { return nodes_[id]; }
    const Node& node(NodeId id) const { return nodes_[id]; }
    std::size_t nodeCount() const { return nodes_.size(); }
    std::span<const NodeId> nodesAtDepth(std::uint32_t depth) const { return byDepth_[depth]; }

    /// Creates the child node behind `edgeIndex` of `parent`.
    NodeId materialize(NodeId parent, std::uint32_t edgeIndex)
    {
        Node& p = nodes_[parent];
        assert(edgeIndex < p.edges.size() && p.edges[edgeIndex].child == kNoNode);
        const NodeId id = static_cast<NodeId>(nodes_.size());
        Node child;
        child.parent = parent;
        child.parentEdge = edgeIndex;
        child.depth = p.depth + 1;
        nodes_.push_back(std::move(child));
        nodes_[parent].edges[edgeIndex].child = id;
        byDepth_[nodes_[id].depth].push_back(id);
        return id;
    }

    /// Marks `id` deleted and cascades upward: a parent left without active
    /// children is deleted as well, up to the root. Root deletion means the
    /// reduced search space is exhausted.
    void remove(NodeId id)
    {
        for (;;) {
            const Node& n = nodes_[id];
            if (n.parent == kNoNode) {
                rootDeleted_ = true;
                return;
            }
            nodes_[n.parent].edges[n.parentEdge].state = LinkState::Deleted;
            if (hasActiveChild(n.parent))
                return;
            id = n.parent;
        }
    }

    bool hasActiveChild(NodeId id) const
    {
        const Node& n = nodes_[id];
        return std::any_of(n.edges.begin(), n.edges.end(),
                           [](const Edge& e) { return e.state == LinkState::Active; });
    }

    /// Credits one completed iteration to every node and edge along the path.
    /// `pathEdges` holds (node, edge index) pairs from the root downward and
    /// `expansion` is the node the iteration was expanded at.
    void backpropagate(std::span<const std::pair<NodeId, std::uint32_t>> pathEdges,
                       NodeId expansion, double objective)
    {
        for (const auto& [nodeId, edgeIndex] : pathEdges) {
            nodes_[nodeId].visits += 1;
            Edge& e = nodes_[nodeId].edges[edgeIndex];
            e.visits += 1;
            e.averageObjective += (objective - e.averageObjective) / static_cast<double>(e.visits);
        }
        nodes_[expansion].visits += 1;
    }

    /// Keeps the `width` most promising visited nodes at `depth` and drops
    /// everything else at that depth, including children never visited during
    /// the stage (they have no average to be promising by). Survivors are
    /// ranked by incoming-edge average objective, ties by creation order.
    void applyBeam(std::uint32_t depth, std::uint32_t width, ObjectiveSense sense)
    {
        assert(depth >= 1 && depth < byDepth_.size());

        std::vector<NodeId> candidates;
        for (NodeId id : byDepth_[depth]) {
            const Edge& in = incomingEdge(id);
            if (in.state == LinkState::Active && in.visits >= 1)
                candidates.push_back(id);
        }
        if (candidates.size() > width) {
            std::stable_sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
                const double avgA = incomingEdge(a).averageObjective;
                const double avgB = incomingEdge(b).averageObjective;
                return sense == ObjectiveSense::Minimize ? avgA < avgB : avgA > avgB;
            });
            for (std::size_t i = width; i < candidates.size(); ++i)
                incomingEdge(candidates[i]).state = LinkState::BeamDropped;
        }

        for (NodeId id : byDepth_[depth - 1])
            for (Edge& e : nodes_[id].edges)
                if (e.state == LinkState::Active && e.visits == 0)
                    e.state = LinkState::BeamDropped;
    }

private:
    Edge& incomingEdge(NodeId id)
    {
        Node& n = nodes_[id];
        return nodes_[n.parent].edges[n.parentEdge];
    }

    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> byDepth_;
    bool rootDeleted_ = false;
};

} // namespace mctsopt

#endif
