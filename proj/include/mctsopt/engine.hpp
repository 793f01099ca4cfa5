#ifndef MCTSOPT_ENGINE_HPP
#define MCTSOPT_ENGINE_HPP

#include <cassert>
#include <chrono>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mctsopt/search_tree.hpp"
#include "mctsopt/selection.hpp"
#include "mctsopt/sense.hpp"

namespace mctsopt {

/// Contract a problem must satisfy to be solved by the engine.
///
/// Requirements beyond the signatures:
///  - bound(s) must bound every completion of s from below (Minimize) or
///    above (Maximize),
///  - reducedDomain may only drop values whose exclusion keeps at least one
///    optimal completion reachable, and never returns an empty list for
///    levels below depth(),
///  - heuristicComplete must be deterministic.
template <typename A>
concept ProblemAdapter = requires(const A a, typename A::State s, const typename A::State cs,
                                  const std::vector<int>& solution) {
    typename A::State;
    typename A::Objective;
    typename A::BoundValue;
    { a.sense() } -> std::same_as<ObjectiveSense>;
    { a.depth() } -> std::convertible_to<std::size_t>;
    { a.rootState() } -> std::same_as<typename A::State>;
    { a.reducedDomain(cs, std::size_t{}) } -> std::same_as<std::vector<int>>;
    { a.applyValue(s, int{}) };
    { a.bound(cs) } -> std::same_as<typename A::BoundValue>;
    { a.heuristicComplete(cs) } -> std::same_as<std::vector<int>>;
    { a.objective(solution) } -> std::same_as<typename A::Objective>;
    { a.isOriginalFeasible(solution) } -> std::same_as<bool>;
};

struct SearchParams {
    double timeBudgetSeconds = 10.0; // t
    std::uint32_t beamWidth = 10;    // w
    std::uint64_t seed = 0;
    // When set, replaces the stage clock by ceil(maxIterations/d) iterations
    // per stage with a global cap, for reproducible runs.
    std::optional<std::uint64_t> maxIterations;
};

template <typename Objective>
struct SolveReport {
    std::vector<int> bestSolution; // empty when no original-feasible completion was seen
    Objective bestObjective{};     // meaningful only when foundSolution()
    std::uint64_t iterationsCompleted = 0;
    std::uint64_t iterationsPruned = 0;
    std::uint64_t infeasibleCompletions = 0;
    bool exhausted = false;
    std::vector<double> perStageElapsed;           // wall seconds, zero in maxIterations mode
    std::vector<std::uint64_t> perStageIterations; // attempted iterations per stage

    bool foundSolution() const { return !bestSolution.empty(); }
};

/// Canonical text form of a report. Contains only deterministic fields, so
/// equal-seed runs in maxIterations mode serialize byte-identically.
template <typename Objective>
std::string serializeReport(const SolveReport<Objective>& report)
{
    std::ostringstream out;
    out << "objective ";
    if (report.foundSolution())
        out << report.bestObjective;
    else
        out << "none";
    out << "\nsolution";
    for (int v : report.bestSolution)
        out << ' ' << v;
    out << "\niterationsCompleted " << report.iterationsCompleted;
    out << "\niterationsPruned " << report.iterationsPruned;
    out << "\ninfeasibleCompletions " << report.infeasibleCompletions;
    out << "\nexhausted " << (report.exhausted ? 1 : 0);
    out << "\nstageIterations";
    for (std::uint64_t n : report.perStageIterations)
        out << ' ' << n;
    out << '\n';
    return out.str();
}

namespace detail {

template <ProblemAdapter A>
class Solver {
public:
    using Objective = typename A::Objective;
    using BoundValue = typename A::BoundValue;
    using Tree = SearchTree<BoundValue>;
    using NodeId = typename Tree::NodeId;

    Solver(const A& adapter, const SearchParams& params)
        : adapter_(adapter)
        , params_(params)
        , depth_(adapter.depth())
        , tree_(depth_)
        , rng_(params.seed)
    {
        assert(depth_ >= 1);
    }

    SolveReport<Objective> run()
    {
        using Clock = std::chrono::steady_clock;
        const bool iterMode = params_.maxIterations.has_value();
        const std::uint64_t totalBudget = iterMode ? *params_.maxIterations : 0;
        const std::uint64_t perStage =
            iterMode ? (totalBudget + depth_ - 1) / depth_ : 0;
        const auto stageDuration = std::chrono::duration<double>(
            params_.timeBudgetSeconds / static_cast<double>(depth_));

        std::uint64_t totalIterations = 0;
        for (std::size_t stage = 1; stage <= depth_; ++stage) {
            const auto stageStart = Clock::now();
            const auto deadline = stageStart + stageDuration;
            std::uint64_t stageIterations = 0;
            while (!tree_.rootDeleted()) {
                if (iterMode) {
                    if (stageIterations >= perStage || totalIterations >= totalBudget)
                        break;
                } else if (Clock::now() >= deadline) {
                    break;
                }
                runIteration();
                ++stageIterations;
                ++totalIterations;
            }
            report_.perStageIterations.push_back(stageIterations);
            report_.perStageElapsed.push_back(
                iterMode ? 0.0
                         : std::chrono::duration<double>(Clock::now() - stageStart).count());
            if (tree_.rootDeleted() || (iterMode && totalIterations >= totalBudget))
                break;
            if (stage < depth_)
                tree_.applyBeam(static_cast<std::uint32_t>(stage), params_.beamWidth,
                                adapter_.sense());
        }

        report_.exhausted = tree_.rootDeleted();
        if (!report_.foundSolution()) {
            // Worst-possible sentinel; the empty solution is the marker.
            report_.bestObjective = adapter_.sense() == ObjectiveSense::Minimize
                                        ? std::numeric_limits<Objective>::max()
                                        : std::numeric_limits<Objective>::lowest();
        }
        return std::move(report_);
    }

    const Tree& tree() const { return tree_; }

private:
    enum class Outcome { CompletedFeasible, CompletedInfeasible, Aborted };

    Outcome runIteration()
    {
        auto state = adapter_.rootState();
        std::vector<std::pair<NodeId, std::uint32_t>> pathEdges;
        NodeId current = tree_.root();

        for (;;) {
            auto& node = tree_.node(current);

            // Stored bounds are retested against the incumbent on every
            // traversal; failing nodes are pruned without stat updates.
            if (node.bound && incumbent_ &&
                !boundCanBeat(*node.bound, *incumbent_, adapter_.sense())) {
                tree_.remove(current);
                ++report_.iterationsPruned;
                return Outcome::Aborted;
            }

            if (node.visits == 0)
                return expandAndSimulate(current, state, pathEdges);

            // Selection among active children.
            std::vector<std::uint32_t> active;
            std::vector<ChildStat> stats;
            for (std::uint32_t i = 0; i < node.edges.size(); ++i) {
                const auto& e = node.edges[i];
                if (e.state == LinkState::Active) {
                    active.push_back(i);
                    stats.push_back(ChildStat{e.visits, e.averageObjective});
                }
            }
            if (active.empty()) {
                tree_.remove(current);
                ++report_.iterationsPruned;
                return Outcome::Aborted;
            }
            const std::size_t pick =
                selectIndex(stats, node.visits, adapter_.sense(), rng_);
            const std::uint32_t edgeIndex = active[pick];

            adapter_.applyValue(state, tree_.node(current).edges[edgeIndex].value);
            if (tree_.node(current).edges[edgeIndex].child == Tree::kNoNode)
                tree_.materialize(current, edgeIndex);
            pathEdges.emplace_back(current, edgeIndex);
            current = tree_.node(current).edges[edgeIndex].child;
        }
    }

    Outcome expandAndSimulate(NodeId current, const typename A::State& state,
                              std::span<const std::pair<NodeId, std::uint32_t>> pathEdges)
    {
        auto& node = tree_.node(current);
        assert(!node.bound);
        node.bound = adapter_.bound(state);
        if (incumbent_ && !boundCanBeat(*node.bound, *incumbent_, adapter_.sense())) {
            tree_.remove(current);
            ++report_.iterationsPruned;
            return Outcome::Aborted;
        }
        if (node.depth < depth_) {
            const auto domain = adapter_.reducedDomain(state, node.depth);
            assert(!domain.empty());
            node.edges.reserve(domain.size());
            for (int value : domain) {
                typename Tree::Edge e;
                e.value = value;
                node.edges.push_back(e);
            }
        }

        const std::vector<int> solution = adapter_.heuristicComplete(state);
        const Objective objective = adapter_.objective(solution);
        const bool feasible = adapter_.isOriginalFeasible(solution);

        tree_.backpropagate(pathEdges, current, static_cast<double>(objective));
        ++report_.iterationsCompleted;
        if (!feasible) {
            ++report_.infeasibleCompletions;
            return Outcome::CompletedInfeasible;
        }
        if (!incumbent_ || strictlyBetter(objective, *incumbent_, adapter_.sense())) {
            incumbent_ = objective;
            report_.bestSolution = solution;
            report_.bestObjective = objective;
        }
        return Outcome::CompletedFeasible;
    }

    const A& adapter_;
    SearchParams params_;
    std::size_t depth_;
    Tree tree_;
    std::mt19937_64 rng_;
    std::optional<Objective> incumbent_;
    SolveReport<Objective> report_;
};

} // namespace detail

/// Runs the staged anytime search and returns the best original-feasible
/// solution found. The search runs depth() stages of t/d seconds each (or a
/// fixed iteration budget), narrowing one tree level to the beam width after
/// each stage, and stops early once the root has been deleted by cascading
/// prunes (the reduced search space is then exhausted).
template <ProblemAdapter A>
SolveReport<typename A::Objective> solve(const A& adapter, const SearchParams& params)
{
    detail::Solver<A> solver(adapter, params);
    return solver.run();
}

} // namespace mctsopt

#endif
