#ifndef MCTSOPT_QCSP_HPP
#define MCTSOPT_QCSP_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mctsopt/sense.hpp"

namespace mctsopt::qcsp {

/// Quay crane scheduling instance: n bays with integer processing times,
/// m cranes placed left to right. Suffix maxima and sums over the processing
/// times are precomputed once so both lower bounds evaluate in O(1).
struct Instance {
    int bays = 0;   // n
    int cranes = 0; // m
    std::vector<std::int64_t> processing;
    std::vector<std::int64_t> suffixMaxP; // size n+1, suffixMaxP[b] = max p[b..n-1]
    std::vector<std::int64_t> suffixSumP; // size n+1

    Instance() = default;
    Instance(int craneCount, std::vector<std::int64_t> processingTimes);
};

/// Search state after fixing the crane of the first b bays. Only the current
/// earliestTime column and the accumulated slack are needed to extend the
/// prefix, bound it, or reduce the next domain.
struct State {
    std::vector<int> prefix;           // sigma_0 .. sigma_{b-1}
    std::vector<std::int64_t> column;  // earliestTime[.][b-1], size m, non-increasing
    std::int64_t slackSum = 0;         // sum_{i>=1} (column[0] - column[i])

    std::size_t level() const { return prefix.size(); }
};

/// Full earliestTime matrix of a complete assignment plus the makespan.
struct EarliestTimes {
    int cranes = 0;
    int bays = 0;
    std::vector<std::int64_t> values; // row-major, cranes x bays
    std::int64_t makespan = 0;

    std::int64_t at(int crane, int bay) const
    {
        return values[static_cast<std::size_t>(crane) * bays + bay];
    }
};

/// Runs the earliestTime dynamic program over a complete assignment.
/// earliestTime[k][b] is the earliest instant crane k can move past bay b in
/// the move-ASAP left-to-right sweep; the makespan is earliestTime[0][n-1].
EarliestTimes earliestTimeFull(const Instance& instance, std::span<const int> sigma);

/// Completion time of every bay in the move-ASAP schedule (start = c_b - p_b).
std::vector<std::int64_t> completionTimes(const Instance& instance, std::span<const int> sigma,
                                          const EarliestTimes& times);

/// One inner-loop pass of the dynamic program: assigns `crane` to bay
/// `level()` and advances the column and slack in O(m).
void pushState(const Instance& instance, State& state, int crane);

/// max(LB1, LB2) over all completions of the state; the achieved makespan
/// once the prefix is complete. O(1) thanks to the precomputed suffixes.
std::int64_t lowerBound(const Instance& instance, const State& state);

/// Crane values available for the next bay, ascending. Encodes the push-left
/// and push-right constraints and drops crane k+1 whenever its column value
/// ties with crane k (a dominated assignment). Never empty while m <= n.
std::vector<int> reducedDomain(const Instance& instance, const State& state);

/// Completes the prefix by repeatedly committing the domain value whose
/// tentative lower bound is smallest (ties to the smallest crane index).
std::vector<int> heuristicComplete(const Instance& instance, const State& state);

/// Checks a complete assignment against the original model: push constraints,
/// plus non-crossing and in-between spacing for every pair of bays whose
/// processing intervals overlap (open intervals; touching is sequential).
/// Returns a description of the first violation, or nullopt when feasible.
std::optional<std::string> checkOriginalFeasible(const Instance& instance,
                                                 std::span<const int> sigma);

/// Instance generator of the benchmark family: processing times uniform in
/// [30, 100].
Instance generateInstance(int bays, int cranes, std::uint64_t seed);

/// Text format: line 1 "n m", line 2 the n processing times.
Instance parseInstance(const std::string& text);
std::string serializeInstance(const Instance& instance);

/// Engine adapter. Minimizes the makespan over the relaxation's search tree;
/// completions that are infeasible for the original model still backpropagate
/// their relaxation makespan, only the incumbent is gated on feasibility.
class Adapter {
public:
    using State = qcsp::State;
    using Objective = std::int64_t;
    using BoundValue = std::int64_t;

    explicit Adapter(Instance instance)
        : instance_(std::move(instance))
    {
    }

    ObjectiveSense sense() const { return ObjectiveSense::Minimize; }
    std::size_t depth() const { return static_cast<std::size_t>(instance_.bays); }
    State rootState() const;
    std::vector<int> reducedDomain(const State& state, std::size_t level) const;
    void applyValue(State& state, int crane) const { pushState(instance_, state, crane); }
    std::int64_t bound(const State& state) const { return lowerBound(instance_, state); }
    std::vector<int> heuristicComplete(const State& state) const
    {
        return qcsp::heuristicComplete(instance_, state);
    }
    std::int64_t objective(const std::vector<int>& sigma) const
    {
        return earliestTimeFull(instance_, sigma).makespan;
    }
    bool isOriginalFeasible(const std::vector<int>& sigma) const
    {
        return !checkOriginalFeasible(instance_, sigma).has_value();
    }

    const Instance& instance() const { return instance_; }

private:
    Instance instance_;
};

} // namespace mctsopt::qcsp

#endif
