#ifndef MCTSOPT_KNAPSACK_HPP
#define MCTSOPT_KNAPSACK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mctsopt/sense.hpp"

namespace mctsopt::knapsack {

struct Item {
    std::int64_t profit = 0;
    std::int64_t weight = 0;
};

/// Exact value of the Dantzig bound: whole + fracNum/fracDen with
/// 0 <= fracNum < fracDen. Kept rational because on instances with capacity
/// around 1e10 a double comparison against the incumbent could flip prune
/// decisions; the normalizing products need 128-bit intermediates.
struct FractionalBound {
    std::int64_t whole = 0;
    std::int64_t fracNum = 0;
    std::int64_t fracDen = 1;

    static FractionalBound exact(std::int64_t value) { return {value, 0, 1}; }
    /// base + profit*room/den with the product taken in 128 bits.
    static FractionalBound normalized(std::int64_t base, std::int64_t profit, std::int64_t room,
                                      std::int64_t den);

    double toDouble() const
    {
        return static_cast<double>(whole) +
               static_cast<double>(fracNum) / static_cast<double>(fracDen);
    }
    std::string toDecimalString(int digits = 6) const;
};

// With the fractional part normalized into [0, 1), comparisons against
// integers reduce to integer comparisons on the whole part.
inline bool operator<(const FractionalBound& b, std::int64_t v) { return b.whole < v; }

inline bool operator>(const FractionalBound& b, std::int64_t v)
{
    return b.whole > v || (b.whole == v && b.fracNum > 0);
}

inline bool operator>=(const FractionalBound& b, std::int64_t v) { return b.whole >= v; }
inline bool operator<=(const FractionalBound& b, std::int64_t v) { return !(b > v); }
inline bool operator==(const FractionalBound& b, std::int64_t v)
{
    return b.whole == v && b.fracNum == 0;
}

bool operator<(const FractionalBound& a, const FractionalBound& b);
inline bool operator>(const FractionalBound& a, const FractionalBound& b) { return b < a; }

/// 0-1 knapsack instance with items stored in non-increasing profit/weight
/// ratio order (compared by integer cross-multiplication, stable on ties).
/// originalIndex maps sorted position to input position. Standing
/// assumptions: every weight fits alone and the total weight exceeds the
/// capacity.
struct Instance {
    std::int64_t capacity = 0;
    std::vector<Item> items;                // ratio-sorted
    std::vector<std::int32_t> originalIndex; // sorted pos -> input pos
    std::vector<std::int64_t> prefixProfit; // size n+1, over sorted order
    std::vector<std::int64_t> prefixWeight; // size n+1

    int size() const { return static_cast<int>(items.size()); }
};

/// Validates the standing assumptions and builds the sorted instance.
Instance sortItems(const std::vector<Item>& rawItems, std::int64_t capacity);

/// Search state after deciding the first `level` items (sorted order).
/// breakCursor is the first item at or past the level that no longer fits
/// after greedily taking everything before it; it only moves right along a
/// path, which keeps the whole path's bound computations in O(n) total.
struct State {
    std::vector<std::uint8_t> prefix; // decisions x_0..x_{level-1}
    std::int64_t residualCapacity = 0;
    std::int64_t runningProfit = 0;
    std::int32_t breakCursor = 0;

    std::size_t level() const { return prefix.size(); }
};

/// Dantzig upper bound over all completions of the state: take the remaining
/// items in ratio order while they fit entirely, then the fitting fraction of
/// the break item. Exact when everything remaining fits.
FractionalBound dantzigBound(const Instance& instance, const State& state);

/// Greedy simulation policy: take each remaining item that still fits, never
/// a fraction. Returns the full decision vector in sorted order.
std::vector<int> greedyComplete(const Instance& instance, const State& state);

/// Strongly correlated spanner instances: two spanner items with weights
/// uniform in [1, 1e8] and profit = weight + 1e7; the other items are integer
/// multiples (1..10) of a random spanner item; capacity = floor(f * total
/// weight). Throws when the result violates the standing assumptions.
Instance generateSpanner(int itemCount, double capacityFraction, std::uint64_t seed);

/// Hard exponential-group instances: capacity 1e10, floor(2n/3) items split
/// into 9 groups (remainder to the earliest groups) with profit and weight
/// (2^-i + 1e-4)*c plus noise uniform in [1, 300]; the rest of the items are
/// pure noise pairs.
Instance generateExp(int itemCount, std::uint64_t seed, std::int64_t capacity = 10'000'000'000);

/// Text format: line 1 "n c", then n lines "p_i w_i" in input order.
Instance parseInstance(const std::string& text);
std::string serializeInstance(const Instance& instance);

/// Engine adapter. Maximizes profit; solutions are feasible by construction.
class Adapter {
public:
    using State = knapsack::State;
    using Objective = std::int64_t;
    using BoundValue = FractionalBound;

    explicit Adapter(Instance instance)
        : instance_(std::move(instance))
    {
    }

    ObjectiveSense sense() const { return ObjectiveSense::Maximize; }
    std::size_t depth() const { return static_cast<std::size_t>(instance_.size()); }
    State rootState() const;
    std::vector<int> reducedDomain(const State& state, std::size_t level) const;
    void applyValue(State& state, int take) const;
    FractionalBound bound(const State& state) const { return dantzigBound(instance_, state); }
    std::vector<int> heuristicComplete(const State& state) const
    {
        return greedyComplete(instance_, state);
    }
    std::int64_t objective(const std::vector<int>& solution) const;
    bool isOriginalFeasible(const std::vector<int>& solution) const;

    const Instance& instance() const { return instance_; }

private:
    Instance instance_;
};

} // namespace mctsopt::knapsack

#endif
