#include "mctsopt/knapsack.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mctsopt::knapsack {

namespace {

using Int128 = __int128;

// Ratio comparison p_a/w_a > p_b/w_b without floating point. Profits reach
// ~5e9, so the cross products need 128 bits.
bool ratioGreater(const Item& a, const Item& b)
{
    return static_cast<Int128>(a.profit) * b.weight > static_cast<Int128>(b.profit) * a.weight;
}

} // namespace

FractionalBound FractionalBound::normalized(std::int64_t base, std::int64_t profit,
                                            std::int64_t room, std::int64_t den)
{
    assert(den >= 1 && profit >= 0 && room >= 0);
    const Int128 product = static_cast<Int128>(profit) * room;
    FractionalBound bound;
    bound.whole = base + static_cast<std::int64_t>(product / den);
    bound.fracNum = static_cast<std::int64_t>(product % den);
    bound.fracDen = den;
    return bound;
}

std::string FractionalBound::toDecimalString(int digits) const
{
    std::ostringstream out;
    out << whole;
    if (fracNum == 0)
        return out.str();
    out << '.';
    std::int64_t rem = fracNum;
    for (int i = 0; i < digits && rem != 0; ++i) {
        const Int128 scaled = static_cast<Int128>(rem) * 10;
        out << static_cast<int>(scaled / fracDen);
        rem = static_cast<std::int64_t>(scaled % fracDen);
    }
    return out.str();
}

bool operator<(const FractionalBound& a, const FractionalBound& b)
{
    if (a.whole != b.whole)
        return a.whole < b.whole;
    return static_cast<Int128>(a.fracNum) * b.fracDen < static_cast<Int128>(b.fracNum) * a.fracDen;
}

Instance sortItems(const std::vector<Item>& rawItems, std::int64_t capacity)
{
    if (capacity < 1)
        throw std::invalid_argument("knapsack: capacity must be positive");
    std::int64_t totalWeight = 0;
    for (const Item& item : rawItems) {
        if (item.profit < 1 || item.weight < 1)
            throw std::invalid_argument("knapsack: profits and weights must be positive");
        if (item.weight > capacity)
            throw std::invalid_argument("knapsack: every item must fit alone (w_i <= c)");
        totalWeight += item.weight;
    }
    if (totalWeight <= capacity)
        throw std::invalid_argument("knapsack: total weight must exceed the capacity");

    const int n = static_cast<int>(rawItems.size());
    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return ratioGreater(rawItems[a], rawItems[b]);
    });

    Instance instance;
    instance.capacity = capacity;
    instance.items.reserve(n);
    instance.originalIndex = std::move(order);
    for (std::int32_t inputPos : instance.originalIndex)
        instance.items.push_back(rawItems[inputPos]);

    instance.prefixProfit.assign(n + 1, 0);
    instance.prefixWeight.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        instance.prefixProfit[i + 1] = instance.prefixProfit[i] + instance.items[i].profit;
        instance.prefixWeight[i + 1] = instance.prefixWeight[i] + instance.items[i].weight;
    }
    return instance;
}

namespace {

// Moves the break cursor right while the next item still fits entirely on
// top of everything between the level and the cursor.
void advanceCursor(const Instance& instance, State& state)
{
    const int n = instance.size();
    const std::size_t level = state.level();
    if (state.breakCursor < static_cast<std::int32_t>(level))
        state.breakCursor = static_cast<std::int32_t>(level);
    while (state.breakCursor < n &&
           instance.prefixWeight[state.breakCursor + 1] - instance.prefixWeight[level] <=
               state.residualCapacity)
        ++state.breakCursor;
}

} // namespace

FractionalBound dantzigBound(const Instance& instance, const State& state)
{
    const std::size_t level = state.level();
    const int b = state.breakCursor;
    assert(b >= static_cast<std::int32_t>(level));

    const std::int64_t takenProfit = instance.prefixProfit[b] - instance.prefixProfit[level];
    if (b == instance.size())
        return FractionalBound::exact(state.runningProfit + takenProfit);

    const std::int64_t takenWeight = instance.prefixWeight[b] - instance.prefixWeight[level];
    const std::int64_t room = state.residualCapacity - takenWeight;
    assert(room >= 0 && room < instance.items[b].weight);
    return FractionalBound::normalized(state.runningProfit + takenProfit,
                                       instance.items[b].profit, room,
                                       instance.items[b].weight);
}

std::vector<int> greedyComplete(const Instance& instance, const State& state)
{
    const int n = instance.size();
    std::vector<int> solution(n, 0);
    for (std::size_t i = 0; i < state.level(); ++i)
        solution[i] = state.prefix[i];
    std::int64_t residual = state.residualCapacity;
    for (int i = static_cast<int>(state.level()); i < n; ++i) {
        if (instance.items[i].weight <= residual) {
            solution[i] = 1;
            residual -= instance.items[i].weight;
        }
    }
    return solution;
}

Instance generateSpanner(int itemCount, double capacityFraction, std::uint64_t seed)
{
    if (itemCount < 3)
        throw std::invalid_argument("spanner: need at least 3 items");
    if (!(capacityFraction > 0.0 && capacityFraction < 1.0))
        throw std::invalid_argument("spanner: capacity fraction must lie in (0,1)");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> weightDist(1, 100'000'000);
    std::uniform_int_distribution<int> spannerPick(0, 1);
    std::uniform_int_distribution<std::int64_t> multiplierDist(1, 10);

    std::vector<Item> items;
    items.reserve(itemCount);
    for (int i = 0; i < 2; ++i) {
        const std::int64_t w = weightDist(rng);
        items.push_back(Item{w + 10'000'000, w});
    }
    for (int i = 2; i < itemCount; ++i) {
        const Item& spanner = items[spannerPick(rng)];
        const std::int64_t k = multiplierDist(rng);
        items.push_back(Item{k * spanner.profit, k * spanner.weight});
    }

    std::int64_t totalWeight = 0;
    for (const Item& item : items)
        totalWeight += item.weight;
    const std::int64_t capacity =
        static_cast<std::int64_t>(capacityFraction * static_cast<double>(totalWeight));
    return sortItems(items, capacity);
}

Instance generateExp(int itemCount, std::uint64_t seed, std::int64_t capacity)
{
    if (itemCount < 30)
        throw std::invalid_argument("exp: need at least 30 items");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> noise(1, 300);

    const int grouped = 2 * itemCount / 3;
    const int baseSize = grouped / 9;
    const int remainder = grouped % 9;

    std::vector<Item> items;
    items.reserve(itemCount);
    for (int group = 1; group <= 9; ++group) {
        // (2^-i + 1e-4) * c, exact since c is divisible by 2^10 and 1e4.
        const std::int64_t base = capacity / (std::int64_t{1} << group) + capacity / 10'000;
        const int size = baseSize + (group <= remainder ? 1 : 0);
        for (int j = 0; j < size; ++j) {
            const std::int64_t r1 = noise(rng);
            const std::int64_t r2 = noise(rng);
            items.push_back(Item{base + r1, base + r2});
        }
    }
    for (int i = grouped; i < itemCount; ++i) {
        const std::int64_t r1 = noise(rng);
        const std::int64_t r2 = noise(rng);
        items.push_back(Item{r1, r2});
    }
    return sortItems(items, capacity);
}

Instance parseInstance(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("line 1: expected \"n c\"");
    std::istringstream header(line);
    long long n = 0;
    long long capacity = 0;
    if (!(header >> n >> capacity) || n < 1 || capacity < 1)
        throw std::invalid_argument("line 1: expected positive \"n c\"");

    std::vector<Item> items(n);
    for (long long i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw std::invalid_argument("line " + std::to_string(i + 2) +
                                        ": expected \"p_i w_i\"");
        std::istringstream row(line);
        if (!(row >> items[i].profit >> items[i].weight))
            throw std::invalid_argument("line " + std::to_string(i + 2) +
                                        ": expected \"p_i w_i\"");
    }
    try {
        return sortItems(items, capacity);
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(std::string("instance: ") + err.what());
    }
}

std::string serializeInstance(const Instance& instance)
{
    const int n = instance.size();
    std::vector<Item> inputOrder(n);
    for (int sortedPos = 0; sortedPos < n; ++sortedPos)
        inputOrder[instance.originalIndex[sortedPos]] = instance.items[sortedPos];

    std::ostringstream out;
    out << n << ' ' << instance.capacity << '\n';
    for (const Item& item : inputOrder)
        out << item.profit << ' ' << item.weight << '\n';
    return out.str();
}

State Adapter::rootState() const
{
    State state;
    state.prefix.reserve(instance_.size());
    state.residualCapacity = instance_.capacity;
    state.runningProfit = 0;
    state.breakCursor = 0;
    advanceCursor(instance_, state);
    return state;
}

std::vector<int> Adapter::reducedDomain(const State& state, std::size_t level) const
{
    assert(level == state.level() && level < static_cast<std::size_t>(instance_.size()));
    if (instance_.items[level].weight <= state.residualCapacity)
        return {0, 1};
    return {0};
}

void Adapter::applyValue(State& state, int take) const
{
    const std::size_t level = state.level();
    assert(level < static_cast<std::size_t>(instance_.size()));
    assert(take == 0 || take == 1);
    if (take == 1) {
        assert(instance_.items[level].weight <= state.residualCapacity);
        state.residualCapacity -= instance_.items[level].weight;
        state.runningProfit += instance_.items[level].profit;
    }
    state.prefix.push_back(static_cast<std::uint8_t>(take));
    advanceCursor(instance_, state);
}

std::int64_t Adapter::objective(const std::vector<int>& solution) const
{
    std::int64_t profit = 0;
    for (int i = 0; i < instance_.size(); ++i)
        if (solution[i])
            profit += instance_.items[i].profit;
    return profit;
}

bool Adapter::isOriginalFeasible(const std::vector<int>& solution) const
{
    std::int64_t weight = 0;
    for (int i = 0; i < instance_.size(); ++i)
        if (solution[i])
            weight += instance_.items[i].weight;
    assert(weight <= instance_.capacity);
    return weight <= instance_.capacity;
}

} // namespace mctsopt::knapsack
