#include "mctsopt/oracles.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace mctsopt::oracles {

QcspBruteResult qcspBruteForce(const qcsp::Instance& instance)
{
    const int n = instance.bays;
    const int m = instance.cranes;

    double assignments = 1.0;
    for (int b = 0; b < n; ++b)
        assignments *= m;
    if (assignments > 1e8)
        throw std::domain_error("qcspBruteForce: m^n exceeds the 1e8 guard");

    QcspBruteResult result;
    bool haveRelax = false;
    bool haveOriginal = false;
    std::vector<int> sigma(n, 0);
    for (;;) {
        const auto times = qcsp::earliestTimeFull(instance, sigma);
        if (!haveRelax || times.makespan < result.relaxOptimum) {
            haveRelax = true;
            result.relaxOptimum = times.makespan;
            result.relaxArgmin = sigma;
        }
        if (!qcsp::checkOriginalFeasible(instance, sigma) &&
            (!haveOriginal || times.makespan < result.originalOptimum)) {
            haveOriginal = true;
            result.originalOptimum = times.makespan;
            result.originalArgmin = sigma;
        }

        // Odometer over the full m-ary assignment space.
        int pos = n - 1;
        while (pos >= 0 && sigma[pos] == m - 1)
            sigma[pos--] = 0;
        if (pos < 0)
            break;
        ++sigma[pos];
    }
    assert(haveOriginal); // a contiguous partition is always feasible for m <= n
    return result;
}

TickResult tickSimulate(const qcsp::Instance& instance, std::span<const int> sigma)
{
    const int n = instance.bays;
    const int m = instance.cranes;
    if (static_cast<int>(sigma.size()) != n)
        throw std::invalid_argument("tickSimulate: sigma length must equal the bay count");

    const std::int64_t totalWork =
        std::accumulate(instance.processing.begin(), instance.processing.end(), std::int64_t{0});
    if (totalWork > 1'000'000)
        throw std::domain_error("tickSimulate: total processing time exceeds the 1e6 guard");

    // Assigned bays per crane, left to right.
    std::vector<std::vector<int>> assigned(m);
    for (int b = 0; b < n; ++b)
        assigned[sigma[b]].push_back(b);

    // The move-ASAP sweep: every crane processes its bays left to right and
    // starts each one as soon as it arrives, where moving past a bay is only
    // possible once the crane to the right has moved past it. Movement takes
    // no time, so passing chains within a tick. The spacing constraints are
    // not part of the sweep; they are checked against the working cranes at
    // every tick.
    std::vector<std::size_t> nextIndex(m, 0);
    std::vector<std::int64_t> busyUntil(m, 0);
    std::vector<int> workingBay(m, -1);
    std::vector<int> passed(m, -1); // rightmost bay the crane has moved past
    TickResult result;
    result.completion.assign(n, 0);

    int remaining = n;
    for (std::int64_t tick = 0; remaining > 0; ++tick) {
        if (tick > totalWork)
            return TickResult{}; // stalled; cannot happen for valid sweeps

        for (int k = 0; k < m; ++k) {
            if (workingBay[k] >= 0 && busyUntil[k] == tick) {
                result.completion[workingBay[k]] = tick;
                workingBay[k] = -1;
                --remaining;
            }
        }
        if (remaining == 0)
            break;

        // Advance passing and start work until nothing changes this tick.
        for (bool changed = true; changed;) {
            changed = false;
            for (int k = m - 1; k >= 0; --k) {
                if (workingBay[k] >= 0)
                    continue;
                const int nextBay = nextIndex[k] < assigned[k].size()
                                        ? assigned[k][nextIndex[k]]
                                        : n; // done cranes sweep to the end
                while (passed[k] + 1 < nextBay &&
                       (k == m - 1 || passed[k + 1] >= passed[k] + 1)) {
                    ++passed[k];
                    changed = true;
                }
                if (nextBay < n && passed[k] == nextBay - 1) {
                    workingBay[k] = nextBay;
                    busyUntil[k] = tick + instance.processing[nextBay];
                    ++nextIndex[k];
                    changed = true;
                }
            }
        }

        // Position constraints over the cranes working this tick: strictly
        // increasing positions with one bay per crane in between, and room
        // for every crane on both sides of the ship.
        for (int k = 0; k < m; ++k) {
            if (workingBay[k] < 0)
                continue;
            if (workingBay[k] < k || n - 1 - workingBay[k] < m - 1 - k)
                return TickResult{};
            for (int j = k + 1; j < m; ++j) {
                if (workingBay[j] < 0)
                    continue;
                if (workingBay[j] - workingBay[k] < j - k)
                    return TickResult{};
            }
        }
    }

    result.feasible = true;
    result.makespan = *std::max_element(result.completion.begin(), result.completion.end());
    return result;
}

KnapsackDpResult knapsackDp(const knapsack::Instance& instance)
{
    const int n = instance.size();
    const std::int64_t c = instance.capacity;
    if (static_cast<double>(n) * static_cast<double>(c) > 1e9)
        throw std::domain_error("knapsackDp: n*c exceeds the 1e9 guard");

    const std::size_t width = static_cast<std::size_t>(c) + 1;
    std::vector<std::int64_t> best(width, 0);

    // One bit row per item records whether it is taken at each capacity, so
    // an optimal solution can be reconstructed without a full value table.
    const std::size_t wordsPerRow = (width + 63) / 64;
    std::vector<std::uint64_t> taken(static_cast<std::size_t>(n) * wordsPerRow, 0);

    for (int i = 0; i < n; ++i) {
        const std::int64_t wi = instance.items[i].weight;
        const std::int64_t pi = instance.items[i].profit;
        std::uint64_t* row = taken.data() + static_cast<std::size_t>(i) * wordsPerRow;
        for (std::int64_t w = c; w >= wi; --w) {
            const std::int64_t candidate = best[w - wi] + pi;
            if (candidate > best[w]) {
                best[w] = candidate;
                row[w >> 6] |= std::uint64_t{1} << (w & 63);
            }
        }
    }

    KnapsackDpResult result;
    result.optimum = best[c];
    result.take.assign(n, 0);
    std::int64_t w = c;
    for (int i = n - 1; i >= 0; --i) {
        const std::uint64_t* row = taken.data() + static_cast<std::size_t>(i) * wordsPerRow;
        if (row[w >> 6] >> (w & 63) & 1) {
            result.take[i] = 1;
            w -= instance.items[i].weight;
        }
    }
    return result;
}

} // namespace mctsopt::oracles
