// Exhaustive / sampled sweep over bell-assisted communication strategies:
// enumerate induced CCP behaviors, deduplicate them by quantized canonical
// keys, and run the simulability LP on each distinct behavior, with
// sharding, checkpointing and parallel execution.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bellccp/ccp.hpp"
#include "bellccp/polytope.hpp"
#include "bellccp/quantum.hpp"

namespace bellccp {

struct Key128 {
    std::uint64_t hi = 0, lo = 0;

    friend bool operator==(const Key128&, const Key128&) = default;
    friend auto operator<=>(const Key128&, const Key128&) = default;
};

// Bell-assisted strategy space for a fixed behavior and scenario.
// mu = encoderIndex * numDecoders + decoderIndex; digit k (base M) of the
// encoder index is E at flattened input k = a + outA*(x0 + x0Card*x), and
// digit k (base G) of the decoder index is D at k = m + M*(b + outB*y).
struct StrategySpace {
    int outA = 0, xCard = 0, x0Card = 0;
    int outB = 0, yCard = 0;
    int messageSize = 0, guessSize = 0;
    std::uint64_t numEncoders = 0, numDecoders = 0, total = 0;

    static StrategySpace create(const Behavior& p, int messageSize, int guessSize,
                                int x0Card);

    std::uint64_t encoder_of(std::uint64_t mu) const { return mu / numDecoders; }
    std::uint64_t decoder_of(std::uint64_t mu) const { return mu % numDecoders; }
    std::uint64_t mu_of(std::uint64_t enc, std::uint64_t dec) const {
        return enc * numDecoders + dec;
    }
    DeterministicStrategy strategy_of(std::uint64_t mu) const;
    std::uint64_t index_of(const DeterministicStrategy& s) const;
};

struct SweepConfig {
    int messageSize = 2;
    int guessSize = 2;
    int x0Card = 2;

    std::uint64_t shardIndex = 0;
    std::uint64_t totalShards = 1;
    // Sampled mode: distinct strategy indices drawn from a seeded generator.
    std::optional<std::uint64_t> sampleSize;
    std::uint64_t seed = 0;
    // Strategy indices always included on top of the sample (e.g. a known
    // violating strategy in sanity inversions).
    std::vector<std::uint64_t> forcedStrategies;
    // Optional restriction of the swept strategy-index range [lo, hi).
    std::optional<std::pair<std::uint64_t, std::uint64_t>> strategyRange;

    std::string checkpointPath;
    double dedupTolerance = 1e-10;
    unsigned threads = 0;
    // LP work is checkpointed in blocks of distinct behaviors; stopAfterBlocks
    // ends the run early (operational testing of resume).
    std::uint64_t blockSize = 512;
    std::optional<std::uint64_t> stopAfterBlocks;
};

struct DistinctBehavior {
    std::uint64_t mu = 0;  // first strategy index realizing this behavior
    Key128 key;
};

// Distinct induced behaviors of this shard's strategy slice, ascending mu.
class StrategyEnumerator {
public:
    StrategyEnumerator(const Behavior& p, const SweepConfig& cfg);

    const StrategySpace& space() const { return space_; }
    // The shard's slice of the (possibly restricted) strategy range.
    std::uint64_t rangeLo() const { return lo_; }
    std::uint64_t rangeHi() const { return hi_; }

    std::vector<DistinctBehavior> distinct_in_range(unsigned threads) const;
    std::vector<DistinctBehavior> distinct_of(std::vector<std::uint64_t> mus) const;

    Key128 key_of(std::uint64_t mu) const;
    Key128 key_of_behavior(const CCPBehavior& q) const;
    CCPBehavior behavior_of(std::uint64_t mu) const;

private:
    void build_tables(double tol);
    template <class Fn>
    void scan(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const;

    const Behavior& p_;
    StrategySpace space_;
    std::uint64_t lo_ = 0, hi_ = 0;
    std::uint64_t cellCombos_ = 0;  // M^outA encoder restrictions per cell
    std::uint64_t colCombos_ = 0;   // G^(M*outB) decoder columns per y
    int idBits_ = 0;
    double tol_ = 1e-10;
    // Per Bell setting pair (x,y): quantized-value class id per
    // (encoder cell, decoder column), plus representative values per class.
    std::vector<std::vector<std::uint16_t>> ids_;      // [x*yCard+y][cell*colCombos+col]
    std::vector<std::vector<double>> reps_;            // [x*yCard+y][id*G+g]
};

// Calls visit(mu, behavior) for each distinct behavior in ascending mu order;
// stops early if visit returns false. Returns the number of strategies visited.
std::uint64_t enumerate_strategy_behaviors(
    const Behavior& p, const SweepConfig& cfg,
    const std::function<bool(std::uint64_t, const CCPBehavior&)>& visit);

struct SweepAggregates {
    std::uint64_t lpSolves = 0;
    double minVStar = 1.0;
    bool hasMin = false;
    std::uint64_t argminMu = 0;
    double maxResidual = 0.0;
    // v* in [1-1e-4, 1-1e-6): close calls held out for manual review.
    std::vector<std::uint64_t> flagged;
    std::vector<std::pair<std::uint64_t, std::string>> failures;

    void merge(const SweepAggregates& other);
};

struct ShardOutcome {
    std::uint64_t shardIndex = 0, totalShards = 1;
    std::uint64_t strategiesVisited = 0;
    std::vector<DistinctBehavior> distinct;
    SweepAggregates agg;
    bool lpPhaseRun = false;
    bool complete = true;  // false when stopped early with work checkpointed
};

struct SweepReport {
    std::uint64_t strategiesVisited = 0;
    std::uint64_t distinctBehaviors = 0;
    double minVStar = 1.0;
    bool hasMin = false;
    std::uint64_t argminMu = 0;
    std::uint64_t argminEncoder = 0, argminDecoder = 0;
    double maxResidual = 0.0;
    std::uint64_t lpSolves = 0;
    std::vector<std::uint64_t> flagged;
    std::vector<std::pair<std::uint64_t, std::string>> failures;
    std::vector<ShardOutcome> shards;  // per-shard rows for reporting
};

// Enumerates (full range or sample), then solves the simulability LP against
// uniform-over-g noise for every distinct behavior. When cfg.checkpointPath
// is set, completed work is persisted and resumed across runs.
ShardOutcome sweep_simulability(const Behavior& p, const VertexSet& vertices,
                                const SweepConfig& cfg);

// Dedup-only variant: no LPs, exact distinct count of the full slice.
ShardOutcome sweep_enumerate_only(const Behavior& p, const SweepConfig& cfg);

// Where a checkpointed sweep would resume: blocks completed so far and the
// first unprocessed block. Throws on version mismatch or truncation.
struct CheckpointProgress {
    std::uint64_t completedBlocks = 0;
    std::uint64_t totalBlocks = 0;
    std::uint64_t firstPendingBlock = 0;  // == totalBlocks when complete
    std::uint64_t configHash = 0;
};

CheckpointProgress checkpoint_progress(const std::string& path);

// Cross-shard merge: dedup union of distinct sets, min of minima.
SweepReport merge_shards(const StrategySpace& space,
                         std::vector<ShardOutcome> outcomes);

}  // namespace bellccp
