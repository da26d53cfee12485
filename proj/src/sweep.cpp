#include "bellccp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "bellccp/rng.hpp"
#include "bellccp/threads.hpp"
#include "bellccp/visibility.hpp"

namespace bellccp {

namespace {

constexpr std::uint64_t kStrategyGuard = 1ull << 30;
constexpr char kCkptMagic[8] = {'B', 'C', 'S', 'W', 'E', 'E', 'P', '1'};
constexpr std::uint32_t kCkptVersion = 1;
constexpr std::uint64_t kBlocksPerStripe = 64;  // checkpoint cadence

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <class T>
std::uint64_t fnv_value(const T& v, std::uint64_t h) {
    return fnv1a(&v, sizeof(v), h);
}

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

struct KeyEntry {
    Key128 key;
    std::uint64_t mu;
};

}  // namespace

StrategySpace StrategySpace::create(const Behavior& p, int messageSize,
                                    int guessSize, int x0Card) {
    if (messageSize < 1 || guessSize < 1 || x0Card < 1)
        throw std::invalid_argument("strategy space: bad scenario dimensions");
    StrategySpace s;
    s.outA = p.outA();
    s.xCard = p.partyACard();
    s.x0Card = x0Card;
    s.outB = p.outB();
    s.yCard = p.partyBCard();
    s.messageSize = messageSize;
    s.guessSize = guessSize;
    const int encDomain = s.outA * s.x0Card * s.xCard;
    const int decDomain = s.messageSize * s.outB * s.yCard;
    double total = std::pow(static_cast<double>(messageSize), encDomain) *
                   std::pow(static_cast<double>(guessSize), decDomain);
    if (total > static_cast<double>(kStrategyGuard))
        throw std::runtime_error("strategy space exceeds the 2^30 enumeration guard");
    s.numEncoders = ipow(messageSize, encDomain);
    s.numDecoders = ipow(guessSize, decDomain);
    s.total = s.numEncoders * s.numDecoders;
    return s;
}

DeterministicStrategy StrategySpace::strategy_of(std::uint64_t mu) const {
    if (mu >= total) throw std::out_of_range("strategy index out of range");
    DeterministicStrategy s;
    s.kind = DeterministicStrategy::Kind::BellAssisted;
    s.messageSize = messageSize;
    s.guessSize = guessSize;
    s.outA = outA;
    s.x0Card = x0Card;
    s.xCard = xCard;
    s.outB = outB;
    s.yCard = yCard;
    std::uint64_t enc = encoder_of(mu), dec = decoder_of(mu);
    const int encDomain = outA * x0Card * xCard;
    const int decDomain = messageSize * outB * yCard;
    s.encoder.resize(encDomain);
    for (int k = 0; k < encDomain; ++k) {
        s.encoder[k] = static_cast<int>(enc % messageSize);
        enc /= messageSize;
    }
    s.decoder.resize(decDomain);
    for (int k = 0; k < decDomain; ++k) {
        s.decoder[k] = static_cast<int>(dec % guessSize);
        dec /= guessSize;
    }
    return s;
}

std::uint64_t StrategySpace::index_of(const DeterministicStrategy& s) const {
    s.validate();
    if (s.kind != DeterministicStrategy::Kind::BellAssisted ||
        s.outA != outA || s.x0Card != x0Card || s.xCard != xCard ||
        s.outB != outB || s.yCard != yCard || s.messageSize != messageSize ||
        s.guessSize != guessSize)
        throw std::invalid_argument("index_of: strategy does not fit this space");
    std::uint64_t enc = 0;
    for (std::size_t k = s.encoder.size(); k-- > 0;)
        enc = enc * messageSize + static_cast<std::uint64_t>(s.encoder[k]);
    std::uint64_t dec = 0;
    for (std::size_t k = s.decoder.size(); k-- > 0;)
        dec = dec * guessSize + static_cast<std::uint64_t>(s.decoder[k]);
    return mu_of(enc, dec);
}

StrategyEnumerator::StrategyEnumerator(const Behavior& p, const SweepConfig& cfg)
    : p_(p), space_(StrategySpace::create(p, cfg.messageSize, cfg.guessSize,
                                          cfg.x0Card)) {
    std::uint64_t gLo = 0, gHi = space_.total;
    if (cfg.strategyRange) {
        gLo = cfg.strategyRange->first;
        gHi = cfg.strategyRange->second;
        if (gLo > gHi || gHi > space_.total)
            throw std::invalid_argument("sweep: bad strategy range");
    }
    if (cfg.totalShards < 1 || cfg.shardIndex >= cfg.totalShards)
        throw std::invalid_argument("sweep: bad shard specification");
    const std::uint64_t span = gHi - gLo;
    lo_ = gLo + span * cfg.shardIndex / cfg.totalShards;
    hi_ = gLo + span * (cfg.shardIndex + 1) / cfg.totalShards;
    if (cfg.dedupTolerance <= 0 || cfg.dedupTolerance > 1e-3)
        throw std::invalid_argument("sweep: dedup tolerance out of range");
    build_tables(cfg.dedupTolerance);
}

void StrategyEnumerator::build_tables(double tol) {
    tol_ = tol;
    const int M = space_.messageSize, G = space_.guessSize;
    cellCombos_ = ipow(M, space_.outA);
    colCombos_ = ipow(G, M * space_.outB);
    const std::size_t tables = static_cast<std::size_t>(space_.xCard) * space_.yCard;
    ids_.assign(tables, {});
    reps_.assign(tables, {});

    std::size_t maxIds = 1;
    std::vector<std::int64_t> quant(G);
    std::vector<double> value(G);
    for (int x = 0; x < space_.xCard; ++x) {
        for (int y = 0; y < space_.yCard; ++y) {
            const std::size_t t = static_cast<std::size_t>(x) * space_.yCard + y;
            ids_[t].assign(cellCombos_ * colCombos_, 0);
            std::unordered_map<std::string, std::uint16_t> registry;
            for (std::uint64_t ec = 0; ec < cellCombos_; ++ec) {
                for (std::uint64_t dc = 0; dc < colCombos_; ++dc) {
                    std::fill(value.begin(), value.end(), 0.0);
                    std::uint64_t e = ec;
                    for (int a = 0; a < space_.outA; ++a) {
                        int m = static_cast<int>(e % M);
                        e /= M;
                        for (int b = 0; b < space_.outB; ++b) {
                            int g = static_cast<int>(
                                (dc / ipow(G, m + M * b)) % G);
                            value[g] += p_.p(a, b, x, y);
                        }
                    }
                    for (int g = 0; g < G; ++g)
                        quant[g] = std::llround(value[g] / tol_);
                    std::string qkey(reinterpret_cast<const char*>(quant.data()),
                                     quant.size() * sizeof(std::int64_t));
                    auto [it, fresh] = registry.try_emplace(
                        qkey, static_cast<std::uint16_t>(reps_[t].size() / G));
                    if (fresh) {
                        if (reps_[t].size() / G >= 65535)
                            throw std::runtime_error(
                                "sweep: per-cell value registry overflow");
                        reps_[t].insert(reps_[t].end(), value.begin(), value.end());
                    } else {
                        // Same canonical key: confirm the actual values agree.
                        for (int g = 0; g < G; ++g)
                            if (std::abs(reps_[t][static_cast<std::size_t>(it->second) * G + g] -
                                         value[g]) > 1e-9)
                                throw std::runtime_error(
                                    "sweep: dedup collision failed verification");
                    }
                    ids_[t][ec * colCombos_ + dc] = it->second;
                }
            }
            maxIds = std::max(maxIds, reps_[t].size() / G);
        }
    }
    idBits_ = 1;
    while ((std::size_t{1} << idBits_) < maxIds) ++idBits_;
    const int cells = space_.x0Card * space_.xCard * space_.yCard;
    if (cells * idBits_ > 128)
        throw std::runtime_error("sweep: scenario too wide for 128-bit dedup keys");
}

template <class Fn>
void StrategyEnumerator::scan(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    const int nCellBlocks = space_.x0Card * space_.xCard;  // (x0, x) blocks
    const int yC = space_.yCard;
    std::vector<std::uint64_t> ecPow(nCellBlocks), dcPow(yC);
    for (int c = 0; c < nCellBlocks; ++c) ecPow[c] = ipow(cellCombos_, c);
    for (int y = 0; y < yC; ++y) dcPow[y] = ipow(colCombos_, y);

    // Cell order in the key: (x0 outer, x, y inner).
    struct Cell {
        const std::uint16_t* table;
        int block;
        int y;
    };
    std::vector<Cell> cells;
    for (int x0 = 0; x0 < space_.x0Card; ++x0)
        for (int x = 0; x < space_.xCard; ++x)
            for (int y = 0; y < yC; ++y)
                cells.push_back(Cell{
                    ids_[static_cast<std::size_t>(x) * yC + y].data(),
                    x0 + space_.x0Card * x, y});

    std::vector<std::uint64_t> eCell(nCellBlocks), dcol(yC);
    std::uint64_t mu = lo;
    while (mu < hi) {
        const std::uint64_t enc = mu / space_.numDecoders;
        std::uint64_t dec = mu % space_.numDecoders;
        const std::uint64_t decEnd =
            std::min<std::uint64_t>(space_.numDecoders, dec + (hi - mu));
        for (int c = 0; c < nCellBlocks; ++c)
            eCell[c] = (enc / ecPow[c]) % cellCombos_;
        for (; dec < decEnd; ++dec, ++mu) {
            for (int y = 0; y < yC; ++y) dcol[y] = (dec / dcPow[y]) % colCombos_;
            Key128 key;
            int bit = 0;
            for (const Cell& cell : cells) {
                std::uint64_t id =
                    cell.table[eCell[cell.block] * colCombos_ + dcol[cell.y]];
                if (bit < 64) {
                    key.lo |= id << bit;
                    if (bit + idBits_ > 64) key.hi |= id >> (64 - bit);
                } else {
                    key.hi |= id << (bit - 64);
                }
                bit += idBits_;
            }
            fn(mu, key);
        }
    }
}

Key128 StrategyEnumerator::key_of(std::uint64_t mu) const {
    Key128 out;
    scan(mu, mu + 1, [&](std::uint64_t, Key128 k) { out = k; });
    return out;
}

Key128 StrategyEnumerator::key_of_behavior(const CCPBehavior& q) const {
    const int G = space_.guessSize;
    if (q.senderInputs() != space_.x0Card * space_.xCard ||
        q.receiverInputs() != space_.yCard || q.guessSize() != G)
        throw std::invalid_argument("key_of_behavior: scenario mismatch");
    Key128 key;
    int bit = 0;
    std::vector<std::int64_t> quant(G);
    for (int x0 = 0; x0 < space_.x0Card; ++x0)
        for (int x = 0; x < space_.xCard; ++x)
            for (int y = 0; y < space_.yCard; ++y) {
                const std::size_t t = static_cast<std::size_t>(x) * space_.yCard + y;
                const int X = x0 + space_.x0Card * x;
                for (int g = 0; g < G; ++g)
                    quant[g] = std::llround(q.p(g, X, y) / tol_);
                // Locate the registry class with these quantized values.
                std::uint64_t id = 0;
                bool found = false;
                const std::size_t n = reps_[t].size() / G;
                for (std::size_t i = 0; i < n && !found; ++i) {
                    bool same = true;
                    for (int g = 0; g < G && same; ++g)
                        same = std::llround(reps_[t][i * G + g] / tol_) == quant[g];
                    if (same) {
                        id = i;
                        found = true;
                    }
                }
                if (!found)
                    throw std::invalid_argument(
                        "key_of_behavior: behavior not producible in this scenario");
                if (bit < 64) {
                    key.lo |= id << bit;
                    if (bit + idBits_ > 64) key.hi |= id >> (64 - bit);
                } else {
                    key.hi |= id << (bit - 64);
                }
                bit += idBits_;
            }
    return key;
}

CCPBehavior StrategyEnumerator::behavior_of(std::uint64_t mu) const {
    return quantum_ccp_behavior(p_, space_.strategy_of(mu));
}

std::vector<DistinctBehavior> StrategyEnumerator::distinct_in_range(
    unsigned threads) const {
    const std::uint64_t span = hi_ - lo_;
    std::vector<KeyEntry> entries(span);
    parallel_ranges(span, threads, [&](unsigned, std::uint64_t wlo, std::uint64_t whi) {
        scan(lo_ + wlo, lo_ + whi, [&](std::uint64_t mu, Key128 key) {
            entries[mu - lo_] = KeyEntry{key, mu};
        });
    });
    std::sort(entries.begin(), entries.end(), [](const KeyEntry& a, const KeyEntry& b) {
        return a.key != b.key ? a.key < b.key : a.mu < b.mu;
    });
    std::vector<DistinctBehavior> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (i == 0 || !(entries[i].key == entries[i - 1].key))
            out.push_back(DistinctBehavior{entries[i].mu, entries[i].key});
    std::sort(out.begin(), out.end(),
              [](const DistinctBehavior& a, const DistinctBehavior& b) {
                  return a.mu < b.mu;
              });
    return out;
}

std::vector<DistinctBehavior> StrategyEnumerator::distinct_of(
    std::vector<std::uint64_t> mus) const {
    std::sort(mus.begin(), mus.end());
    mus.erase(std::unique(mus.begin(), mus.end()), mus.end());
    std::vector<KeyEntry> entries;
    entries.reserve(mus.size());
    for (std::uint64_t mu : mus) {
        if (mu >= space_.total) throw std::out_of_range("sampled strategy out of range");
        entries.push_back(KeyEntry{key_of(mu), mu});
    }
    std::sort(entries.begin(), entries.end(), [](const KeyEntry& a, const KeyEntry& b) {
        return a.key != b.key ? a.key < b.key : a.mu < b.mu;
    });
    std::vector<DistinctBehavior> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (i == 0 || !(entries[i].key == entries[i - 1].key))
            out.push_back(DistinctBehavior{entries[i].mu, entries[i].key});
    std::sort(out.begin(), out.end(),
              [](const DistinctBehavior& a, const DistinctBehavior& b) {
                  return a.mu < b.mu;
              });
    return out;
}

namespace {

// Sample (plus forced indices) restricted to this shard's slice.
std::vector<std::uint64_t> sampled_strategies(const SweepConfig& cfg,
                                              const StrategySpace& space,
                                              std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t gLo = 0, gHi = space.total;
    if (cfg.strategyRange) {
        gLo = cfg.strategyRange->first;
        gHi = cfg.strategyRange->second;
    }
    if (*cfg.sampleSize > gHi - gLo)
        throw std::invalid_argument("sweep: sample size exceeds strategy space");
    std::vector<std::uint64_t> mus =
        sample_without_replacement(gHi - gLo, *cfg.sampleSize, cfg.seed);
    for (auto& mu : mus) mu += gLo;
    for (std::uint64_t mu : cfg.forcedStrategies) {
        if (mu >= space.total)
            throw std::invalid_argument("sweep: forced strategy out of range");
        mus.push_back(mu);
    }
    std::erase_if(mus, [&](std::uint64_t mu) { return mu < lo || mu >= hi; });
    std::sort(mus.begin(), mus.end());
    mus.erase(std::unique(mus.begin(), mus.end()), mus.end());
    return mus;
}

std::uint64_t config_hash(const Behavior& p, const SweepConfig& cfg,
                          std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv_value(kCkptVersion, h);
    int dims[4] = {p.partyACard(), p.partyBCard(), p.outA(), p.outB()};
    h = fnv1a(dims, sizeof(dims), h);
    h = fnv1a(p.raw().data(), p.raw().size() * sizeof(double), h);
    int scen[3] = {cfg.messageSize, cfg.guessSize, cfg.x0Card};
    h = fnv1a(scen, sizeof(scen), h);
    h = fnv_value(cfg.shardIndex, h);
    h = fnv_value(cfg.totalShards, h);
    std::uint64_t sample = cfg.sampleSize ? *cfg.sampleSize + 1 : 0;
    h = fnv_value(sample, h);
    h = fnv_value(cfg.seed, h);
    for (std::uint64_t mu : cfg.forcedStrategies) h = fnv_value(mu, h);
    h = fnv_value(cfg.dedupTolerance, h);
    h = fnv_value(cfg.blockSize, h);
    h = fnv_value(lo, h);
    h = fnv_value(hi, h);
    return h;
}

struct Checkpoint {
    std::uint64_t configHash = 0;
    std::uint64_t distinctCount = 0;
    std::vector<std::uint8_t> blockDone;  // one byte per block
    SweepAggregates agg;

    std::uint64_t completed_blocks() const {
        std::uint64_t n = 0;
        for (auto b : blockDone) n += b;
        return n;
    }
};

void save_checkpoint(const std::string& path, const Checkpoint& c) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("checkpoint: cannot write " + tmp);
        out.write(kCkptMagic, 8);
        auto put32 = [&](std::uint32_t v) { out.write(reinterpret_cast<char*>(&v), 4); };
        auto put64 = [&](std::uint64_t v) { out.write(reinterpret_cast<char*>(&v), 8); };
        put32(kCkptVersion);
        put64(c.configHash);
        put64(c.distinctCount);
        put64(c.blockDone.size());
        out.write(reinterpret_cast<const char*>(c.blockDone.data()),
                  static_cast<std::streamsize>(c.blockDone.size()));
        put64(c.agg.lpSolves);
        put32(c.agg.hasMin ? 1 : 0);
        std::uint64_t bits;
        std::memcpy(&bits, &c.agg.minVStar, 8);
        put64(bits);
        put64(c.agg.argminMu);
        std::memcpy(&bits, &c.agg.maxResidual, 8);
        put64(bits);
        put64(c.agg.flagged.size());
        for (std::uint64_t mu : c.agg.flagged) put64(mu);
        put64(c.agg.failures.size());
        for (const auto& [mu, msg] : c.agg.failures) {
            put64(mu);
            put64(msg.size());
            out.write(msg.data(), static_cast<std::streamsize>(msg.size()));
        }
        if (!out) throw std::runtime_error("checkpoint: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error("checkpoint " + path + ": " + why);
    };
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCkptMagic, 8) != 0) throw fail("bad magic");
    auto get32 = [&] {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get64 = [&] {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    if (get32() != kCkptVersion) throw fail("version mismatch");
    Checkpoint c;
    c.configHash = get64();
    c.distinctCount = get64();
    std::uint64_t blocks = get64();
    if (!in) throw fail("truncated header");
    c.blockDone.resize(blocks);
    in.read(reinterpret_cast<char*>(c.blockDone.data()),
            static_cast<std::streamsize>(blocks));
    c.agg.lpSolves = get64();
    c.agg.hasMin = get32() != 0;
    std::uint64_t bits = get64();
    std::memcpy(&c.agg.minVStar, &bits, 8);
    c.agg.argminMu = get64();
    bits = get64();
    std::memcpy(&c.agg.maxResidual, &bits, 8);
    std::uint64_t nFlag = get64();
    if (!in) throw fail("truncated aggregates");
    for (std::uint64_t i = 0; i < nFlag; ++i) c.agg.flagged.push_back(get64());
    std::uint64_t nFail = get64();
    for (std::uint64_t i = 0; i < nFail; ++i) {
        std::uint64_t mu = get64();
        std::uint64_t len = get64();
        std::string msg(len, '\0');
        in.read(msg.data(), static_cast<std::streamsize>(len));
        c.agg.failures.emplace_back(mu, std::move(msg));
    }
    if (!in) throw fail("truncated file");
    return c;
}

}  // namespace

CheckpointProgress checkpoint_progress(const std::string& path) {
    Checkpoint c = load_checkpoint(path);
    CheckpointProgress p;
    p.totalBlocks = c.blockDone.size();
    p.completedBlocks = c.completed_blocks();
    p.firstPendingBlock = p.totalBlocks;
    for (std::uint64_t b = 0; b < c.blockDone.size(); ++b)
        if (!c.blockDone[b]) {
            p.firstPendingBlock = b;
            break;
        }
    p.configHash = c.configHash;
    return p;
}

void SweepAggregates::merge(const SweepAggregates& other) {
    lpSolves += other.lpSolves;
    if (other.hasMin) {
        if (!hasMin || other.minVStar < minVStar ||
            (other.minVStar == minVStar && other.argminMu < argminMu)) {
            minVStar = other.minVStar;
            argminMu = other.argminMu;
        }
        hasMin = true;
    }
    maxResidual = std::max(maxResidual, other.maxResidual);
    flagged.insert(flagged.end(), other.flagged.begin(), other.flagged.end());
    std::sort(flagged.begin(), flagged.end());
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    std::sort(failures.begin(), failures.end());
}

std::uint64_t enumerate_strategy_behaviors(
    const Behavior& p, const SweepConfig& cfg,
    const std::function<bool(std::uint64_t, const CCPBehavior&)>& visit) {
    StrategyEnumerator en(p, cfg);
    std::vector<DistinctBehavior> distinct;
    std::uint64_t visited;
    if (cfg.sampleSize) {
        auto mus = sampled_strategies(cfg, en.space(), en.rangeLo(), en.rangeHi());
        visited = mus.size();
        distinct = en.distinct_of(std::move(mus));
    } else {
        visited = en.rangeHi() - en.rangeLo();
        distinct = en.distinct_in_range(cfg.threads);
    }
    for (const auto& d : distinct)
        if (!visit(d.mu, en.behavior_of(d.mu))) break;
    return visited;
}

ShardOutcome sweep_enumerate_only(const Behavior& p, const SweepConfig& cfg) {
    StrategyEnumerator en(p, cfg);
    ShardOutcome out;
    out.shardIndex = cfg.shardIndex;
    out.totalShards = cfg.totalShards;
    if (cfg.sampleSize) {
        auto mus = sampled_strategies(cfg, en.space(), en.rangeLo(), en.rangeHi());
        out.strategiesVisited = mus.size();
        out.distinct = en.distinct_of(std::move(mus));
    } else {
        out.strategiesVisited = en.rangeHi() - en.rangeLo();
        out.distinct = en.distinct_in_range(cfg.threads);
    }
    return out;
}

ShardOutcome sweep_simulability(const Behavior& p, const VertexSet& vertices,
                                const SweepConfig& cfg) {
    StrategyEnumerator en(p, cfg);
    const StrategySpace& space = en.space();
    if (vertices.senderInputs() != space.x0Card * space.xCard ||
        vertices.receiverInputs() != space.yCard ||
        vertices.guessSize() != space.guessSize)
        throw std::invalid_argument("sweep: vertex set does not match the scenario");

    ShardOutcome out;
    out.shardIndex = cfg.shardIndex;
    out.totalShards = cfg.totalShards;
    out.lpPhaseRun = true;
    if (cfg.sampleSize) {
        auto mus = sampled_strategies(cfg, en.space(), en.rangeLo(), en.rangeHi());
        out.strategiesVisited = mus.size();
        out.distinct = en.distinct_of(std::move(mus));
    } else {
        out.strategiesVisited = en.rangeHi() - en.rangeLo();
        out.distinct = en.distinct_in_range(cfg.threads);
    }

    if (cfg.blockSize < 1) throw std::invalid_argument("sweep: bad block size");
    const std::uint64_t blockSize = cfg.blockSize;
    const std::uint64_t nBlocks =
        (out.distinct.size() + blockSize - 1) / blockSize;
    Checkpoint ckpt;
    ckpt.configHash = config_hash(p, cfg, en.rangeLo(), en.rangeHi());
    ckpt.distinctCount = out.distinct.size();
    ckpt.blockDone.assign(nBlocks, 0);

    const bool useCkpt = !cfg.checkpointPath.empty();
    if (useCkpt && std::filesystem::exists(cfg.checkpointPath)) {
        Checkpoint loaded = load_checkpoint(cfg.checkpointPath);
        if (loaded.configHash != ckpt.configHash)
            throw std::runtime_error(
                "checkpoint " + cfg.checkpointPath +
                ": written by an incompatible configuration, refusing to resume");
        if (loaded.blockDone.size() != nBlocks ||
            loaded.distinctCount != ckpt.distinctCount)
            throw std::runtime_error("checkpoint " + cfg.checkpointPath +
                                     ": block layout mismatch, refusing to resume");
        ckpt = std::move(loaded);
    }

    const CCPBehavior noise = CCPBehavior::uniform(
        space.x0Card * space.xCard, space.yCard, space.guessSize);

    // Process blocks of distinct behaviors in stripes; each stripe is
    // parallel, aggregates merge in block order, then the checkpoint updates.
    std::vector<std::uint64_t> todo;
    for (std::uint64_t b = 0; b < nBlocks; ++b)
        if (!ckpt.blockDone[b]) todo.push_back(b);
    if (cfg.stopAfterBlocks && todo.size() > *cfg.stopAfterBlocks)
        todo.resize(*cfg.stopAfterBlocks);

    for (std::size_t stripeStart = 0; stripeStart < todo.size();
         stripeStart += kBlocksPerStripe) {
        const std::size_t stripeEnd =
            std::min(todo.size(), stripeStart + kBlocksPerStripe);
        const std::size_t stripeLen = stripeEnd - stripeStart;
        std::vector<SweepAggregates> results(stripeLen);
        parallel_ranges(stripeLen, cfg.threads, [&](unsigned, std::uint64_t wlo,
                                                    std::uint64_t whi) {
            VisibilitySolver solver(vertices, noise);
            for (std::uint64_t s = wlo; s < whi; ++s) {
                const std::uint64_t block = todo[stripeStart + s];
                SweepAggregates agg;
                const std::uint64_t iLo = block * blockSize;
                const std::uint64_t iHi =
                    std::min<std::uint64_t>(out.distinct.size(), iLo + blockSize);
                for (std::uint64_t i = iLo; i < iHi; ++i) {
                    const std::uint64_t mu = out.distinct[i].mu;
                    try {
                        VisibilityResult r = solver.solve(en.behavior_of(mu));
                        if (!r.optimal())
                            throw std::runtime_error("infeasible at v=0");
                        ++agg.lpSolves;
                        agg.maxResidual = std::max(agg.maxResidual, r.residual);
                        if (!agg.hasMin || r.vStar < agg.minVStar) {
                            agg.minVStar = r.vStar;
                            agg.argminMu = mu;
                            agg.hasMin = true;
                        }
                        if (r.vStar >= 1.0 - 1e-4 && r.vStar < 1.0 - 1e-6)
                            agg.flagged.push_back(mu);
                    } catch (const std::exception& e) {
                        agg.failures.emplace_back(mu, e.what());
                    }
                }
                results[s] = std::move(agg);
            }
        });
        for (std::size_t s = 0; s < stripeLen; ++s) {
            ckpt.agg.merge(results[s]);
            ckpt.blockDone[todo[stripeStart + s]] = 1;
        }
        if (useCkpt) save_checkpoint(cfg.checkpointPath, ckpt);
    }

    out.agg = std::move(ckpt.agg);
    out.complete = true;
    for (auto done : ckpt.blockDone)
        if (!done) out.complete = false;
    return out;
}

SweepReport merge_shards(const StrategySpace& space,
                         std::vector<ShardOutcome> outcomes) {
    SweepReport report;
    std::vector<KeyEntry> all;
    for (const auto& o : outcomes) {
        report.strategiesVisited += o.strategiesVisited;
        report.lpSolves += o.agg.lpSolves;
        for (const auto& d : o.distinct) all.push_back(KeyEntry{d.key, d.mu});
    }
    std::sort(all.begin(), all.end(), [](const KeyEntry& a, const KeyEntry& b) {
        return a.key != b.key ? a.key < b.key : a.mu < b.mu;
    });
    std::uint64_t distinct = 0;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (i == 0 || !(all[i].key == all[i - 1].key)) ++distinct;
    report.distinctBehaviors = distinct;

    SweepAggregates agg;
    for (const auto& o : outcomes) agg.merge(o.agg);
    report.minVStar = agg.minVStar;
    report.hasMin = agg.hasMin;
    report.argminMu = agg.argminMu;
    report.argminEncoder = space.encoder_of(agg.argminMu);
    report.argminDecoder = space.decoder_of(agg.argminMu);
    report.maxResidual = agg.maxResidual;
    report.flagged = std::move(agg.flagged);
    report.failures = std::move(agg.failures);
    report.shards = std::move(outcomes);
    return report;
}

}  // namespace bellccp
