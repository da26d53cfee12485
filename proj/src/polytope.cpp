#include "bellccp/polytope.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

namespace bellccp {

namespace {

constexpr char kCacheMagic[8] = {'B', 'C', 'P', 'V', 'E', 'R', 'T', '1'};
constexpr std::uint32_t kCacheVersion = 1;

bool advance(std::vector<int>& digits, int card) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < card) return true;
        digits[i] = 0;
    }
    return false;
}

int bits_for(int card) {
    int b = 1;
    while ((1 << b) < card) ++b;
    return b;
}

}  // namespace

VertexSet::VertexSet(int senderInputs, int receiverInputs, int messageSize,
                     int guessSize, std::vector<std::uint8_t> tables)
    : nA_(senderInputs), nB_(receiverInputs), m_(messageSize), g_(guessSize),
      cells_(static_cast<std::size_t>(nA_) * nB_),
      count_(tables.size() / (cells_ ? cells_ : 1)), tables_(std::move(tables)) {
    if (nA_ < 1 || nB_ < 1 || m_ < 1 || g_ < 1)
        throw std::invalid_argument("vertex set: bad dimensions");
    if (tables_.size() != count_ * cells_)
        throw std::invalid_argument("vertex set: table size mismatch");
    for (std::uint8_t v : tables_)
        if (v >= g_) throw std::invalid_argument("vertex set: guess out of range");
}

CCPBehavior VertexSet::behavior(std::size_t vertex) const {
    std::vector<double> probs(cells_ * g_, 0.0);
    for (int X = 0; X < nA_; ++X)
        for (int Y = 0; Y < nB_; ++Y)
            probs[(static_cast<std::size_t>(X) * nB_ + Y) * g_ + guess(vertex, X, Y)] = 1.0;
    return CCPBehavior(nA_, nB_, g_, std::move(probs));
}

VertexSet classical_vertices(int senderInputs, int receiverInputs, int messageSize,
                             int guessSize) {
    const int nA = senderInputs, nB = receiverInputs, M = messageSize, G = guessSize;
    if (nA < 1 || nB < 1 || M < 1 || G < 1)
        throw std::invalid_argument("classical_vertices: bad dimensions");
    double encoders = std::pow(static_cast<double>(M), nA);
    double decoders = std::pow(static_cast<double>(G), M * nB);
    if (encoders * decoders > 1e9)
        throw std::runtime_error("classical_vertices: strategy space too large");

    const std::size_t cells = static_cast<std::size_t>(nA) * nB;
    const int bits = bits_for(G);
    if (cells * bits > 64)
        throw std::runtime_error("classical_vertices: table does not fit the dedup key");

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(std::min(encoders * decoders, 2e7)));
    std::vector<std::uint8_t> tables;
    std::vector<std::uint8_t> composed(cells);

    std::vector<int> encoder(nA, 0);
    do {
        std::vector<int> decoder(static_cast<std::size_t>(M) * nB, 0);
        do {
            std::uint64_t key = 0;
            std::size_t i = 0;
            for (int X = 0; X < nA; ++X)
                for (int Y = 0; Y < nB; ++Y) {
                    int g = decoder[encoder[X] + M * Y];
                    composed[i++] = static_cast<std::uint8_t>(g);
                    key = (key << bits) | static_cast<std::uint64_t>(g);
                }
            if (seen.insert(key).second)
                tables.insert(tables.end(), composed.begin(), composed.end());
        } while (advance(decoder, G));
    } while (advance(encoder, M));

    return VertexSet(nA, nB, M, G, std::move(tables));
}

void save_vertex_cache(const std::string& path, const VertexSet& v) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("vertex cache: cannot open " + path);
    out.write(kCacheMagic, sizeof(kCacheMagic));
    auto put32 = [&](std::uint32_t x) { out.write(reinterpret_cast<const char*>(&x), 4); };
    auto put64 = [&](std::uint64_t x) { out.write(reinterpret_cast<const char*>(&x), 8); };
    put32(kCacheVersion);
    put32(static_cast<std::uint32_t>(v.senderInputs()));
    put32(static_cast<std::uint32_t>(v.receiverInputs()));
    put32(static_cast<std::uint32_t>(v.messageSize()));
    put32(static_cast<std::uint32_t>(v.guessSize()));
    put64(v.size());

    const int bits = bits_for(v.guessSize());
    std::uint64_t acc = 0;
    int used = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (int X = 0; X < v.senderInputs(); ++X)
            for (int Y = 0; Y < v.receiverInputs(); ++Y) {
                acc |= static_cast<std::uint64_t>(v.guess(i, X, Y)) << used;
                used += bits;
                while (used >= 8) {
                    char byte = static_cast<char>(acc & 0xff);
                    out.write(&byte, 1);
                    acc >>= 8;
                    used -= 8;
                }
            }
    if (used > 0) {
        char byte = static_cast<char>(acc & 0xff);
        out.write(&byte, 1);
    }
    if (!out) throw std::runtime_error("vertex cache: write failed for " + path);
}

VertexSet load_vertex_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("vertex cache: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCacheMagic, 8) != 0)
        throw std::runtime_error("vertex cache: bad magic in " + path);
    auto get32 = [&] {
        std::uint32_t x = 0;
        in.read(reinterpret_cast<char*>(&x), 4);
        return x;
    };
    auto get64 = [&] {
        std::uint64_t x = 0;
        in.read(reinterpret_cast<char*>(&x), 8);
        return x;
    };
    std::uint32_t version = get32();
    if (version != kCacheVersion)
        throw std::runtime_error("vertex cache: unsupported version in " + path);
    int nA = static_cast<int>(get32());
    int nB = static_cast<int>(get32());
    int M = static_cast<int>(get32());
    int G = static_cast<int>(get32());
    std::uint64_t count = get64();
    if (!in) throw std::runtime_error("vertex cache: truncated header in " + path);

    const int bits = bits_for(G);
    const std::size_t cells = static_cast<std::size_t>(nA) * nB;
    std::vector<std::uint8_t> tables;
    tables.reserve(count * cells);
    std::uint64_t acc = 0;
    int avail = 0;
    for (std::uint64_t i = 0; i < count * cells; ++i) {
        while (avail < bits) {
            char byte;
            in.read(&byte, 1);
            if (!in) throw std::runtime_error("vertex cache: truncated data in " + path);
            acc |= static_cast<std::uint64_t>(static_cast<unsigned char>(byte)) << avail;
            avail += 8;
        }
        tables.push_back(static_cast<std::uint8_t>(acc & ((1u << bits) - 1)));
        acc >>= bits;
        avail -= bits;
    }
    return VertexSet(nA, nB, M, G, std::move(tables));
}

}  // namespace bellccp
