// Classical CCP polytope: deduplicated deterministic vertices p(g|X,Y)
// plus a binary cache format for reuse across runs.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellccp/ccp.hpp"

namespace bellccp {

// Deterministic vertices stored as composed guess tables C[X][Y] in [G];
// the induced probability table is the 0/1 indicator of g = C(X,Y).
class VertexSet {
public:
    VertexSet(int senderInputs, int receiverInputs, int messageSize, int guessSize,
              std::vector<std::uint8_t> tables);

    int senderInputs() const { return nA_; }
    int receiverInputs() const { return nB_; }
    int messageSize() const { return m_; }
    int guessSize() const { return g_; }
    std::size_t size() const { return count_; }

    int guess(std::size_t vertex, int X, int Y) const {
        return tables_[vertex * cells_ + static_cast<std::size_t>(X) * nB_ + Y];
    }
    CCPBehavior behavior(std::size_t vertex) const;

private:
    int nA_, nB_, m_, g_;
    std::size_t cells_;
    std::size_t count_;
    std::vector<std::uint8_t> tables_;  // count * nA * nB composed guesses
};

// Enumerates every deterministic (E, D), dropping exact duplicates of the
// induced table. Guard: M^{N_A} * G^{M*N_B} <= 1e9.
VertexSet classical_vertices(int senderInputs, int receiverInputs, int messageSize,
                             int guessSize);

// Binary cache: fixed header, then bit-packed guess tables.
void save_vertex_cache(const std::string& path, const VertexSet& v);
VertexSet load_vertex_cache(const std::string& path);

}  // namespace bellccp
