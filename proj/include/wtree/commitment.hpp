#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wtree/hash.hpp"
#include "wtree/obdd.hpp"

namespace wtree {

/// Per-level blinding key pairs, derived deterministically from one 32-byte
/// seed. Secret material: buffers are wiped on destruction and must never be
/// logged. One seed serves one committed function; reuse across functions
/// voids the hiding intuition.
class SeedKeys {
public:
    SeedKeys() = default;
    SeedKeys(const SeedKeys&) = default;
    SeedKeys(SeedKeys&&) noexcept = default;
    SeedKeys& operator=(const SeedKeys&) = default;
    SeedKeys& operator=(SeedKeys&&) noexcept = default;
    ~SeedKeys();

    std::size_t level_count() const { return pairs_.size(); }
    const Digest& left(std::size_t i) const { return pairs_[i].first; }
    const Digest& right(std::size_t i) const { return pairs_[i].second; }
    const Digest& seed() const { return seed_; }

private:
    friend SeedKeys derive_keys(const Digest& seed, std::size_t level_count);
    Digest seed_ = {};
    std::vector<std::pair<Digest, Digest>> pairs_;
};

/// L_i = HMAC-SHA-256(seed, "WTL" || i as u32 BE), R_i likewise with "WTR".
SeedKeys derive_keys(const Digest& seed, std::size_t level_count);

/// Node hashes and Aux values of a diagram under a key set. Each DAG node is
/// hashed exactly once; the root hash is the public commitment.
class CommitmentTree {
public:
    CommitmentTree(Qrobdd diagram, std::vector<std::vector<Digest>> node_hash,
                   std::vector<std::vector<Digest>> node_aux, std::vector<Digest> leaf_hash,
                   Digest root_hash)
        : diagram_(std::move(diagram)),
          node_hash_(std::move(node_hash)),
          node_aux_(std::move(node_aux)),
          leaf_hash_(std::move(leaf_hash)),
          root_hash_(root_hash) {}

    const Qrobdd& diagram() const { return diagram_; }
    const Digest& node_hash(std::size_t level, std::size_t index) const {
        return node_hash_[level][index];
    }
    const Digest& node_aux(std::size_t level, std::size_t index) const {
        return node_aux_[level][index];
    }
    const Digest& leaf_hash(std::size_t index) const { return leaf_hash_[index]; }
    const Digest& root_hash() const { return root_hash_; }

private:
    Qrobdd diagram_;
    std::vector<std::vector<Digest>> node_hash_;  // [level][node index]
    std::vector<std::vector<Digest>> node_aux_;
    std::vector<Digest> leaf_hash_;
    Digest root_hash_;
};

/// Keyed hash of one internal node from its two child hashes:
///   half_L = H(child_L || L_i), half_R = H(child_R || R_i)
///   hash   = H(half_L || half_R), aux = half_L xor half_R
std::pair<Digest, Digest> hash_internal(const Digest& child_l, const Digest& child_r,
                                        const Digest& key_l, const Digest& key_r,
                                        const Hasher& hasher = default_hasher());

/// Bottom-up commitment over the DAG: leaf hashes are H(payload), internal
/// nodes use hash_internal with level i's key pair. Exactly one hash set per
/// DAG node (leaves + 3 * internal nodes hash invocations).
CommitmentTree commit(const Qrobdd& q, const SeedKeys& keys,
                      const Hasher& hasher = default_hasher());

/// Full reveal: recomputes the commitment and compares against `root`.
bool verify_full(const Digest& root, const Qrobdd& q, const SeedKeys& keys,
                 const Hasher& hasher = default_hasher());

// Commitment file "WTC-TREE1": magic, n (u16 BE), root hash, per level a
// u32 BE node count then (hash, aux) pairs in node-table order, leaf count
// (u16 BE), leaf hashes in leaf-table order.
Bytes encode_wtc_tree1(const CommitmentTree& tree);

/// Decoded skeleton of a commitment file. Opening additionally needs the
/// diagram (the tree file carries hashes, not topology).
struct CommitmentTreeFile {
    std::size_t level_count;
    Digest root_hash;
    std::vector<std::vector<std::pair<Digest, Digest>>> levels;  // (hash, aux)
    std::vector<Digest> leaf_hashes;
};

CommitmentTreeFile decode_wtc_tree1(BytesView data);

/// Reattaches a decoded tree file to its diagram, checking shape agreement.
CommitmentTree bind_tree_file(const CommitmentTreeFile& file, const Qrobdd& diagram);

}  // namespace wtree
