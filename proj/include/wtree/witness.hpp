#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wtree/commitment.hpp"

namespace wtree {

/// Opening of a commitment at one input: per level the key on X's side
/// (L_i if X_i = 0, else R_i), the Aux of the path node, and the leaf
/// payload. Its size is independent of the diagram's node count.
struct Witness {
    std::size_t level_count = 0;
    std::vector<Digest> revealed_keys;  // entry i belongs to level i
    std::vector<Digest> aux_values;     // Aux of the path node at level i, root first
    Bytes payload;

    friend bool operator==(const Witness&, const Witness&) = default;
};

/// Builds the witness for input x against a committed tree.
Witness open(const CommitmentTree& tree, const SeedKeys& keys, const InputWord& x);

/// Recomputes the root from leaf to root:
///   H = hash(payload)
///   for i = n-1 .. 0:  h = hash(H || key_i)
///                      H = X_i == 0 ? hash(h || (h ^ aux_i)) : hash((h ^ aux_i) || h)
/// Returns the payload iff H equals `root`; nullopt on any mismatch, with no
/// hint of where the chain diverged. Length mismatches throw instead.
std::optional<Bytes> verify(const Digest& root, const InputWord& x, const Witness& w,
                            const Hasher& hasher = default_hasher());

// Witness format "WTW1": magic || n (u16 BE) || n revealed keys || n aux
// values || payload length (u16 BE) || payload. Total 8 + 64n + |payload|.
Bytes encode_wtw1(const Witness& w);
Witness decode_wtw1(BytesView data);

}  // namespace wtree
