#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wtree/bytes.hpp"

namespace wtree {

inline constexpr std::size_t kMaxLevels = 4096;
inline constexpr std::size_t kMinPayloadLen = 1;
inline constexpr std::size_t kMaxPayloadLen = 63;  // != 64, keeps leaf preimages apart from internal ones

/// Fixed-length bit string, MSB-first within each byte: bit i of the input is
/// (byte[i / 8] >> (7 - i % 8)) & 1. Pad bits past bit_count() must be zero.
class InputWord {
public:
    InputWord() = default;
    InputWord(std::size_t bit_count, Bytes bits);  // validates length and zero padding

    static InputWord zeros(std::size_t bit_count);
    static InputWord from_uint(std::size_t bit_count, std::uint64_t value);  // bit_count <= 64
    static InputWord from_hex(std::size_t bit_count, std::string_view hex);

    std::size_t bit_count() const { return bit_count_; }
    bool bit(std::size_t i) const;
    void set_bit(std::size_t i, bool v);
    const Bytes& bytes() const { return bits_; }

    friend bool operator==(const InputWord&, const InputWord&) = default;

private:
    std::size_t bit_count_ = 0;
    Bytes bits_;
};

struct ObddNode {
    std::uint32_t lo;  // child taken on bit 0; index into the next level (or the leaf table on the last level)
    std::uint32_t hi;  // child taken on bit 1

    friend bool operator==(const ObddNode&, const ObddNode&) = default;
};

/// Quasi-reduced ordered binary decision diagram: a leveled DAG where every
/// root-to-leaf path visits every level exactly once. Level i consumes input
/// bit i; the root sits at level 0. Immutable after construction and safe to
/// share across threads.
class Qrobdd {
public:
    /// Validates all structural invariants: every edge targets the next
    /// level, every node and leaf is reachable from the root, payloads are
    /// pairwise distinct with lengths in [1, 63].
    Qrobdd(std::size_t level_count, std::vector<std::vector<ObddNode>> levels,
           std::vector<Bytes> leaves, std::uint32_t root_index);

    std::size_t level_count() const { return n_; }
    const std::vector<ObddNode>& level(std::size_t i) const { return levels_[i]; }
    std::size_t leaf_count() const { return leaves_.size(); }
    const Bytes& leaf(std::size_t i) const { return leaves_[i]; }
    const std::vector<Bytes>& leaves() const { return leaves_; }
    std::uint32_t root_index() const { return root_; }

    std::size_t internal_node_count() const;
    bool is_boolean() const;  // every payload is a single 0x00 or 0x01 byte

    friend bool operator==(const Qrobdd&, const Qrobdd&) = default;

private:
    std::size_t n_;
    std::vector<std::vector<ObddNode>> levels_;
    std::vector<Bytes> leaves_;
    std::uint32_t root_;
};

/// Transition oracle for layered construction: (level, state code, bit) ->
/// state code of the successor. State codes are opaque byte strings; the
/// builder merges states with byte-identical codes, so canonicalization is
/// the caller's job.
using TransitionFn = std::function<Bytes(std::size_t level, const Bytes& state, bool bit)>;
using FinalizeFn = std::function<Bytes(const Bytes& state)>;

/// Forward layered construction: unrolls `step` from `initial` over all n
/// levels, deduplicating states per level by state code, then maps final
/// states through `finalize` into the (deduplicated) leaf table.
Qrobdd build_layered(std::size_t level_count, const TransitionFn& step, const Bytes& initial,
                     const FinalizeFn& finalize, std::size_t max_levels = kMaxLevels);

/// Leaf payload reached by descending lo on bit 0 / hi on bit 1 per level.
const Bytes& evaluate(const Qrobdd& q, const InputWord& x);

/// Minimal quasi-reduced form: bottom-up merge of nodes with identical
/// (canonicalized) children plus unreachable-node elimination. Semantics
/// preserved; idempotent.
Qrobdd reduce(const Qrobdd& q);

enum class BoolOp { And, Or, Xor };

/// Pointwise connective over two boolean diagrams of equal level count.
/// Result is reduced.
Qrobdd apply(const Qrobdd& a, const Qrobdd& b, BoolOp op);

/// Swaps 0x00/0x01 payloads; structure is untouched.
Qrobdd negate(const Qrobdd& q);

/// Payloads for X = 0 .. 2^n - 1 in input order. Guarded to n <= 20.
std::vector<Bytes> truth_table(const Qrobdd& q);

// Binary diagram format "WTD1": magic, n (u16 BE), per level a u32 BE node
// count then (lo, hi) pairs as u32 BE, leaf count (u16 BE), leaves as
// (len: u8, payload), root index (u32 BE).
Bytes encode_wtd1(const Qrobdd& q);
Qrobdd decode_wtd1(BytesView data);

}  // namespace wtree
