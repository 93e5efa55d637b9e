#include "wtree/witness.hpp"

#include <stdexcept>

namespace wtree {

Witness open(const CommitmentTree& tree, const SeedKeys& keys, const InputWord& x) {
    const Qrobdd& q = tree.diagram();
    const std::size_t n = q.level_count();
    if (x.bit_count() != n) {
        throw std::invalid_argument("input bit length does not match diagram level count");
    }
    if (keys.level_count() != n) {
        throw std::invalid_argument("key set level count does not match diagram");
    }

    Witness w;
    w.level_count = n;
    w.revealed_keys.reserve(n);
    w.aux_values.reserve(n);
    std::uint32_t idx = q.root_index();
    for (std::size_t i = 0; i < n; ++i) {
        bool bit = x.bit(i);
        w.revealed_keys.push_back(bit ? keys.right(i) : keys.left(i));
        w.aux_values.push_back(tree.node_aux(i, idx));
        const ObddNode& node = q.level(i)[idx];
        idx = bit ? node.hi : node.lo;
    }
    w.payload = q.leaf(idx);
    return w;
}

std::optional<Bytes> verify(const Digest& root, const InputWord& x, const Witness& w,
                            const Hasher& hasher) {
    const std::size_t n = w.level_count;
    if (x.bit_count() != n) {
        throw std::invalid_argument("input bit length does not match witness level count");
    }
    if (w.revealed_keys.size() != n || w.aux_values.size() != n) {
        throw std::invalid_argument("witness key/aux list lengths are inconsistent");
    }
    if (w.payload.size() < kMinPayloadLen || w.payload.size() > kMaxPayloadLen) {
        throw std::invalid_argument("witness payload length must be in [1, 63] bytes");
    }

    Digest current = hasher.hash(BytesView(w.payload));
    for (std::size_t ri = 0; ri < n; ++ri) {
        std::size_t i = n - 1 - ri;
        Digest h = hasher.hash_pair(current, w.revealed_keys[i]);
        Digest sibling = xor_digests(h, w.aux_values[i]);
        current = x.bit(i) ? hasher.hash_pair(sibling, h) : hasher.hash_pair(h, sibling);
    }
    if (current != root) return std::nullopt;
    return w.payload;
}

Bytes encode_wtw1(const Witness& w) {
    Bytes out = {'W', 'T', 'W', '1'};
    put_u16be(out, static_cast<std::uint16_t>(w.level_count));
    for (const Digest& k : w.revealed_keys) out.insert(out.end(), k.begin(), k.end());
    for (const Digest& a : w.aux_values) out.insert(out.end(), a.begin(), a.end());
    put_u16be(out, static_cast<std::uint16_t>(w.payload.size()));
    out.insert(out.end(), w.payload.begin(), w.payload.end());
    return out;
}

Witness decode_wtw1(BytesView data) {
    ByteReader r{data};
    r.expect_magic("WTW1");
    Witness w;
    w.level_count = r.u16be();
    w.revealed_keys.reserve(w.level_count);
    w.aux_values.reserve(w.level_count);
    for (std::size_t i = 0; i < w.level_count; ++i) {
        w.revealed_keys.push_back(digest_from_bytes(BytesView(r.bytes(32))));
    }
    for (std::size_t i = 0; i < w.level_count; ++i) {
        w.aux_values.push_back(digest_from_bytes(BytesView(r.bytes(32))));
    }
    std::uint16_t payload_len = r.u16be();
    if (payload_len < kMinPayloadLen || payload_len > kMaxPayloadLen) {
        throw CodecError("witness payload length out of range");
    }
    w.payload = r.bytes(payload_len);
    r.finish();
    return w;
}

}  // namespace wtree
