#pragma once

#include <array>
#include <cstdint>

#include "wtree/bytes.hpp"

namespace wtree {

using Digest = std::array<std::uint8_t, 32>;

/// Hash primitive used for node hashes and witness verification. Injectable
/// so tests can count invocations and so a future format version byte can
/// gate a different primitive. The one shipped implementation is SHA-256.
class Hasher {
public:
    virtual ~Hasher() = default;
    virtual Digest hash(BytesView data) const = 0;

    /// hash(a || b) for two 32-byte values, the shape every internal-node
    /// computation uses.
    Digest hash_pair(const Digest& a, const Digest& b) const;
};

class Sha256Hasher final : public Hasher {
public:
    Digest hash(BytesView data) const override;
};

/// Process-wide SHA-256 instance used when no hasher is injected.
const Hasher& default_hasher();

Digest sha256(BytesView data);
Digest hmac_sha256(BytesView key, BytesView message);
Digest xor_digests(const Digest& a, const Digest& b);

Bytes digest_bytes(const Digest& d);
Digest digest_from_bytes(BytesView bytes);  // throws CodecError unless exactly 32 bytes

}  // namespace wtree
