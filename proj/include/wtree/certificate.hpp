#pragma once

#include <cstdint>

#include "wtree/hash.hpp"

namespace wtree {

inline constexpr std::uint8_t kCertVersion = 0x01;
inline constexpr std::uint8_t kAlgorithmEd25519 = 0x01;

/// Notary-signed binding of a commitment root to a criterion schema and a
/// pseudonymous subject, with a validity window. The signature covers
/// SHA-256 of the canonical preimage:
///   "WTCERT1" || version || root_hash || schema_id || subject_id ||
///   valid_from (u64 BE) || valid_to (u64 BE) || algorithm_id
struct Certificate {
    std::uint8_t version = kCertVersion;
    Digest root_hash = {};
    Digest schema_id = {};
    Digest subject_id = {};
    std::uint64_t valid_from = 0;
    std::uint64_t valid_to = 0;
    std::uint8_t algorithm_id = kAlgorithmEd25519;
    Bytes signature;

    Bytes canonical_preimage() const;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

enum class CertCheck {
    Valid,
    Expired,
    BadSignature,
    UnsupportedAlgorithm,
};

const char* to_string(CertCheck verdict);

/// Signs (root, schema, subject, window) under the notary's Ed25519 key.
/// `signing_key` is the 32-byte raw private key.
Certificate issue(const Digest& root, const Digest& schema_id, const Digest& subject_id,
                  std::uint64_t valid_from, std::uint64_t valid_to, const Digest& signing_key);

/// Buyer-side check: algorithm supported, `now` within the window, signature
/// valid over the canonical preimage under `notary_public_key` (32 bytes raw).
CertCheck check(const Certificate& cert, const Digest& notary_public_key, std::uint64_t now);

// Certificate file "WTC1": the canonical preimage bytes followed by the
// signature length (u16 BE) and signature.
Bytes encode_wtc1(const Certificate& cert);
Certificate decode_wtc1(BytesView data);

// Ed25519 plumbing (raw 32-byte keys, 64-byte signatures).
Digest ed25519_public_key(const Digest& private_key);
Bytes ed25519_sign(const Digest& private_key, BytesView message);
bool ed25519_verify(const Digest& public_key, BytesView message, BytesView signature);

}  // namespace wtree
