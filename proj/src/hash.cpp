#include "wtree/hash.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace wtree {

Digest Sha256Hasher::hash(BytesView data) const { return sha256(data); }

Digest Hasher::hash_pair(const Digest& a, const Digest& b) const {
    std::array<std::uint8_t, 64> buf;
    std::memcpy(buf.data(), a.data(), 32);
    std::memcpy(buf.data() + 32, b.data(), 32);
    return hash(BytesView(buf));
}

const Hasher& default_hasher() {
    static const Sha256Hasher instance;
    return instance;
}

Digest sha256(BytesView data) {
    Digest out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("SHA-256 failed");
    }
    return out;
}

Digest hmac_sha256(BytesView key, BytesView message) {
    Digest out;
    std::size_t len = 0;
    if (EVP_Q_mac(nullptr, "HMAC", nullptr, "SHA256", nullptr, key.data(), key.size(),
                  message.data(), message.size(), out.data(), out.size(), &len) == nullptr ||
        len != out.size()) {
        throw std::runtime_error("HMAC-SHA-256 failed");
    }
    return out;
}

Digest xor_digests(const Digest& a, const Digest& b) {
    Digest out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

Bytes digest_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }

Digest digest_from_bytes(BytesView bytes) {
    if (bytes.size() != 32) throw CodecError("expected exactly 32 bytes");
    Digest out;
    std::memcpy(out.data(), bytes.data(), 32);
    return out;
}

}  // namespace wtree
