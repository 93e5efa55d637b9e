#include "wtree/certificate.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace wtree {

namespace {

constexpr const char* kPreimageTag = "WTCERT1";

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

PkeyPtr load_private(const Digest& key) {
    PkeyPtr pkey(
        EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, key.data(), key.size()));
    if (!pkey) throw std::runtime_error("failed to load Ed25519 private key");
    return pkey;
}

PkeyPtr load_public(const Digest& key) {
    PkeyPtr pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.data(), key.size()));
    if (!pkey) throw std::runtime_error("failed to load Ed25519 public key");
    return pkey;
}

}  // namespace

Bytes Certificate::canonical_preimage() const {
    Bytes out(kPreimageTag, kPreimageTag + 7);
    put_u8(out, version);
    out.insert(out.end(), root_hash.begin(), root_hash.end());
    out.insert(out.end(), schema_id.begin(), schema_id.end());
    out.insert(out.end(), subject_id.begin(), subject_id.end());
    put_u64be(out, valid_from);
    put_u64be(out, valid_to);
    put_u8(out, algorithm_id);
    return out;
}

const char* to_string(CertCheck verdict) {
    switch (verdict) {
        case CertCheck::Valid: return "valid";
        case CertCheck::Expired: return "expired";
        case CertCheck::BadSignature: return "bad_signature";
        case CertCheck::UnsupportedAlgorithm: return "unsupported_algorithm";
    }
    return "unknown";
}

Certificate issue(const Digest& root, const Digest& schema_id, const Digest& subject_id,
                  std::uint64_t valid_from, std::uint64_t valid_to, const Digest& signing_key) {
    if (valid_from > valid_to) {
        throw std::invalid_argument("certificate validity window is inverted");
    }
    Certificate cert;
    cert.root_hash = root;
    cert.schema_id = schema_id;
    cert.subject_id = subject_id;
    cert.valid_from = valid_from;
    cert.valid_to = valid_to;
    Digest digest = sha256(BytesView(cert.canonical_preimage()));
    cert.signature = ed25519_sign(signing_key, BytesView(digest));
    return cert;
}

CertCheck check(const Certificate& cert, const Digest& notary_public_key, std::uint64_t now) {
    if (cert.algorithm_id != kAlgorithmEd25519 || cert.version != kCertVersion) {
        return CertCheck::UnsupportedAlgorithm;
    }
    if (now < cert.valid_from || now > cert.valid_to) {
        return CertCheck::Expired;
    }
    Digest digest = sha256(BytesView(cert.canonical_preimage()));
    if (!ed25519_verify(notary_public_key, BytesView(digest), BytesView(cert.signature))) {
        return CertCheck::BadSignature;
    }
    return CertCheck::Valid;
}

Bytes encode_wtc1(const Certificate& cert) {
    Bytes out = cert.canonical_preimage();
    put_u16be(out, static_cast<std::uint16_t>(cert.signature.size()));
    out.insert(out.end(), cert.signature.begin(), cert.signature.end());
    return out;
}

Certificate decode_wtc1(BytesView data) {
    ByteReader r{data};
    r.expect_magic(kPreimageTag);
    Certificate cert;
    cert.version = r.u8();
    cert.root_hash = digest_from_bytes(BytesView(r.bytes(32)));
    cert.schema_id = digest_from_bytes(BytesView(r.bytes(32)));
    cert.subject_id = digest_from_bytes(BytesView(r.bytes(32)));
    cert.valid_from = r.u64be();
    cert.valid_to = r.u64be();
    cert.algorithm_id = r.u8();
    std::uint16_t sig_len = r.u16be();
    cert.signature = r.bytes(sig_len);
    r.finish();
    return cert;
}

Digest ed25519_public_key(const Digest& private_key) {
    PkeyPtr pkey = load_private(private_key);
    Digest pub;
    std::size_t len = pub.size();
    if (EVP_PKEY_get_raw_public_key(pkey.get(), pub.data(), &len) != 1 || len != pub.size()) {
        throw std::runtime_error("failed to derive Ed25519 public key");
    }
    return pub;
}

Bytes ed25519_sign(const Digest& private_key, BytesView message) {
    PkeyPtr pkey = load_private(private_key);
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
        throw std::runtime_error("Ed25519 sign init failed");
    }
    std::size_t sig_len = 0;
    if (EVP_DigestSign(ctx.get(), nullptr, &sig_len, message.data(), message.size()) != 1) {
        throw std::runtime_error("Ed25519 sign sizing failed");
    }
    Bytes sig(sig_len);
    if (EVP_DigestSign(ctx.get(), sig.data(), &sig_len, message.data(), message.size()) != 1) {
        throw std::runtime_error("Ed25519 sign failed");
    }
    sig.resize(sig_len);
    return sig;
}

bool ed25519_verify(const Digest& public_key, BytesView message, BytesView signature) {
    PkeyPtr pkey = load_public(public_key);
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
        throw std::runtime_error("Ed25519 verify init failed");
    }
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                            message.size()) == 1;
}

}  // namespace wtree
