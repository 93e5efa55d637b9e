#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "wtree/certificate.hpp"

using namespace wtree;
using namespace wtree::test;

namespace {

Digest digest_of_hex(const char* hex) { return digest_from_bytes(BytesView(from_hex(hex))); }

}  // namespace

TEST_CASE("ed25519 backend matches the RFC 8032 vectors") {
    // TEST 1: empty message
    Digest sk1 = digest_of_hex("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60");
    Digest pk1 = digest_of_hex("d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");
    CHECK(ed25519_public_key(sk1) == pk1);
    Bytes sig1 = ed25519_sign(sk1, BytesView());
    CHECK(to_hex(BytesView(sig1)) ==
          "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e06522490155"
          "5fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b");
    CHECK(ed25519_verify(pk1, BytesView(), BytesView(sig1)));

    // TEST 2: one-byte message 0x72
    Digest sk2 = digest_of_hex("4ccd089b28ff96da9db6c346ec114e0f5b8a319f35aba624da8cf6ed4fb8a6fb");
    Digest pk2 = digest_of_hex("3d4017c3e843895a92b70aa74d1b7ebc9c982ccf2ec4968cc0cd55f12af4660c");
    Bytes msg = {0x72};
    CHECK(ed25519_public_key(sk2) == pk2);
    CHECK(to_hex(BytesView(ed25519_sign(sk2, BytesView(msg)))) ==
          "92a009a9f0d4cab8720e820b5f642540a2b27b5416503f8fb3762223ebdb69da"
          "085ac1e43e15996e458f3613d0f11d8c387b2eaeb4302aeeb00d291612bb0c00");
}

TEST_CASE("issue and check round trip") {
    Rng rng(211);
    Digest key = random_digest(rng);
    Digest pub = ed25519_public_key(key);
    Certificate cert = issue(random_digest(rng), random_digest(rng), random_digest(rng),
                             1000, 2000, key);
    CHECK(check(cert, pub, 1500) == CertCheck::Valid);
    CHECK(check(cert, pub, 1000) == CertCheck::Valid);
    CHECK(check(cert, pub, 2000) == CertCheck::Valid);
    CHECK(check(cert, pub, 999) == CertCheck::Expired);
    CHECK(check(cert, pub, 2001) == CertCheck::Expired);
    CHECK(check(cert, ed25519_public_key(random_digest(rng)), 1500) == CertCheck::BadSignature);

    Certificate weird = cert;
    weird.algorithm_id = 0xff;
    CHECK(check(weird, pub, 1500) == CertCheck::UnsupportedAlgorithm);

    CHECK_THROWS_AS(issue(cert.root_hash, cert.schema_id, cert.subject_id, 2000, 1000, key),
                    std::invalid_argument);
}

TEST_CASE("same root, different subjects: distinct signatures, both valid") {
    Rng rng(223);
    Digest key = random_digest(rng);
    Digest pub = ed25519_public_key(key);
    Digest root = random_digest(rng);
    Digest schema = random_digest(rng);
    Certificate a = issue(root, schema, random_digest(rng), 0, 10, key);
    Certificate b = issue(root, schema, random_digest(rng), 0, 10, key);
    CHECK(a.signature != b.signature);
    CHECK(check(a, pub, 5) == CertCheck::Valid);
    CHECK(check(b, pub, 5) == CertCheck::Valid);
}

TEST_CASE("issuing twice over identical inputs is byte-identical") {
    Rng rng(239);
    Digest key = random_digest(rng);
    Digest root = random_digest(rng), schema = random_digest(rng), subj = random_digest(rng);
    Certificate a = issue(root, schema, subj, 7, 9, key);
    Certificate b = issue(root, schema, subj, 7, 9, key);
    CHECK(encode_wtc1(a) == encode_wtc1(b));
}

TEST_CASE("certificate codec round trip") {
    Rng rng(227);
    Digest key = random_digest(rng);
    Certificate cert = issue(random_digest(rng), random_digest(rng), random_digest(rng),
                             42, 4242, key);
    Bytes encoded = encode_wtc1(cert);
    CHECK(decode_wtc1(BytesView(encoded)) == cert);
    CHECK(encoded.size() == 7 + 1 + 32 * 3 + 8 * 2 + 1 + 2 + cert.signature.size());

    CHECK_THROWS_AS(decode_wtc1(BytesView(encoded).subspan(0, encoded.size() - 1)), CodecError);
    Bytes trailing = encoded;
    trailing.push_back(0);
    CHECK_THROWS_AS(decode_wtc1(BytesView(trailing)), CodecError);
}

TEST_CASE("every single-byte mutation yields a non-valid outcome") {
    Rng rng(229);
    Digest key = random_digest(rng);
    Digest pub = ed25519_public_key(key);
    Certificate cert = issue(random_digest(rng), random_digest(rng), random_digest(rng),
                             100, 1000, key);
    Bytes encoded = encode_wtc1(cert);

    for (std::size_t i = 0; i < encoded.size(); ++i) {
        Bytes mutated = encoded;
        mutated[i] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        bool valid = false;
        try {
            Certificate c = decode_wtc1(BytesView(mutated));
            // window fields may mutate into a window that still contains
            // `now`; the signature check must then catch the change
            valid = check(c, pub, 500) == CertCheck::Valid;
        } catch (const std::exception&) {
            valid = false;
        }
        CHECK_FALSE(valid);
    }
}

TEST_CASE("randomized issue/check rounds") {
    Rng rng(233);
    for (int trial = 0; trial < 200; ++trial) {
        Digest key = random_digest(rng);
        std::uint64_t from = rng() % 1000000;
        std::uint64_t to = from + rng() % 1000000;
        Certificate cert = issue(random_digest(rng), random_digest(rng), random_digest(rng),
                                 from, to, key);
        std::uint64_t now = from + rng() % (to - from + 1);
        REQUIRE(check(cert, ed25519_public_key(key), now) == CertCheck::Valid);
        REQUIRE(decode_wtc1(BytesView(encode_wtc1(cert))) == cert);
    }
}
