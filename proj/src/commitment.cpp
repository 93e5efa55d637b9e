#include "wtree/commitment.hpp"

#include <openssl/crypto.h>

#include <cstring>
#include <stdexcept>

namespace wtree {

SeedKeys::~SeedKeys() {
    OPENSSL_cleanse(seed_.data(), seed_.size());
    if (!pairs_.empty()) {
        OPENSSL_cleanse(pairs_.data(), pairs_.size() * sizeof(pairs_[0]));
    }
}

SeedKeys derive_keys(const Digest& seed, std::size_t level_count) {
    SeedKeys keys;
    keys.seed_ = seed;
    keys.pairs_.reserve(level_count);
    for (std::size_t i = 0; i < level_count; ++i) {
        Bytes msg_l = {'W', 'T', 'L'};
        Bytes msg_r = {'W', 'T', 'R'};
        put_u32be(msg_l, static_cast<std::uint32_t>(i));
        put_u32be(msg_r, static_cast<std::uint32_t>(i));
        Digest l = hmac_sha256(BytesView(seed), BytesView(msg_l));
        Digest r = hmac_sha256(BytesView(seed), BytesView(msg_r));
        if (l == r) {
            throw std::runtime_error("degenerate key pair derived (L_i == R_i)");
        }
        keys.pairs_.emplace_back(l, r);
    }
    return keys;
}

std::pair<Digest, Digest> hash_internal(const Digest& child_l, const Digest& child_r,
                                        const Digest& key_l, const Digest& key_r,
                                        const Hasher& hasher) {
    Digest half_l = hasher.hash_pair(child_l, key_l);
    Digest half_r = hasher.hash_pair(child_r, key_r);
    return {hasher.hash_pair(half_l, half_r), xor_digests(half_l, half_r)};
}

CommitmentTree commit(const Qrobdd& q, const SeedKeys& keys, const Hasher& hasher) {
    const std::size_t n = q.level_count();
    if (keys.level_count() != n) {
        throw std::invalid_argument("key set level count does not match diagram");
    }

    std::vector<Digest> leaf_hash(q.leaf_count());
    for (std::size_t j = 0; j < q.leaf_count(); ++j) {
        leaf_hash[j] = hasher.hash(BytesView(q.leaf(j)));
    }

    std::vector<std::vector<Digest>> node_hash(n);
    std::vector<std::vector<Digest>> node_aux(n);
    for (std::size_t ri = 0; ri < n; ++ri) {
        std::size_t i = n - 1 - ri;
        const auto& level = q.level(i);
        const std::vector<Digest>& below = (i + 1 < n) ? node_hash[i + 1] : leaf_hash;
        node_hash[i].resize(level.size());
        node_aux[i].resize(level.size());
        for (std::size_t j = 0; j < level.size(); ++j) {
            auto [h, aux] = hash_internal(below[level[j].lo], below[level[j].hi],
                                          keys.left(i), keys.right(i), hasher);
            node_hash[i][j] = h;
            node_aux[i][j] = aux;
        }
    }

    Digest root = (n == 0) ? leaf_hash[q.root_index()] : node_hash[0][q.root_index()];
    return CommitmentTree(q, std::move(node_hash), std::move(node_aux), std::move(leaf_hash),
                          root);
}

bool verify_full(const Digest& root, const Qrobdd& q, const SeedKeys& keys,
                 const Hasher& hasher) {
    return commit(q, keys, hasher).root_hash() == root;
}

namespace {

void append_digest(Bytes& out, const Digest& d) { out.insert(out.end(), d.begin(), d.end()); }

constexpr const char* kTreeMagic = "WTC-TREE1";

}  // namespace

Bytes encode_wtc_tree1(const CommitmentTree& tree) {
    const Qrobdd& q = tree.diagram();
    Bytes out(kTreeMagic, kTreeMagic + 9);
    put_u16be(out, static_cast<std::uint16_t>(q.level_count()));
    append_digest(out, tree.root_hash());
    for (std::size_t i = 0; i < q.level_count(); ++i) {
        put_u32be(out, static_cast<std::uint32_t>(q.level(i).size()));
        for (std::size_t j = 0; j < q.level(i).size(); ++j) {
            append_digest(out, tree.node_hash(i, j));
            append_digest(out, tree.node_aux(i, j));
        }
    }
    put_u16be(out, static_cast<std::uint16_t>(q.leaf_count()));
    for (std::size_t j = 0; j < q.leaf_count(); ++j) {
        append_digest(out, tree.leaf_hash(j));
    }
    return out;
}

CommitmentTreeFile decode_wtc_tree1(BytesView data) {
    ByteReader r{data};
    r.expect_magic(kTreeMagic);
    CommitmentTreeFile file;
    file.level_count = r.u16be();
    file.root_hash = digest_from_bytes(BytesView(r.bytes(32)));
    file.levels.resize(file.level_count);
    for (std::size_t i = 0; i < file.level_count; ++i) {
        std::uint32_t count = r.u32be();
        if (static_cast<std::size_t>(count) * 64 > r.remaining()) {
            throw CodecError("input truncated");
        }
        file.levels[i].reserve(count);
        for (std::uint32_t j = 0; j < count; ++j) {
            Digest h = digest_from_bytes(BytesView(r.bytes(32)));
            Digest aux = digest_from_bytes(BytesView(r.bytes(32)));
            file.levels[i].emplace_back(h, aux);
        }
    }
    std::size_t leaf_count = r.u16be();
    file.leaf_hashes.reserve(leaf_count);
    for (std::size_t j = 0; j < leaf_count; ++j) {
        file.leaf_hashes.push_back(digest_from_bytes(BytesView(r.bytes(32))));
    }
    r.finish();
    return file;
}

CommitmentTree bind_tree_file(const CommitmentTreeFile& file, const Qrobdd& diagram) {
    if (file.level_count != diagram.level_count() ||
        file.leaf_hashes.size() != diagram.leaf_count()) {
        throw CodecError("commitment file does not match diagram shape");
    }
    std::vector<std::vector<Digest>> node_hash(file.level_count);
    std::vector<std::vector<Digest>> node_aux(file.level_count);
    for (std::size_t i = 0; i < file.level_count; ++i) {
        if (file.levels[i].size() != diagram.level(i).size()) {
            throw CodecError("commitment file does not match diagram shape");
        }
        node_hash[i].reserve(file.levels[i].size());
        node_aux[i].reserve(file.levels[i].size());
        for (const auto& [h, aux] : file.levels[i]) {
            node_hash[i].push_back(h);
            node_aux[i].push_back(aux);
        }
    }
    return CommitmentTree(diagram, std::move(node_hash), std::move(node_aux), file.leaf_hashes,
                          file.root_hash);
}

}  // namespace wtree
