#include "wtree/obdd.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace wtree {

namespace {

struct BytesHash {
    std::size_t operator()(const Bytes& b) const {
        std::size_t h = 14695981039346656037ULL;
        for (std::uint8_t c : b) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }
};

struct PairHash {
    std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const {
        return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
    }
};

void check_payload(const Bytes& payload) {
    if (payload.size() < kMinPayloadLen || payload.size() > kMaxPayloadLen) {
        throw std::invalid_argument("leaf payload length must be in [1, 63] bytes");
    }
}

}  // namespace

InputWord::InputWord(std::size_t bit_count, Bytes bits)
    : bit_count_(bit_count), bits_(std::move(bits)) {
    if (bits_.size() != (bit_count_ + 7) / 8) {
        throw std::invalid_argument("input word has wrong byte length");
    }
    if (bit_count_ % 8 != 0) {
        std::uint8_t pad_mask = static_cast<std::uint8_t>(0xff >> (bit_count_ % 8));
        if ((bits_.back() & pad_mask) != 0) {
            throw std::invalid_argument("input word pad bits must be zero");
        }
    }
}

InputWord InputWord::zeros(std::size_t bit_count) {
    return InputWord(bit_count, Bytes((bit_count + 7) / 8, 0));
}

InputWord InputWord::from_uint(std::size_t bit_count, std::uint64_t value) {
    if (bit_count > 64) throw std::invalid_argument("from_uint supports at most 64 bits");
    if (bit_count < 64 && (value >> bit_count) != 0) {
        throw std::invalid_argument("value does not fit in bit count");
    }
    InputWord w = zeros(bit_count);
    for (std::size_t i = 0; i < bit_count; ++i) {
        w.set_bit(i, (value >> (bit_count - 1 - i)) & 1);
    }
    return w;
}

InputWord InputWord::from_hex(std::size_t bit_count, std::string_view hex) {
    return InputWord(bit_count, wtree::from_hex(hex));
}

bool InputWord::bit(std::size_t i) const {
    if (i >= bit_count_) throw std::out_of_range("input bit index out of range");
    return (bits_[i / 8] >> (7 - i % 8)) & 1;
}

void InputWord::set_bit(std::size_t i, bool v) {
    if (i >= bit_count_) throw std::out_of_range("input bit index out of range");
    std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - i % 8));
    if (v) {
        bits_[i / 8] |= mask;
    } else {
        bits_[i / 8] &= static_cast<std::uint8_t>(~mask);
    }
}

Qrobdd::Qrobdd(std::size_t level_count, std::vector<std::vector<ObddNode>> levels,
               std::vector<Bytes> leaves, std::uint32_t root_index)
    : n_(level_count), levels_(std::move(levels)), leaves_(std::move(leaves)), root_(root_index) {
    if (n_ > 65535) throw std::invalid_argument("level count exceeds format limit (65535)");
    if (levels_.size() != n_) throw std::invalid_argument("level table count must equal level count");
    if (leaves_.empty()) throw std::invalid_argument("diagram needs at least one leaf");
    if (leaves_.size() > 65535) throw std::invalid_argument("leaf count exceeds format limit (65535)");

    for (std::size_t i = 0; i + 1 < leaves_.size(); ++i) {
        check_payload(leaves_[i]);
        for (std::size_t j = i + 1; j < leaves_.size(); ++j) {
            if (leaves_[i] == leaves_[j]) {
                throw std::invalid_argument("leaf payloads must be pairwise distinct");
            }
        }
    }
    check_payload(leaves_.back());

    for (std::size_t i = 0; i < n_; ++i) {
        if (levels_[i].empty()) throw std::invalid_argument("level table must be non-empty");
        std::size_t next_size = (i + 1 < n_) ? levels_[i + 1].size() : leaves_.size();
        for (const ObddNode& node : levels_[i]) {
            if (node.lo >= next_size || node.hi >= next_size) {
                throw std::invalid_argument("edge targets an index outside the next level");
            }
        }
    }
    std::size_t root_table = (n_ == 0) ? leaves_.size() : levels_[0].size();
    if (root_ >= root_table) throw std::invalid_argument("root index out of range");

    // Reachability: every node and leaf must be on some root-to-leaf path.
    std::vector<char> reachable_leaf(leaves_.size(), 0);
    if (n_ == 0) {
        reachable_leaf[root_] = 1;
    } else {
        std::vector<char> frontier(levels_[0].size(), 0);
        frontier[root_] = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t next_size = (i + 1 < n_) ? levels_[i + 1].size() : leaves_.size();
            std::vector<char> next(next_size, 0);
            for (std::size_t j = 0; j < levels_[i].size(); ++j) {
                if (!frontier[j]) continue;
                next[levels_[i][j].lo] = 1;
                next[levels_[i][j].hi] = 1;
            }
            if (std::find(frontier.begin(), frontier.end(), 0) != frontier.end()) {
                throw std::invalid_argument("unreachable node in level table");
            }
            if (i + 1 < n_) {
                frontier = std::move(next);
            } else {
                reachable_leaf = std::move(next);
            }
        }
    }
    if (std::find(reachable_leaf.begin(), reachable_leaf.end(), 0) != reachable_leaf.end()) {
        throw std::invalid_argument("unreachable leaf in leaf table");
    }
}

std::size_t Qrobdd::internal_node_count() const {
    std::size_t total = 0;
    for (const auto& level : levels_) total += level.size();
    return total;
}

bool Qrobdd::is_boolean() const {
    return std::all_of(leaves_.begin(), leaves_.end(), [](const Bytes& p) {
        return p.size() == 1 && (p[0] == 0x00 || p[0] == 0x01);
    });
}

Qrobdd build_layered(std::size_t level_count, const TransitionFn& step, const Bytes& initial,
                     const FinalizeFn& finalize, std::size_t max_levels) {
    if (level_count > max_levels) {
        throw std::invalid_argument("level count exceeds builder limit");
    }

    if (level_count == 0) {
        Bytes payload = finalize(initial);
        check_payload(payload);
        return Qrobdd(0, {}, {std::move(payload)}, 0);
    }

    std::vector<Bytes> states = {initial};
    std::vector<std::vector<ObddNode>> levels(level_count);
    // Levels 0 .. n-2: children are next-level states, interned by code.
    for (std::size_t i = 0; i + 1 < level_count; ++i) {
        std::unordered_map<Bytes, std::uint32_t, BytesHash> intern;
        std::vector<Bytes> next_states;
        levels[i].reserve(states.size());
        for (const Bytes& s : states) {
            std::uint32_t child[2];
            for (int bit = 0; bit < 2; ++bit) {
                Bytes code = step(i, s, bit != 0);
                auto [it, fresh] = intern.emplace(std::move(code), next_states.size());
                if (fresh) next_states.push_back(it->first);
                child[bit] = it->second;
            }
            levels[i].push_back({child[0], child[1]});
        }
        states = std::move(next_states);
    }

    // Last level: run the final transitions, then intern finalize(state)
    // results into the leaf table (two final states may share a payload).
    std::unordered_map<Bytes, std::uint32_t, BytesHash> final_intern;
    std::vector<Bytes> final_states;
    std::vector<std::array<std::uint32_t, 2>> last_children(states.size());
    for (std::size_t j = 0; j < states.size(); ++j) {
        for (int bit = 0; bit < 2; ++bit) {
            Bytes code = step(level_count - 1, states[j], bit != 0);
            auto [it, fresh] = final_intern.emplace(std::move(code), final_states.size());
            if (fresh) final_states.push_back(it->first);
            last_children[j][bit] = it->second;
        }
    }

    std::vector<Bytes> leaves;
    std::unordered_map<Bytes, std::uint32_t, BytesHash> leaf_intern;
    std::vector<std::uint32_t> state_to_leaf(final_states.size());
    for (std::size_t j = 0; j < final_states.size(); ++j) {
        Bytes payload = finalize(final_states[j]);
        check_payload(payload);
        auto [it, fresh] = leaf_intern.emplace(std::move(payload), leaves.size());
        if (fresh) leaves.push_back(it->first);
        state_to_leaf[j] = it->second;
    }
    levels[level_count - 1].reserve(last_children.size());
    for (const auto& c : last_children) {
        levels[level_count - 1].push_back({state_to_leaf[c[0]], state_to_leaf[c[1]]});
    }

    return Qrobdd(level_count, std::move(levels), std::move(leaves), 0);
}

const Bytes& evaluate(const Qrobdd& q, const InputWord& x) {
    if (x.bit_count() != q.level_count()) {
        throw std::invalid_argument("input bit length does not match diagram level count");
    }
    std::uint32_t idx = q.root_index();
    for (std::size_t i = 0; i < q.level_count(); ++i) {
        const ObddNode& node = q.level(i)[idx];
        idx = x.bit(i) ? node.hi : node.lo;
    }
    return q.leaf(idx);
}

Qrobdd reduce(const Qrobdd& q) {
    const std::size_t n = q.level_count();
    if (n == 0) {
        return Qrobdd(0, {}, {q.leaf(q.root_index())}, 0);
    }

    // Bottom-up merge: nodes whose (canonicalized) children coincide get one id.
    std::vector<std::vector<std::uint32_t>> canon(n);      // old index -> merged id
    std::vector<std::vector<ObddNode>> merged(n);          // merged id -> remapped children
    for (std::size_t ri = 0; ri < n; ++ri) {
        std::size_t i = n - 1 - ri;
        const auto& old_level = q.level(i);
        canon[i].resize(old_level.size());
        std::unordered_map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t, PairHash> seen;
        for (std::size_t j = 0; j < old_level.size(); ++j) {
            std::uint32_t lo = old_level[j].lo;
            std::uint32_t hi = old_level[j].hi;
            if (i + 1 < n) {
                lo = canon[i + 1][lo];
                hi = canon[i + 1][hi];
            }
            auto [it, fresh] = seen.emplace(std::make_pair(lo, hi),
                                            static_cast<std::uint32_t>(merged[i].size()));
            if (fresh) merged[i].push_back({lo, hi});
            canon[i][j] = it->second;
        }
    }

    // Reachability over the merged graph, then compaction in table order.
    std::uint32_t root = canon[0][q.root_index()];
    std::vector<std::vector<char>> live(n);
    std::vector<char> live_leaf(q.leaf_count(), 0);
    live[0].assign(merged[0].size(), 0);
    live[0][root] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) live[i + 1].assign(merged[i + 1].size(), 0);
        for (std::size_t j = 0; j < merged[i].size(); ++j) {
            if (!live[i][j]) continue;
            auto& mark = (i + 1 < n) ? live[i + 1] : live_leaf;
            mark[merged[i][j].lo] = 1;
            mark[merged[i][j].hi] = 1;
        }
    }

    std::vector<Bytes> leaves;
    std::vector<std::uint32_t> leaf_remap(q.leaf_count());
    for (std::size_t j = 0; j < q.leaf_count(); ++j) {
        if (!live_leaf[j]) continue;
        leaf_remap[j] = static_cast<std::uint32_t>(leaves.size());
        leaves.push_back(q.leaf(j));
    }

    std::vector<std::vector<ObddNode>> levels(n);
    std::vector<std::uint32_t> next_remap = leaf_remap;
    for (std::size_t ri = 0; ri < n; ++ri) {
        std::size_t i = n - 1 - ri;
        std::vector<std::uint32_t> remap(merged[i].size());
        for (std::size_t j = 0; j < merged[i].size(); ++j) {
            if (!live[i][j]) continue;
            remap[j] = static_cast<std::uint32_t>(levels[i].size());
            levels[i].push_back({next_remap[merged[i][j].lo], next_remap[merged[i][j].hi]});
        }
        next_remap = std::move(remap);
    }

    return Qrobdd(n, std::move(levels), std::move(leaves), next_remap[root]);
}

Qrobdd apply(const Qrobdd& a, const Qrobdd& b, BoolOp op) {
    if (a.level_count() != b.level_count()) {
        throw std::invalid_argument("apply requires diagrams with equal level counts");
    }
    if (!a.is_boolean() || !b.is_boolean()) {
        throw std::invalid_argument("apply requires boolean payloads");
    }
    const std::size_t n = a.level_count();

    auto pack = [](std::uint32_t ia, std::uint32_t ib) {
        Bytes code;
        put_u32be(code, ia);
        put_u32be(code, ib);
        return code;
    };
    auto unpack = [](const Bytes& code) {
        ByteReader r{BytesView(code)};
        std::uint32_t ia = r.u32be();
        std::uint32_t ib = r.u32be();
        return std::make_pair(ia, ib);
    };

    TransitionFn step = [&](std::size_t level, const Bytes& state, bool bit) {
        auto [ia, ib] = unpack(state);
        const ObddNode& na = a.level(level)[ia];
        const ObddNode& nb = b.level(level)[ib];
        return pack(bit ? na.hi : na.lo, bit ? nb.hi : nb.lo);
    };
    FinalizeFn finalize = [&](const Bytes& state) {
        auto [ia, ib] = unpack(state);
        bool va = a.leaf(ia)[0] != 0;
        bool vb = b.leaf(ib)[0] != 0;
        bool out = false;
        switch (op) {
            case BoolOp::And: out = va && vb; break;
            case BoolOp::Or: out = va || vb; break;
            case BoolOp::Xor: out = va != vb; break;
        }
        return Bytes{out ? std::uint8_t{0x01} : std::uint8_t{0x00}};
    };

    return reduce(build_layered(n, step, pack(a.root_index(), b.root_index()), finalize));
}

Qrobdd negate(const Qrobdd& q) {
    if (!q.is_boolean()) {
        throw std::invalid_argument("negate requires boolean payloads");
    }
    std::vector<Bytes> leaves;
    leaves.reserve(q.leaf_count());
    for (std::size_t j = 0; j < q.leaf_count(); ++j) {
        leaves.push_back(Bytes{q.leaf(j)[0] ? std::uint8_t{0x00} : std::uint8_t{0x01}});
    }
    std::vector<std::vector<ObddNode>> levels;
    levels.reserve(q.level_count());
    for (std::size_t i = 0; i < q.level_count(); ++i) levels.push_back(q.level(i));
    return Qrobdd(q.level_count(), std::move(levels), std::move(leaves), q.root_index());
}

std::vector<Bytes> truth_table(const Qrobdd& q) {
    if (q.level_count() > 20) {
        throw std::invalid_argument("truth_table is limited to 20 levels");
    }
    std::vector<Bytes> table;
    table.reserve(std::size_t{1} << q.level_count());
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << q.level_count()); ++k) {
        table.push_back(evaluate(q, InputWord::from_uint(q.level_count(), k)));
    }
    return table;
}

Bytes encode_wtd1(const Qrobdd& q) {
    Bytes out = {'W', 'T', 'D', '1'};
    put_u16be(out, static_cast<std::uint16_t>(q.level_count()));
    for (std::size_t i = 0; i < q.level_count(); ++i) {
        put_u32be(out, static_cast<std::uint32_t>(q.level(i).size()));
        for (const ObddNode& node : q.level(i)) {
            put_u32be(out, node.lo);
            put_u32be(out, node.hi);
        }
    }
    put_u16be(out, static_cast<std::uint16_t>(q.leaf_count()));
    for (std::size_t j = 0; j < q.leaf_count(); ++j) {
        put_u8(out, static_cast<std::uint8_t>(q.leaf(j).size()));
        out.insert(out.end(), q.leaf(j).begin(), q.leaf(j).end());
    }
    put_u32be(out, q.root_index());
    return out;
}

Qrobdd decode_wtd1(BytesView data) {
    ByteReader r{data};
    r.expect_magic("WTD1");
    std::size_t n = r.u16be();
    std::vector<std::vector<ObddNode>> levels(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t count = r.u32be();
        if (static_cast<std::size_t>(count) * 8 > r.remaining()) {
            throw CodecError("input truncated");
        }
        levels[i].reserve(count);
        for (std::uint32_t j = 0; j < count; ++j) {
            std::uint32_t lo = r.u32be();
            std::uint32_t hi = r.u32be();
            levels[i].push_back({lo, hi});
        }
    }
    std::size_t leaf_count = r.u16be();
    std::vector<Bytes> leaves;
    leaves.reserve(leaf_count);
    for (std::size_t j = 0; j < leaf_count; ++j) {
        std::uint8_t len = r.u8();
        leaves.push_back(r.bytes(len));
    }
    std::uint32_t root = r.u32be();
    r.finish();
    try {
        return Qrobdd(n, std::move(levels), std::move(leaves), root);
    } catch (const std::invalid_argument& e) {
        throw CodecError(std::string("invalid diagram: ") + e.what());
    }
}

}  // namespace wtree
