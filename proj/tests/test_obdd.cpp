#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "wtree/obdd.hpp"

using namespace wtree;
using namespace wtree::test;

namespace {

Qrobdd constant_diagram(std::size_t n, std::uint8_t value) {
    return build_layered(
        n, [](std::size_t, const Bytes&, bool) { return Bytes{0}; }, Bytes{0},
        [&](const Bytes&) { return Bytes{value}; });
}

// Tracks "prefix still equals the target's prefix"; dead once they diverge.
Qrobdd equality_diagram(std::size_t n, std::uint64_t target) {
    return build_layered(
        n,
        [&](std::size_t level, const Bytes& state, bool bit) {
            bool want = (target >> (n - 1 - level)) & 1;
            return Bytes{static_cast<std::uint8_t>(state[0] == 1 && bit == want ? 1 : 0)};
        },
        Bytes{1},
        [](const Bytes& state) { return Bytes{state[0] == 1 ? std::uint8_t{1} : std::uint8_t{0}}; });
}

}  // namespace

TEST_CASE("input word bit order is MSB-first") {
    InputWord x = InputWord::from_uint(12, 0xA5);
    CHECK(x.bytes() == Bytes{0x0A, 0x50});  // value right-aligned in 12 bits, then MSB-first
    CHECK(x.bit(0) == false);
    CHECK(x.bit(4) == true);
    CHECK(x.bit(11) == true);
    CHECK(InputWord::from_uint(8, 25).bytes() == Bytes{0x19});
}

TEST_CASE("input word validation") {
    CHECK_THROWS_AS(InputWord(4, Bytes{0x01}), std::invalid_argument);  // pad bit set
    CHECK_THROWS_AS(InputWord(9, Bytes{0xff}), std::invalid_argument);  // short buffer
    CHECK_THROWS_AS(InputWord::from_uint(4, 16), std::invalid_argument);
    CHECK_THROWS_AS(InputWord::from_hex(8, "0g"), CodecError);
    CHECK(InputWord::from_hex(8, "7f").bit(1));
    CHECK(InputWord().bit_count() == 0);
}

TEST_CASE("build_layered constant function") {
    Qrobdd q = constant_diagram(1, 0x01);
    CHECK(q.level_count() == 1);
    CHECK(q.level(0).size() == 1);
    CHECK(q.leaf_count() == 1);
    CHECK(evaluate(q, InputWord::from_uint(1, 0)) == Bytes{0x01});
    CHECK(evaluate(q, InputWord::from_uint(1, 1)) == Bytes{0x01});
}

TEST_CASE("build_layered equality to 25 over 8 bits") {
    Qrobdd q = equality_diagram(8, 25);
    for (std::uint64_t k = 0; k < 256; ++k) {
        Bytes expected{k == 25 ? std::uint8_t{1} : std::uint8_t{0}};
        CHECK(evaluate(q, InputWord::from_uint(8, k)) == expected);
    }
}

TEST_CASE("zero-level diagram is a single leaf") {
    Qrobdd q = build_layered(
        0, [](std::size_t, const Bytes&, bool) { return Bytes{0}; }, Bytes{7},
        [](const Bytes& s) { return Bytes{static_cast<std::uint8_t>(s[0] + 1)}; });
    CHECK(q.level_count() == 0);
    CHECK(q.leaf_count() == 1);
    CHECK(evaluate(q, InputWord()) == Bytes{8});
}

TEST_CASE("build_layered limits") {
    auto id_step = [](std::size_t, const Bytes&, bool) { return Bytes{0}; };
    CHECK_THROWS_AS(build_layered(kMaxLevels + 1, id_step, Bytes{0},
                                  [](const Bytes&) { return Bytes{1}; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        build_layered(1, id_step, Bytes{0}, [](const Bytes&) { return Bytes{}; }),
        std::invalid_argument);
    CHECK_THROWS_AS(
        build_layered(1, id_step, Bytes{0}, [](const Bytes&) { return Bytes(64, 0xaa); }),
        std::invalid_argument);
}

TEST_CASE("evaluate rejects bit-length mismatch") {
    Qrobdd q = constant_diagram(8, 1);
    CHECK_THROWS_AS(evaluate(q, InputWord::from_uint(7, 0)), std::invalid_argument);
}

TEST_CASE("reduce collapses a constant function to one node per level") {
    Rng rng(1);
    std::vector<Bytes> table(256, Bytes{0x01});
    Qrobdd q = reduce(full_tree(table));
    for (std::size_t i = 0; i < 8; ++i) CHECK(q.level(i).size() == 1);
    CHECK(q.leaf_count() == 1);
}

TEST_CASE("reduce reaches the brute-force minimal size") {
    Rng rng(42);
    for (int round = 0; round < 20; ++round) {
        std::size_t n = 1 + rng() % 8;
        std::vector<Bytes> table = random_table(rng, n);
        Qrobdd q = reduce(full_tree(table));
        std::vector<std::size_t> expected = minimal_level_counts(table, n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(q.level(i).size() == expected[i]);
        }
        CHECK(q.leaf_count() == expected[n]);
    }
    // the named case: equality to 25
    Qrobdd q = equality_diagram(8, 25);
    std::vector<Bytes> table;
    for (std::uint64_t k = 0; k < 256; ++k) {
        table.push_back(Bytes{k == 25 ? std::uint8_t{1} : std::uint8_t{0}});
    }
    Qrobdd r = reduce(q);
    std::vector<std::size_t> expected = minimal_level_counts(table, 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(r.level(i).size() == expected[i]);
}

TEST_CASE("reduce preserves semantics and is idempotent") {
    Rng rng(7);
    for (int round = 0; round < 15; ++round) {
        std::size_t n = rng() % 10;
        std::vector<Bytes> table = random_table(rng, n);
        Qrobdd full = full_tree(table);
        Qrobdd red = reduce(full);
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
            InputWord x = InputWord::from_uint(n, k);
            CHECK(evaluate(red, x) == table[k]);
            CHECK(evaluate(full, x) == table[k]);
        }
        CHECK(reduce(red) == red);
    }
}

TEST_CASE("reduce semantic preservation at n = 16") {
    Rng rng(99);
    std::vector<Bytes> table = random_table(rng, 16, 3, 2);
    Qrobdd full = full_tree(table);
    Qrobdd red = reduce(full);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << 16); ++k) {
        REQUIRE(evaluate(red, InputWord::from_uint(16, k)) == table[k]);
    }
}

TEST_CASE("reduced diagrams with equal truth tables are isomorphic") {
    Rng rng(11);
    for (int round = 0; round < 12; ++round) {
        std::size_t n = 1 + rng() % 12;
        std::vector<Bytes> table = random_table(rng, n);
        // route 1: complete tree; route 2: layered build keyed by table slices
        Qrobdd a = reduce(full_tree(table));
        auto slice_code = [&](std::size_t level, std::uint64_t prefix) {
            Bytes code;
            std::size_t len = std::size_t{1} << (n - level);
            for (std::size_t t = 0; t < len; ++t) {
                const Bytes& p = table[(prefix << (n - level)) + t];
                code.push_back(static_cast<std::uint8_t>(p.size()));
                code.insert(code.end(), p.begin(), p.end());
            }
            put_u64be(code, prefix);  // deliberately non-canonical: forces extra states
            return code;
        };
        std::vector<std::uint64_t> prefix_of_code;  // decoded trailing prefix per state
        TransitionFn step = [&](std::size_t level, const Bytes& state, bool bit) {
            std::uint64_t prefix = 0;
            for (std::size_t i = state.size() - 8; i < state.size(); ++i) {
                prefix = prefix << 8 | state[i];
            }
            return slice_code(level + 1, prefix << 1 | (bit ? 1 : 0));
        };
        FinalizeFn fin = [&](const Bytes& state) {
            return Bytes(state.begin() + 1, state.end() - 8);
        };
        Qrobdd b = reduce(build_layered(n, step, slice_code(0, 0), fin));
        CHECK(isomorphic(a, b));
        for (std::size_t i = 0; i < n; ++i) CHECK(a.level(i).size() == b.level(i).size());
    }
}

TEST_CASE("apply matches the truth-table oracle") {
    Rng rng(5);
    for (BoolOp op : {BoolOp::And, BoolOp::Or, BoolOp::Xor}) {
        for (int round = 0; round < 6; ++round) {
            std::size_t n = rng() % 9;
            std::vector<Bytes> ta = random_table(rng, n, 2, 1);
            std::vector<Bytes> tb = random_table(rng, n, 2, 1);
            for (auto* t : {&ta, &tb}) {  // clamp pool to boolean payloads
                for (auto& e : *t) e = Bytes{static_cast<std::uint8_t>(e[0] & 1)};
            }
            Qrobdd a = reduce(full_tree(ta));
            Qrobdd b = reduce(full_tree(tb));
            Qrobdd c = apply(a, b, op);
            for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
                bool va = ta[k][0] != 0;
                bool vb = tb[k][0] != 0;
                bool expect = op == BoolOp::And ? (va && vb)
                              : op == BoolOp::Or ? (va || vb)
                                                 : (va != vb);
                CHECK(evaluate(c, InputWord::from_uint(n, k))[0] == (expect ? 1 : 0));
            }
        }
    }
}

TEST_CASE("apply at n = 12 against the truth-table oracle") {
    Rng rng(19);
    std::vector<Bytes> ta = random_table(rng, 12, 2, 1);
    std::vector<Bytes> tb = random_table(rng, 12, 2, 1);
    for (auto* t : {&ta, &tb}) {
        for (auto& e : *t) e = Bytes{static_cast<std::uint8_t>(e[0] & 1)};
    }
    Qrobdd c = apply(reduce(full_tree(ta)), reduce(full_tree(tb)), BoolOp::Or);
    for (std::uint64_t k = 0; k < 4096; ++k) {
        bool expect = (ta[k][0] != 0) || (tb[k][0] != 0);
        REQUIRE(evaluate(c, InputWord::from_uint(12, k))[0] == (expect ? 1 : 0));
    }
}

TEST_CASE("apply identities") {
    Qrobdd f = equality_diagram(6, 33);
    Qrobdd ones = constant_diagram(6, 0x01);
    Qrobdd f_and_true = apply(f, ones, BoolOp::And);
    Qrobdd f_xor_f = apply(f, f, BoolOp::Xor);
    for (std::uint64_t k = 0; k < 64; ++k) {
        InputWord x = InputWord::from_uint(6, k);
        CHECK(evaluate(f_and_true, x) == evaluate(f, x));
        CHECK(evaluate(f_xor_f, x) == Bytes{0x00});
    }
}

TEST_CASE("apply precondition checks") {
    Qrobdd a = constant_diagram(4, 1);
    Qrobdd b = constant_diagram(5, 1);
    CHECK_THROWS_AS(apply(a, b, BoolOp::And), std::invalid_argument);
    Qrobdd wide = build_layered(
        4, [](std::size_t, const Bytes&, bool) { return Bytes{0}; }, Bytes{0},
        [](const Bytes&) { return Bytes{0x02}; });
    CHECK_THROWS_AS(apply(a, wide, BoolOp::Or), std::invalid_argument);
    CHECK_THROWS_AS(negate(wide), std::invalid_argument);
}

TEST_CASE("negate flips payloads only") {
    Qrobdd q = equality_diagram(8, 25);
    Qrobdd nq = negate(q);
    std::size_t true_count = 0;
    for (std::uint64_t k = 0; k < 256; ++k) {
        InputWord x = InputWord::from_uint(8, k);
        CHECK(evaluate(nq, x)[0] == (1 - evaluate(q, x)[0]));
        true_count += evaluate(nq, x)[0];
    }
    CHECK(true_count == 255);
    CHECK(negate(nq) == q);
    CHECK(negate(constant_diagram(3, 1)) == constant_diagram(3, 0));
}

TEST_CASE("truth_table basics and guard") {
    CHECK(truth_table(constant_diagram(2, 1)) ==
          std::vector<Bytes>{{0x01}, {0x01}, {0x01}, {0x01}});
    CHECK(truth_table(equality_diagram(2, 2)) ==
          std::vector<Bytes>{{0x00}, {0x00}, {0x01}, {0x00}});
    CHECK_THROWS_AS(truth_table(constant_diagram(21, 1)), std::invalid_argument);
}

TEST_CASE("diagram constructor enforces structure") {
    // level-0 edge out of range
    CHECK_THROWS_AS(Qrobdd(1, {{{0, 2}}}, {Bytes{0}, Bytes{1}}, 0), std::invalid_argument);
    // unreachable node at level 1
    CHECK_THROWS_AS(Qrobdd(2, {{{0, 0}}, {{0, 0}, {1, 1}}}, {Bytes{0}, Bytes{1}}, 0),
                    std::invalid_argument);
    // unreachable leaf
    CHECK_THROWS_AS(Qrobdd(1, {{{0, 0}}}, {Bytes{0}, Bytes{1}}, 0), std::invalid_argument);
    // duplicate payloads
    CHECK_THROWS_AS(Qrobdd(1, {{{0, 1}}}, {Bytes{0}, Bytes{0}}, 0), std::invalid_argument);
    // root out of range
    CHECK_THROWS_AS(Qrobdd(0, {}, {Bytes{0}}, 1), std::invalid_argument);
    // fine: two-leaf selector
    CHECK_NOTHROW(Qrobdd(1, {{{0, 1}}}, {Bytes{0}, Bytes{1}}, 0));
}

TEST_CASE("WTD1 round trip and golden bytes") {
    Rng rng(13);
    for (int round = 0; round < 10; ++round) {
        std::vector<Bytes> table = random_table(rng, rng() % 8);
        Qrobdd q = reduce(full_tree(table));
        CHECK(decode_wtd1(BytesView(encode_wtd1(q))) == q);
    }

    // n=1 selector diagram, hand-assembled bytes
    Qrobdd tiny(1, {{{0, 1}}}, {Bytes{0x00}, Bytes{0x01}}, 0);
    Bytes expected = {'W', 'T', 'D', '1', 0x00, 0x01,             // magic, n=1
                      0x00, 0x00, 0x00, 0x01,                     // level 0: 1 node
                      0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x01,  // (lo=0, hi=1)
                      0x00, 0x02, 0x01, 0x00, 0x01, 0x01,         // 2 leaves: 00, 01
                      0x00, 0x00, 0x00, 0x00};                    // root index 0
    CHECK(encode_wtd1(tiny) == expected);
    CHECK(decode_wtd1(BytesView(expected)) == tiny);
}

TEST_CASE("WTD1 decode rejects malformed input") {
    Qrobdd q = constant_diagram(2, 1);
    Bytes good = encode_wtd1(q);

    Bytes bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(decode_wtd1(BytesView(bad_magic)), CodecError);

    Bytes truncated(good.begin(), good.end() - 1);
    CHECK_THROWS_AS(decode_wtd1(BytesView(truncated)), CodecError);

    Bytes trailing = good;
    trailing.push_back(0x00);
    CHECK_THROWS_AS(decode_wtd1(BytesView(trailing)), CodecError);

    Bytes bad_root = good;
    bad_root.back() = 9;  // root index far out of range
    CHECK_THROWS_AS(decode_wtd1(BytesView(bad_root)), CodecError);
}
