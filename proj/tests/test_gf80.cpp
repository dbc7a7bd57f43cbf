#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "oracle.hpp"
#include "sensec/gf80.hpp"

using namespace sensec;
using gf80::FieldElement;
using gf80::NodeId;
using gf80::P;
using gf80::uint128;

namespace {
constexpr FieldElement fe(std::uint64_t v) { return FieldElement{v}; }
}

TEST_CASE("add identities and wraparound", "[gf80]") {
    auto x = fe(0x1234567890abcdefULL);
    CHECK(gf80::add(fe(0), x) == x);
    CHECK(gf80::add(FieldElement{P - 1}, fe(1)) == fe(0));
    // 2^79 + 2^79 = 2^80 = 2^64 + 2^32 + 1 (mod p)
    FieldElement half{uint128{1} << 79};
    CHECK(gf80::add(half, half) == FieldElement{gf80::FOLD_80});
}

TEST_CASE("sub basics", "[gf80]") {
    auto x = fe(0xdeadbeefULL);
    CHECK(gf80::sub(x, x) == fe(0));
    CHECK(gf80::sub(fe(0), fe(1)) == FieldElement{P - 1});
    CHECK(gf80::sub(fe(5), fe(7)) == FieldElement{P - 2});
}

TEST_CASE("reduce96 fixed points and frozen value", "[gf80]") {
    CHECK(gf80::reduce96(0) == fe(0));
    CHECK(gf80::reduce96(P) == fe(0));
    // 2^95 = 2^15 * 2^80 = 2^79 + 2^47 + 2^15 (mod p)
    const uint128 expected = (uint128{1} << 79) + (uint128{1} << 47) + (uint128{1} << 15);
    CHECK(gf80::reduce96(uint128{1} << 95) == FieldElement{expected});
    CHECK(oracle::to_big(gf80::reduce96(uint128{1} << 95)) ==
          (oracle::BigInt(1) << 95) % oracle::P);
}

TEST_CASE("reduce96 matches the wide-integer oracle", "[gf80]") {
    std::mt19937_64 rng(0x5eed0001);
    for (int i = 0; i < 20000; ++i) {
        uint128 r = rng();
        r = (r << 32) | (rng() & 0xffffffff);  // 96-bit value
        auto got = gf80::reduce96(r);
        REQUIRE(oracle::to_big(got) == oracle::to_big(r) % oracle::P);
    }
}

TEST_CASE("mul_small matches oracle and general mul", "[gf80]") {
    CHECK(gf80::mul_small(NodeId{7}, fe(0)) == fe(0));
    CHECK(gf80::mul_small(NodeId{3}, FieldElement{P - 1}) == FieldElement{P - 3});

    std::mt19937_64 rng(0x5eed0002);
    for (int i = 0; i < 20000; ++i) {
        auto a = oracle::random_fe(rng);
        auto id = oracle::random_id(rng);
        auto got = gf80::mul_small(id, a);
        REQUIRE(oracle::to_big(got) == (oracle::BigInt(id.value) * oracle::to_big(a)) % oracle::P);
        REQUIRE(got == gf80::mul(FieldElement{id.value}, a));
    }
    // the extreme id
    auto a = oracle::random_fe(rng);
    CHECK(oracle::to_big(gf80::mul_small(NodeId{65535}, a)) ==
          (oracle::BigInt(65535) * oracle::to_big(a)) % oracle::P);
}

TEST_CASE("mul matches oracle", "[gf80]") {
    auto x = fe(0xabcdef0123456789ULL);
    CHECK(gf80::mul(fe(1), x) == x);
    CHECK(gf80::mul(fe(0), x) == fe(0));

    std::mt19937_64 rng(0x5eed0003);
    for (int i = 0; i < 20000; ++i) {
        auto a = oracle::random_fe(rng);
        auto b = oracle::random_fe(rng);
        auto got = gf80::mul(a, b);
        REQUIRE(oracle::to_big(got) == (oracle::to_big(a) * oracle::to_big(b)) % oracle::P);
    }
}

TEST_CASE("reduction and multiplication at domain extremes", "[gf80]") {
    const FieldElement pm1{P - 1};
    CHECK(oracle::to_big(gf80::mul(pm1, pm1)) ==
          (oracle::to_big(pm1) * oracle::to_big(pm1)) % oracle::P);

    const uint128 max128 = ~uint128{0};
    for (uint128 r : {max128, max128 - 1, max128 >> 1, max128 >> 8, uint128{P} << 40}) {
        REQUIRE(oracle::to_big(gf80::reduce_wide(r)) == oracle::to_big(r) % oracle::P);
    }
    const uint128 max96 = (uint128{1} << 96) - 1;
    for (uint128 r : {max96, max96 - 1, uint128{P} << 16}) {
        REQUIRE(oracle::to_big(gf80::reduce96(r)) == oracle::to_big(r) % oracle::P);
    }
}

TEST_CASE("field axioms on random triples", "[gf80]") {
    std::mt19937_64 rng(0x5eed0004);
    for (int i = 0; i < 10000; ++i) {
        auto a = oracle::random_fe(rng);
        auto b = oracle::random_fe(rng);
        auto c = oracle::random_fe(rng);
        REQUIRE(gf80::add(gf80::add(a, b), c) == gf80::add(a, gf80::add(b, c)));
        REQUIRE(gf80::add(a, b) == gf80::add(b, a));
        REQUIRE(gf80::mul(gf80::mul(a, b), c) == gf80::mul(a, gf80::mul(b, c)));
        REQUIRE(gf80::mul(a, b) == gf80::mul(b, a));
        REQUIRE(gf80::mul(a, gf80::add(b, c)) ==
                gf80::add(gf80::mul(a, b), gf80::mul(a, c)));
        REQUIRE(gf80::add(a, fe(0)) == a);
        REQUIRE(gf80::mul(a, fe(1)) == a);
        REQUIRE(gf80::add(a, gf80::sub(fe(0), a)) == fe(0));
        if (a.v != 0) REQUIRE(gf80::mul(a, gf80::inv(a)) == fe(1));
    }
}

TEST_CASE("inverse", "[gf80]") {
    CHECK(gf80::inv(fe(1)) == fe(1));
    CHECK(gf80::inv(FieldElement{P - 1}) == FieldElement{P - 1});
    CHECK_THROWS_AS(gf80::inv(fe(0)), ZeroInverse);

    std::mt19937_64 rng(0x5eed0005);
    for (int i = 0; i < 200; ++i) {
        auto a = oracle::random_fe(rng);
        if (a.v == 0) continue;
        REQUIRE(gf80::mul(a, gf80::inv(a)) == fe(1));
    }
}

TEST_CASE("horner agrees with naive evaluation for degrees 0..40", "[gf80]") {
    std::mt19937_64 rng(0x5eed0006);

    // degree 0
    auto c0 = oracle::random_fe(rng);
    std::vector<FieldElement> single{c0};
    CHECK(gf80::horner_eval(single, NodeId{9999}) == c0);

    // 2*7 + 5 = 19
    std::vector<FieldElement> lin{fe(2), fe(5)};
    CHECK(gf80::horner_eval(lin, NodeId{7}) == fe(19));

    CHECK_THROWS_AS(gf80::horner_eval(std::span<const FieldElement>{}, NodeId{1}),
                    EmptyPolynomial);

    for (int degree = 0; degree <= 40; ++degree) {
        std::vector<FieldElement> coeffs_high_first;
        for (int i = 0; i <= degree; ++i) coeffs_high_first.push_back(oracle::random_fe(rng));
        auto x = oracle::random_id(rng);
        std::vector<FieldElement> const_first(coeffs_high_first.rbegin(),
                                              coeffs_high_first.rend());
        auto want = oracle::eval_poly(const_first, x.value);
        REQUIRE(oracle::to_big(gf80::horner_eval(coeffs_high_first, x)) == want);
    }
}

TEST_CASE("canonical encoding roundtrip and rejection", "[gf80]") {
    std::mt19937_64 rng(0x5eed0007);
    for (int i = 0; i < 10000; ++i) {
        auto a = oracle::random_fe(rng);
        auto bytes = gf80::encode(a);
        auto back = gf80::decode(bytes);
        REQUIRE(back.has_value());
        REQUIRE(*back == a);
    }

    auto encode_u128 = [](uint128 v) {
        gf80::Encoded out{};
        for (int i = 0; i < 10; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
        return out;
    };
    CHECK_FALSE(gf80::decode(encode_u128(P)).has_value());
    CHECK_FALSE(gf80::decode(encode_u128(P + 1)).has_value());
    CHECK_FALSE(gf80::decode(encode_u128(gf80::MASK_80)).has_value());

    std::uint8_t short_buf[9] = {};
    CHECK_FALSE(gf80::decode(short_buf).has_value());
}

TEST_CASE("node id validation", "[gf80]") {
    CHECK_THROWS_AS(gf80::make_node_id(0), InvalidId);
    CHECK_THROWS_AS(gf80::make_node_id(65536), InvalidId);
    CHECK(gf80::make_node_id(65535).value == 65535);
    CHECK(gf80::make_node_id(1).value == 1);
}
