#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "oracle.hpp"
#include "sensec/keydist.hpp"

using namespace sensec;
using gf80::FieldElement;
using gf80::NodeId;
using keydist::MasterPolynomial;
using keydist::NodeShare;

namespace {

constexpr FieldElement fe(std::uint64_t v) { return FieldElement{v}; }

std::array<std::uint8_t, 32> seed_bytes(std::uint8_t tag) {
    std::array<std::uint8_t, 32> s{};
    s[0] = tag;
    return s;
}

// f(x,y) = 1 + 2x + 2y + 3xy
MasterPolynomial tiny_master() {
    return MasterPolynomial::from_parts(1, {fe(1), fe(2), fe(2), fe(3)}, {});
}

oracle::BigInt eval_bivariate_big(const MasterPolynomial& m, std::uint16_t a, std::uint16_t b) {
    oracle::BigInt acc = 0;
    oracle::BigInt ai = 1;
    for (int i = 0; i <= m.degree(); ++i) {
        oracle::BigInt bj = 1;
        for (int j = 0; j <= m.degree(); ++j) {
            acc = (acc + oracle::to_big(m.coeff(i, j)) * ai % oracle::P * bj) % oracle::P;
            bj = (bj * b) % oracle::P;
        }
        ai = (ai * a) % oracle::P;
    }
    return acc;
}

}  // namespace

TEST_CASE("hand-checkable t=1 example", "[keydist]") {
    auto master = tiny_master();
    auto share4 = master.derive_share(NodeId{4});
    REQUIRE(share4.coeffs == std::vector<FieldElement>{fe(9), fe(14)});

    auto share5 = master.derive_share(NodeId{5});
    REQUIRE(share5.coeffs == std::vector<FieldElement>{fe(11), fe(17)});

    CHECK(keydist::pairwise_secret(share4, NodeId{5}).value == fe(79));
    CHECK(keydist::pairwise_secret(share5, NodeId{4}).value == fe(79));

    // two-point reconstruction recovers the exact matrix
    std::vector<NodeShare> shares{share4, share5};
    auto rebuilt = keydist::reconstruct_master(shares);
    CHECK(rebuilt.coeff(0, 0) == fe(1));
    CHECK(rebuilt.coeff(0, 1) == fe(2));
    CHECK(rebuilt.coeff(1, 0) == fe(2));
    CHECK(rebuilt.coeff(1, 1) == fe(3));
}

TEST_CASE("generation is deterministic and symmetric", "[keydist]") {
    auto seed = seed_bytes(1);
    auto a = MasterPolynomial::generate(20, seed);
    auto b = MasterPolynomial::generate(20, seed);
    REQUIRE(a.degree() == 20);
    REQUIRE(std::equal(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin()));
    CHECK(a.symmetric());

    auto c = MasterPolynomial::generate(20, seed_bytes(2));
    CHECK(!std::equal(a.coeffs().begin(), a.coeffs().end(), c.coeffs().begin()));

    auto small = MasterPolynomial::generate(1, seed);
    CHECK(small.coeffs().size() == 4);

    CHECK_THROWS_AS(MasterPolynomial::generate(0, seed), DegreeOutOfRange);
    CHECK_THROWS_AS(MasterPolynomial::generate(1001, seed), DegreeOutOfRange);
}

TEST_CASE("share derivation guards", "[keydist]") {
    auto master = MasterPolynomial::generate(2, seed_bytes(3));
    (void)master.derive_share(NodeId{17});
    CHECK_THROWS_AS(master.derive_share(NodeId{17}), DuplicateId);
    CHECK_THROWS_AS(master.derive_share(NodeId{0}), InvalidId);
    CHECK(master.issued_ids().contains(17));
}

TEST_CASE("pairwise secrets agree in both directions and match f(a,b)", "[keydist]") {
    std::mt19937_64 rng(0x5eed2001);
    for (int t : {1, 2, 5, 20}) {
        auto master = MasterPolynomial::generate(t, seed_bytes(static_cast<std::uint8_t>(t)));
        for (int trial = 0; trial < 250; ++trial) {
            std::uint16_t a = static_cast<std::uint16_t>(1 + rng() % 65535);
            std::uint16_t b = static_cast<std::uint16_t>(1 + rng() % 65535);
            if (a == b || master.issued_ids().contains(a) || master.issued_ids().contains(b))
                continue;
            auto share_a = master.derive_share(NodeId{a});
            auto share_b = master.derive_share(NodeId{b});
            auto sab = keydist::pairwise_secret(share_a, NodeId{b});
            auto sba = keydist::pairwise_secret(share_b, NodeId{a});
            REQUIRE(sab.value == sba.value);
            REQUIRE(oracle::to_big(sab.value) == eval_bivariate_big(master, a, b));
        }
    }
}

TEST_CASE("pairwise secret guards", "[keydist]") {
    auto master = MasterPolynomial::generate(2, seed_bytes(9));
    auto share = master.derive_share(NodeId{300});
    CHECK_THROWS_AS(keydist::pairwise_secret(share, NodeId{300}), SelfPairing);
    CHECK_THROWS_AS(keydist::pairwise_secret(share, NodeId{0}), InvalidId);
}

TEST_CASE("t+1 shares reconstruct the master exactly, t shares do not", "[keydist]") {
    const int t = 20;
    auto master = MasterPolynomial::generate(t, seed_bytes(20));
    std::vector<NodeShare> shares;
    for (int i = 0; i < t + 1; ++i)
        shares.push_back(master.derive_share(NodeId{static_cast<std::uint16_t>(100 + 7 * i)}));

    auto rebuilt = keydist::reconstruct_master(shares);
    REQUIRE(rebuilt.degree() == t);
    for (int i = 0; i <= t; ++i)
        for (int j = 0; j <= t; ++j) REQUIRE(rebuilt.coeff(i, j) == master.coeff(i, j));

    std::vector<NodeShare> short_set(shares.begin(), shares.end() - 1);
    CHECK_THROWS_AS(keydist::reconstruct_master(short_set), InsufficientShares);
}

TEST_CASE("shares from different masters are flagged", "[keydist]") {
    auto m1 = MasterPolynomial::generate(2, seed_bytes(30));
    auto m2 = MasterPolynomial::generate(2, seed_bytes(31));
    std::vector<NodeShare> mixed{m1.derive_share(NodeId{10}), m1.derive_share(NodeId{11}),
                                 m2.derive_share(NodeId{12})};
    CHECK_THROWS_AS(keydist::reconstruct_master(mixed), InconsistentShares);
}

TEST_CASE("t shares predict nothing about a fresh pair", "[keydist]") {
    const int t = 5;
    auto master = MasterPolynomial::generate(t, seed_bytes(40));
    std::vector<NodeShare> captured;
    for (int i = 0; i < t; ++i)
        captured.push_back(master.derive_share(NodeId{static_cast<std::uint16_t>(1000 + i)}));
    auto share_a = master.derive_share(NodeId{2000});
    auto share_b = master.derive_share(NodeId{2001});
    auto truth = keydist::pairwise_secret(share_a, NodeId{2001});

    SerpentStream rng(std::uint64_t{0x5eed2002});
    int hits = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto guess = keydist::predict_pairwise_secret(captured, NodeId{2000}, NodeId{2001}, rng);
        if (guess == truth.value) ++hits;
    }
    CHECK(hits == 0);

    // with the full t+1 shares the prediction becomes exact
    captured.push_back(master.derive_share(NodeId{1005}));
    auto exact = keydist::predict_pairwise_secret(captured, NodeId{2000}, NodeId{2001}, rng);
    CHECK(exact == truth.value);
}

TEST_CASE("share payload is (t+1)*10 bytes for every degree", "[keydist]") {
    for (int t : {1, 2, 5, 20, 33}) {
        auto master = MasterPolynomial::generate(t, seed_bytes(static_cast<std::uint8_t>(70 + t)));
        auto share = master.derive_share(NodeId{9000});
        auto bytes = keydist::serialize_share(share);
        REQUIRE(bytes.size() == 9 + static_cast<std::size_t>(t + 1) * 10);
    }
}

TEST_CASE("share file format", "[keydist]") {
    auto master = MasterPolynomial::generate(20, seed_bytes(50));
    auto share = master.derive_share(NodeId{4242});
    auto bytes = keydist::serialize_share(share);
    // magic + version + id + t, then exactly (t+1)*10 coefficient bytes
    REQUIRE(bytes.size() == 9 + 21 * 10);
    CHECK(bytes[0] == 'B');
    CHECK(bytes[1] == 'S');
    CHECK(bytes[2] == 'H');
    CHECK(bytes[3] == '1');

    auto back = keydist::parse_share(bytes);
    CHECK(back.id.value == 4242);
    CHECK(back.coeffs == share.coeffs);

    auto corrupt = bytes;
    corrupt[3] = '2';
    CHECK_THROWS_AS(keydist::parse_share(corrupt), IoError);
    auto truncated = bytes;
    truncated.pop_back();
    CHECK_THROWS_AS(keydist::parse_share(truncated), IoError);
}

TEST_CASE("master file format with issued registry", "[keydist]") {
    auto master = MasterPolynomial::generate(3, seed_bytes(60));
    (void)master.derive_share(NodeId{7});
    (void)master.derive_share(NodeId{5});
    auto bytes = keydist::serialize_master(master);
    REQUIRE(bytes.size() == 7 + 16 * 10 + 2 + 2 * 2);

    auto back = keydist::parse_master(bytes);
    CHECK(back.degree() == 3);
    CHECK(back.issued_ids() == std::set<std::uint16_t>{5, 7});
    CHECK(std::equal(back.coeffs().begin(), back.coeffs().end(), master.coeffs().begin()));
    CHECK_THROWS_AS(back.derive_share(NodeId{5}), DuplicateId);

    auto corrupt = bytes;
    corrupt[4] = 0x7f;
    CHECK_THROWS_AS(keydist::parse_master(corrupt), IoError);
    auto truncated = bytes;
    truncated.resize(20);
    CHECK_THROWS_AS(keydist::parse_master(truncated), IoError);
}
