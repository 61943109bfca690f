#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "pir/gf2.hpp"

using pir::BitVec;
using pir::Gf2Basis;

TEST_CASE("BitVec construction and bit access") {
    BitVec v(70);
    REQUIRE(v.width() == 70);
    REQUIRE(v.is_zero());
    REQUIRE(v.count() == 0);
    REQUIRE(v.leading() == -1);

    v.set(0);
    v.set(69);
    REQUIRE(v.test(0));
    REQUIRE(v.test(69));
    REQUIRE_FALSE(v.test(35));
    REQUIRE(v.count() == 2);
    REQUIRE(v.leading() == 0);
    REQUIRE(v.ones() == std::vector<int>{0, 69});

    v.set(0, false);
    REQUIRE(v.leading() == 69);
    v.flip(69);
    REQUIRE(v.is_zero());
}

TEST_CASE("BitVec unit vectors") {
    BitVec e3 = BitVec::unit(12, 3);
    REQUIRE(e3.count() == 1);
    REQUIRE(e3.test(3));
    REQUIRE(e3.ones() == std::vector<int>{3});
}

TEST_CASE("BitVec index and width errors") {
    BitVec v(10);
    REQUIRE_THROWS_AS(v.test(10), pir::IndexError);
    REQUIRE_THROWS_AS(v.test(-1), pir::IndexError);
    REQUIRE_THROWS_AS(v.set(10), pir::IndexError);
    REQUIRE_THROWS_AS(v.flip(64), pir::IndexError);
    REQUIRE_THROWS_AS(BitVec(-1), pir::DimensionError);

    BitVec w(11);
    REQUIRE_THROWS_AS(v ^= w, pir::DimensionError);
}

TEST_CASE("BitVec XOR keeps trailing bits zero") {
    // widths straddling a word boundary must never leak state past width()
    for (int width : {1, 63, 64, 65, 127, 128, 130}) {
        BitVec a(width), b(width);
        std::mt19937_64 rng(width);
        for (int i = 0; i < width; ++i) {
            if (rng() & 1) a.set(i);
            if (rng() & 1) b.set(i);
        }
        BitVec c = a ^ b;
        int spare = static_cast<int>(c.words().size()) * 64 - width;
        if (spare > 0) {
            std::uint64_t top = c.words().back() >> (64 - spare);
            REQUIRE(top == 0);
        }
        for (int i = 0; i < width; ++i) REQUIRE(c.test(i) == (a.test(i) != b.test(i)));
    }
}

TEST_CASE("BitVec ordering is total and consistent with equality") {
    BitVec a(8), b(8);
    a.set(1);
    b.set(2);
    REQUIRE(a < b);
    REQUIRE_FALSE(b < a);
    b.set(2, false);
    b.set(1);
    REQUIRE(a == b);
    REQUIRE_FALSE(a < b);
    REQUIRE_FALSE(b < a);
}

TEST_CASE("Gf2Basis insert, contains, rank") {
    Gf2Basis basis(5);
    BitVec v1(5), v2(5), v3(5);
    v1.set(0);
    v1.set(1);
    v2.set(1);
    v2.set(2);
    v3.set(0);
    v3.set(2); // v3 = v1 + v2

    REQUIRE(basis.insert(v1));
    REQUIRE(basis.insert(v2));
    REQUIRE_FALSE(basis.insert(v3));
    REQUIRE(basis.rank() == 2);
    REQUIRE(basis.contains(v3));
    REQUIRE_FALSE(basis.contains(BitVec::unit(5, 0)));
    REQUIRE_FALSE(basis.spans_unit(0));

    REQUIRE(basis.insert(BitVec::unit(5, 0)));
    REQUIRE(basis.spans_unit(0));
    REQUIRE(basis.spans_unit(1));
    REQUIRE(basis.spans_unit(2));
    REQUIRE_FALSE(basis.spans_unit(3));
}

TEST_CASE("Gf2Basis rejects zero vectors and width mismatches") {
    Gf2Basis basis(4);
    REQUIRE_FALSE(basis.insert(BitVec(4)));
    REQUIRE(basis.rank() == 0);
    REQUIRE_THROWS_AS(basis.insert(BitVec(5)), pir::DimensionError);
    REQUIRE_THROWS_AS(basis.contains(BitVec(3)), pir::DimensionError);
}

TEST_CASE("Gf2Basis rows are canonical for the span") {
    // the reduced echelon rows depend only on the subspace, so inserting the
    // same vectors in any order (or spanning sums of them) gives equal bases
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int width = 3 + static_cast<int>(rng() % 30);
        std::vector<BitVec> vecs;
        for (int n = 0; n < 6; ++n) {
            BitVec v(width);
            for (int i = 0; i < width; ++i)
                if (rng() & 1) v.set(i);
            vecs.push_back(v);
        }

        Gf2Basis forward(width), backward(width), sums(width);
        for (const auto& v : vecs) forward.insert(v);
        for (auto it = vecs.rbegin(); it != vecs.rend(); ++it) backward.insert(*it);
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            BitVec sum = vecs[i];
            sum ^= vecs[(i + 1) % vecs.size()];
            sums.insert(sum);
            sums.insert(vecs[i]);
        }

        REQUIRE(forward == backward);
        REQUIRE(forward == sums);

        // reduced form: each leading coordinate appears in exactly one row
        for (const BitVec& row : forward.rows()) {
            int lead = row.leading();
            int holders = 0;
            for (const BitVec& other : forward.rows())
                if (other.test(lead)) ++holders;
            REQUIRE(holders == 1);
        }
        // leading coordinates strictly increase
        for (std::size_t i = 1; i < forward.rows().size(); ++i)
            REQUIRE(forward.rows()[i - 1].leading() < forward.rows()[i].leading());
    }
}

TEST_CASE("gf2_rank matches hand-checked matrices") {
    std::vector<BitVec> empty;
    REQUIRE(pir::gf2_rank(empty) == 0);

    // identity block has full rank
    std::vector<BitVec> id;
    for (int i = 0; i < 4; ++i) id.push_back(BitVec::unit(4, i));
    REQUIRE(pir::gf2_rank(id) == 4);

    // all-ones rows collapse to rank 1
    std::vector<BitVec> ones(3, BitVec(6));
    for (auto& v : ones)
        for (int i = 0; i < 6; ++i) v.set(i);
    REQUIRE(pir::gf2_rank(ones) == 1);

    // rank is invariant under adding a spanned vector
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BitVec> vecs;
        for (int n = 0; n < 5; ++n) {
            BitVec v(9);
            for (int i = 0; i < 9; ++i)
                if (rng() & 1) v.set(i);
            vecs.push_back(v);
        }
        int r = pir::gf2_rank(vecs);
        BitVec sum = vecs[0];
        sum ^= vecs[1];
        sum ^= vecs[2];
        vecs.push_back(sum);
        REQUIRE(pir::gf2_rank(vecs) == r);
    }
}
