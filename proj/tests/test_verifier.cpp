#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "pir/array_code.hpp"
#include "pir/verifier.hpp"

using pir::BitVec;
using pir::PirArrayCode;
using pir::RecoverySet;

namespace {

// replication code: m copies of the identity column (t = p)
PirArrayCode replication(int p, int m) {
    std::vector<BitVec> column;
    for (int i = 0; i < p; ++i) column.push_back(BitVec::unit(p, i));
    return PirArrayCode(p, p, std::vector<std::vector<BitVec>>(m, column));
}

} // namespace

TEST_CASE("minimal_recovery_sets on the example code, frozen values") {
    auto code = pir::paper_example();

    // part x_5 sits as a singleton in columns 1 and 2 and inside the sum
    // cell (4,5,6) of column 3, completable by column 4's singletons 4 and 6
    auto sets5 = pir::minimal_recovery_sets(code, 4);
    REQUIRE(sets5 == std::vector<RecoverySet>{{{0}}, {{1}}, {{2, 3}}});

    auto sets11 = pir::minimal_recovery_sets(code, 10);
    REQUIRE(sets11 == std::vector<RecoverySet>{{{1}}, {{2}}, {{0, 3}}});

    // every part: the two singleton columns plus the complementary pair
    for (int part = 0; part < 12; ++part) {
        auto sets = pir::minimal_recovery_sets(code, part);
        REQUIRE(sets.size() == 3);
        REQUIRE(sets[0].cols.size() == 1);
        REQUIRE(sets[1].cols.size() == 1);
        REQUIRE(sets[2].cols.size() == 2);
        // the pair is exactly the two remaining columns
        std::set<int> all{0, 1, 2, 3};
        all.erase(sets[0].cols[0]);
        all.erase(sets[1].cols[0]);
        REQUIRE(std::vector<int>(all.begin(), all.end()) == sets[2].cols);
    }
}

TEST_CASE("minimal_recovery_sets returns an antichain in (size, lex) order") {
    auto code = pir::paper_example();
    for (int part = 0; part < 12; ++part) {
        auto sets = pir::minimal_recovery_sets(code, part);
        for (std::size_t i = 1; i < sets.size(); ++i) REQUIRE(sets[i - 1] < sets[i]);
        for (const auto& a : sets)
            for (const auto& b : sets) {
                if (&a == &b) continue;
                REQUIRE_FALSE(std::includes(b.cols.begin(), b.cols.end(), a.cols.begin(),
                                            a.cols.end()));
            }
    }
}

TEST_CASE("minimal_recovery_sets respects max_size and rejects bad parts") {
    auto code = pir::paper_example();
    auto small = pir::minimal_recovery_sets(code, 4, 1);
    REQUIRE(small == std::vector<RecoverySet>{{{0}}, {{1}}});
    REQUIRE_THROWS_AS(pir::minimal_recovery_sets(code, 12), pir::IndexError);
    REQUIRE_THROWS_AS(pir::minimal_recovery_sets(code, -1), pir::IndexError);
}

TEST_CASE("max_disjoint_packing on hand-built instances") {
    // {0},{1},{0,1}: best packing is the two singletons
    auto r1 = pir::max_disjoint_packing({{{0}}, {{1}}, {{0, 1}}}, 2);
    REQUIRE(r1.count == 2);
    REQUIRE(r1.exact);

    // pairwise overlapping sets: only one fits
    auto r2 = pir::max_disjoint_packing({{{0, 1}}, {{1, 2}}, {{0, 2}}}, 3);
    REQUIRE(r2.count == 1);

    // greedy-by-size is misled here: {0,1} blocks both {0,2,3} and {1,4,5},
    // so the best packing skips the smallest set
    auto r3 = pir::max_disjoint_packing({{{0, 1}}, {{0, 2, 3}}, {{1, 4, 5}}}, 6);
    REQUIRE(r3.count == 2);
    REQUIRE(r3.sets == std::vector<RecoverySet>{{{0, 2, 3}}, {{1, 4, 5}}});

    auto empty = pir::max_disjoint_packing({}, 4);
    REQUIRE(empty.count == 0);
    REQUIRE(empty.exact);
}

TEST_CASE("max_disjoint_packing witness is consistent") {
    auto code = pir::paper_example();
    for (int part = 0; part < 12; ++part) {
        auto packed =
            pir::max_disjoint_packing(pir::minimal_recovery_sets(code, part), code.m());
        REQUIRE(packed.count == 3);
        REQUIRE(packed.exact);
        REQUIRE(static_cast<int>(packed.sets.size()) == packed.count);
        BitVec used(code.m());
        for (const auto& set : packed.sets)
            for (int c : set.cols) {
                REQUIRE_FALSE(used.test(c));
                used.set(c);
            }
    }
}

TEST_CASE("max_disjoint_packing under a tiny node budget degrades honestly") {
    std::vector<RecoverySet> sets;
    for (int a = 0; a < 12; ++a)
        for (int b = a + 1; b < 12; ++b) sets.push_back({{a, b}});
    pir::PackingOptions opts;
    opts.node_budget = 3;
    auto r = pir::max_disjoint_packing(sets, 12, opts);
    REQUIRE_FALSE(r.exact);
    REQUIRE(r.count <= 6);
    auto full = pir::max_disjoint_packing(sets, 12);
    REQUIRE(full.exact);
    REQUIRE(full.count == 6);
    REQUIRE(full.count >= r.count);
}

TEST_CASE("exact_k of the example code is 3 with rate 3/4") {
    auto report = pir::exact_k(pir::paper_example());
    REQUIRE(report.k == 3);
    REQUIRE(report.exact);
    REQUIRE(report.rate == pir::Rational(3, 4));
    REQUIRE(report.parts.size() == 12);
    for (const auto& pr : report.parts) {
        REQUIRE(pr.max_disjoint == 3);
        REQUIRE(pr.exact);
    }
}

TEST_CASE("exact_k of replication codes equals the column count") {
    // every column alone recovers every part, and columns are disjoint
    auto report = pir::exact_k(replication(3, 5));
    REQUIRE(report.k == 5);
    REQUIRE(report.rate == pir::Rational(1));
    REQUIRE(report.exact);
}

TEST_CASE("exact_k never grows when columns are removed") {
    auto code = pir::paper_example();
    int k_full = pir::exact_k(code).k;
    for (int drop = 0; drop < code.m(); ++drop) {
        std::vector<int> keep;
        for (int c = 0; c < code.m(); ++c)
            if (c != drop) keep.push_back(c);
        int k_sub = pir::exact_k(pir::restrict_columns(code, keep)).k;
        REQUIRE(k_sub <= k_full);
    }
}

TEST_CASE("exact_k beyond the exact limit reports a lower bound") {
    auto code = pir::paper_example();
    pir::ExactOptions opts;
    opts.exact_limit = 2; // force lower-bound mode on a 4-column code
    auto report = pir::exact_k(code, opts);
    REQUIRE_FALSE(report.exact);
    REQUIRE(report.k <= 3);
    REQUIRE(report.k >= 1); // two singleton columns exist for every part
    auto exact = pir::exact_k(code);
    REQUIRE(report.k <= exact.k);
}

TEST_CASE("check_certificate accepts the verifier's own witnesses") {
    auto code = pir::paper_example();
    auto cert = pir::certificate_from_report(pir::exact_k(code));
    REQUIRE(cert.claimed_k == 3);
    REQUIRE(pir::check_certificate(code, cert).ok);
}

TEST_CASE("check_certificate rejects each violation kind") {
    auto code = pir::paper_example();
    auto good = pir::certificate_from_report(pir::exact_k(code));

    auto wrong_shape = good;
    wrong_shape.parts.pop_back();
    auto r1 = pir::check_certificate(code, wrong_shape);
    REQUIRE_FALSE(r1.ok);
    REQUIRE(r1.violation->kind == pir::CertificateViolation::WrongShape);

    auto reused = good;
    reused.parts[0].push_back(reused.parts[0].front());
    auto r2 = pir::check_certificate(code, reused);
    REQUIRE_FALSE(r2.ok);
    REQUIRE(r2.violation->kind == pir::CertificateViolation::NonDisjoint);
    REQUIRE(r2.violation->part == 0);

    auto nonspanning = good;
    // column 4 alone does not span x_1 (its units are 4,6,7,9,10,12)
    nonspanning.parts[0][0] = RecoverySet{{3}};
    auto r3 = pir::check_certificate(code, nonspanning);
    REQUIRE_FALSE(r3.ok);
    REQUIRE(r3.violation->kind == pir::CertificateViolation::NonSpanning);

    auto short_list = good;
    short_list.parts[5].pop_back();
    auto r4 = pir::check_certificate(code, short_list);
    REQUIRE_FALSE(r4.ok);
    REQUIRE(r4.violation->kind == pir::CertificateViolation::TooFewSets);
    REQUIRE(r4.violation->part == 5);

    auto out_of_range = good;
    out_of_range.parts[2][0] = RecoverySet{{9}};
    auto r5 = pir::check_certificate(code, out_of_range);
    REQUIRE_FALSE(r5.ok);
    REQUIRE(r5.violation->kind == pir::CertificateViolation::WrongShape);

    auto empty_set = good;
    empty_set.parts[1][1] = RecoverySet{{}};
    auto r6 = pir::check_certificate(code, empty_set);
    REQUIRE_FALSE(r6.ok);
    REQUIRE(r6.violation->kind == pir::CertificateViolation::WrongShape);
}

TEST_CASE("claiming less than the maximum is still a valid certificate") {
    auto code = pir::paper_example();
    auto cert = pir::certificate_from_report(pir::exact_k(code));
    cert.claimed_k = 2;
    REQUIRE(pir::check_certificate(code, cert).ok);
    cert.claimed_k = 4;
    auto r = pir::check_certificate(code, cert);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.violation->kind == pir::CertificateViolation::TooFewSets);
}

TEST_CASE("certificate JSON round-trip and 1-based column handling") {
    auto code = pir::paper_example();
    auto cert = pir::certificate_from_report(pir::exact_k(code));
    auto back = pir::parse_certificate(pir::save_certificate(cert));
    REQUIRE(back.claimed_k == cert.claimed_k);
    REQUIRE(back.parts == cert.parts);

    REQUIRE_THROWS_AS(pir::parse_certificate("{}"), pir::ParseError);
    REQUIRE_THROWS_AS(pir::parse_certificate(R"({"claimed_k":-1,"parts":[]})"),
                      pir::ParseError);
    // column 0 is invalid in the 1-based exchange format
    REQUIRE_THROWS_AS(pir::parse_certificate(R"({"claimed_k":1,"parts":[[[0]]]})"),
                      pir::IndexError);
    // unsorted columns are normalized on load
    auto sorted = pir::parse_certificate(R"({"claimed_k":1,"parts":[[[4,1]]]})");
    REQUIRE(sorted.parts[0][0].cols == std::vector<int>{0, 3});
}

TEST_CASE("shipped certificate fixture certifies the shipped example code") {
    auto code = pir::load_code_file(std::string(DATA_DIR) + "/paper_example_7x4.json");
    auto cert = pir::load_certificate_file(std::string(DATA_DIR) + "/paper_example_7x4_cert.json");
    REQUIRE(cert.claimed_k == 3);
    auto check = pir::check_certificate(code, cert);
    REQUIRE(check.ok);
}
