#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "stratrd/tables.hpp"
#include "testutil.hpp"

using namespace stratrd;
namespace tu = stratrd::testutil;

TEST_CASE("margin identities hold for constructed tables") {
    RngStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const StratifiedDataset d = tu::random_dataset(rng);
        long long total = 0;
        for (const auto& s : d.strata) {
            CHECK(s.treated_total() == s.n11 + s.n01);
            CHECK(s.control_total() == s.n10 + s.n00);
            CHECK(s.responder_total() == s.n11 + s.n10);
            CHECK(s.nonresponder_total() == s.n01 + s.n00);
            CHECK(s.total() == s.n11 + s.n10 + s.n01 + s.n00);
            CHECK(s.total() == s.treated_total() + s.control_total());
            total += s.total();
        }
        CHECK(d.total_subjects() == total);
    }
}

TEST_CASE("aggregate_subjects fills one cell per record") {
    const std::vector<SubjectRecord> records = {
        {"s1", 1, 1}, {"s1", 1, 0}, {"s1", 0, 1}, {"s1", 0, 0}};
    const StratifiedDataset d = aggregate_subjects(records);
    REQUIRE(d.stratum_count() == 1);
    CHECK(d.strata[0].n11 == 1);
    CHECK(d.strata[0].n10 == 1);
    CHECK(d.strata[0].n01 == 1);
    CHECK(d.strata[0].n00 == 1);
}

TEST_CASE("aggregate_subjects orders strata by first appearance") {
    const std::vector<SubjectRecord> records = {
        {"b", 1, 1}, {"a", 0, 0}, {"b", 0, 1}, {"c", 1, 0}};
    const StratifiedDataset d = aggregate_subjects(records);
    REQUIRE(d.stratum_count() == 3);
    CHECK(d.strata[0].label == "b");
    CHECK(d.strata[1].label == "a");
    CHECK(d.strata[2].label == "c");
}

TEST_CASE("aggregate_subjects matches an independent recount on interleaved strata") {
    RngStream rng(22);
    std::vector<SubjectRecord> records;
    for (int i = 0; i < 500; ++i) {
        records.push_back({rng.bernoulli(0.5) ? "s1" : "s2",
                           rng.bernoulli(0.4) ? 1 : 0, rng.bernoulli(0.3) ? 1 : 0});
    }
    const StratifiedDataset d = aggregate_subjects(records);
    // Independent recount via a map keyed on (label, arm, outcome).
    std::map<std::string, std::map<std::pair<int, int>, long long>> recount;
    for (const auto& r : records) recount[r.stratum][{r.arm, r.outcome}] += 1;
    REQUIRE(d.stratum_count() == recount.size());
    for (const auto& s : d.strata) {
        auto& cells = recount[s.label];
        CHECK(s.n11 == cells[{1, 1}]);
        CHECK(s.n01 == cells[{1, 0}]);
        CHECK(s.n10 == cells[{0, 1}]);
        CHECK(s.n00 == cells[{0, 0}]);
    }
}

TEST_CASE("aggregate_subjects is permutation-invariant in cell counts") {
    RngStream rng(33);
    std::vector<SubjectRecord> records;
    for (int i = 0; i < 300; ++i) {
        records.push_back({"s" + std::to_string(rng.uniform_index(4) + 1),
                           rng.bernoulli(0.5) ? 1 : 0, rng.bernoulli(0.5) ? 1 : 0});
    }
    const StratifiedDataset before = aggregate_subjects(records);
    for (std::size_t i = records.size(); i > 1; --i) {
        std::swap(records[i - 1], records[rng.uniform_index(i)]);
    }
    const StratifiedDataset after = aggregate_subjects(records);
    REQUIRE(before.stratum_count() == after.stratum_count());
    for (const auto& s : before.strata) {
        const auto it = std::find_if(after.strata.begin(), after.strata.end(),
                                     [&](const StratumTable& t) { return t.label == s.label; });
        REQUIRE(it != after.strata.end());
        CHECK(s.n11 == it->n11);
        CHECK(s.n10 == it->n10);
        CHECK(s.n01 == it->n01);
        CHECK(s.n00 == it->n00);
    }
}

TEST_CASE("expand_to_records round-trips any dataset") {
    RngStream rng(44);
    for (int trial = 0; trial < 100; ++trial) {
        const StratifiedDataset d = tu::random_dataset(rng);
        std::vector<SubjectRecord> records = expand_to_records(d);
        // Shuffle to decouple from emission order.
        for (std::size_t i = records.size(); i > 1; --i) {
            std::swap(records[i - 1], records[rng.uniform_index(i)]);
        }
        const StratifiedDataset back = aggregate_subjects(records);
        REQUIRE(back.stratum_count() == d.stratum_count());
        for (const auto& s : d.strata) {
            const auto it = std::find_if(back.strata.begin(), back.strata.end(),
                                         [&](const StratumTable& t) { return t.label == s.label; });
            REQUIRE(it != back.strata.end());
            CHECK(*it == s);
        }
    }
}

TEST_CASE("aggregate_subjects error paths") {
    CHECK_THROWS_WITH_AS(aggregate_subjects(std::vector<SubjectRecord>{}),
                         "no subject records", Error);
    const std::vector<SubjectRecord> bad_arm = {{"s1", 2, 1}};
    CHECK_THROWS_AS(aggregate_subjects(bad_arm), Error);
    const std::vector<SubjectRecord> bad_outcome = {{"s1", 1, 7}};
    CHECK_THROWS_AS(aggregate_subjects(bad_outcome), Error);
}

TEST_CASE("validate flags zero-arm and single-subject-arm strata") {
    SUBCASE("all arms >= 2 produce no warnings") {
        const auto d = tu::dataset({{2, 2, 1, 1}, {3, 3, 2, 2}});
        CHECK(validate(d).empty());
    }
    SUBCASE("single stratum with an empty treated arm") {
        const auto d = tu::dataset({{0, 1, 0, 2}});
        const auto warnings = validate(d);
        CHECK(has_warning(warnings, WarningCode::ZeroArmStratum));
        CHECK(has_warning(warnings, WarningCode::AllStrataZeroArm));
    }
    SUBCASE("single-subject arm") {
        const auto d = tu::dataset({{1, 2, 0, 2}});
        const auto warnings = validate(d);
        CHECK(has_warning(warnings, WarningCode::SingleSubjectArm));
        CHECK_FALSE(has_warning(warnings, WarningCode::ZeroArmStratum));
    }
    SUBCASE("CALGB has no zero-arm strata") {
        const auto warnings = validate(calgb_dataset());
        CHECK_FALSE(has_warning(warnings, WarningCode::ZeroArmStratum));
        CHECK_FALSE(has_warning(warnings, WarningCode::AllStrataZeroArm));
    }
}

TEST_CASE("empty strata are rejected at ingestion") {
    StratifiedDataset d = tu::dataset({{1, 1, 1, 1}});
    d.strata.push_back(tu::table("empty", 0, 0, 0, 0));
    CHECK_THROWS_AS(check_dataset(d), Error);
}

TEST_CASE("subject CSV parses and reports line numbers") {
    std::istringstream good("stratum,arm,outcome\ns1,1,1\ns1,0,0\n");
    const auto records = read_subject_csv(good);
    REQUIRE(records.size() == 2);
    CHECK(records[0] == SubjectRecord{"s1", 1, 1});

    std::istringstream bad_header("stratum,arm\ns1,1\n");
    CHECK_THROWS_AS(read_subject_csv(bad_header), Error);

    std::istringstream bad_row("stratum,arm,outcome\ns1,1,1\ns1,x,0\n");
    try {
        read_subject_csv(bad_row);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("aggregated CSV writes and reads back") {
    RngStream rng(55);
    const StratifiedDataset d = tu::random_dataset(rng);
    std::ostringstream out;
    write_aggregated_csv(out, d);
    std::istringstream in(out.str());
    CHECK(read_aggregated_csv(in) == d);
}

TEST_CASE("CALGB reconstruction matches the published summary") {
    const StratifiedDataset d = calgb_dataset();
    REQUIRE(d.stratum_count() == 21);
    CHECK(d.total_subjects() == 156);
    // Institution 16: 12 treated at 0.33, 9 controls at 0.33.
    const StratumTable& inst16 = d.strata[15];
    CHECK(inst16.n11 == 4);
    CHECK(inst16.n01 == 8);
    CHECK(inst16.n10 == 3);
    CHECK(inst16.n00 == 6);
    // Institution 1: 4 treated at 0.75, 3 controls at 0.33.
    CHECK(d.strata[0].n11 == 3);
    CHECK(d.strata[0].n10 == 1);
    // Reconstructed proportions agree with every published value.
    for (std::size_t k = 0; k < d.strata.size(); ++k) {
        const CalgbRow& row = calgb_rows()[k];
        const StratumTable& s = d.strata[k];
        CHECK(std::abs(static_cast<double>(s.n11) / static_cast<double>(row.n_treated) -
                       row.p_treated) <= 0.005);
        CHECK(std::abs(static_cast<double>(s.n10) / static_cast<double>(row.n_control) -
                       row.p_control) <= 0.005);
    }
    CHECK(calgb_records().size() == 156);
    CHECK(aggregate_subjects(calgb_records()) == d);
}
