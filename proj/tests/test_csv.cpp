#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "exto/csv.hpp"
#include "exto/rng.hpp"

using namespace exto;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name) {
        path = fs::temp_directory_path() / name;
    }
    ~TempFile() { std::error_code ec; fs::remove(path, ec); }
    void write(const std::string& content) {
        std::ofstream out(path);
        out << content;
    }
    std::string str() const { return path.string(); }
};

CsvSchema begin_labeled() {
    CsvSchema s;
    s.label_offset_steps = 0;
    return s;
}

} // namespace

TEST_CASE("ingest fills grid gaps with missing entries") {
    TempFile f("exto_gap.csv");
    f.write(
        "timestamp,price\n"
        "2016-07-01T00:00:00,30\n"
        "2016-07-01T00:30:00,31\n"
        // 01:00 missing
        "2016-07-01T01:30:00,33\n"
        "2016-07-01T02:00:00,34\n");
    const auto s = ingest_csv(f.str(), begin_labeled(), minutes(30));
    REQUIRE(s.size() == 5);
    CHECK(s.missing_count() == 1);
    CHECK(s.is_missing(2));
    CHECK(s.value(0) == 30.0);
    CHECK(s.value(4) == 34.0);
}

TEST_CASE("duplicate timestamp rejected with the timestamp named") {
    TempFile f("exto_dup.csv");
    f.write(
        "timestamp,price\n"
        "2016-07-01T00:00:00,30\n"
        "2016-07-01T00:00:00,31\n");
    try {
        ingest_csv(f.str(), begin_labeled(), minutes(30));
        FAIL("expected data_error");
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find("2016-07-01T00:00:00") !=
              std::string::npos);
    }
}

TEST_CASE("off-grid timestamp rejected") {
    TempFile f("exto_offgrid.csv");
    f.write(
        "timestamp,price\n"
        "2016-07-01T00:00:00,30\n"
        "2016-07-01T00:13:00,31\n");
    CHECK_THROWS_AS(ingest_csv(f.str(), begin_labeled(), minutes(30)),
                    data_error);
}

TEST_CASE("malformed row reports line number") {
    TempFile f("exto_badrow.csv");
    f.write(
        "timestamp,price\n"
        "2016-07-01T00:00:00,30\n"
        "2016-07-01T00:30:00,oops\n");
    try {
        ingest_csv(f.str(), begin_labeled(), minutes(30));
        FAIL("expected data_error");
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
}

TEST_CASE("empty and headerless files rejected") {
    TempFile f("exto_empty.csv");
    f.write("");
    CHECK_THROWS_AS(ingest_csv(f.str(), begin_labeled(), minutes(30)),
                    data_error);
    f.write("timestamp,price\n");
    CHECK_THROWS_AS(ingest_csv(f.str(), begin_labeled(), minutes(30)),
                    data_error);
    f.write("a,b\n1,2\n");
    CHECK_THROWS_AS(ingest_csv(f.str(), begin_labeled(), minutes(30)),
                    data_error);
}

TEST_CASE("interval-ending labels shift back one step by default") {
    TempFile f("exto_ending.csv");
    f.write(
        "timestamp,price\n"
        "2016-07-01T00:30:00,30\n"
        "2016-07-01T01:00:00,31\n");
    const auto s = ingest_csv(f.str(), CsvSchema{}, minutes(30));
    CHECK(s.start() == timestamp_from_civil(2016, 7, 1));
    CHECK(s.size() == 2);
}

TEST_CASE("export then ingest round trip is bit exact") {
    CounterRng rng = CounterRng::substream(99, 0);
    std::vector<double> values;
    std::vector<bool> missing;
    for (int i = 0; i < 500; ++i) {
        values.push_back(rng.next_double() * 14000.0 - 1000.0);
        missing.push_back(rng.next_below(10) == 0);
    }
    // grid endpoints must be present for the round trip to keep the range
    missing.front() = false;
    missing.back() = false;
    const PriceSeries orig("rt", timestamp_from_civil(2014, 7, 1), 1800,
                           values, missing);

    TempFile f("exto_roundtrip.csv");
    export_csv(orig, f.str());
    const auto back = ingest_csv(f.str(), CsvSchema{}, 1800, "rt");

    REQUIRE(back.size() == orig.size());
    CHECK(back.start() == orig.start());
    CHECK(back.missing_mask() == orig.missing_mask());
    for (std::size_t i = 0; i < orig.size(); ++i)
        if (!orig.is_missing(i)) CHECK(back.value(i) == orig.value(i));
}

TEST_CASE("custom delimiter and column names") {
    TempFile f("exto_delim.csv");
    f.write(
        "when;spot\n"
        "0;1.5\n"
        "1800;2.5\n");
    CsvSchema schema;
    schema.timestamp_column = "when";
    schema.value_column = "spot";
    schema.delimiter = ';';
    schema.label_offset_steps = 0;
    const auto s = ingest_csv(f.str(), schema, minutes(30));
    CHECK(s.size() == 2);
    CHECK(s.value(1) == 2.5);
}
