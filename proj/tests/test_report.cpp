#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "lpinfer/errors.hpp"
#include "lpinfer/report.hpp"

using namespace lpinfer;

namespace {

struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& content) {
        path = std::string(std::tmpnam(nullptr)) + ".csv";
        std::ofstream out(path);
        out << content;
    }
    ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv ingestion happy paths") {
    TempCsv one("x,y\n0.1,1.2\n");
    Sample s = ingest_sample(one.path);
    REQUIRE(s.x.size() == 1);
    CHECK(s.x[0] == doctest::Approx(0.1));
    CHECK(s.y[0] == doctest::Approx(1.2));

    TempCsv rdd("x,y,d\n0.2,1.0,1\n-0.4,0.5,0\n");
    RddSample r = ingest_rdd_sample(rdd.path, 0.0);
    CHECK(r.x.size() == 2);
    CHECK(r.cutoff == 0.0);
}

TEST_CASE("csv ingestion error paths") {
    TempCsv bad_num("x,y\n0.1,abc\n");
    try {
        ingest_sample(bad_num.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    TempCsv bad_header("a,b\n1,2\n");
    CHECK_THROWS_AS(ingest_sample(bad_header.path), SchemaError);

    TempCsv extra("x,y,z\n1,2,3\n");
    CHECK_THROWS_AS(ingest_sample(extra.path), SchemaError);

    TempCsv nan_row("x,y\nnan,2\n");
    CHECK_THROWS_AS(ingest_sample(nan_row.path), ParseError);

    TempCsv inf_row("x,y\n1,inf\n");
    CHECK_THROWS_AS(ingest_sample(inf_row.path), ParseError);

    TempCsv bad_d("x,y,d\n0.5,1.0,2\n");
    CHECK_THROWS_AS(ingest_rdd_sample(bad_d.path, 0.0), ParseError);

    TempCsv mismatch("x,y,d\n0.5,1.0,0\n");
    CHECK_THROWS_AS(ingest_rdd_sample(mismatch.path, 0.0), DesignMismatch);

    TempCsv d_for_point("x,y,d\n0.5,1.0,1\n");
    CHECK_THROWS_AS(ingest_sample(d_for_point.path), SchemaError);

    CHECK_THROWS_AS(ingest_sample("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("doubles round-trip through their text form") {
    for (double v : {0.1, -3.45, 0.34722222222222221, 1.959963984540054,
                     6.02e23, -1e-300}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}
