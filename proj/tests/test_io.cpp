#include <doctest.h>

#include <sstream>

#include "qsep/io.hpp"

using namespace qsep;

TEST_CASE("grid spec parsing") {
    const GridSpec g = GridSpec::parse("0:0.9:10");
    CHECK(g.count == 10);
    const std::vector<double> pts = g.points();
    CHECK(pts.front() == 0.0);
    CHECK(pts.back() == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(pts[1] == doctest::Approx(0.1).epsilon(1e-12));

    const std::vector<double> t = GridSpec::parse("0:1.6:17").points();
    CHECK(t.size() == 17);
    CHECK(t[1] == doctest::Approx(0.1).epsilon(1e-12));

    CHECK(GridSpec::parse("0.5:0.5:1").points() == std::vector<double>{0.5});
    CHECK_THROWS_AS(GridSpec::parse("1:2"), DomainError);
    CHECK_THROWS_AS(GridSpec::parse("a:b:c"), DomainError);
    CHECK_THROWS_AS(GridSpec::parse("0:1:0"), DomainError);
    CHECK_THROWS_AS(GridSpec::parse("0:1:1"), DomainError);
}

TEST_CASE("number formatting is shortest round-trip with '.' separator") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-1.0) == "-1");
    CHECK(format_number(0.1) == "0.1");
    const double v = 1.0 / 3.0;
    CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("csv writer") {
    Table t;
    t.columns = {"a", "b", "c"};
    auto& r1 = t.add_row();
    r1[0] = Cell::number(0.25);
    r1[1] = Cell::label("x");
    r1[2] = Cell::empty();
    auto& r2 = t.add_row();
    r2[0] = Cell::count(3);
    r2[1] = Cell::number(1.0);
    r2[2] = Cell::label("inf");
    std::ostringstream os;
    write_csv(t, os);
    CHECK(os.str() == "a,b,c\r\n0.25,x,\r\n3,1,inf\r\n");
}

TEST_CASE("json writer mirrors the csv columns") {
    Table t;
    t.columns = {"a", "b"};
    auto& r = t.add_row();
    r[0] = Cell::number(0.5);
    r[1] = Cell::empty();
    std::ostringstream os;
    write_json(t, os);
    CHECK(os.str() == "[\n  {\n    \"a\": 0.5,\n    \"b\": null\n  }\n]\n");
}
