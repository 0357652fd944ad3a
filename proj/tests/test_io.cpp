#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "hadacov/errors.hpp"
#include "hadacov/io.hpp"

using namespace hadacov;

TEST_SUITE("io") {

TEST_CASE("format_double is 17-significant-digit round-trip exact") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 1e-300, 4.9406564584124654e-324,
                     0.0, -0.0, 123456789.123456789}) {
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
        CHECK(s.find(',') == std::string::npos);
        CHECK(s.find('e') != 0);  // never bare exponent
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("cell_to_string dispatches on the variant") {
    CHECK(cell_to_string(cell(std::int64_t(-7))) == "-7");
    CHECK(cell_to_string(cell(0.25)) == "0.25");
    CHECK(cell_to_string(cell(std::string("abc"))) == "abc");
}

TEST_CASE("csv serialization: header, commas, LF, quoting") {
    table t;
    t.name = "demo";
    t.columns = {"alpha", "beta"};
    t.rows.push_back({cell(std::int64_t(1)), cell(std::string("plain"))});
    t.rows.push_back({cell(2.5), cell(std::string("needs,quote"))});
    t.rows.push_back({cell(std::int64_t(3)), cell(std::string("has\"inner"))});
    const std::string csv = table_to_csv(t);
    CHECK(csv ==
          "alpha,beta\n"
          "1,plain\n"
          "2.5,\"needs,quote\"\n"
          "3,\"has\"\"inner\"\n");
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("json dump: insertion order, indentation, escapes, non-finite policy") {
    jnode root = jnode::object();
    root.set("zeta", jnode::of(std::int64_t(1)));
    root.set("alpha", jnode::of(0.5));
    jnode arr = jnode::array();
    arr.push(jnode::of(std::string("a\"b")));
    arr.push(jnode::of(true));
    root.set("list", std::move(arr));
    root.set("empty", jnode::array());
    root.set("bad", jnode::of(std::numeric_limits<double>::infinity()));
    CHECK(root.dump() ==
          "{\n"
          "  \"zeta\": 1,\n"
          "  \"alpha\": 0.5,\n"
          "  \"list\": [\n"
          "    \"a\\\"b\",\n"
          "    true\n"
          "  ],\n"
          "  \"empty\": [],\n"
          "  \"bad\": \"inf\"\n"
          "}\n");
}

TEST_CASE("write_text_file is binary-exact and fails loudly") {
    const std::filesystem::path p =
        std::filesystem::temp_directory_path() / "hadacov_io_test.txt";
    const std::string payload = "line1\nline2\n";
    write_text_file(p, payload);
    std::ifstream in(p, std::ios::binary);
    std::string read((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(read == payload);
    std::filesystem::remove(p);
    CHECK_THROWS_AS(write_text_file("/nonexistent_dir_zz/x.txt", payload), config_error);
}

}
