#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "biphoton/io.hpp"

using namespace biphoton;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto d = fs::temp_directory_path() / "biphoton_io_test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("float formatting is fixed-width scientific") {
    CHECK(fmt(1.0) == "1.0000000000000000e+00");
    CHECK(fmt(-0.5) == "-5.0000000000000000e-01");
    CHECK(fmt(1.0 / 3.0) == "3.3333333333333331e-01");
    // round-trips bit-exactly
    double x = 0.1234567890123456789;
    CHECK(std::stod(fmt(x)) == x);
}

TEST_CASE("json writer emits stable, parseable output") {
    auto root = JsonValue::object();
    root.set("n_qubits", JsonValue(100));
    root.set("gamma0", JsonValue(1.0));
    root.set("label", JsonValue(std::string("run \"a\"\n")));
    auto arr = JsonValue::array();
    arr.push(JsonValue(0.3));
    arr.push(JsonValue(true));
    arr.push(JsonValue());
    root.set("items", arr);
    auto nested = JsonValue::object();
    nested.set("z", JsonValue(2));
    nested.set("a", JsonValue(1));
    root.set("inner", nested);

    std::string s1 = root.dump();
    std::string s2 = root.dump();
    CHECK(s1 == s2);

    auto parsed = nlohmann::json::parse(s1);
    CHECK(parsed["n_qubits"] == 100);
    CHECK(parsed["gamma0"] == 1.0);
    CHECK(parsed["label"] == "run \"a\"\n");
    CHECK(parsed["items"][0] == 0.3);
    CHECK(parsed["items"][1] == true);
    CHECK(parsed["items"][2].is_null());
    CHECK(parsed["inner"]["z"] == 2);

    // insertion order is preserved, not alphabetized
    auto zpos = s1.find("\"z\"");
    auto apos = s1.find("\"a\"");
    CHECK(zpos < apos);
}

TEST_CASE("text files round-trip and create parent directories") {
    auto d = temp_dir() / "nested" / "deeper";
    auto p = d / "note.txt";
    fs::remove_all(temp_dir() / "nested");
    write_text_file(p, "hello\nworld\n");
    CHECK(read_text_file(p) == "hello\nworld\n");
    fs::remove_all(temp_dir() / "nested");
}

TEST_CASE("csv round-trip preserves doubles exactly") {
    auto p = temp_dir() / "table.csv";
    std::vector<std::string> header = {"k", "re", "im"};
    std::vector<std::vector<double>> rows = {
        {0.0, 1.0 / 3.0, -2.5e-11},
        {1.0, -7.25, 3.14159265358979},
    };
    write_csv(p, header, rows);
    auto [h2, r2] = read_csv(p);
    CHECK(h2 == header);
    REQUIRE(r2.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(r2[i].size() == rows[i].size());
        for (std::size_t j = 0; j < rows[i].size(); ++j) CHECK(r2[i][j] == rows[i][j]);
    }
    fs::remove(p);
}

TEST_CASE("complex vector files round-trip bitwise") {
    auto p = temp_dir() / "state.bin";
    Eigen::VectorXcd v(5);
    for (int i = 0; i < 5; ++i)
        v[i] = std::complex<double>(std::sin(i + 0.1), std::cos(2.0 * i));
    write_cvector(p, v);
    auto w = read_cvector(p);
    REQUIRE(w.size() == v.size());
    for (int i = 0; i < 5; ++i) CHECK(w[i] == v[i]);
    fs::remove(p);

    CHECK_THROWS_AS(read_cvector(temp_dir() / "missing.bin"), io_error);
}

TEST_CASE("malformed csv is rejected") {
    auto p = temp_dir() / "bad.csv";
    write_text_file(p, "a,b\n1.0\n");
    CHECK_THROWS_AS(read_csv(p), io_error);
    fs::remove(p);
}
