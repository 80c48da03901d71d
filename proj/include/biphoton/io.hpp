#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace biphoton {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lossless double round-trip: 17 significant digits, lowercase scientific.
std::string fmt(double x);

// Small JSON document tree with stable key order and fmt() float output, so
// reports are byte-identical across runs.
class JsonValue {
  public:
    JsonValue() : kind_(Kind::null) {}
    JsonValue(bool b) : kind_(Kind::boolean), bool_(b) {}
    JsonValue(long long i) : kind_(Kind::integer), int_(i) {}
    JsonValue(int i) : JsonValue(static_cast<long long>(i)) {}
    JsonValue(double d) : kind_(Kind::real), real_(d) {}
    JsonValue(const char* s) : kind_(Kind::string), str_(s) {}
    JsonValue(std::string s) : kind_(Kind::string), str_(std::move(s)) {}

    static JsonValue object();
    static JsonValue array();

    JsonValue& set(const std::string& key, JsonValue v);  // object insert, keeps order
    JsonValue& push(JsonValue v);                         // array append

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { null, boolean, integer, real, string, array, object };
    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    double real_ = 0.0;
    std::string str_;
    std::vector<JsonValue> items_;
    std::vector<std::pair<std::string, JsonValue>> members_;

    void dump_to(std::string& out, int indent, int depth) const;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// CSV with a single header line; every cell printed through fmt().
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& path);

// Raw complex vector cache (magic + count + interleaved doubles).
void write_cvector(const std::filesystem::path& path, const Eigen::VectorXcd& v);
Eigen::VectorXcd read_cvector(const std::filesystem::path& path);

}  // namespace biphoton
