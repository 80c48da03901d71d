#include "biphoton/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace biphoton {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::object;
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::array;
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::object) throw io_error("JsonValue::set on non-object");
    for (auto& m : members_)
        if (m.first == key) {
            m.second = std::move(v);
            return *this;
        }
    members_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::array) throw io_error("JsonValue::push on non-array");
    items_.push_back(std::move(v));
    return *this;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
}

}  // namespace

void JsonValue::dump_to(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::boolean: out += bool_ ? "true" : "false"; break;
        case Kind::integer: out += std::to_string(int_); break;
        case Kind::real: out += fmt(real_); break;
        case Kind::string: append_escaped(out, str_); break;
        case Kind::array:
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].dump_to(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "]";
            break;
        case Kind::object:
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                out += pad;
                append_escaped(out, members_[i].first);
                out += ": ";
                members_[i].second.dump_to(out, indent, depth + 1);
                if (i + 1 < members_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "}";
            break;
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open for writing: " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw io_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += (i + 1 < header.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw io_error("write_csv: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += fmt(row[i]);
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    write_text_file(path, out);
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open: " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw io_error("empty csv: " + path.string());
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw io_error("bad csv cell '" + cell + "' in " + path.string());
            }
        }
        if (row.size() != header.size())
            throw io_error("csv row width mismatch in " + path.string());
        rows.push_back(std::move(row));
    }
    return {std::move(header), std::move(rows)};
}

void write_cvector(const std::filesystem::path& path, const Eigen::VectorXcd& v) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open for writing: " + path.string());
    const char magic[4] = {'B', 'P', 'V', '1'};
    std::uint64_t n = static_cast<std::uint64_t>(v.size());
    f.write(magic, 4);
    f.write(reinterpret_cast<const char*>(&n), sizeof(n));
    f.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(std::complex<double>)));
    if (!f) throw io_error("write failed: " + path.string());
}

Eigen::VectorXcd read_cvector(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open: " + path.string());
    char magic[4];
    std::uint64_t n = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!f || std::memcmp(magic, "BPV1", 4) != 0)
        throw io_error("bad vector file: " + path.string());
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    f.read(reinterpret_cast<char*>(v.data()),
           static_cast<std::streamsize>(n * sizeof(std::complex<double>)));
    if (!f) throw io_error("truncated vector file: " + path.string());
    return v;
}

}  // namespace biphoton
