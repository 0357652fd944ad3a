#include "hadacov/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "hadacov/errors.hpp"

namespace hadacov {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string cell_to_string(const cell& c) {
    if (std::holds_alternative<std::int64_t>(c))
        return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    return std::get<std::string>(c);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void json_escape_into(std::string& out, const std::string& s) {
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
}

void dump_into(const jnode& n, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (n.k) {
        case jnode::kind::null: out += "null"; break;
        case jnode::kind::boolean: out += n.b ? "true" : "false"; break;
        case jnode::kind::integer: out += std::to_string(n.i); break;
        case jnode::kind::real:
            if (std::isfinite(n.d)) out += format_double(n.d);
            else out += n.d > 0 ? "\"inf\"" : (n.d < 0 ? "\"-inf\"" : "\"nan\"");
            break;
        case jnode::kind::string:
            out += '"';
            json_escape_into(out, n.s);
            out += '"';
            break;
        case jnode::kind::array:
            if (n.arr.empty()) { out += "[]"; break; }
            out += "[\n";
            for (std::size_t i = 0; i < n.arr.size(); ++i) {
                out += pad1;
                dump_into(n.arr[i], out, indent, depth + 1);
                if (i + 1 < n.arr.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            break;
        case jnode::kind::object:
            if (n.obj.empty()) { out += "{}"; break; }
            out += "{\n";
            for (std::size_t i = 0; i < n.obj.size(); ++i) {
                out += pad1 + '"';
                json_escape_into(out, n.obj[i].first);
                out += "\": ";
                dump_into(n.obj[i].second, out, indent, depth + 1);
                if (i + 1 < n.obj.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            break;
    }
}

}  // namespace

jnode jnode::of(const cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return of(std::get<std::int64_t>(c));
    if (std::holds_alternative<double>(c)) return of(std::get<double>(c));
    return of(std::get<std::string>(c));
}

jnode& jnode::set(const std::string& key, jnode v) {
    obj.emplace_back(key, std::move(v));
    return *this;
}

std::string jnode::dump(int indent) const {
    std::string out;
    dump_into(*this, out, indent, 0);
    out += '\n';
    return out;
}

std::string table_to_csv(const table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(t.columns[c]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_escape(cell_to_string(row[c]));
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open output file: " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw config_error("failed writing output file: " + path.string());
}

}
