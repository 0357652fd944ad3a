#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hadacov {

// Doubles in every persisted file go through this: std::to_chars, general
// format, 17 significant digits. Locale-free, round-trip exact, byte-stable.
std::string format_double(double x);

using cell = std::variant<std::int64_t, double, std::string>;

std::string cell_to_string(const cell& c);

struct table {
    std::string name;
    std::string file_stem;  // optional CSV filename override
    std::vector<std::string> columns;
    std::vector<std::vector<cell>> rows;
};

// Comma separator, header row, '.' decimal point, LF line endings.
std::string table_to_csv(const table& t);

// Ordered JSON tree (insertion order preserved; no external library so the
// float format clause above holds for every number emitted).
struct jnode {
    enum class kind { null, boolean, integer, real, string, array, object };

    kind k = kind::null;
    bool b = false;
    std::int64_t i = 0;
    double d = 0.0;
    std::string s;
    std::vector<jnode> arr;
    std::vector<std::pair<std::string, jnode>> obj;

    static jnode object() { jnode n; n.k = kind::object; return n; }
    static jnode array() { jnode n; n.k = kind::array; return n; }
    static jnode of(bool v) { jnode n; n.k = kind::boolean; n.b = v; return n; }
    static jnode of(std::int64_t v) { jnode n; n.k = kind::integer; n.i = v; return n; }
    static jnode of(double v) { jnode n; n.k = kind::real; n.d = v; return n; }
    static jnode of(const std::string& v) { jnode n; n.k = kind::string; n.s = v; return n; }
    static jnode of(const char* v) { return of(std::string(v)); }
    static jnode of(const cell& c);

    jnode& set(const std::string& key, jnode v);
    void push(jnode v) { arr.push_back(std::move(v)); }

    std::string dump(int indent = 2) const;
};

// Binary mode so report bytes are identical regardless of platform text mode.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}
