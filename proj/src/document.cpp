#include "bprobe/document.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "bprobe/error.hpp"

namespace bprobe {

namespace {

[[noreturn]] void syntax_error(int line, int col, const std::string& msg) {
    throw Error(ErrorCode::ConfigSyntax, std::to_string(line) + ":" +
                                             std::to_string(col) + ": " + msg);
}

bool is_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

DocValue parse_value(const std::string& raw, int line, int col) {
    DocValue v;
    v.line = line;
    if (raw.empty()) syntax_error(line, col, "missing value");

    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            syntax_error(line, col, "unterminated string");
        v.type = DocValue::Type::Str;
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            char c = raw[i];
            if (c == '\\' && i + 2 < raw.size()) {
                char n = raw[i + 1];
                if (n == 'n') { out.push_back('\n'); ++i; continue; }
                if (n == 't') { out.push_back('\t'); ++i; continue; }
                if (n == '"' || n == '\\') { out.push_back(n); ++i; continue; }
            }
            out.push_back(c);
        }
        v.str = out;
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = DocValue::Type::Bool;
        v.boolean = raw == "true";
        return v;
    }

    // Number: optional sign, digits, optional fraction.
    bool is_number = true;
    bool has_dot = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (i == 0 && (c == '-' || c == '+')) continue;
        if (c == '.') {
            if (has_dot) { is_number = false; break; }
            has_dot = true;
            continue;
        }
        if (c == '_') continue; // digit group separator
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            is_number = false;
            break;
        }
    }
    if (!is_number)
        syntax_error(line, col, "unrecognized value: " + raw);

    std::string digits;
    for (char c : raw)
        if (c != '_') digits.push_back(c);

    if (has_dot) {
        v.type = DocValue::Type::Float;
        v.real = std::stod(digits);
        v.str = digits; // keep exact text for cents parsing
    } else {
        v.type = DocValue::Type::Int;
        try {
            v.integer = std::stoll(digits);
        } catch (const std::exception&) {
            syntax_error(line, col, "integer out of range: " + raw);
        }
        v.str = digits;
    }
    return v;
}

} // namespace

const DocValue* DocTable::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

std::string DocTable::get_str(const std::string& key) const {
    const DocValue* v = find(key);
    if (!v) throw Error(ErrorCode::ConfigSemantic, "missing key: " + key);
    if (v->type != DocValue::Type::Str)
        throw Error(ErrorCode::ConfigSemantic, "key " + key + " must be a string");
    return v->str;
}

std::string DocTable::get_str(const std::string& key,
                              const std::string& dflt) const {
    return has(key) ? get_str(key) : dflt;
}

std::int64_t DocTable::get_int(const std::string& key) const {
    const DocValue* v = find(key);
    if (!v) throw Error(ErrorCode::ConfigSemantic, "missing key: " + key);
    if (v->type != DocValue::Type::Int)
        throw Error(ErrorCode::ConfigSemantic, "key " + key + " must be an integer");
    return v->integer;
}

std::int64_t DocTable::get_int(const std::string& key, std::int64_t dflt) const {
    return has(key) ? get_int(key) : dflt;
}

double DocTable::get_float(const std::string& key) const {
    const DocValue* v = find(key);
    if (!v) throw Error(ErrorCode::ConfigSemantic, "missing key: " + key);
    if (v->type == DocValue::Type::Float) return v->real;
    if (v->type == DocValue::Type::Int)
        return static_cast<double>(v->integer);
    throw Error(ErrorCode::ConfigSemantic, "key " + key + " must be a number");
}

double DocTable::get_float(const std::string& key, double dflt) const {
    return has(key) ? get_float(key) : dflt;
}

bool DocTable::get_bool(const std::string& key, bool dflt) const {
    const DocValue* v = find(key);
    if (!v) return dflt;
    if (v->type != DocValue::Type::Bool)
        throw Error(ErrorCode::ConfigSemantic, "key " + key + " must be a boolean");
    return v->boolean;
}

std::int64_t DocTable::get_cents(const std::string& key) const {
    const DocValue* v = find(key);
    if (!v) throw Error(ErrorCode::ConfigSemantic, "missing key: " + key);
    if (v->type == DocValue::Type::Int) return v->integer * 100;
    if (v->type == DocValue::Type::Float) return parse_cents(v->str);
    if (v->type == DocValue::Type::Str) return parse_cents(v->str);
    throw Error(ErrorCode::ConfigSemantic, "key " + key + " must be a price");
}

Document Document::parse(const std::string& text) {
    Document doc;
    DocTable* current = &doc.root_;

    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string line = strip(strip_comment(raw_line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            bool repeated = line.size() > 1 && line[1] == '[';
            std::string close = repeated ? "]]" : "]";
            std::size_t start = repeated ? 2 : 1;
            std::size_t end = line.find(close, start);
            if (end == std::string::npos || end + close.size() != line.size())
                syntax_error(line_no, 1, "malformed section header");
            std::string name = strip(line.substr(start, end - start));
            if (name.empty()) syntax_error(line_no, 2, "empty section name");
            for (char c : name)
                if (!is_key_char(c))
                    syntax_error(line_no, 2, "bad section name: " + name);
            if (!repeated) {
                // [name] reopens an existing plain section.
                for (auto& [n, t] : doc.tables_) {
                    if (n == name) {
                        current = &t;
                        goto next_line;
                    }
                }
            }
            {
                DocTable t;
                t.line = line_no;
                doc.tables_.emplace_back(name, std::move(t));
                current = &doc.tables_.back().second;
            }
        next_line:
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            syntax_error(line_no, 1, "expected key = value");
        std::string key = strip(line.substr(0, eq));
        if (key.empty()) syntax_error(line_no, 1, "empty key");
        for (char c : key)
            if (!is_key_char(c))
                syntax_error(line_no, 1, "bad key: " + key);
        std::string value = strip(line.substr(eq + 1));
        int col = static_cast<int>(eq) + 2;
        current->set(key, parse_value(value, line_no, col));
    }
    return doc;
}

Document Document::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const DocTable* Document::section(const std::string& name) const {
    for (const auto& [n, t] : tables_)
        if (n == name) return &t;
    return nullptr;
}

std::vector<const DocTable*> Document::sections(const std::string& name) const {
    std::vector<const DocTable*> out;
    for (const auto& [n, t] : tables_)
        if (n == name) out.push_back(&t);
    return out;
}

std::int64_t parse_cents(const std::string& text) {
    std::string t = strip(text);
    if (t.empty()) throw Error(ErrorCode::ConfigSemantic, "empty price");
    bool neg = false;
    std::size_t i = 0;
    if (t[0] == '-' || t[0] == '+') {
        neg = t[0] == '-';
        i = 1;
    }
    std::int64_t whole = 0;
    bool any = false;
    for (; i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])); ++i) {
        whole = whole * 10 + (t[i] - '0');
        any = true;
    }
    std::int64_t cents = whole * 100;
    if (i < t.size()) {
        if (t[i] != '.')
            throw Error(ErrorCode::ConfigSemantic, "bad price: " + text);
        ++i;
        int digits = 0;
        std::int64_t frac = 0;
        for (; i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]));
             ++i) {
            if (digits >= 2)
                throw Error(ErrorCode::ConfigSemantic,
                            "price has sub-cent precision: " + text);
            frac = frac * 10 + (t[i] - '0');
            ++digits;
            any = true;
        }
        if (i != t.size())
            throw Error(ErrorCode::ConfigSemantic, "bad price: " + text);
        if (digits == 1) frac *= 10;
        cents += frac;
    }
    if (!any) throw Error(ErrorCode::ConfigSemantic, "bad price: " + text);
    return neg ? -cents : cents;
}

std::string format_cents(std::int64_t cents) {
    std::string sign = cents < 0 ? "-" : "";
    if (cents < 0) cents = -cents;
    std::string frac = std::to_string(cents % 100);
    if (frac.size() < 2) frac.insert(frac.begin(), '0');
    return sign + std::to_string(cents / 100) + "." + frac;
}

} // namespace bprobe
