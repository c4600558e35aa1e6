#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bprobe {

// Minimal TOML-subset reader for campaign configs and fixtures:
// [section] / [[section]] headers, key = value pairs, "#" comments.
// Values: quoted strings, integers, decimals, booleans. The exact grammar
// is documented in docs/config-format.md.

struct DocValue {
    enum class Type { Str, Int, Float, Bool };

    Type type = Type::Str;
    std::string str;
    std::int64_t integer = 0;
    double real = 0.0;
    bool boolean = false;
    int line = 0;
};

class DocTable {
public:
    void set(const std::string& key, DocValue v) { entries_[key] = std::move(v); }
    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    // Typed getters; throw Error{ConfigSemantic} on wrong type, and on
    // absence when no default is supplied.
    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& dflt) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
    double get_float(const std::string& key) const;
    double get_float(const std::string& key, double dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;

    /// Decimal money value returned as exact cents ("3.49" -> 349).
    std::int64_t get_cents(const std::string& key) const;

    const std::map<std::string, DocValue>& entries() const { return entries_; }
    int line = 0;

private:
    const DocValue* find(const std::string& key) const;
    std::map<std::string, DocValue> entries_;
};

class Document {
public:
    /// Parses text; throws Error{ConfigSyntax} with "line:col: message".
    static Document parse(const std::string& text);
    static Document load(const std::string& path);

    const DocTable& root() const { return root_; }

    /// First table with this name, nullptr if absent.
    const DocTable* section(const std::string& name) const;

    /// All tables with this name, in file order ([[name]] repetitions).
    std::vector<const DocTable*> sections(const std::string& name) const;

private:
    DocTable root_;
    std::vector<std::pair<std::string, DocTable>> tables_;
};

/// Parses a decimal like "3.49" into exact cents; throws on >2 fraction
/// digits or malformed text.
std::int64_t parse_cents(const std::string& text);

/// Formats cents as a decimal string ("349" -> "3.49").
std::string format_cents(std::int64_t cents);

} // namespace bprobe
