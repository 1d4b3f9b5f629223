#pragma once

// Structured text fixtures:
//
//   # comment
//   [kind name]
//   key = "expression string"
//
// One record per bracketed header; values are double-quoted with backslash
// escapes. Keys may repeat (order is kept).

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wdvv {

class FixtureError : public std::runtime_error {
public:
    FixtureError(const std::string& file, int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

struct Record {
    std::string kind;
    std::string name;
    std::vector<std::pair<std::string, std::string>> fields;
    std::string file;
    int line = 0;

    const std::string* find(const std::string& key) const;
    /// Throws FixtureError when missing.
    const std::string& at(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    std::vector<std::string> all(const std::string& key) const;
};

std::vector<Record> parse_fixtures(const std::string& text, const std::string& file = "<text>");
std::vector<Record> load_fixtures(const std::string& path);
std::string serialize_fixtures(const std::vector<Record>& records);

/// Records of one kind, in file order.
std::vector<const Record*> of_kind(const std::vector<Record>& rs, const std::string& kind);

/// Directory holding the shipped fixture files: $WDVV_FIXTURES, else the
/// compiled-in default.
std::string default_fixtures_dir();

/// FNV-1a digest of a byte string, as 16 hex digits.
std::string digest_hex(const std::string& bytes);

}  // namespace wdvv
