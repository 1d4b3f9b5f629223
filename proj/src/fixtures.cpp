#include "wdvv/fixtures.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef WDVV_DEFAULT_FIXTURES
#define WDVV_DEFAULT_FIXTURES "fixtures"
#endif

namespace wdvv {

FixtureError::FixtureError(const std::string& file, int line, const std::string& msg)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}

const std::string* Record::find(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return &v;
    return nullptr;
}

const std::string& Record::at(const std::string& key) const {
    if (const std::string* v = find(key)) return *v;
    throw FixtureError(file, line, "record [" + kind + " " + name + "] lacks '" + key + "'");
}

std::string Record::get(const std::string& key, const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
}

std::vector<std::string> Record::all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : fields)
        if (k == key) out.push_back(v);
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

std::vector<Record> parse_fixtures(const std::string& text, const std::string& file) {
    std::vector<Record> out;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line[0] == '[') {
            if (line.back() != ']') throw FixtureError(file, lineno, "unterminated header");
            const std::string inner = trim(line.substr(1, line.size() - 2));
            const auto sp = inner.find_first_of(" \t");
            Record r;
            r.kind = inner.substr(0, sp);
            r.name = sp == std::string::npos ? "" : trim(inner.substr(sp));
            if (r.kind.empty()) throw FixtureError(file, lineno, "empty header");
            r.file = file;
            r.line = lineno;
            out.push_back(std::move(r));
            continue;
        }
        if (out.empty()) throw FixtureError(file, lineno, "field outside a record");
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FixtureError(file, lineno, "expected key = \"value\"");
        const std::string key = trim(line.substr(0, eq));
        const std::string rest = trim(line.substr(eq + 1));
        if (key.empty()) throw FixtureError(file, lineno, "empty key");
        if (rest.size() < 2 || rest.front() != '"') throw FixtureError(file, lineno, "value must be double-quoted");
        std::string value;
        std::size_t i = 1;
        bool closed = false;
        for (; i < rest.size(); ++i) {
            const char c = rest[i];
            if (c == '\\' && i + 1 < rest.size()) {
                value += rest[++i];
            } else if (c == '"') {
                closed = true;
                ++i;
                break;
            } else {
                value += c;
            }
        }
        if (!closed) throw FixtureError(file, lineno, "unterminated string");
        const std::string tail = trim(rest.substr(i));
        if (!tail.empty() && tail[0] != '#') throw FixtureError(file, lineno, "trailing characters after value");
        out.back().fields.emplace_back(key, value);
    }
    return out;
}

std::vector<Record> load_fixtures(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FixtureError(path, 0, "cannot open fixtures file");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_fixtures(ss.str(), path);
}

std::string serialize_fixtures(const std::vector<Record>& records) {
    std::string s;
    for (const Record& r : records) {
        if (!s.empty()) s += "\n";
        s += "[" + r.kind + (r.name.empty() ? "" : " " + r.name) + "]\n";
        for (const auto& [k, v] : r.fields) {
            s += k + " = \"";
            for (char c : v) {
                if (c == '"' || c == '\\') s += '\\';
                s += c;
            }
            s += "\"\n";
        }
    }
    return s;
}

std::vector<const Record*> of_kind(const std::vector<Record>& rs, const std::string& kind) {
    std::vector<const Record*> out;
    for (const Record& r : rs)
        if (r.kind == kind) out.push_back(&r);
    return out;
}

std::string default_fixtures_dir() {
    if (const char* e = std::getenv("WDVV_FIXTURES")) return e;
    return WDVV_DEFAULT_FIXTURES;
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace wdvv
