#include "wdvv/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace wdvv {

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass:
            return "pass";
        case Status::Fail:
            return "fail";
        case Status::Discrepancy:
            return "discrepancy";
        case Status::Inconclusive:
            return "inconclusive";
        case Status::OutOfScope:
            return "out-of-scope";
    }
    return "fail";
}

Status status_from_name(const std::string& name) {
    for (Status s : {Status::Pass, Status::Fail, Status::Discrepancy, Status::Inconclusive, Status::OutOfScope})
        if (name == status_name(s)) return s;
    throw std::invalid_argument("unknown status " + name);
}

void Report::finalize() {
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
}

std::map<std::string, std::size_t> Report::counts() const {
    std::map<std::string, std::size_t> c;
    for (Status s : {Status::Pass, Status::Fail, Status::Discrepancy, Status::Inconclusive, Status::OutOfScope})
        c[status_name(s)] = 0;
    for (const auto& k : checks) ++c[status_name(k.status)];
    return c;
}

bool Report::ok() const {
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return is_failure(c.status); });
}

std::string Report::json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["version"] = version;
    j["fixtures_hash"] = fixtures_hash;
    j["seed"] = seed;
    j["digits"] = digits;
    j["summary"] = counts();
    j["ok"] = ok();
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json r;
        r["id"] = c.id;
        r["module"] = c.module;
        r["status"] = status_name(c.status);
        r["detail"] = c.detail;
        r["seconds"] = c.seconds;
        arr.push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

std::string Report::markdown() const {
    std::ostringstream o;
    o << "# " << suite << "\n\n";
    o << "version " << version << ", fixtures " << fixtures_hash << ", seed " << seed << ", digits " << digits
      << "\n\n";
    for (const auto& [k, n] : counts()) o << "- " << k << ": " << n << "\n";
    o << "\n| id | module | status | seconds | detail |\n|---|---|---|---|---|\n";
    auto cell = [](std::string s) {
        std::string out;
        for (char ch : s) {
            if (ch == '|') out += "\\|";
            else if (ch == '\n') out += ' ';
            else out += ch;
        }
        return out;
    };
    for (const auto& c : checks) {
        std::ostringstream secs;
        secs.precision(3);
        secs << c.seconds;
        o << "| " << c.id << " | " << c.module << " | " << status_name(c.status) << " | " << secs.str() << " | "
          << cell(c.detail) << " |\n";
    }
    return o.str();
}

}  // namespace wdvv
