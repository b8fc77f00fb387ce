#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scs {

// Base exception for every failure raised by the library. `code` is a stable
// machine string (e.g. "CycleDetected") shared with CLI reports and the HTTP
// error bodies; `subject` names the offending id when there is one.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string message, std::string subject = {})
        : std::runtime_error(message), code_(std::move(code)), subject_(std::move(subject)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    std::string code_;
    std::string subject_;
};

// One entry of a validation report.
struct Issue {
    std::string code;
    std::string subject;  // node/edge/segment/step id the issue is about
    std::string message;

    bool operator==(const Issue&) const = default;
};

using Report = std::vector<Issue>;

inline bool has_code(const Report& report, const std::string& code) {
    for (const auto& issue : report)
        if (issue.code == code) return true;
    return false;
}

}  // namespace scs
