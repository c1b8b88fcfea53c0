#ifndef DHOA_CORE_DIAGNOSTICS_HPP
#define DHOA_CORE_DIAGNOSTICS_HPP

#include <string>
#include <utility>
#include <vector>

namespace dhoa {

struct CheckEntry {
    enum class Status { pass, fail, not_applicable };

    std::string name;
    Status status = Status::pass;
    bool required = true; // advisory entries never flip a verdict or exit code
    double residual = 0.0;
    std::string statement;
};

// Pass/fail record for every condition checked along the pipeline. A verdict
// of constructible requires that no required check failed.
struct DiagnosticsReport {
    std::vector<CheckEntry> checks;
    bool constructible = true;
    std::string rejection_reason;

    void add(std::string name, CheckEntry::Status status, bool required, double residual,
             std::string statement) {
        checks.push_back({std::move(name), status, required, residual, std::move(statement)});
    }

    void reject(std::string reason) {
        constructible = false;
        if (rejection_reason.empty())
            rejection_reason = std::move(reason);
    }

    bool all_required_pass() const {
        for (const auto& c : checks)
            if (c.required && c.status == CheckEntry::Status::fail)
                return false;
        return true;
    }

    void merge(const DiagnosticsReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
        if (!other.constructible)
            reject(other.rejection_reason);
    }
};

} // namespace dhoa

#endif
