#include "grr/report.hpp"

#include <sstream>

namespace grr {

CheckReport finish_report(std::string name, std::vector<CheckPart> parts, std::string note) {
    CheckReport r;
    r.name = std::move(name);
    r.parts = std::move(parts);
    r.note = std::move(note);
    r.status = CheckStatus::Pass;
    for (const auto& p : r.parts) {
        if (!p.ok) r.status = CheckStatus::Fail;
    }
    return r;
}

CheckReport skipped_report(std::string name, std::string reason) {
    CheckReport r;
    r.name = std::move(name);
    r.status = CheckStatus::Skipped;
    r.note = std::move(reason);
    return r;
}

std::string report_to_string(const CheckReport& r, bool latex, bool verbose) {
    std::ostringstream os;
    switch (r.status) {
        case CheckStatus::Pass: os << "pass "; break;
        case CheckStatus::Fail: os << "FAIL "; break;
        case CheckStatus::Skipped: os << "skip "; break;
    }
    os << r.name;
    if (!r.note.empty()) os << "  (" << r.note << ")";
    for (const auto& p : r.parts) {
        if (p.ok && !verbose) continue;
        os << "\n  " << (p.ok ? "ok  " : "bad ") << p.label;
        if (!p.ok || verbose) {
            const std::string& lhs = latex && !p.lhs_tex.empty() ? p.lhs_tex : p.lhs;
            const std::string& rhs = latex && !p.rhs_tex.empty() ? p.rhs_tex : p.rhs;
            const std::string& disc =
                latex && !p.discrepancy_tex.empty() ? p.discrepancy_tex : p.discrepancy;
            if (!lhs.empty() || !rhs.empty()) {
                os << "\n      lhs = " << lhs << "\n      rhs = " << rhs;
            }
            if (!disc.empty()) os << "\n      discrepancy = " << disc;
        }
    }
    return os.str();
}

}  // namespace grr
