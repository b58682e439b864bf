#pragma once

#include <string>
#include <vector>

namespace grr {

enum class CheckStatus { Pass, Fail, Skipped };

// One verified identity inside a check: rendered left/right sides and their
// difference. ok is true exactly when the discrepancy is zero. The _tex
// fields carry the LaTeX renderings for the CLI's --latex mode; empty means
// "same as the plain form".
struct CheckPart {
    std::string label;
    bool ok = false;
    std::string lhs, rhs, discrepancy;
    std::string lhs_tex, rhs_tex, discrepancy_tex;
};

struct CheckReport {
    std::string name;
    CheckStatus status = CheckStatus::Skipped;
    std::vector<CheckPart> parts;
    std::string note;

    bool passed() const { return status == CheckStatus::Pass; }
};

CheckReport finish_report(std::string name, std::vector<CheckPart> parts, std::string note = "");
CheckReport skipped_report(std::string name, std::string reason);

std::string report_to_string(const CheckReport& r, bool latex = false,
                             bool verbose = false);

}  // namespace grr
