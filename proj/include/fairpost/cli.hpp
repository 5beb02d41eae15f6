#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairpost::cli {

// Exit codes: 0 success (audit: all criteria pass), 1 audit found a violation
// beyond tolerance, 2 usage or input error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

struct AuditArgs {
    std::string input;
    std::string kind = "auto";  // binary | score | auto
    std::vector<std::string> criteria;  // empty = all applicable
    double tol = -1.0;                  // < 0: per-criterion defaults
    std::size_t bins = 20;
    std::string out;      // JSON path; empty = stdout
    std::string roc_out;  // optional per-group ROC/region JSON (score inputs)
};
int cmd_audit(const AuditArgs& args, std::ostream& diag);

struct AdjustArgs {
    std::string input;
    std::string kind = "auto";
    std::string criterion = "equalized_odds";
    double cost_fp = 1.0;
    double cost_fn = 1.0;
    std::uint64_t seed = 0;
    std::string out;
};
int cmd_adjust(const AdjustArgs& args, std::ostream& diag);

struct ScenarioArgs {
    int which = 1;  // 1 or 2
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string score = "rstar";  // rstar | rtilde | both
    std::string out;
};
int cmd_scenario(const ScenarioArgs& args, std::ostream& diag);

struct CaseStudyArgs {
    std::string input;
    double cost_fp = 82.0;
    double cost_fn = 18.0;
    std::vector<std::string> regimes;  // empty = all five
    double sweep_lo = 0.50;
    double sweep_hi = 0.99;
    double sweep_step = 0.01;
    std::uint64_t seed = 0;
    std::string out_dir = "casestudy_out";
};
int cmd_casestudy(const CaseStudyArgs& args, std::ostream& diag);

}  // namespace fairpost::cli
