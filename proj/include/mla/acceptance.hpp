#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mla::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool checks_passed = false;
    std::string detail;  // measured quantities against their pinned tolerances
    double seconds = 0.0;
    double budget_seconds = 0.0;
    bool passed() const { return checks_passed && seconds < budget_seconds; }
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id);

// Runs every criterion in order, reporting each as it finishes.
std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {});

// One line: PASS/FAIL, id, name, detail, runtime against budget.
std::string format_line(const CriterionResult& r);

}  // namespace mla::acceptance
