#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace modeswitch {

struct ValidationCheck {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = 1;
    /// Scales the double tank's Jacobian by a wrong factor; the FD and Jacobian checks must fail.
    bool perturb_jacobian = false;
};

struct ValidationReport {
    std::uint64_t seed = 1;
    std::vector<ValidationCheck> checks;

    [[nodiscard]] bool all_passed() const noexcept;
    [[nodiscard]] std::string to_json() const;
};

/// Runs the oracle suite: Jacobian self-check, FD insertion-gradient probes, classic Armijo
/// on quadratics, brute-force agreement and the smoothness probes.
[[nodiscard]] ValidationReport run_validation_suite(const ValidationOptions& options = {});

}  // namespace modeswitch
