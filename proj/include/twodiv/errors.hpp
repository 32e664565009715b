#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace twodiv {

/// Invalid model, barrier or control parameters. Carries every violation.
class ModelError : public std::invalid_argument {
public:
    explicit ModelError(std::vector<std::string> violations)
        : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// An analytic route was asked to handle a non-exponential claim law.
class UnsupportedDistribution : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside the domain where a formula is defined (wrong region, x < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series, root or quadrature failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace twodiv
