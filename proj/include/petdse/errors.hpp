#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace petdse {

/// Invalid configuration. Carries every issue found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

/// A lookup outside the supported modulation-index span of a device table.
class OutOfRangeError : public std::out_of_range {
public:
    OutOfRangeError(const std::string& what, double supported_low, double supported_high);

    double supported_low() const noexcept { return low_; }
    double supported_high() const noexcept { return high_; }

private:
    double low_;
    double high_;
};

/// An argument outside the mathematical domain of an operation (e.g. m <= 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A topology asked to operate outside its feasible modulation range.
class FeasibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace petdse
