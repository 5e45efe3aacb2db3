#include "petdse/errors.hpp"

namespace petdse {

namespace {

std::string join_issues(const std::vector<std::string>& issues)
{
    if (issues.empty()) return "configuration error";
    std::string out = issues.front();
    for (std::size_t i = 1; i < issues.size(); ++i) {
        out += "; ";
        out += issues[i];
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues))
{
}

OutOfRangeError::OutOfRangeError(const std::string& what, double supported_low, double supported_high)
    : std::out_of_range(what), low_(supported_low), high_(supported_high)
{
}

}  // namespace petdse
