#pragma once

#include <stdexcept>
#include <string>

namespace exto {

/// Malformed or inconsistent input data (bad CSV rows, grid violations,
/// empty tails). Exit code 1 territory for the CLI.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration; carries a path-to-field diagnostic such as
/// "permutation.alpha". Exit code 2 territory for the CLI.
class config_error : public std::runtime_error {
public:
    config_error(std::string field, const std::string& msg)
        : std::runtime_error(field.empty() ? msg : field + ": " + msg),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace exto
