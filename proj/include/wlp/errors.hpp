#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wlp {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by the expression parser; carries the byte offset of the offending
// token within the input string.
class parse_error : public error {
public:
    parse_error(const std::string& message, std::size_t position)
        : error(message), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Adaptive quadrature could not reach the requested tolerance, or the
// integrand produced a non-finite value.
class quadrature_error : public error {
public:
    using error::error;
};

// An integrability hypothesis failed numerically (the tail g(y)*[1-F_i(y)]
// does not vanish at the truncation point). Carries the 1-based index of the
// offending variable.
class hypothesis_error : public error {
public:
    hypothesis_error(const std::string& message, int variable_index)
        : error(message), variable_index_(variable_index) {}

    int variable_index() const noexcept { return variable_index_; }

private:
    int variable_index_;
};

}  // namespace wlp
