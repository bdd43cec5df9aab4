#pragma once

#include <stdexcept>
#include <string>

namespace dclc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value violates a documented invariant. `field` names the offending field
// using a dotted path ("demand.diurnal_shape") when one is known.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class ParseError : public Error {
public:
    ParseError(std::string source, int line, const std::string& message)
        : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Weights plus KV state do not fit in the aggregate memory of a tensor-parallel group.
class ModelDoesNotFit : public Error {
public:
    using Error::Error;
};

// No tensor-parallel degree lets the model run on the SKU within the SLO.
class ModelUnservable : public Error {
public:
    using Error::Error;
};

}  // namespace dclc
