#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nambu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public Error {
public:
    explicit UnknownIdentifier(std::string name)
        : Error("unknown identifier '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Evaluation left the real domain (division by zero, sqrt of a negative, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// |detB| fell below the singular-locus threshold: the constants of motion are
/// functionally dependent at the point and no normalized bracket exists there.
class SingularLocus : public Error {
public:
    SingularLocus(const std::string& what, double det_b, double threshold)
        : Error(what), det_b_(det_b), threshold_(threshold) {}
    double det_b() const noexcept { return det_b_; }
    double threshold() const noexcept { return threshold_; }

private:
    double det_b_;
    double threshold_;
};

/// Bad system definition, unknown builtin, missing parameter, bad CLI value.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A loaded system violates one of its defining vanishing brackets.
class RelationViolation : public Error {
public:
    using Error::Error;
};

}  // namespace nambu
