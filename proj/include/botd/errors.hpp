#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace botd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violations (bad sizes, out-of-range scales).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DegeneratePolygon : public Error {
public:
    DegeneratePolygon() : Error("degenerate polygon: fewer than 3 distinct vertices or zero area") {}
};

class EmptyMask : public Error {
public:
    EmptyMask() : Error("mask has no foreground pixels") {}
};

class CenterOutsideMask : public Error {
public:
    CenterOutsideMask() : Error("center point is not a foreground pixel center") {}
};

class NotSingleComponent : public Error {
public:
    explicit NotSingleComponent(std::size_t components)
        : Error("expected exactly one 8-connected component, found " + std::to_string(components)),
          components_(components) {}
    std::size_t components() const noexcept { return components_; }

private:
    std::size_t components_;
};

class ShapeMismatch : public Error {
public:
    ShapeMismatch() : Error("operands have different dimensions") {}
};

class InvalidPmd : public Error {
public:
    InvalidPmd() : Error("PMD values must be strictly positive") {}
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    /// 1-based; 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace botd
